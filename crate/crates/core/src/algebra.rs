//! Finite-dimensional unital associative algebras given by structure
//! constants.

use crate::error::{Error, Result};
use crate::linalg::{invert_map, Echelon};
use crate::par;
use crate::report::{compare_maps, compare_tensors, repeat_labels, Check, Report};
use crate::scalar::{FieldSpec, Scalar};
use crate::tensor::{check_dim, multi_index, LinearMap, Tensor};

/// Sparse products of basis elements: entry `i * n + j` lists the nonzero
/// coordinates of `e_i e_j`.
type SparseTable = Vec<Vec<(usize, Scalar)>>;

fn sparse_table(mul: &LinearMap) -> SparseTable {
    mul.columns()
        .iter()
        .map(|c| c.nonzeros().map(|(k, v)| (k, v.clone())).collect())
        .collect()
}

/// Anything with an associative product on a tensor-shaped space: a single
/// algebra or a tensor product of algebras.
pub trait Multiplication: Sync {
    fn field(&self) -> FieldSpec;
    fn shape(&self) -> Vec<usize>;
    fn one(&self) -> Tensor;
    fn product(&self, x: &Tensor, y: &Tensor) -> Result<Tensor>;
    fn leg_labels(&self) -> Vec<Vec<String>>;

    /// Left multiplication by `x` as a linear map.
    fn left_mult_map(&self, x: &Tensor) -> Result<LinearMap> {
        let shape = self.shape();
        let field = self.field();
        LinearMap::from_fn(field, &shape, &shape, |j| {
            self.product(x, &Tensor::basis(field, &shape, j))
        })
    }

    /// Two-sided inverse of `x`, found by inverting left multiplication.
    fn inverse(&self, x: &Tensor) -> Result<Tensor> {
        let l = self.left_mult_map(x)?;
        let inv = invert_map(&l).map_err(|_| Error::NotInvertible {
            witness: x.data().to_vec(),
        })?;
        let y = inv.apply(&self.one())?;
        if self.product(&y, x)? != self.one() {
            return Err(Error::NotInvertible {
                witness: x.data().to_vec(),
            });
        }
        Ok(y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: FieldSpec,
    labels: Vec<String>,
    mul: LinearMap,
    unit: Tensor,
    table: SparseTable,
}

impl Algebra {
    pub fn new(field: FieldSpec, labels: Vec<String>, mul: LinearMap, unit: Tensor) -> Result<Self> {
        let n = labels.len();
        check_dim(n)?;
        if mul.source() != [n, n] || mul.target() != [n] {
            return Err(Error::Shape(format!(
                "multiplication of shape {:?}->{:?} on a {n}-dimensional algebra",
                mul.source(),
                mul.target()
            )));
        }
        if unit.dims() != [n] {
            return Err(Error::Shape(format!("unit of shape {:?}", unit.dims())));
        }
        if mul.field() != field || unit.field() != field {
            return Err(Error::ModulusMismatch(field.name(), mul.field().name()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Shape(format!("duplicate basis label {l:?}")));
            }
        }
        let table = sparse_table(&mul);
        Ok(Algebra {
            field,
            labels,
            mul,
            unit,
            table,
        })
    }

    /// Builds an algebra from a rule giving `e_i e_j`.
    pub fn from_products<F>(field: FieldSpec, labels: Vec<String>, unit: Tensor, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Tensor + Sync + Send,
    {
        let n = labels.len();
        let mul = LinearMap::from_fn(field, &[n, n], &[n], |j| Ok(f(j / n, j % n)))?;
        Algebra::new(field, labels, mul, unit)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul(&self) -> &LinearMap {
        &self.mul
    }

    pub fn unit(&self) -> &Tensor {
        &self.unit
    }

    /// The unit as a map from the ground field.
    pub fn unit_map(&self) -> LinearMap {
        LinearMap::from_columns(self.field, &[], &[self.dim()], vec![self.unit.clone()]).expect("unit shape")
    }

    pub fn basis(&self, i: usize) -> Tensor {
        Tensor::basis(self.field, &[self.dim()], i)
    }

    pub fn element(&self, coords: &[Scalar]) -> Result<Tensor> {
        Tensor::from_vec(self.field, &[self.dim()], coords.to_vec())
    }

    pub fn scalar(&self, c: &Scalar) -> Tensor {
        self.unit.scaled(c)
    }

    pub(crate) fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.dim() + j]
    }

    pub fn power(&self, x: &Tensor, k: u32) -> Result<Tensor> {
        let mut acc = self.unit.clone();
        for _ in 0..k {
            acc = self.product(&acc, x)?;
        }
        Ok(acc)
    }

    /// `c` if `x = c·1`, otherwise `None`.
    pub fn scalar_coefficient(&self, x: &Tensor) -> Option<Scalar> {
        let (p, u) = self.unit.nonzeros().next()?;
        let c = x.get(p) * &u.inv().ok()?;
        (self.unit.scaled(&c) == *x).then_some(c)
    }

    pub fn opposite(&self) -> Algebra {
        let n = self.dim();
        let mul = self.mul.permute_source(&[1, 0]).expect("two legs");
        debug_assert_eq!(mul.source(), [n, n]);
        Algebra::new(self.field, self.labels.clone(), mul, self.unit.clone()).expect("same shapes")
    }

    pub fn is_commutative(&self) -> bool {
        self.mul == self.mul.permute_source(&[1, 0]).expect("two legs")
    }

    /// The tensor product algebra on the flattened basis `a⊗b`.
    pub fn tensor(&self, other: &Algebra) -> Result<Algebra> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch(self.field.name(), other.field.name()));
        }
        let (n1, n2) = (self.dim(), other.dim());
        let labels = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| format!("{a}⊗{b}")))
            .collect();
        let unit = self.unit.outer(&other.unit).reshape(&[n1 * n2])?;
        Algebra::from_products(self.field, labels, unit, |x, y| {
            self.mul
                .column((x / n2) * n1 + y / n2)
                .outer(other.mul.column((x % n2) * n2 + y % n2))
                .reshape(&[n1 * n2])
                .expect("volume preserved")
        })
    }

    pub fn verify(&self) -> Report {
        let n = self.dim();
        let f = self.field;
        let id = LinearMap::identity(f, &[n]);
        let labels = repeat_labels(&self.labels, 3);
        let mut report = Report::new(format!("algebra of dimension {n} over {f}"));

        let assoc = (|| -> Result<Check> {
            let left = self.mul.compose(&self.mul.tensor(&id)?)?;
            let right = self.mul.compose(&id.tensor(&self.mul)?)?;
            Ok(compare_maps("associativity m∘(m⊗Id) = m∘(Id⊗m)", &left, &right, &labels, &labels))
        })();
        report.push(assoc.unwrap_or_else(|e| Check::fail("associativity m∘(m⊗Id) = m∘(Id⊗m)", e.to_string())));

        let left_unit = self
            .mul
            .compose(&self.unit_map().tensor(&id).expect("cap"))
            .map(|m| compare_maps("left unit m∘(η⊗Id) = Id", &m, &id, &labels, &labels));
        report.push(left_unit.unwrap_or_else(|e| Check::fail("left unit m∘(η⊗Id) = Id", e.to_string())));
        let right_unit = self
            .mul
            .compose(&id.tensor(&self.unit_map()).expect("cap"))
            .map(|m| compare_maps("right unit m∘(Id⊗η) = Id", &m, &id, &labels, &labels));
        report.push(right_unit.unwrap_or_else(|e| Check::fail("right unit m∘(Id⊗η) = Id", e.to_string())));
        report.flag("commutative", self.is_commutative());
        report
    }

    /// Two-sided ideal generated by all commutators `uv − vu`.
    pub fn commutator_ideal(&self) -> Echelon {
        let n = self.dim();
        let mut ech = Echelon::new(self.field, n);
        for a in 0..n {
            for b in (a + 1)..n {
                let c = self
                    .product(&self.basis(a), &self.basis(b))
                    .and_then(|ab| ab.minus(&self.product(&self.basis(b), &self.basis(a))?))
                    .expect("same algebra");
                ech.insert(c.data());
            }
        }
        loop {
            let current: Vec<Tensor> = ech
                .rows()
                .iter()
                .map(|r| self.element(r).expect("row length"))
                .collect();
            let mut grew = false;
            for v in &current {
                for c in 0..n {
                    let e = self.basis(c);
                    let l = self.product(&e, v).expect("same algebra");
                    let r = self.product(v, &e).expect("same algebra");
                    grew |= ech.insert(l.data());
                    grew |= ech.insert(r.data());
                }
            }
            if !grew {
                return ech;
            }
        }
    }

    /// Checks that `chi` (values on the basis) is a character.
    pub fn verify_character(&self, chi: &[Scalar]) -> Check {
        let name = "functional is a character";
        if chi.len() != self.dim() {
            return Check::fail(name, format!("{} values for dimension {}", chi.len(), self.dim()));
        }
        if let Some(s) = chi.iter().find(|s| s.field() != self.field) {
            return Check::fail(name, format!("value {s} is not in {}", self.field));
        }
        let eval = |x: &Tensor| -> Scalar {
            x.nonzeros()
                .fold(self.field.zero(), |acc, (i, c)| &acc + &(c * &chi[i]))
        };
        if !eval(&self.unit).is_one() {
            return Check::fail(name, format!("χ(1) = {}", eval(&self.unit)));
        }
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                let ab = self.product(&self.basis(a), &self.basis(b)).expect("same algebra");
                let lhs = eval(&ab);
                let rhs = &chi[a] * &chi[b];
                if lhs != rhs {
                    return Check::fail(
                        name,
                        format!(
                            "χ({}·{}) = {lhs} but χ({})χ({}) = {rhs}",
                            self.labels[a], self.labels[b], self.labels[a], self.labels[b]
                        ),
                    );
                }
            }
        }
        Check::pass(name)
    }

    /// Looks for characters. Over a prime field small enough to enumerate,
    /// returns all of them. Otherwise reports the commutator-ideal
    /// obstruction when it applies.
    pub fn character_search(&self) -> Result<CharacterSearch> {
        match self.field {
            FieldSpec::Prime(_) => self.characters_exhaustive().map(CharacterSearch::Found),
            FieldSpec::Rationals => Ok(self.character_obstruction()),
        }
    }

    pub fn character_obstruction(&self) -> CharacterSearch {
        let ideal = self.commutator_ideal();
        if ideal.rank() == self.dim() {
            CharacterSearch::NoneByCommutatorIdeal
        } else {
            CharacterSearch::Unknown {
                commutator_ideal_dim: ideal.rank(),
            }
        }
    }

    /// Enumerates every functional over `F_p`; limited to `p^dim ≤ 10^6`.
    pub fn characters_exhaustive(&self) -> Result<Vec<Vec<Scalar>>> {
        const LIMIT: u128 = 1_000_000;
        let p = self.field.characteristic();
        if p == 0 {
            return Err(Error::BadCharacteristic(
                "exhaustive character search needs a prime field".into(),
            ));
        }
        let size = (p as u128).checked_pow(self.dim() as u32).unwrap_or(u128::MAX);
        if size > LIMIT {
            return Err(Error::SearchSpaceTooLarge { size, limit: LIMIT });
        }
        let dims = vec![p as usize; self.dim()];
        let found = par::map_range(size as usize, |idx| {
            let chi: Vec<Scalar> = multi_index(&dims, idx)
                .into_iter()
                .map(|d| self.field.from_i64(d as i64))
                .collect();
            self.verify_character(&chi).passed().then_some(chi)
        });
        Ok(found.into_iter().flatten().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharacterSearch {
    /// Complete list from exhaustive enumeration.
    Found(Vec<Vec<Scalar>>),
    /// The commutator ideal is the whole algebra, so no character exists.
    NoneByCommutatorIdeal,
    Unknown { commutator_ideal_dim: usize },
}

impl Multiplication for Algebra {
    fn field(&self) -> FieldSpec {
        self.field
    }

    fn shape(&self) -> Vec<usize> {
        vec![self.dim()]
    }

    fn one(&self) -> Tensor {
        self.unit.clone()
    }

    fn product(&self, x: &Tensor, y: &Tensor) -> Result<Tensor> {
        let n = self.dim();
        if x.dims() != [n] || y.dims() != [n] {
            return Err(Error::ArityMismatch(format!(
                "cannot multiply tensors of shapes {:?} and {:?} in a {n}-dimensional algebra",
                x.dims(),
                y.dims()
            )));
        }
        let mut out = Tensor::zeros(self.field, &[n]);
        for (i, a) in x.nonzeros() {
            for (j, b) in y.nonzeros() {
                let ab = a * b;
                for (k, c) in self.basis_product(i, j) {
                    out.add_at(*k, &(&ab * c));
                }
            }
        }
        Ok(out)
    }

    fn leg_labels(&self) -> Vec<Vec<String>> {
        vec![self.labels.clone()]
    }
}

/// `A_1 ⊗ ... ⊗ A_k` with the componentwise product, acting on
/// multi-leg tensors.
#[derive(Clone, Debug)]
pub struct TensorAlgebra {
    factors: Vec<Algebra>,
}

impl TensorAlgebra {
    pub fn new(factors: Vec<Algebra>) -> Result<Self> {
        let Some(first) = factors.first() else {
            return Err(Error::Shape("empty tensor product".into()));
        };
        if let Some(a) = factors.iter().find(|a| a.field != first.field) {
            return Err(Error::ModulusMismatch(first.field.name(), a.field.name()));
        }
        Ok(TensorAlgebra { factors })
    }

    pub fn factors(&self) -> &[Algebra] {
        &self.factors
    }
}

impl Multiplication for TensorAlgebra {
    fn field(&self) -> FieldSpec {
        self.factors[0].field
    }

    fn shape(&self) -> Vec<usize> {
        self.factors.iter().map(Algebra::dim).collect()
    }

    fn one(&self) -> Tensor {
        let mut it = self.factors.iter();
        let first = it.next().expect("nonempty").unit.clone();
        it.fold(first, |acc, a| acc.outer(&a.unit))
    }

    fn product(&self, x: &Tensor, y: &Tensor) -> Result<Tensor> {
        let shape = self.shape();
        if x.dims() != shape || y.dims() != shape {
            return Err(Error::ArityMismatch(format!(
                "cannot multiply tensors of shapes {:?} and {:?} in a tensor algebra of shape {:?}",
                x.dims(),
                y.dims(),
                shape
            )));
        }
        let mut out = Tensor::zeros(self.field(), &shape);
        let ys: Vec<(Vec<usize>, &Scalar)> = y.nonzeros().map(|(j, b)| (multi_index(&shape, j), b)).collect();
        for (i, a) in x.nonzeros() {
            let mi = multi_index(&shape, i);
            for (mj, b) in &ys {
                let legs: Vec<&[(usize, Scalar)]> = self
                    .factors
                    .iter()
                    .enumerate()
                    .map(|(l, alg)| alg.basis_product(mi[l], mj[l]))
                    .collect();
                accumulate(&mut out, &shape, &legs, 0, 0, &(a * *b));
            }
        }
        Ok(out)
    }

    fn leg_labels(&self) -> Vec<Vec<String>> {
        self.factors.iter().map(|a| a.labels.clone()).collect()
    }
}

fn accumulate(
    out: &mut Tensor,
    shape: &[usize],
    legs: &[&[(usize, Scalar)]],
    leg: usize,
    flat: usize,
    coeff: &Scalar,
) {
    if leg == legs.len() {
        out.add_at(flat, coeff);
        return;
    }
    for (k, c) in legs[leg] {
        accumulate(out, shape, legs, leg + 1, flat * shape[leg] + k, &(coeff * c));
    }
}

/// Checks that `f` is a unital, multiplicative map from `source` into
/// `target`.
pub fn check_morphism(name: &str, f: &LinearMap, source: &Algebra, target: &dyn Multiplication) -> Check {
    let n = source.dim();
    let shape = target.shape();
    if f.source() != [n] || f.target() != shape {
        return Check::fail(
            name,
            format!(
                "map of shape {:?}->{:?} between spaces {:?} and {:?}",
                f.source(),
                f.target(),
                [n],
                shape
            ),
        );
    }
    let tlabels = target.leg_labels();
    let unit_image = match f.apply(source.unit()) {
        Ok(u) => u,
        Err(e) => return Check::fail(name, e.to_string()),
    };
    let unit_check = compare_tensors(name, "1", &unit_image, &target.one(), &tlabels);
    if !unit_check.passed() {
        return unit_check;
    }
    let images: Vec<Tensor> = f.columns().to_vec();
    let built = (|| -> Result<(LinearMap, LinearMap)> {
        let lhs = f.compose(source.mul())?;
        let rhs = LinearMap::from_fn(source.field(), &[n, n], &shape, |j| {
            target.product(&images[j / n], &images[j % n])
        })?;
        Ok((lhs, rhs))
    })();
    match built {
        Ok((lhs, rhs)) => compare_maps(name, &lhs, &rhs, &repeat_labels(source.labels(), 2), &tlabels),
        Err(e) => Check::fail(name, e.to_string()),
    }
}

/// Checks that `f` is a bijective algebra endomorphism.
pub fn check_automorphism(name: &str, f: &LinearMap, algebra: &Algebra) -> Check {
    let m = check_morphism(name, f, algebra, algebra);
    if !m.passed() {
        return m;
    }
    match invert_map(f) {
        Ok(_) => m,
        Err(e) => Check::fail(name, format!("not invertible: {e}")),
    }
}

pub fn verify_morphism(f: &LinearMap, source: &Algebra, target: &Algebra) -> Report {
    let mut report = Report::new("algebra morphism");
    report.push(check_morphism("map is unital and multiplicative", f, source, target));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    /// ℚ[X]/(X² − d) on the basis {1, x}.
    fn quadratic(d: i64) -> Algebra {
        let f = q();
        Algebra::from_products(
            f,
            vec!["1".into(), "x".into()],
            Tensor::basis(f, &[2], 0),
            |i, j| match (i, j) {
                (1, 1) => Tensor::basis(f, &[2], 0).scaled(&f.from_i64(d)),
                _ => Tensor::basis(f, &[2], i + j),
            },
        )
        .unwrap()
    }

    #[test]
    fn quadratic_algebra_verifies() {
        let a = quadratic(2);
        assert!(a.verify().passed());
        assert!(a.is_commutative());
        assert_eq!(a.opposite(), a);
    }

    #[test]
    fn inverse_of_x_is_half_x() {
        let a = quadratic(2);
        let inv = a.inverse(&a.basis(1)).unwrap();
        assert_eq!(inv, a.basis(1).scaled(&q().ratio(1, 2).unwrap()));
        let zero = Tensor::zeros(q(), &[2]);
        assert!(matches!(a.inverse(&zero), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn constant_map_is_not_multiplicative() {
        let a = quadratic(2);
        let f = LinearMap::from_columns(q(), &[2], &[2], vec![a.basis(0), a.basis(0)]).unwrap();
        let c = check_morphism("m", &f, &a, &a);
        let w = c.witness().unwrap();
        assert_eq!(w.input, "x⊗x");
    }

    #[test]
    fn tensor_of_group_algebras_has_unit_one_one() {
        let f = q();
        let z2 = Algebra::from_products(f, vec!["e".into(), "g".into()], Tensor::basis(f, &[2], 0), |i, j| {
            Tensor::basis(f, &[2], (i + j) % 2)
        })
        .unwrap();
        let t = z2.tensor(&z2).unwrap();
        assert_eq!(t.dim(), 4);
        assert_eq!(t.unit(), &Tensor::basis(f, &[4], 0));
        assert!(t.verify().passed());
    }

    #[test]
    fn augmentation_is_a_character() {
        let f = q();
        let z2 = Algebra::from_products(f, vec!["e".into(), "g".into()], Tensor::basis(f, &[2], 0), |i, j| {
            Tensor::basis(f, &[2], (i + j) % 2)
        })
        .unwrap();
        assert!(z2.verify_character(&[f.one(), f.one()]).passed());
        let a = quadratic(2);
        assert!(!a.verify_character(&[f.one(), f.zero()]).passed());
    }

    #[test]
    fn tensor_algebra_product_is_componentwise() {
        let a = quadratic(3);
        let ta = TensorAlgebra::new(vec![a.clone(), a.clone()]).unwrap();
        let x = a.basis(1);
        let xx = x.outer(&x);
        let sq = ta.product(&xx, &xx).unwrap();
        let nine = q().from_i64(9);
        assert_eq!(sq, a.basis(0).outer(&a.basis(0)).scaled(&nine));
    }
}
