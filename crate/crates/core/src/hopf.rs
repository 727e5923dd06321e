//! Hopf algebras by structure constants, finite groups, linear duals and
//! Drinfeld twists.

use sha2::{Digest, Sha256};

use crate::algebra::{check_morphism, Algebra, Multiplication, TensorAlgebra};
use crate::error::{Error, Result};
use crate::linalg::invert_map;
use crate::par::{self, Task};
use crate::report::{compare_maps, compare_tensors, repeat_labels, Check, Report};
use crate::scalar::{FieldSpec, Scalar};
use crate::tensor::{LinearMap, Tensor};

/// The ground field viewed as a 0-leg algebra, for checking counits.
#[derive(Clone, Copy, Debug)]
pub struct GroundField(pub FieldSpec);

impl Multiplication for GroundField {
    fn field(&self) -> FieldSpec {
        self.0
    }

    fn shape(&self) -> Vec<usize> {
        Vec::new()
    }

    fn one(&self) -> Tensor {
        Tensor::scalar(self.0.one())
    }

    fn product(&self, x: &Tensor, y: &Tensor) -> Result<Tensor> {
        if x.legs() != 0 || y.legs() != 0 {
            return Err(Error::ArityMismatch("ground field elements have no legs".into()));
        }
        Ok(Tensor::scalar(x.get(0) * y.get(0)))
    }

    fn leg_labels(&self) -> Vec<Vec<String>> {
        Vec::new()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hopf {
    algebra: Algebra,
    comul: LinearMap,
    counit: LinearMap,
    antipode: LinearMap,
}

impl Hopf {
    pub fn new(algebra: Algebra, comul: LinearMap, counit: LinearMap, antipode: LinearMap) -> Result<Self> {
        let n = algebra.dim();
        let f = algebra.field();
        let shapes = [
            ("comultiplication", &comul, vec![n, n]),
            ("counit", &counit, vec![]),
            ("antipode", &antipode, vec![n]),
        ];
        for (name, map, target) in shapes {
            if map.source() != [n] || map.target() != target {
                return Err(Error::Shape(format!(
                    "{name} of shape {:?}->{:?} on a {n}-dimensional Hopf algebra",
                    map.source(),
                    map.target()
                )));
            }
            if map.field() != f {
                return Err(Error::ModulusMismatch(f.name(), map.field().name()));
            }
        }
        Ok(Hopf {
            algebra,
            comul,
            counit,
            antipode,
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn labels(&self) -> &[String] {
        self.algebra.labels()
    }

    pub fn mul(&self) -> &LinearMap {
        self.algebra.mul()
    }

    pub fn unit(&self) -> &Tensor {
        self.algebra.unit()
    }

    pub fn comul(&self) -> &LinearMap {
        &self.comul
    }

    pub fn counit(&self) -> &LinearMap {
        &self.counit
    }

    pub fn antipode(&self) -> &LinearMap {
        &self.antipode
    }

    pub fn counit_value(&self, x: &Tensor) -> Result<Scalar> {
        Ok(self.counit.apply(x)?.get(0).clone())
    }

    /// `H ⊗ H` with the componentwise product.
    pub fn square(&self) -> TensorAlgebra {
        TensorAlgebra::new(vec![self.algebra.clone(), self.algebra.clone()]).expect("one field")
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Hopf> {
        let a = Algebra::new(self.field(), labels, self.mul().clone(), self.unit().clone())?;
        Hopf::new(a, self.comul.clone(), self.counit.clone(), self.antipode.clone())
    }

    /// Same structure tensors, ignoring labels.
    pub fn same_tables(&self, other: &Hopf) -> bool {
        self.mul() == other.mul()
            && self.unit() == other.unit()
            && self.comul == other.comul
            && self.counit == other.counit
            && self.antipode == other.antipode
    }

    /// Stable hex digest of the field and the five structure tensors.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.field().name().as_bytes());
        let unit = LinearMap::from_columns(self.field(), &[], &[self.dim()], vec![self.unit().clone()])
            .expect("unit shape");
        for map in [self.mul(), &unit, &self.comul, &self.counit, &self.antipode] {
            h.update(format!("|{:?}->{:?}|", map.source(), map.target()).as_bytes());
            for c in map.columns() {
                for x in c.data() {
                    h.update(x.to_string().as_bytes());
                    h.update(b",");
                }
            }
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn verify(&self) -> Report {
        let n = self.dim();
        let f = self.field();
        let l1 = repeat_labels(self.labels(), 1);
        let l3 = repeat_labels(self.labels(), 3);
        let id = LinearMap::identity(f, &[n]);
        let eta_eps = self.algebra.unit_map().compose(&self.counit).expect("shapes");

        let tasks: Vec<Task<'_, Check>> = vec![
            Box::new(|| {
                let name = "coassociativity (Δ⊗Id)∘Δ = (Id⊗Δ)∘Δ";
                let r = (|| -> Result<Check> {
                    let lhs = self.comul.tensor(&id)?.compose(&self.comul)?;
                    let rhs = id.tensor(&self.comul)?.compose(&self.comul)?;
                    Ok(compare_maps(name, &lhs, &rhs, &l1, &l3))
                })();
                r.unwrap_or_else(|e| Check::fail(name, e.to_string()))
            }),
            Box::new(|| {
                let name = "left counit (ε⊗Id)∘Δ = Id";
                let r = (|| -> Result<Check> {
                    let lhs = self.counit.tensor(&id)?.compose(&self.comul)?;
                    Ok(compare_maps(name, &lhs, &id, &l1, &l1))
                })();
                r.unwrap_or_else(|e| Check::fail(name, e.to_string()))
            }),
            Box::new(|| {
                let name = "right counit (Id⊗ε)∘Δ = Id";
                let r = (|| -> Result<Check> {
                    let lhs = id.tensor(&self.counit)?.compose(&self.comul)?;
                    Ok(compare_maps(name, &lhs, &id, &l1, &l1))
                })();
                r.unwrap_or_else(|e| Check::fail(name, e.to_string()))
            }),
            Box::new(|| check_morphism("Δ is an algebra morphism", &self.comul, &self.algebra, &self.square())),
            Box::new(|| check_morphism("ε is an algebra morphism", &self.counit, &self.algebra, &GroundField(f))),
            Box::new(|| {
                let name = "left antipode m∘(S⊗Id)∘Δ = η∘ε";
                let r = (|| -> Result<Check> {
                    let lhs = self.mul().compose(&self.antipode.tensor(&id)?)?.compose(&self.comul)?;
                    Ok(compare_maps(name, &lhs, &eta_eps, &l1, &l1))
                })();
                r.unwrap_or_else(|e| Check::fail(name, e.to_string()))
            }),
            Box::new(|| {
                let name = "right antipode m∘(Id⊗S)∘Δ = η∘ε";
                let r = (|| -> Result<Check> {
                    let lhs = self.mul().compose(&id.tensor(&self.antipode)?)?.compose(&self.comul)?;
                    Ok(compare_maps(name, &lhs, &eta_eps, &l1, &l1))
                })();
                r.unwrap_or_else(|e| Check::fail(name, e.to_string()))
            }),
        ];
        let mut report = Report::new(format!("Hopf algebra of dimension {n} over {f}"));
        report.premise(self.algebra.verify());
        for c in par::run_all(tasks) {
            report.push(c);
        }
        report.flag("commutative", self.algebra.is_commutative());
        report.flag(
            "cocommutative",
            self.comul.permute_target(&[1, 0]).map(|c| c == self.comul).unwrap_or(false),
        );
        report
    }

    /// Returns `self` if it verifies, otherwise [`Error::HopfInvalid`].
    pub fn verified(self) -> Result<Hopf> {
        let r = self.verify();
        if r.passed() {
            Ok(self)
        } else {
            Err(Error::HopfInvalid(r.failure_summary()))
        }
    }

    /// The linear dual in the coordinate dual basis.
    pub fn dual(&self) -> Hopf {
        let f = self.field();
        let labels = self.labels().iter().map(|l| format!("{l}*")).collect();
        let algebra = Algebra::new(
            f,
            labels,
            self.comul.transpose(),
            self.counit.transpose().column(0).clone(),
        )
        .expect("transposed shapes");
        Hopf::new(
            algebra,
            self.mul().transpose(),
            self.algebra.unit_map().transpose(),
            self.antipode.transpose(),
        )
        .expect("transposed shapes")
    }

    /// `S∘S`.
    pub fn antipode_squared(&self) -> LinearMap {
        self.antipode.compose(&self.antipode).expect("endomorphism")
    }
}

/// A finite group by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    name: String,
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl GroupTable {
    /// Validates `table[a][b] = ab`.
    pub fn new(name: impl Into<String>, labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::NotAGroup("table is not a closed n×n array".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        let inverses = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a][b] == identity && table[b][a] == identity)
                    .ok_or_else(|| Error::NotAGroup(format!("{} has no inverse", labels[a])))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupTable {
            name: name.into(),
            labels,
            table,
            identity,
            inverses,
        })
    }

    pub fn cyclic(n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GroupTable::new(format!("Z{n}"), labels, table).expect("cyclic group")
    }

    /// `G × H`, with `(g, h)` at index `g * |H| + h`.
    pub fn product(a: &GroupTable, b: &GroupTable) -> Self {
        let m = b.order();
        let n = a.order() * m;
        let labels = a
            .labels
            .iter()
            .flat_map(|x| b.labels.iter().map(move |y| format!("({x},{y})")))
            .collect();
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| a.table[x / m][y / m] * m + b.table[x % m][y % m])
                    .collect()
            })
            .collect();
        GroupTable::new(format!("{}x{}", a.name, b.name), labels, table).expect("product of groups")
    }

    /// `Z/2 × Z/2`, with `(a, b)` at index `2a + b`.
    pub fn klein() -> Self {
        GroupTable::product(&GroupTable::cyclic(2), &GroupTable::cyclic(2))
    }

    /// The symmetric group on three letters; permutations in lexicographic
    /// order of their one-line notation, composed as `(στ)(i) = σ(τ(i))`.
    pub fn s3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let labels = perms
            .iter()
            .map(|p| format!("{}{}{}", p[0] + 1, p[1] + 1, p[2] + 1))
            .collect();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| {
                        let st = [s[t[0]], s[t[1]], s[t[2]]];
                        perms.iter().position(|p| *p == st).expect("closed")
                    })
                    .collect()
            })
            .collect();
        GroupTable::new("S3", labels, table).expect("symmetric group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }
}

/// The group algebra `k[G]`: group-like basis, `S(g) = g⁻¹`.
pub fn group_algebra(field: FieldSpec, g: &GroupTable) -> Hopf {
    let n = g.order();
    let e = |i| Tensor::basis(field, &[n], i);
    let algebra = Algebra::from_products(field, g.labels.clone(), e(g.identity), |a, b| e(g.mul(a, b)))
        .expect("group algebra");
    let comul = LinearMap::from_fn(field, &[n], &[n, n], |a| Ok(e(a).outer(&e(a)))).expect("shape");
    let counit = LinearMap::from_fn(field, &[n], &[], |_| Ok(Tensor::scalar(field.one()))).expect("shape");
    let antipode = LinearMap::from_fn(field, &[n], &[n], |a| Ok(e(g.inverse(a)))).expect("shape");
    Hopf::new(algebra, comul, counit, antipode).expect("group algebra shapes")
}

/// Functions on `G`, on the basis of indicator functions `1_g`.
pub fn function_algebra(field: FieldSpec, g: &GroupTable) -> Hopf {
    let n = g.order();
    let e = |i| Tensor::basis(field, &[n], i);
    let labels = g.labels.iter().map(|l| format!("1_{l}")).collect();
    let unit = Tensor::from_vec(field, &[n], vec![field.one(); n]).expect("shape");
    let algebra = Algebra::from_products(field, labels, unit, |a, b| {
        if a == b {
            e(a)
        } else {
            Tensor::zeros(field, &[n])
        }
    })
    .expect("function algebra");
    let comul = LinearMap::from_fn(field, &[n], &[n, n], |x| {
        let mut t = Tensor::zeros(field, &[n, n]);
        for h in 0..n {
            t.set(h * n + g.mul(g.inverse(h), x), field.one());
        }
        Ok(t)
    })
    .expect("shape");
    let counit = LinearMap::from_fn(field, &[n], &[], |x| {
        Ok(Tensor::scalar(if x == g.identity { field.one() } else { field.zero() }))
    })
    .expect("shape");
    let antipode = LinearMap::from_fn(field, &[n], &[n], |x| Ok(e(g.inverse(x)))).expect("shape");
    Hopf::new(algebra, comul, counit, antipode).expect("function algebra shapes")
}

/// Sweedler's four-dimensional Hopf algebra: g² = 1, x² = 0,
/// xg = −gx, Δx = x⊗1 + g⊗x, with S² ≠ Id.
pub fn sweedler(f: FieldSpec) -> Result<Hopf> {
    if f.characteristic() == 2 {
        return Err(Error::BadCharacteristic("Sweedler's algebra needs characteristic ≠ 2".into()));
    }
    // basis 1, g, x, gx
    let e = |i| Tensor::basis(f, &[4], i);
    let labels = ["1", "g", "x", "gx"].iter().map(|s| s.to_string()).collect();
    let words: [(usize, usize); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];
    let algebra = Algebra::from_products(f, labels, e(0), |a, b| {
        let (ga, xa) = words[a];
        let (gb, xb) = words[b];
        if xa + xb > 1 {
            return Tensor::zeros(f, &[4]);
        }
        // g^ga x^xa g^gb x^xb = (−1)^{xa·gb} g^{ga+gb} x^{xa+xb}
        let sign = if xa * gb == 1 { -1 } else { 1 };
        let idx = words.iter().position(|&w| w == ((ga + gb) % 2, xa + xb)).expect("closed under products");
        e(idx).scaled(&f.from_i64(sign))
    })
    .expect("shape");
    let comul = LinearMap::from_fn(f, &[4], &[4, 4], |i| {
        let (g, x) = (e(1), e(2));
        let dg = g.outer(&g);
        let dx = x.outer(&e(0)).plus(&g.outer(&x)).expect("shape");
        let sq = TensorAlgebra::new(vec![algebra.clone(), algebra.clone()]).expect("shape");
        Ok(match i {
            0 => e(0).outer(&e(0)),
            1 => dg,
            2 => dx,
            _ => sq.product(&dg, &dx)?,
        })
    })
    .expect("shape");
    let counit = LinearMap::from_fn(f, &[4], &[], |i| {
        Ok(Tensor::scalar(if i < 2 { f.one() } else { f.zero() }))
    })
    .expect("shape");
    // S(1) = 1, S(g) = g, S(x) = −gx, S(gx) = S(x)S(g) = −gxg = x
    let antipode = LinearMap::from_columns(
        f,
        &[4],
        &[4],
        vec![e(0), e(1), e(3).scaled(&f.from_i64(-1)), e(2)],
    )
    .expect("shape");
    Hopf::new(algebra, comul, counit, antipode)
}

/// A Drinfeld twist `F ∈ H ⊗ H` with its derived data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistData {
    host: Hopf,
    f: Tensor,
    f_inv: Option<Tensor>,
    u: Tensor,
    u_inv: Option<Tensor>,
}

impl TwistData {
    /// Computes `F⁻¹`, `u_F = m(Id⊗S)(F)` and `u_F⁻¹ = m(S⊗Id)(F⁻¹)`.
    /// A non-invertible `F` is kept so that [`verify`](Self::verify) can
    /// report every failing identity.
    pub fn new(host: Hopf, f: Tensor) -> Result<Self> {
        let n = host.dim();
        if f.dims() != [n, n] {
            return Err(Error::Shape(format!("twist of shape {:?}", f.dims())));
        }
        if f.field() != host.field() {
            return Err(Error::ModulusMismatch(host.field().name(), f.field().name()));
        }
        let f_inv = match host.square().inverse(&f) {
            Ok(v) => Some(v),
            Err(Error::NotInvertible { .. }) => None,
            Err(e) => return Err(e),
        };
        let id = LinearMap::identity(host.field(), &[n]);
        let u = host.mul().compose(&id.tensor(host.antipode())?)?.apply(&f)?;
        let s_id = host.mul().compose(&host.antipode().tensor(&id)?)?;
        let u_inv = f_inv.as_ref().map(|fi| s_id.apply(fi)).transpose()?;
        Ok(TwistData {
            host,
            f,
            f_inv,
            u,
            u_inv,
        })
    }

    pub fn trivial(host: Hopf) -> Self {
        let f = host.unit().outer(host.unit());
        TwistData::new(host, f).expect("1⊗1 is invertible")
    }

    /// `F = Σ β(g, h) 1_g ⊗ 1_h` on `function_algebra(field, group)`.
    pub fn bicharacter<B>(field: FieldSpec, group: &GroupTable, beta: B) -> Result<Self>
    where
        B: Fn(usize, usize) -> Scalar,
    {
        let host = function_algebra(field, group);
        let n = group.order();
        let mut f = Tensor::zeros(field, &[n, n]);
        for a in 0..n {
            for b in 0..n {
                f.set(a * n + b, beta(a, b));
            }
        }
        TwistData::new(host, f)
    }

    pub fn host(&self) -> &Hopf {
        &self.host
    }

    pub fn f(&self) -> &Tensor {
        &self.f
    }

    pub fn f_inv(&self) -> Option<&Tensor> {
        self.f_inv.as_ref()
    }

    pub fn u(&self) -> &Tensor {
        &self.u
    }

    pub fn u_inv(&self) -> Option<&Tensor> {
        self.u_inv.as_ref()
    }

    pub fn verify(&self) -> Report {
        let h = &self.host;
        let n = h.dim();
        let sq = h.square();
        let l2 = repeat_labels(h.labels(), 2);
        let l3 = repeat_labels(h.labels(), 3);
        let l1 = repeat_labels(h.labels(), 1);
        let one2 = sq.one();
        let one3 = TensorAlgebra::new(vec![h.algebra().clone(); 3]).expect("one field");
        let mut report = Report::new(format!("twist on a Hopf algebra of dimension {n}"));

        let fail = |name: &str, e: Error| Check::fail(name, e.to_string());
        match &self.f_inv {
            Some(fi) => {
                report.push(match sq.product(&self.f, fi) {
                    Ok(p) => compare_tensors("F·F⁻¹ = 1⊗1", "F", &p, &one2, &l2),
                    Err(e) => fail("F·F⁻¹ = 1⊗1", e),
                });
                report.push(match sq.product(fi, &self.f) {
                    Ok(p) => compare_tensors("F⁻¹·F = 1⊗1", "F", &p, &one2, &l2),
                    Err(e) => fail("F⁻¹·F = 1⊗1", e),
                });
            }
            None => report.push(Check::fail("F is invertible", "left multiplication by F is singular")),
        }
        let cocycle = "(F⊗1)(Δ⊗Id)(F) = (1⊗F)(Id⊗Δ)(F)";
        report.push(
            (|| -> Result<Check> {
                let lhs = one3.product(&self.f.outer(h.unit()), &h.comul().apply_on_legs(&self.f, 0)?)?;
                let rhs = one3.product(&h.unit().outer(&self.f), &h.comul().apply_on_legs(&self.f, 1)?)?;
                Ok(compare_tensors(cocycle, "F", &lhs, &rhs, &l3))
            })()
            .unwrap_or_else(|e| fail(cocycle, e)),
        );
        report.push(match h.counit().apply_on_legs(&self.f, 0) {
            Ok(v) => compare_tensors("(ε⊗Id)(F) = 1", "F", &v, h.unit(), &l1),
            Err(e) => fail("(ε⊗Id)(F) = 1", e),
        });
        report.push(match h.counit().apply_on_legs(&self.f, 1) {
            Ok(v) => compare_tensors("(Id⊗ε)(F) = 1", "F", &v, h.unit(), &l1),
            Err(e) => fail("(Id⊗ε)(F) = 1", e),
        });
        let a = h.algebra();
        if let Some(ui) = &self.u_inv {
            report.push(match a.product(&self.u, ui) {
                Ok(p) => compare_tensors("u_F·u_F⁻¹ = 1", "u_F", &p, h.unit(), &l1),
                Err(e) => fail("u_F·u_F⁻¹ = 1", e),
            });
            report.push(match a.product(ui, &self.u) {
                Ok(p) => compare_tensors("u_F⁻¹·u_F = 1", "u_F", &p, h.unit(), &l1),
                Err(e) => fail("u_F⁻¹·u_F = 1", e),
            });
        }
        report
    }

    /// `H_F = (H, m, FΔF⁻¹, η, ε, u_F S u_F⁻¹)`.
    pub fn twisted(&self) -> Result<Hopf> {
        let r = self.verify();
        if !r.passed() {
            return Err(Error::TwistInvalid(r.failure_summary()));
        }
        let (Some(f_inv), Some(u_inv)) = (&self.f_inv, &self.u_inv) else {
            return Err(Error::NotInvertible {
                witness: self.f.data().to_vec(),
            });
        };
        let h = &self.host;
        let n = h.dim();
        let field = h.field();
        let sq = h.square();
        let a = h.algebra();
        let comul = LinearMap::from_fn(field, &[n], &[n, n], |x| {
            let d = h.comul().column(x);
            sq.product(&sq.product(&self.f, d)?, f_inv)
        })?;
        let antipode = LinearMap::from_fn(field, &[n], &[n], |x| {
            a.product(&a.product(&self.u, h.antipode().column(x))?, u_inv)
        })?;
        Hopf::new(a.clone(), comul, h.counit().clone(), antipode)
    }
}

/// Checks that `f: H → H′` preserves the whole Hopf structure.
pub fn check_hopf_morphism(f: &LinearMap, source: &Hopf, target: &Hopf) -> Report {
    let mut report = Report::new("Hopf algebra morphism");
    let (n, m) = (source.dim(), target.dim());
    if f.source() != [n] || f.target() != [m] {
        report.push(Check::fail(
            "map has the right shape",
            format!("{:?}->{:?} between dimensions {n} and {m}", f.source(), f.target()),
        ));
        return report;
    }
    let ls = repeat_labels(source.labels(), 1);
    let lt2 = repeat_labels(target.labels(), 2);
    let lt1 = repeat_labels(target.labels(), 1);
    report.push(check_morphism("f is an algebra morphism", f, source.algebra(), target.algebra()));
    let guard = |name: &str, r: Result<Check>| r.unwrap_or_else(|e| Check::fail(name, e.to_string()));
    report.push(guard("(f⊗f)∘Δ = Δ′∘f", (|| {
        let lhs = f.tensor(f)?.compose(source.comul())?;
        let rhs = target.comul().compose(f)?;
        Ok(compare_maps("(f⊗f)∘Δ = Δ′∘f", &lhs, &rhs, &ls, &lt2))
    })()));
    report.push(guard("ε′∘f = ε", (|| {
        let lhs = target.counit().compose(f)?;
        Ok(compare_maps("ε′∘f = ε", &lhs, source.counit(), &ls, &[]))
    })()));
    report.push(guard("f∘S = S′∘f", (|| {
        let lhs = f.compose(source.antipode())?;
        let rhs = target.antipode().compose(f)?;
        Ok(compare_maps("f∘S = S′∘f", &lhs, &rhs, &ls, &lt1))
    })()));
    report
}

/// A certified isomorphism of Hopf algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfIso {
    source: Hopf,
    target: Hopf,
    map: LinearMap,
    inverse: LinearMap,
}

impl HopfIso {
    pub fn new(source: Hopf, target: Hopf, map: LinearMap) -> Result<Self> {
        let mut report = check_hopf_morphism(&map, &source, &target);
        let inverse = match invert_map(&map) {
            Ok(inv) => Some(inv),
            Err(e) => {
                report.push(Check::fail("f is invertible", e.to_string()));
                None
            }
        };
        match inverse {
            Some(inverse) if report.passed() => Ok(HopfIso {
                source,
                target,
                map,
                inverse,
            }),
            _ => Err(Error::PhiNotIso(report.failure_summary())),
        }
    }

    pub fn identity(h: Hopf) -> Self {
        let id = LinearMap::identity(h.field(), &[h.dim()]);
        HopfIso {
            source: h.clone(),
            target: h,
            map: id.clone(),
            inverse: id,
        }
    }

    pub fn source(&self) -> &Hopf {
        &self.source
    }

    pub fn target(&self) -> &Hopf {
        &self.target
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn inverse_map(&self) -> &LinearMap {
        &self.inverse
    }

    pub fn inverse(&self) -> HopfIso {
        HopfIso {
            source: self.target.clone(),
            target: self.source.clone(),
            map: self.inverse.clone(),
            inverse: self.map.clone(),
        }
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &HopfIso) -> Result<HopfIso> {
        if !inner.target.same_tables(&self.source) {
            return Err(Error::PhiNotIso("composable isomorphisms must share a Hopf algebra".into()));
        }
        Ok(HopfIso {
            source: inner.source.clone(),
            target: self.target.clone(),
            map: self.map.compose(&inner.map)?,
            inverse: inner.inverse.compose(&self.inverse)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn group_algebra_of_z2_is_hopf_with_s_identity() {
        let h = group_algebra(q(), &GroupTable::cyclic(2));
        assert!(h.verify().passed());
        assert_eq!(h.antipode(), &LinearMap::identity(q(), &[2]));
    }

    #[test]
    fn zero_antipode_fails() {
        let h = group_algebra(q(), &GroupTable::cyclic(2));
        let broken = Hopf::new(
            h.algebra().clone(),
            h.comul().clone(),
            h.counit().clone(),
            LinearMap::zero(q(), &[2], &[2]),
        )
        .unwrap();
        let r = broken.verify();
        assert!(!r.passed());
        assert!(r.first_failure().unwrap().name.contains("antipode"));
    }

    #[test]
    fn broken_table_is_not_a_group() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let err = GroupTable::new("bad", labels, vec![vec![0, 0], vec![0, 1]]);
        assert!(matches!(err, Err(Error::NotAGroup(_))));
    }

    #[test]
    fn s3_is_nonabelian() {
        let g = GroupTable::s3();
        assert!((0..6).any(|a| (0..6).any(|b| g.mul(a, b) != g.mul(b, a))));
        assert!(group_algebra(q(), &g).verify().passed());
        assert!(function_algebra(q(), &g).verify().passed());
    }

    #[test]
    fn dual_of_group_algebra_is_function_algebra() {
        for g in [GroupTable::cyclic(2), GroupTable::cyclic(3), GroupTable::s3()] {
            let d = group_algebra(q(), &g).dual();
            assert!(d.same_tables(&function_algebra(q(), &g)));
            assert!(function_algebra(q(), &g).dual().same_tables(&group_algebra(q(), &g)));
        }
    }

    #[test]
    fn trivial_twist_changes_nothing() {
        let h = group_algebra(q(), &GroupTable::s3());
        let t = TwistData::trivial(h.clone());
        assert!(t.verify().passed());
        assert_eq!(t.u(), h.unit());
        assert!(t.twisted().unwrap().same_tables(&h));
    }

    #[test]
    fn counit_violating_twist_is_rejected() {
        let h = function_algebra(q(), &GroupTable::cyclic(2));
        let f = Tensor::basis(q(), &[2], 0).outer(&Tensor::basis(q(), &[2], 0));
        let t = TwistData::new(h, f).unwrap();
        let r = t.verify();
        assert!(!r.check("(ε⊗Id)(F) = 1").unwrap().passed());
        assert!(matches!(t.twisted(), Err(Error::TwistInvalid(_))));
    }
}
