//! Builders for standard torsors: trivial torsors of Hopf algebras,
//! quadratic extensions, Galois extensions and cyclic algebras, plus a
//! registry of prebuilt examples.

use crate::algebra::{Algebra, Multiplication, TensorAlgebra};
use crate::error::{Error, Result};
use crate::hopf::{group_algebra, Hopf, GroupTable};
use crate::linalg::invert_map;
use crate::scalar::{FieldSpec, Scalar};
use crate::tensor::{LinearMap, Tensor};
use crate::torsor::{Torsor, VerifiedTorsor};

/// `μ = (Id⊗S⊗Id)∘(Δ⊗Id)∘Δ`, `θ = S²`.
pub fn trivial_torsor(h: &Hopf) -> Result<VerifiedTorsor> {
    let report = h.verify();
    if !report.passed() {
        return Err(Error::HopfInvalid(report.failure_summary()));
    }
    let n = h.dim();
    let f = h.field();
    let mu = LinearMap::from_fn(f, &[n], &[n, n, n], |x| {
        let d2 = h.comul().apply_on_legs(h.comul().column(x), 0)?;
        h.antipode().apply_on_legs(&d2, 1)
    })?;
    Torsor::new(h.algebra().clone(), mu, Some(h.antipode_squared()))?.verified()
}

fn labels_1_x() -> Vec<String> {
    vec!["1".to_string(), "x".to_string()]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadraticVariant {
    /// `k[X]/(X² − d)` with `μ(x) = x⊗x⁻¹⊗x`, char ≠ 2.
    Sqrt,
    /// `k[X]/(X² − X − d)` with the additive law, char 2.
    ArtinSchreier,
}

pub fn quadratic_torsor(field: FieldSpec, d: &Scalar, variant: QuadraticVariant) -> Result<VerifiedTorsor> {
    field.check(d)?;
    let e = |i| Tensor::basis(field, &[2], i);
    let (algebra, mu_x) = match variant {
        QuadraticVariant::Sqrt => {
            if field.characteristic() == 2 {
                return Err(Error::BadCharacteristic(
                    "the square-root variant needs characteristic ≠ 2".into(),
                ));
            }
            if d.is_zero() {
                return Err(Error::DNotInvertible);
            }
            let a = Algebra::from_products(field, labels_1_x(), e(0), |i, j| match (i, j) {
                (1, 1) => e(0).scaled(d),
                _ => e(i + j),
            })?;
            let x = e(1);
            let mu_x = x.outer(&a.inverse(&x)?).outer(&x);
            (a, mu_x)
        }
        QuadraticVariant::ArtinSchreier => {
            if field.characteristic() != 2 {
                return Err(Error::BadCharacteristic(
                    "the Artin-Schreier variant needs characteristic 2".into(),
                ));
            }
            let a = Algebra::from_products(field, labels_1_x(), e(0), |i, j| match (i, j) {
                (1, 1) => e(0).scaled(d).plus(&e(1)).expect("same shape"),
                _ => e(i + j),
            })?;
            let one = e(0);
            let x = e(1);
            let mu_x = one
                .outer(&one)
                .outer(&x)
                .plus(&one.outer(&x).outer(&one))?
                .plus(&x.outer(&one).outer(&one))?;
            (a, mu_x)
        }
    };
    let one = e(0);
    let mu = LinearMap::from_columns(field, &[2], &[2, 2, 2], vec![one.outer(&one).outer(&one), mu_x])?;
    Torsor::new(algebra, mu, Some(LinearMap::identity(field, &[2])))?.verified()
}

/// Polynomial helpers; coefficients are stored lowest degree first.
mod poly {
    use crate::scalar::{FieldSpec, Scalar};

    pub fn trim(mut p: Vec<Scalar>) -> Vec<Scalar> {
        while p.last().is_some_and(Scalar::is_zero) {
            p.pop();
        }
        p
    }

    pub fn rem(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        let lead_inv = b.last().expect("nonzero divisor").inv().expect("nonzero lead");
        while r.len() >= b.len() {
            let c = r.last().expect("nonempty") * &lead_inv;
            let shift = r.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                r[shift + i] -= &(&c * bi);
            }
            r = trim(r);
            if r.is_empty() {
                break;
            }
        }
        r
    }

    pub fn gcd(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b);
            a = b;
            b = r;
        }
        a
    }

    pub fn derivative(field: FieldSpec, p: &[Scalar]) -> Vec<Scalar> {
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &field.from_i64(i as i64))
            .collect()
    }
}

/// A field extension `k[T]/(P)` with a group of automorphisms given by the
/// images `σ(t)` of the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisSpec {
    pub field: FieldSpec,
    /// Coefficients of `P`, lowest degree first.
    pub poly: Vec<Scalar>,
    /// For each group element, `σ(t)` as a polynomial in `t`.
    pub action: Vec<Vec<Scalar>>,
}

/// The pieces of a Galois torsor build, kept for inspection.
#[derive(Clone, Debug)]
pub struct GaloisTorsor {
    pub torsor: VerifiedTorsor,
    /// The idempotents `P_σ ∈ K⊗K`, in the order of the action.
    pub idempotents: Vec<Tensor>,
    /// `σ` as linear maps on `K`.
    pub automorphisms: Vec<LinearMap>,
}

fn power_label(var: &str, i: usize) -> String {
    match i {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{i}"),
    }
}

pub fn galois_torsor(spec: &GaloisSpec) -> Result<GaloisTorsor> {
    let field = spec.field;
    for c in spec.poly.iter().chain(spec.action.iter().flatten()) {
        field.check(c)?;
    }
    let p = poly::trim(spec.poly.clone());
    if p.len() < 2 {
        return Err(Error::NotGaloisAction("P must have positive degree".into()));
    }
    let d = p.len() - 1;
    let lead_inv = p[d].inv()?;
    let p: Vec<Scalar> = p.iter().map(|c| c * &lead_inv).collect();
    if poly::gcd(&p, &poly::derivative(field, &p)).len() != 1 {
        return Err(Error::NotSeparable);
    }

    let elem = |coeffs: &[Scalar]| -> Tensor {
        let mut r = poly::rem(coeffs, &p);
        r.resize(d, field.zero());
        Tensor::from_vec(field, &[d], r).expect("reduced length")
    };
    let labels = (0..d)
        .map(|i| if i == 0 { "1".to_string() } else { power_label("t", i) })
        .collect();
    let monomial = |k: usize| {
        let mut c = vec![field.zero(); k + 1];
        c[k] = field.one();
        c
    };
    let algebra = Algebra::from_products(field, labels, elem(&monomial(0)), |i, j| elem(&monomial(i + j)))?;

    // σ(t^i) = σ(t)^i.
    let automorphisms = spec
        .action
        .iter()
        .map(|s| {
            let s = elem(s);
            LinearMap::from_fn(field, &[d], &[d], |i| algebra.power(&s, i as u32))
        })
        .collect::<Result<Vec<_>>>()?;
    if automorphisms.len() != d {
        return Err(Error::NotGaloisAction(format!(
            "{} automorphisms for an extension of degree {d}",
            automorphisms.len()
        )));
    }
    let t = elem(&monomial(1));
    for (k, sigma) in automorphisms.iter().enumerate() {
        // Well defined: P(σ(t)) = 0.
        let s = sigma.apply(&t)?;
        let mut value = Tensor::zeros(field, &[d]);
        for (i, c) in p.iter().enumerate() {
            value.add_scaled(&algebra.power(&s, i as u32)?, c)?;
        }
        if !value.is_zero() {
            return Err(Error::NotGaloisAction(format!("element {k} does not send t to a root of P")));
        }
        if invert_map(sigma).is_err() {
            return Err(Error::NotGaloisAction(format!("element {k} is not bijective")));
        }
    }
    for (i, a) in automorphisms.iter().enumerate() {
        if automorphisms[..i].contains(a) {
            return Err(Error::NotGaloisAction("the action is not faithful".into()));
        }
    }
    if !automorphisms.contains(&LinearMap::identity(field, &[d])) {
        return Err(Error::NotGaloisAction("the identity is missing".into()));
    }
    for a in &automorphisms {
        for b in &automorphisms {
            if !automorphisms.contains(&a.compose(b)?) {
                return Err(Error::NotGaloisAction("the automorphisms are not closed under composition".into()));
            }
        }
    }

    // P_σ = Π_{τ≠σ} (t⊗1 − 1⊗τ(t)) · (1⊗(σ(t) − τ(t)))⁻¹.
    let kk = TensorAlgebra::new(vec![algebra.clone(), algebra.clone()])?;
    let one = algebra.unit().clone();
    let images: Vec<Tensor> = automorphisms
        .iter()
        .map(|s| s.apply(&t))
        .collect::<Result<Vec<_>>>()?;
    let mut idempotents = Vec::with_capacity(d);
    for (si, s_t) in images.iter().enumerate() {
        let mut acc = kk.one();
        for (ti, t_t) in images.iter().enumerate() {
            if ti == si {
                continue;
            }
            let num = t.outer(&one).minus(&one.outer(t_t))?;
            let diff = algebra.inverse(&s_t.minus(t_t)?).map_err(|_| {
                Error::NotGaloisAction("σ(t) − τ(t) is not invertible".into())
            })?;
            acc = kk.product(&kk.product(&acc, &num)?, &one.outer(&diff))?;
        }
        idempotents.push(acc);
    }
    let mut total = Tensor::zeros(field, &[d, d]);
    for e in &idempotents {
        total = total.plus(e)?;
    }
    if total != kk.one() {
        return Err(Error::NotGaloisAction("the idempotents do not sum to 1⊗1".into()));
    }
    for (i, a) in idempotents.iter().enumerate() {
        for (j, b) in idempotents.iter().enumerate() {
            let ab = kk.product(a, b)?;
            let expect = if i == j { a.clone() } else { Tensor::zeros(field, &[d, d]) };
            if ab != expect {
                return Err(Error::NotGaloisAction("the idempotents are not orthogonal".into()));
            }
        }
    }

    let mu = LinearMap::from_fn(field, &[d], &[d, d, d], |x| {
        let mut out = Tensor::zeros(field, &[d, d, d]);
        for (p_s, s) in idempotents.iter().zip(&automorphisms) {
            out = out.plus(&p_s.outer(s.column(x)))?;
        }
        Ok(out)
    })?;
    let torsor = Torsor::new(algebra, mu, Some(LinearMap::identity(field, &[d])))?.verified()?;
    Ok(GaloisTorsor {
        torsor,
        idempotents,
        automorphisms,
    })
}

/// `k[T]/(T² − d)` with conjugation `t ↦ −t`.
pub fn quadratic_galois_spec(field: FieldSpec, d: &Scalar) -> GaloisSpec {
    GaloisSpec {
        field,
        poly: vec![-d, field.zero(), field.one()],
        action: vec![
            vec![field.zero(), field.one()],
            vec![field.zero(), -field.one()],
        ],
    }
}

/// Cyclic algebra parameters: `xⁿ = α`, `yⁿ = β`, `xy = q yx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicSpec {
    pub field: FieldSpec,
    pub n: usize,
    pub q: Scalar,
    pub alpha: Scalar,
    pub beta: Scalar,
}

/// Basis label of `x^i y^j`.
fn monomial_label(i: usize, j: usize) -> String {
    let s = format!("{}{}", power_label("x", i), power_label("y", j));
    if s.is_empty() {
        "1".to_string()
    } else {
        s
    }
}

/// The algebra `A_{α,β}` on the basis `x^i y^j` (index `i·n + j`).
pub fn cyclic_algebra(spec: &CyclicSpec) -> Result<Algebra> {
    let CyclicSpec { field, n, q, alpha, beta } = spec;
    let (field, n) = (*field, *n);
    for s in [q, alpha, beta] {
        field.check(s)?;
    }
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::AlphaBetaZero);
    }
    if n == 0 {
        return Err(Error::QNotPrimitive("n must be positive".into()));
    }
    if !q.pow(n as u64).is_one() || (1..n).any(|m| q.pow(m as u64).is_one()) {
        return Err(Error::QNotPrimitive(format!("q = {q} is not a primitive {n}-th root of unity in {field}")));
    }
    let q_inv = q.inv()?;
    let labels = (0..n * n).map(|k| monomial_label(k / n, k % n)).collect();
    Algebra::from_products(field, labels, Tensor::basis(field, &[n * n], 0), |a, b| {
        let (i, j, k, l) = (a / n, a % n, b / n, b % n);
        // y^j x^k = q^{-jk} x^k y^j
        let mut c = q_inv.pow((j * k) as u64);
        if i + k >= n {
            c = &c * alpha;
        }
        if j + l >= n {
            c = &c * beta;
        }
        Tensor::basis(field, &[n * n], ((i + k) % n) * n + (j + l) % n).scaled(&c)
    })
}

/// `μ(x) = x⊗x⁻¹⊗x`, `μ(y) = y⊗y⁻¹⊗y`, extended multiplicatively; `θ = Id`.
pub fn cyclic_torsor(spec: &CyclicSpec) -> Result<VerifiedTorsor> {
    let algebra = cyclic_algebra(spec)?;
    let n = spec.n;
    let dim = n * n;
    let field = spec.field;
    let target = TensorAlgebra::new(vec![algebra.clone(), algebra.opposite(), algebra.clone()])?;
    let gen = |idx: usize| -> Result<Tensor> {
        let g = algebra.basis(idx);
        Ok(g.outer(&algebra.inverse(&g)?).outer(&g))
    };
    let (x_idx, y_idx) = if n == 1 { (0, 0) } else { (n, 1) };
    let mu_x = gen(x_idx)?;
    let mu_y = gen(y_idx)?;
    let powers = |base: &Tensor| -> Result<Vec<Tensor>> {
        let mut out = vec![target.one()];
        for _ in 1..n {
            let next = target.product(out.last().expect("nonempty"), base)?;
            out.push(next);
        }
        Ok(out)
    };
    let xs = powers(&mu_x)?;
    let ys = powers(&mu_y)?;
    let mu = LinearMap::from_fn(field, &[dim], &[dim, dim, dim], |k| target.product(&xs[k / n], &ys[k % n]))?;
    Torsor::new(algebra, mu, Some(LinearMap::identity(field, &[dim])))?.verified()
}

/// Quaternions `A_{−1,−1}` over ℚ.
pub fn quaternion_spec() -> CyclicSpec {
    let f = FieldSpec::Rationals;
    CyclicSpec {
        field: f,
        n: 2,
        q: f.from_i64(-1),
        alpha: f.from_i64(-1),
        beta: f.from_i64(-1),
    }
}

/// Prebuilt examples, addressable by name.
pub const REGISTRY: &[(&str, &str)] = &[
    ("trivial-z2", "trivial torsor of Q[Z/2]"),
    ("trivial-z3", "trivial torsor of Q[Z/3]"),
    ("trivial-s3", "trivial torsor of Q[S3]"),
    ("quadratic-q2", "Q[X]/(X^2 - 2) with mu(x) = x ⊗ x^-1 ⊗ x"),
    ("artin-schreier-f4", "F2[X]/(X^2 + X + 1) with the additive law"),
    ("galois-q-sqrt2", "Galois torsor of Q(sqrt 2) under conjugation"),
    ("galois-f2-frobenius", "Galois torsor of F4 over F2 under Frobenius"),
    ("quaternion", "quaternions A_{-1,-1} over Q"),
    ("cyclic-f7-n3", "cyclic algebra over F7 with n = 3, q = 2, alpha = beta = 1"),
];

pub fn registry_names() -> impl Iterator<Item = &'static str> {
    REGISTRY.iter().map(|(n, _)| *n)
}

pub fn registry_torsor(name: &str) -> Result<VerifiedTorsor> {
    let q = FieldSpec::Rationals;
    let f2 = FieldSpec::Prime(2);
    match name {
        "trivial-z2" => trivial_torsor(&group_algebra(q, &GroupTable::cyclic(2))),
        "trivial-z3" => trivial_torsor(&group_algebra(q, &GroupTable::cyclic(3))),
        "trivial-s3" => trivial_torsor(&group_algebra(q, &GroupTable::s3())),
        "quadratic-q2" => quadratic_torsor(q, &q.from_i64(2), QuadraticVariant::Sqrt),
        "artin-schreier-f4" => quadratic_torsor(f2, &f2.one(), QuadraticVariant::ArtinSchreier),
        "galois-q-sqrt2" => Ok(galois_torsor(&quadratic_galois_spec(q, &q.from_i64(2)))?.torsor),
        "galois-f2-frobenius" => Ok(galois_torsor(&frobenius_f4_spec())?.torsor),
        "quaternion" => cyclic_torsor(&quaternion_spec()),
        "cyclic-f7-n3" => {
            let f7 = FieldSpec::Prime(7);
            cyclic_torsor(&CyclicSpec {
                field: f7,
                n: 3,
                q: f7.from_i64(2),
                alpha: f7.one(),
                beta: f7.one(),
            })
        }
        _ => Err(Error::Parse {
            text: name.to_string(),
            reason: "unknown registry entry".into(),
        }),
    }
}

/// `F2[T]/(T² + T + 1)` with Frobenius `t ↦ t + 1`.
pub fn frobenius_f4_spec() -> GaloisSpec {
    let f = FieldSpec::Prime(2);
    GaloisSpec {
        field: f,
        poly: vec![f.one(), f.one(), f.one()],
        action: vec![vec![f.zero(), f.one()], vec![f.one(), f.one()]],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_sqrt2_law_is_half_cube() {
        let q = FieldSpec::Rationals;
        let t = quadratic_torsor(q, &q.from_i64(2), QuadraticVariant::Sqrt).unwrap();
        let x = Tensor::basis(q, &[2], 1);
        let expect = x.outer(&x).outer(&x).scaled(&q.ratio(1, 2).unwrap());
        assert_eq!(t.mu().column(1), &expect);
    }

    #[test]
    fn quadratic_parameter_errors() {
        let q = FieldSpec::Rationals;
        assert_eq!(
            quadratic_torsor(q, &q.zero(), QuadraticVariant::Sqrt).unwrap_err(),
            Error::DNotInvertible
        );
        assert!(matches!(
            quadratic_torsor(q, &q.one(), QuadraticVariant::ArtinSchreier),
            Err(Error::BadCharacteristic(_))
        ));
    }

    #[test]
    fn non_faithful_action_is_rejected() {
        let q = FieldSpec::Rationals;
        let mut spec = quadratic_galois_spec(q, &q.from_i64(2));
        spec.action[1] = spec.action[0].clone();
        assert!(matches!(galois_torsor(&spec), Err(Error::NotGaloisAction(_))));
    }

    #[test]
    fn repeated_root_is_not_separable() {
        let q = FieldSpec::Rationals;
        let spec = GaloisSpec {
            field: q,
            poly: vec![q.one(), q.from_i64(2), q.one()],
            action: vec![vec![q.zero(), q.one()], vec![q.from_i64(-2), -q.one()]],
        };
        assert_eq!(galois_torsor(&spec).unwrap_err(), Error::NotSeparable);
    }

    #[test]
    fn q_must_be_primitive() {
        let q = FieldSpec::Rationals;
        let spec = CyclicSpec {
            field: q,
            n: 3,
            q: q.one(),
            alpha: q.one(),
            beta: q.one(),
        };
        assert!(matches!(cyclic_torsor(&spec), Err(Error::QNotPrimitive(_))));
        let zero = CyclicSpec { alpha: q.zero(), ..quaternion_spec() };
        assert_eq!(cyclic_torsor(&zero).unwrap_err(), Error::AlphaBetaZero);
    }

    #[test]
    fn quaternion_labels_and_law() {
        let t = cyclic_torsor(&quaternion_spec()).unwrap();
        assert_eq!(t.labels(), ["1", "y", "x", "xy"]);
        let f = t.field();
        let x = Tensor::basis(f, &[4], 2);
        assert_eq!(t.mu().column(2), &x.outer(&x).outer(&x).scaled(&f.from_i64(-1)));
    }
}
