//! Cotorsors `(C, Δ, ε, ν, θ)`, duality with torsors, and the cotorsor
//! attached to a Hopf algebra with a Drinfeld twist.

use crate::algebra::{Algebra, Multiplication};
use crate::error::{Error, Result};
use crate::hopf::{Hopf, HopfIso, TwistData};
use crate::linalg::{corestrict, invert_map};
use crate::par::{self, Task};
use crate::report::{compare_maps, repeat_labels, Check, Report};
use crate::scalar::FieldSpec;
use crate::side::{side_pair, SubHopf};
use crate::tensor::{check_dim, multi_index, LinearMap, Tensor};
use crate::torsor::Torsor;

pub const CHECK_NU_COALGEBRA: &str = "ν is a coalgebra morphism C⊗C^cop⊗C → C";
pub const CHECK_THETA_COALGEBRA: &str = "θ is a coalgebra automorphism";
pub const CHECK_LEFT_COUNIT: &str = "ν∘(Δ⊗Id) = ε⊗Id";
pub const CHECK_RIGHT_COUNIT: &str = "ν∘(Id⊗Δ) = Id⊗ε";
pub const CHECK_ASSOC: &str = "ν∘(ν⊗Id⊗Id) = ν∘(Id⊗Id⊗ν)";
pub const CHECK_THETA_AXIOM: &str = "ν∘(ν⊗Id⊗Id)∘θ⁽³⁾ = ν∘(Id⊗ν^op⊗Id)";
pub const CHECK_EQUIVARIANCE: &str = "ν∘(θ⊗θ⊗θ) = θ∘ν";

/// Toggles a trailing `*`, so that dualizing twice restores labels.
fn dual_label(l: &str) -> String {
    match l.strip_suffix('*') {
        Some(s) => s.to_string(),
        None => format!("{l}*"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coalgebra {
    field: FieldSpec,
    labels: Vec<String>,
    comul: LinearMap,
    counit: LinearMap,
}

impl Coalgebra {
    pub fn new(field: FieldSpec, labels: Vec<String>, comul: LinearMap, counit: LinearMap) -> Result<Self> {
        let n = labels.len();
        check_dim(n)?;
        if comul.source() != [n] || comul.target() != [n, n] {
            return Err(Error::Shape(format!(
                "coproduct of shape {:?}->{:?} on {n} basis elements",
                comul.source(),
                comul.target()
            )));
        }
        if counit.source() != [n] || !counit.target().is_empty() {
            return Err(Error::Shape(format!(
                "counit of shape {:?}->{:?}",
                counit.source(),
                counit.target()
            )));
        }
        if comul.field() != field || counit.field() != field {
            return Err(Error::ModulusMismatch(field.name(), comul.field().name()));
        }
        Ok(Coalgebra {
            field,
            labels,
            comul,
            counit,
        })
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

    pub fn comul(&self) -> &LinearMap {
        &self.comul
    }

    pub fn counit(&self) -> &LinearMap {
        &self.counit
    }

    pub fn verify(&self) -> Report {
        let n = self.dim();
        let id = LinearMap::identity(self.field, &[n]);
        let l1 = repeat_labels(&self.labels, 1);
        let mut report = Report::new(format!("coalgebra of dimension {n} over {}", self.field));
        let guard = |name: &str, r: Result<Check>| r.unwrap_or_else(|e| Check::fail(name, e.to_string()));
        let name = "coassociativity (Δ⊗Id)∘Δ = (Id⊗Δ)∘Δ";
        report.push(guard(name, (|| {
            let lhs = self.comul.tensor(&id)?.compose(&self.comul)?;
            let rhs = id.tensor(&self.comul)?.compose(&self.comul)?;
            Ok(compare_maps(name, &lhs, &rhs, &l1, &repeat_labels(&self.labels, 3)))
        })()));
        let name = "left counit (ε⊗Id)∘Δ = Id";
        report.push(guard(name, (|| {
            let lhs = self.counit.tensor(&id)?.compose(&self.comul)?;
            Ok(compare_maps(name, &lhs, &id, &l1, &l1))
        })()));
        let name = "right counit (Id⊗ε)∘Δ = Id";
        report.push(guard(name, (|| {
            let lhs = id.tensor(&self.counit)?.compose(&self.comul)?;
            Ok(compare_maps(name, &lhs, &id, &l1, &l1))
        })()));
        report
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cotorsor {
    coalgebra: Coalgebra,
    nu: LinearMap,
    theta: LinearMap,
}

impl Cotorsor {
    pub fn new(coalgebra: Coalgebra, nu: LinearMap, theta: LinearMap) -> Result<Self> {
        let n = coalgebra.dim();
        if nu.source() != [n, n, n] || nu.target() != [n] {
            return Err(Error::Shape(format!("ν of shape {:?}->{:?}", nu.source(), nu.target())));
        }
        if theta.source() != [n] || theta.target() != [n] {
            return Err(Error::Shape(format!(
                "θ of shape {:?}->{:?}",
                theta.source(),
                theta.target()
            )));
        }
        Ok(Cotorsor { coalgebra, nu, theta })
    }

    pub fn coalgebra(&self) -> &Coalgebra {
        &self.coalgebra
    }

    pub fn dim(&self) -> usize {
        self.coalgebra.dim()
    }

    pub fn field(&self) -> FieldSpec {
        self.coalgebra.field
    }

    pub fn labels(&self) -> &[String] {
        &self.coalgebra.labels
    }

    pub fn nu(&self) -> &LinearMap {
        &self.nu
    }

    pub fn theta(&self) -> &LinearMap {
        &self.theta
    }

    /// `ν^op = ν∘τ_(13)`.
    pub fn nu_op(&self) -> LinearMap {
        self.nu.permute_source(&[2, 1, 0]).expect("three legs")
    }

    /// `ν(a⊗b⊗c)`, expanded over the nonzero coordinates of each factor.
    fn nu3(&self, a: &Tensor, b: &Tensor, c: &Tensor) -> Tensor {
        let n = self.dim();
        let mut out = Tensor::zeros(self.field(), &[n]);
        for (i, x) in a.nonzeros() {
            for (j, y) in b.nonzeros() {
                let xy = x * y;
                for (k, z) in c.nonzeros() {
                    let col = self.nu.column((i * n + j) * n + k);
                    out.add_scaled(col, &(&xy * z)).expect("same shape");
                }
            }
        }
        out
    }

    /// `(ν⊗ν)∘Δ_{C⊗C^cop⊗C}` on a basis triple: the coproduct of the middle
    /// factor is flipped and the halves are interleaved.
    fn nu_pair_on_triple_comul(&self, x: usize, y: usize, z: usize) -> Result<Tensor> {
        let n = self.dim();
        let f = self.field();
        let d = &self.coalgebra.comul;
        let e = |i: usize| Tensor::basis(f, &[n], i);
        let mut out = Tensor::zeros(f, &[n, n]);
        for (ax, cx) in d.column(x).nonzeros() {
            for (ay, cy) in d.column(y).nonzeros() {
                let cxy = cx * cy;
                for (az, cz) in d.column(z).nonzeros() {
                    let (x1, x2, y1, y2, z1, z2) = (ax / n, ax % n, ay / n, ay % n, az / n, az % n);
                    let left = self.nu3(&e(x1), &e(y2), &e(z1));
                    let right = self.nu3(&e(x2), &e(y1), &e(z2));
                    out.add_scaled(&left.outer(&right), &(&cxy * cz))?;
                }
            }
        }
        Ok(out)
    }

    /// A map `C^{⊗5} → C` built from its values on basis 5-tuples.
    fn on_five<F>(&self, f: F) -> Result<LinearMap>
    where
        F: Fn([Tensor; 5]) -> Tensor + Sync + Send,
    {
        let n = self.dim();
        let dims = [n; 5];
        let field = self.field();
        LinearMap::from_fn(field, &dims, &[n], |j| {
            let idx = multi_index(&dims, j);
            Ok(f(std::array::from_fn(|k| Tensor::basis(field, &[n], idx[k]))))
        })
    }

    pub fn verify(&self) -> Report {
        let n = self.dim();
        let f = self.field();
        let c = &self.coalgebra;
        let id = LinearMap::identity(f, &[n]);
        let l1 = repeat_labels(self.labels(), 1);
        let l2 = repeat_labels(self.labels(), 2);
        let l3 = repeat_labels(self.labels(), 3);
        let l5 = repeat_labels(self.labels(), 5);
        let guard = |name: &'static str, r: Result<Check>| r.unwrap_or_else(|e| Check::fail(name, e.to_string()));
        let nu = &self.nu;

        let tasks: Vec<Task<'_, Check>> = vec![
            Box::new(|| {
                guard(CHECK_NU_COALGEBRA, (|| {
                    let lhs = LinearMap::from_fn(f, &[n, n, n], &[n, n], |j| {
                        self.nu_pair_on_triple_comul(j / (n * n), (j / n) % n, j % n)
                    })?;
                    let rhs = c.comul.compose(nu)?;
                    let first = compare_maps(CHECK_NU_COALGEBRA, &lhs, &rhs, &l3, &l2);
                    if !first.passed() {
                        return Ok(first);
                    }
                    let eps3 = c.counit.tensor(&c.counit)?.tensor(&c.counit)?;
                    Ok(compare_maps(CHECK_NU_COALGEBRA, &c.counit.compose(nu)?, &eps3, &l3, &[]))
                })())
            }),
            Box::new(|| {
                guard(CHECK_THETA_COALGEBRA, (|| {
                    let t = &self.theta;
                    let lhs = t.tensor(t)?.compose(&c.comul)?;
                    let rhs = c.comul.compose(t)?;
                    let first = compare_maps(CHECK_THETA_COALGEBRA, &lhs, &rhs, &l1, &l2);
                    if !first.passed() {
                        return Ok(first);
                    }
                    let second = compare_maps(CHECK_THETA_COALGEBRA, &c.counit.compose(t)?, &c.counit, &l1, &[]);
                    if !second.passed() {
                        return Ok(second);
                    }
                    Ok(match invert_map(t) {
                        Ok(_) => Check::pass(CHECK_THETA_COALGEBRA),
                        Err(e) => Check::fail(CHECK_THETA_COALGEBRA, e.to_string()),
                    })
                })())
            }),
            Box::new(|| {
                guard(CHECK_LEFT_COUNIT, (|| {
                    let lhs = nu.compose(&c.comul.tensor(&id)?)?;
                    Ok(compare_maps(CHECK_LEFT_COUNIT, &lhs, &c.counit.tensor(&id)?, &l2, &l1))
                })())
            }),
            Box::new(|| {
                guard(CHECK_RIGHT_COUNIT, (|| {
                    let lhs = nu.compose(&id.tensor(&c.comul)?)?;
                    Ok(compare_maps(CHECK_RIGHT_COUNIT, &lhs, &id.tensor(&c.counit)?, &l2, &l1))
                })())
            }),
            Box::new(|| {
                guard(CHECK_ASSOC, (|| {
                    let lhs = self.on_five(|[a, b, c, d, e]| self.nu3(&self.nu3(&a, &b, &c), &d, &e))?;
                    let rhs = self.on_five(|[a, b, c, d, e]| self.nu3(&a, &b, &self.nu3(&c, &d, &e)))?;
                    Ok(compare_maps(CHECK_ASSOC, &lhs, &rhs, &l5, &l1))
                })())
            }),
            Box::new(|| {
                guard(CHECK_THETA_AXIOM, (|| {
                    // ν^op(b⊗c⊗d) = ν(d⊗c⊗b)
                    let theta = &self.theta;
                    let lhs = self.on_five(|[a, b, c, d, e]| {
                        let tc = theta.column(c.nonzeros().next().expect("basis vector").0);
                        self.nu3(&self.nu3(&a, &b, tc), &d, &e)
                    })?;
                    let rhs = self.on_five(|[a, b, c, d, e]| self.nu3(&a, &self.nu3(&d, &c, &b), &e))?;
                    Ok(compare_maps(CHECK_THETA_AXIOM, &lhs, &rhs, &l5, &l1))
                })())
            }),
            Box::new(|| {
                guard(CHECK_EQUIVARIANCE, (|| {
                    let t = &self.theta;
                    let lhs = nu.compose(&t.tensor(t)?.tensor(t)?)?;
                    let rhs = t.compose(nu)?;
                    Ok(compare_maps(CHECK_EQUIVARIANCE, &lhs, &rhs, &l3, &l1))
                })())
            }),
        ];
        let mut report = Report::new(format!("cotorsor of dimension {n} over {f}"));
        report.premise(c.verify());
        for check in par::run_all(tasks) {
            report.push(check);
        }
        report.note("the last axiom is checked with θ applied after ν on the right-hand side");
        report
    }
}

/// `(T*, m*, η*, μ*, θ*)`.
pub fn dualize_torsor(t: &Torsor) -> Cotorsor {
    let a = t.algebra();
    let labels = a.labels().iter().map(|l| dual_label(l)).collect();
    let coalgebra = Coalgebra::new(a.field(), labels, a.mul().transpose(), a.unit_map().transpose())
        .expect("transposed shapes");
    Cotorsor::new(coalgebra, t.mu().transpose(), t.theta().transpose()).expect("transposed shapes")
}

/// `(C*, Δ*, ε*, ν*, θ*)`, with `θ` kept as supplied.
pub fn dualize_cotorsor(c: &Cotorsor) -> Result<Torsor> {
    let co = c.coalgebra();
    let labels = co.labels().iter().map(|l| dual_label(l)).collect();
    let unit = co.counit().transpose().column(0).clone();
    let algebra = Algebra::new(co.field(), labels, co.comul().transpose(), unit)?;
    Torsor::new(algebra, c.nu().transpose(), Some(c.theta().transpose()))
}

/// The cotorsor of a twisted Hopf algebra, and the side isomorphisms of
/// its dual torsor.
#[derive(Clone, Debug)]
pub struct Parmentier {
    pub cotorsor: Cotorsor,
    pub report: Report,
    /// `H_l(C*) → H*`.
    pub left_iso: Option<HopfIso>,
    /// `H_r(C*) → H_F*`.
    pub right_iso: Option<HopfIso>,
}

/// `Δ_C = Δ·F⁻¹`, `ε_C = ε`, `ν(x⊗y⊗z) = x u S(y) z`,
/// `θ(x) = S²(x) S(u) u⁻¹`.
pub fn parmentier_cotorsor(twist: &TwistData) -> Result<Parmentier> {
    let tr = twist.verify();
    if !tr.passed() {
        return Err(Error::TwistInvalid(tr.failure_summary()));
    }
    let h = twist.host();
    let (Some(f_inv), Some(u_inv)) = (twist.f_inv(), twist.u_inv()) else {
        return Err(Error::TwistInvalid("F or u_F is not invertible".into()));
    };
    let hf = twist.twisted()?;
    let (n, field) = (h.dim(), h.field());
    let a = h.algebra();
    let sq = h.square();
    let u = twist.u();
    let s = h.antipode();

    let comul = LinearMap::from_fn(field, &[n], &[n, n], |x| sq.product(h.comul().column(x), f_inv))?;
    let coalgebra = Coalgebra::new(field, h.labels().to_vec(), comul, h.counit().clone())?;
    let nu = LinearMap::from_fn(field, &[n, n, n], &[n], |j| {
        let (x, y, z) = (j / (n * n), (j / n) % n, j % n);
        let xu = a.product(&a.basis(x), u)?;
        a.product(&a.product(&xu, s.column(y))?, &a.basis(z))
    })?;
    let tail = a.product(&s.apply(u)?, u_inv)?;
    let s2 = h.antipode_squared();
    let theta = LinearMap::from_fn(field, &[n], &[n], |x| a.product(s2.column(x), &tail))?;
    let cotorsor = Cotorsor::new(coalgebra, nu, theta)?;

    let mut report = cotorsor.verify();
    report.subject = format!("twisted cotorsor of dimension {n} over {field}");
    report.premise(tr);
    if !report.passed() {
        return Err(Error::VerificationFailure(report.failure_summary()));
    }
    let dual = dualize_cotorsor(&cotorsor)?.verified()?;
    let (hl, hr) = side_pair(&dual)?;
    report.push(Check::from_bool(
        "dim H_l(C*) = dim H_r(C*) = dim H",
        hl.dim() == n && hr.dim() == n,
        format!("dimensions {} and {}", hl.dim(), hr.dim()),
    ));

    // x⊗y ↦ x u S(y) and x⊗y ↦ u S(x) y, as maps C⊗C → H.
    let q_l = LinearMap::from_fn(field, &[n, n], &[n], |j| {
        a.product(&a.product(&a.basis(j / n), u)?, s.column(j % n))
    })?;
    let q_r = LinearMap::from_fn(field, &[n, n], &[n], |j| {
        a.product(&a.product(u, s.column(j / n))?, &a.basis(j % n))
    })?;
    let left_iso = side_witness(&mut report, "H_l(C*) ≅ H*", &hl, &q_l, h);
    let right_iso = side_witness(&mut report, "H_r(C*) ≅ H_F*", &hr, &q_r, &hf);
    Ok(Parmentier {
        cotorsor,
        report,
        left_iso,
        right_iso,
    })
}

/// Transposes `q: C⊗C → H` into `H* → C*⊗C*`, corestricts onto the side
/// carrier, and certifies the inverse as a Hopf isomorphism onto `H*`.
fn side_witness(report: &mut Report, name: &str, side: &SubHopf, q: &LinearMap, h: &Hopf) -> Option<HopfIso> {
    let attempt = || -> Result<HopfIso> {
        let qt = q.transpose();
        let into = LinearMap::from_fn(h.field(), &[h.dim()], &[side.dim()], |i| {
            corestrict(qt.column(i), &[(0, side.carrier())])
        })?;
        let map = invert_map(&into)?;
        HopfIso::new(side.hopf().clone(), h.dual(), map)
    };
    match attempt() {
        Ok(iso) => {
            report.push(Check::pass(name));
            Some(iso)
        }
        Err(e) => {
            report.push(Check::fail(name, e.to_string()));
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{registry_torsor, trivial_torsor};
    use crate::hopf::{function_algebra, GroupTable};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn dual_of_trivial_torsor_is_a_cotorsor() {
        let t = registry_torsor("trivial-z2").unwrap();
        let c = dualize_torsor(&t);
        assert!(c.verify().passed(), "{}", c.verify());
        assert_eq!(dualize_cotorsor(&c).unwrap(), t.clone().into_inner());
    }

    #[test]
    fn quaternion_dual_keeps_dimension() {
        let t = registry_torsor("quaternion").unwrap();
        let c = dualize_torsor(&t);
        assert_eq!(c.dim(), 4);
        assert!(c.verify().passed());
    }

    #[test]
    fn counit_projection_is_not_a_cotorsor_law() {
        let t = registry_torsor("trivial-z2").unwrap();
        let c = dualize_torsor(&t);
        let e = c.coalgebra().counit().clone();
        let id = LinearMap::identity(q(), &[2]);
        let nu = e.tensor(&e).unwrap().tensor(&id).unwrap();
        let bad = Cotorsor::new(c.coalgebra().clone(), nu, id).unwrap();
        let r = bad.verify();
        assert!(!r.check(CHECK_RIGHT_COUNIT).unwrap().passed());
    }

    #[test]
    fn trivial_twist_gives_dual_of_trivial_torsor() {
        let h = function_algebra(q(), &GroupTable::cyclic(2));
        let p = parmentier_cotorsor(&TwistData::trivial(h.clone())).unwrap();
        assert!(p.report.passed(), "{}", p.report);
        let t = trivial_torsor(&h.dual()).unwrap();
        let d = dualize_torsor(&t);
        assert_eq!(p.cotorsor.nu(), d.nu());
        assert_eq!(p.cotorsor.theta(), d.theta());
        assert_eq!(p.cotorsor.coalgebra().comul(), d.coalgebra().comul());
    }

    #[test]
    fn bicharacter_twist_on_z2() {
        let g = GroupTable::cyclic(2);
        let tw = TwistData::bicharacter(q(), &g, |a, b| q().from_i64(if a * b == 1 { -1 } else { 1 })).unwrap();
        let p = parmentier_cotorsor(&tw).unwrap();
        assert!(p.report.passed(), "{}", p.report);
        assert!(p.left_iso.is_some() && p.right_iso.is_some());
    }
}
