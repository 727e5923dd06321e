//! The left and right Hopf algebras of a torsor, their coactions, and the
//! Hopf-Galois canonical maps.

use crate::algebra::{check_morphism, Algebra, Multiplication, TensorAlgebra};
use crate::error::{Error, Result};
use crate::hopf::{Hopf, HopfIso};
use crate::linalg::{corestrict, invert_map, kernel_basis, SubspaceBasis};
use crate::report::{compare_maps, Check, Report};
use crate::tensor::{LinearMap, Tensor};
use crate::torsor::{multiply_legs, VerifiedTorsor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// `H_l(T) ⊂ T⊗T^op` or `H_r(T) ⊂ T^op⊗T`, with its Hopf structure in the
/// coordinates of the canonical carrier basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubHopf {
    side: Side,
    carrier: SubspaceBasis,
    hopf: Hopf,
}

fn corestrict_into(v: &Tensor, groups: &[(usize, &SubspaceBasis)], what: &str) -> Result<Tensor> {
    corestrict(v, groups).map_err(|e| match e {
        Error::CorestrictionFailure(_) => Error::CorestrictionFailure(what.to_string()),
        other => other,
    })
}

/// The ambient algebra containing the carrier.
fn ambient_algebra(t: &VerifiedTorsor, side: Side) -> TensorAlgebra {
    let a = t.algebra().clone();
    let op = a.opposite();
    match side {
        Side::Left => TensorAlgebra::new(vec![a, op]),
        Side::Right => TensorAlgebra::new(vec![op, a]),
    }
    .expect("one field")
}

/// The linear map whose kernel is the carrier.
pub fn constraint_map(t: &VerifiedTorsor, side: Side) -> Result<LinearMap> {
    let n = t.dim();
    let f = t.field();
    let mu_op = t.mu_op();
    LinearMap::from_fn(f, &[n, n], &[n; 4], |j| {
        let (a, b) = (t.algebra().basis(j / n), t.algebra().basis(j % n));
        match side {
            Side::Left => {
                let lhs = t.theta().apply_on_legs(&t.mu().apply(&a)?.outer(&b), 2)?;
                lhs.minus(&a.outer(&mu_op.apply(&b)?))
            }
            Side::Right => {
                let lhs = t.theta().apply_on_legs(&a.outer(&t.mu().apply(&b)?), 1)?;
                lhs.minus(&mu_op.apply(&a)?.outer(&b))
            }
        }
    })
}

impl SubHopf {
    pub fn compute(t: &VerifiedTorsor, side: Side) -> Result<SubHopf> {
        let n = t.dim();
        let f = t.field();
        let carrier = kernel_basis(&constraint_map(t, side)?);
        let k = carrier.dim();
        if k != n {
            return Err(Error::DimensionMismatch(format!(
                "{} Hopf algebra has dimension {k}, torsor has dimension {n}",
                side.name()
            )));
        }
        let basis = carrier.vectors();
        let ambient = ambient_algebra(t, side);
        let into = |v: &Tensor, what: &str| corestrict_into(v, &[(0, &carrier)], what);

        let mul = LinearMap::from_fn(f, &[k, k], &[k], |j| {
            into(&ambient.product(&basis[j / k], &basis[j % k])?, "product leaves the carrier")
        })?;
        let unit = into(&ambient.one(), "1⊗1 is not in the carrier")?;
        let labels = (0..k).map(|i| format!("h{i}")).collect();
        let algebra = Algebra::new(f, labels, mul, unit)?;

        let mu_leg = match side {
            Side::Left => 0,
            Side::Right => 1,
        };
        let comul = LinearMap::from_fn(f, &[k], &[k, k], |i| {
            let expanded = t.mu().apply_on_legs(&basis[i], mu_leg)?;
            corestrict_into(&expanded, &[(0, &carrier), (2, &carrier)], "coproduct leaves carrier⊗carrier")
        })?;
        let counit = LinearMap::from_fn(f, &[k], &[], |i| {
            let m = multiply_legs(t.algebra(), &basis[i])?;
            let c = t.algebra().scalar_coefficient(&m).ok_or_else(|| {
                Error::CorestrictionFailure("multiplying a carrier element does not give a scalar".into())
            })?;
            Ok(Tensor::scalar(c))
        })?;
        let antipode = LinearMap::from_fn(f, &[k], &[k], |i| {
            let leg = match side {
                Side::Left => 0,
                Side::Right => 1,
            };
            let v = t.theta().apply_on_legs(&basis[i], leg)?.permute_legs(&[1, 0])?;
            into(&v, "antipode leaves the carrier")
        })?;
        let hopf = Hopf::new(algebra, comul, counit, antipode)?;
        let report = hopf.verify();
        if !report.passed() {
            return Err(Error::HopfInvalid(report.failure_summary()));
        }
        Ok(SubHopf { side, carrier, hopf })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn carrier(&self) -> &SubspaceBasis {
        &self.carrier
    }

    pub fn hopf(&self) -> &Hopf {
        &self.hopf
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn inclusion(&self) -> LinearMap {
        self.carrier.inclusion()
    }

    /// Expresses `f` applied to each carrier basis vector in the carrier
    /// coordinates of `target`.
    pub fn map_into<F>(&self, target: &SubspaceBasis, f: F) -> Result<LinearMap>
    where
        F: Fn(&Tensor) -> Result<Tensor> + Sync + Send,
    {
        let k = self.dim();
        let basis = self.carrier.vectors();
        LinearMap::from_fn(self.hopf.field(), &[k], &[target.dim()], |i| {
            corestrict_into(&f(&basis[i])?, &[(0, target)], "image leaves the target carrier")
        })
    }
}

/// `ρ_l: T → H_l⊗T`, the corestriction of `μ`.
pub fn left_coaction(t: &VerifiedTorsor, hl: &SubHopf) -> Result<LinearMap> {
    let n = t.dim();
    LinearMap::from_fn(t.field(), &[n], &[hl.dim(), n], |x| {
        corestrict(t.mu().column(x), &[(0, hl.carrier())])
            .map_err(|_| Error::MembershipFailure(format!("μ({}) is not in H_l⊗T", t.labels()[x])))
    })
}

/// `ρ_r: T → T⊗H_r`, the corestriction of `μ`.
pub fn right_coaction(t: &VerifiedTorsor, hr: &SubHopf) -> Result<LinearMap> {
    let n = t.dim();
    LinearMap::from_fn(t.field(), &[n], &[n, hr.dim()], |x| {
        corestrict(t.mu().column(x), &[(1, hr.carrier())])
            .map_err(|_| Error::MembershipFailure(format!("μ({}) is not in T⊗H_r", t.labels()[x])))
    })
}

fn labels_for(t: &VerifiedTorsor, h: &SubHopf) -> (Vec<String>, Vec<String>) {
    (t.labels().to_vec(), h.hopf().labels().to_vec())
}

/// Comodule-algebra laws for both coactions and their commutation.
pub fn verify_coactions(t: &VerifiedTorsor, hl: &SubHopf, hr: &SubHopf) -> Report {
    let mut report = Report::new("coactions of the side Hopf algebras");
    let n = t.dim();
    let f = t.field();
    let id = LinearMap::identity(f, &[n]);
    let (lt, ll) = labels_for(t, hl);
    let (_, lr) = labels_for(t, hr);
    let src = vec![lt.clone()];

    let rho_l = left_coaction(t, hl);
    let rho_r = right_coaction(t, hr);
    report.push(match &rho_l {
        Ok(_) => Check::pass("Im μ ⊂ H_l⊗T"),
        Err(e) => Check::fail("Im μ ⊂ H_l⊗T", e.to_string()),
    });
    report.push(match &rho_r {
        Ok(_) => Check::pass("Im μ ⊂ T⊗H_r"),
        Err(e) => Check::fail("Im μ ⊂ T⊗H_r", e.to_string()),
    });
    let (Ok(rho_l), Ok(rho_r)) = (rho_l, rho_r) else {
        return report;
    };
    let guard = |name: &str, r: Result<Check>| r.unwrap_or_else(|e| Check::fail(name, e.to_string()));
    let hlh = hl.hopf();
    let hrh = hr.hopf();

    report.push(guard("(ε⊗Id)∘ρ_l = Id", (|| {
        let lhs = hlh.counit().tensor(&id)?.compose(&rho_l)?;
        Ok(compare_maps("(ε⊗Id)∘ρ_l = Id", &lhs, &id, &src, &src))
    })()));
    report.push(guard("(Δ⊗Id)∘ρ_l = (Id⊗ρ_l)∘ρ_l", (|| {
        let lhs = hlh.comul().tensor(&id)?.compose(&rho_l)?;
        let rhs = LinearMap::identity(f, &[hl.dim()]).tensor(&rho_l)?.compose(&rho_l)?;
        let tl = vec![ll.clone(), ll.clone(), lt.clone()];
        Ok(compare_maps("(Δ⊗Id)∘ρ_l = (Id⊗ρ_l)∘ρ_l", &lhs, &rhs, &src, &tl))
    })()));
    report.push(
        TensorAlgebra::new(vec![hlh.algebra().clone(), t.algebra().clone()])
            .map(|ta| check_morphism("ρ_l is an algebra morphism", &rho_l, t.algebra(), &ta))
            .unwrap_or_else(|e| Check::fail("ρ_l is an algebra morphism", e.to_string())),
    );
    report.push(guard("(Id⊗ε)∘ρ_r = Id", (|| {
        let lhs = id.tensor(hrh.counit())?.compose(&rho_r)?;
        Ok(compare_maps("(Id⊗ε)∘ρ_r = Id", &lhs, &id, &src, &src))
    })()));
    report.push(guard("(Id⊗Δ)∘ρ_r = (ρ_r⊗Id)∘ρ_r", (|| {
        let lhs = id.tensor(hrh.comul())?.compose(&rho_r)?;
        let rhs = rho_r.tensor(&LinearMap::identity(f, &[hr.dim()]))?.compose(&rho_r)?;
        let tl = vec![lt.clone(), lr.clone(), lr.clone()];
        Ok(compare_maps("(Id⊗Δ)∘ρ_r = (ρ_r⊗Id)∘ρ_r", &lhs, &rhs, &src, &tl))
    })()));
    report.push(
        TensorAlgebra::new(vec![t.algebra().clone(), hrh.algebra().clone()])
            .map(|ta| check_morphism("ρ_r is an algebra morphism", &rho_r, t.algebra(), &ta))
            .unwrap_or_else(|e| Check::fail("ρ_r is an algebra morphism", e.to_string())),
    );
    report.push(guard("(Id⊗ρ_r)∘ρ_l = (ρ_l⊗Id)∘ρ_r", (|| {
        let lhs = LinearMap::identity(f, &[hl.dim()]).tensor(&rho_r)?.compose(&rho_l)?;
        let rhs = rho_l.tensor(&LinearMap::identity(f, &[hr.dim()]))?.compose(&rho_r)?;
        let tl = vec![ll.clone(), lt.clone(), lr.clone()];
        Ok(compare_maps("(Id⊗ρ_r)∘ρ_l = (ρ_l⊗Id)∘ρ_r", &lhs, &rhs, &src, &tl))
    })()));
    report
}

/// The canonical map of one side, its inverse, and the Hopf-Galois report.
#[derive(Clone, Debug)]
pub struct GaloisData {
    pub report: Report,
    pub can: LinearMap,
    pub can_inverse: Option<LinearMap>,
    pub coinvariant_dim: usize,
}

/// Left: `can = (Id⊗m)∘(ρ_l⊗Id): T⊗T → H_l⊗T`.
/// Right: `can = (m⊗Id)∘(Id⊗ρ_r): T⊗T → T⊗H_r`.
pub fn galois_can(t: &VerifiedTorsor, h: &SubHopf) -> Result<GaloisData> {
    let n = t.dim();
    let k = h.dim();
    let f = t.field();
    let m = t.algebra().mul();
    let (can, coinv_map) = match h.side() {
        Side::Left => {
            let rho = left_coaction(t, h)?;
            let can = LinearMap::from_fn(f, &[n, n], &[k, n], |j| {
                let v = rho.column(j / n).outer(&t.algebra().basis(j % n));
                m.apply_on_legs(&v, 1)
            })?;
            let one = h.hopf().unit();
            let trivial = LinearMap::from_fn(f, &[n], &[k, n], |x| Ok(one.outer(&t.algebra().basis(x))))?;
            (can, rho.minus(&trivial)?)
        }
        Side::Right => {
            let rho = right_coaction(t, h)?;
            let can = LinearMap::from_fn(f, &[n, n], &[n, k], |j| {
                let v = t.algebra().basis(j / n).outer(rho.column(j % n));
                m.apply_on_legs(&v, 0)
            })?;
            let one = h.hopf().unit();
            let trivial = LinearMap::from_fn(f, &[n], &[n, k], |x| Ok(t.algebra().basis(x).outer(one)))?;
            (can, rho.minus(&trivial)?)
        }
    };
    let mut report = Report::new(format!("{} Hopf-Galois structure", h.side().name()));
    let can_inverse = match invert_map(&can) {
        Ok(inv) => {
            report.push(Check::pass("canonical map is invertible"));
            Some(inv)
        }
        Err(e) => {
            report.push(Check::fail("canonical map is invertible", e.to_string()));
            None
        }
    };
    let coinv = kernel_basis(&coinv_map);
    report.push(Check::from_bool(
        "coinvariants are the scalars",
        coinv.dim() == 1 && coinv.contains(t.algebra().unit()),
        format!("coinvariant subspace has dimension {}", coinv.dim()),
    ));
    report.push(Check::from_bool(
        "dim T = dim of the side Hopf algebra",
        n == k,
        format!("dim T = {n}, dim H = {k}"),
    ));
    Ok(GaloisData {
        report,
        can,
        can_inverse,
        coinvariant_dim: coinv.dim(),
    })
}

/// `(θ⊗Id): H_l(T) → H_r(T^op)` and `(Id⊗θ): H_r(T) → H_l(T^op)`,
/// certified as Hopf isomorphisms.
pub fn opp_side_isos(t: &VerifiedTorsor) -> Result<(HopfIso, HopfIso)> {
    let op = t.opposite();
    let hl = SubHopf::compute(t, Side::Left)?;
    let hr = SubHopf::compute(t, Side::Right)?;
    let hl_op = SubHopf::compute(&op, Side::Left)?;
    let hr_op = SubHopf::compute(&op, Side::Right)?;
    let chi = hl.map_into(hr_op.carrier(), |v| t.theta().apply_on_legs(v, 0))?;
    let psi = hr.map_into(hl_op.carrier(), |v| t.theta().apply_on_legs(v, 1))?;
    Ok((
        HopfIso::new(hl.hopf().clone(), hr_op.hopf().clone(), chi)?,
        HopfIso::new(hr.hopf().clone(), hl_op.hopf().clone(), psi)?,
    ))
}

/// Both side Hopf algebras at once.
pub fn side_pair(t: &VerifiedTorsor) -> Result<(SubHopf, SubHopf)> {
    Ok((SubHopf::compute(t, Side::Left)?, SubHopf::compute(t, Side::Right)?))
}
