//! Composition `T₁ ⊗_Φ T₂` of torsors along a Hopf isomorphism
//! `Φ: H_r(T₁) → H_l(T₂)`, the side isomorphisms it induces, and torsor
//! morphisms.

use crate::algebra::{check_morphism, Algebra, Multiplication, TensorAlgebra};
use crate::error::{Error, Result};
use crate::hopf::{check_hopf_morphism, HopfIso};
use crate::linalg::{corestrict, invert_map, kernel_basis, SubspaceBasis};
use crate::report::{compare_maps, repeat_labels, Check, Report};
use crate::side::{side_pair, Side, SubHopf};
use crate::tensor::{swap, LinearMap, Tensor};
use crate::torsor::{Torsor, VerifiedTorsor};

fn membership(what: impl Into<String>) -> impl FnOnce(Error) -> Error {
    let what = what.into();
    move |e| match e {
        Error::CorestrictionFailure(_) => Error::MembershipFailure(what),
        other => other,
    }
}

/// Replaces legs `leg, leg + 1` of `v`, which must lie in `from`, by their
/// image under `map`, embedded through `to`.
fn transport(v: &Tensor, leg: usize, from: &SubspaceBasis, map: &LinearMap, to: &LinearMap) -> Result<Tensor> {
    let c = corestrict(v, &[(leg, from)])?;
    to.apply_on_legs(&map.apply_on_legs(&c, leg)?, leg)
}

/// The torsor `T_Φ` together with everything it was built from.
#[derive(Clone, Debug)]
pub struct Composite {
    torsor: VerifiedTorsor,
    carrier: SubspaceBasis,
    t1: VerifiedTorsor,
    t2: VerifiedTorsor,
    hr1: SubHopf,
    hl2: SubHopf,
    phi: HopfIso,
}

impl Composite {
    pub fn torsor(&self) -> &VerifiedTorsor {
        &self.torsor
    }

    /// `T_Φ` as a subspace of `T₁⊗T₂`.
    pub fn carrier(&self) -> &SubspaceBasis {
        &self.carrier
    }

    pub fn factors(&self) -> (&VerifiedTorsor, &VerifiedTorsor) {
        (&self.t1, &self.t2)
    }

    pub fn phi(&self) -> &HopfIso {
        &self.phi
    }

    fn phi_hat(&self, v: &Tensor, leg: usize) -> Result<Tensor> {
        transport(v, leg, self.hr1.carrier(), self.phi.map(), &self.hl2.inclusion())
    }
}

/// The linear map whose kernel is `T_Φ`:
/// `x ↦ (Id⊗Φ⊗Id)(μ₁⊗Id)(x) − (Id⊗μ₂)(x)`.
fn constraint(t1: &VerifiedTorsor, t2: &VerifiedTorsor, hr1: &SubHopf, hl2: &SubHopf, phi: &HopfIso) -> Result<LinearMap> {
    let (n1, n2) = (t1.dim(), t2.dim());
    let incl = hl2.inclusion();
    LinearMap::from_fn(t1.field(), &[n1, n2], &[n1, n2, n2, n2], |j| {
        let (a, b) = (j / n2, j % n2);
        let eb = t2.algebra().basis(b);
        let lhs = transport(&t1.mu().column(a).outer(&eb), 1, hr1.carrier(), phi.map(), &incl)
            .map_err(membership("μ₁ leaves T₁⊗H_r(T₁)"))?;
        lhs.minus(&t1.algebra().basis(a).outer(t2.mu().column(b)))
    })
}

pub fn compose_torsors(t1: &VerifiedTorsor, t2: &VerifiedTorsor, phi: &HopfIso) -> Result<Composite> {
    if t1.field() != t2.field() {
        return Err(Error::ModulusMismatch(t1.field().name(), t2.field().name()));
    }
    let hr1 = SubHopf::compute(t1, Side::Right)?;
    let hl2 = SubHopf::compute(t2, Side::Left)?;
    if !phi.source().same_tables(hr1.hopf()) {
        return Err(Error::PhiNotIso("source is not H_r of the first torsor".into()));
    }
    if !phi.target().same_tables(hl2.hopf()) {
        return Err(Error::PhiNotIso("target is not H_l of the second torsor".into()));
    }
    let f = t1.field();
    let n1 = t1.dim();
    let carrier = kernel_basis(&constraint(t1, t2, &hr1, &hl2, phi)?);
    let k = carrier.dim();
    if k != n1 {
        return Err(Error::DimensionMismatch(format!(
            "T_Φ has dimension {k}, expected {n1} = dim T₁ · dim T₂ / dim H"
        )));
    }
    let basis = carrier.vectors();
    let ambient = TensorAlgebra::new(vec![t1.algebra().clone(), t2.algebra().clone()])?;
    let into = |v: &Tensor, what: &str| corestrict(v, &[(0, &carrier)]).map_err(membership(what));

    let mul = LinearMap::from_fn(f, &[k, k], &[k], |j| {
        into(&ambient.product(&basis[j / k], &basis[j % k])?, "T_Φ is not closed under m₁⊗m₂")
    })?;
    let unit = into(&ambient.one(), "1⊗1 is not in T_Φ")?;
    let labels = (0..k).map(|i| format!("t{i}")).collect();
    let algebra = Algebra::new(f, labels, mul, unit)?;

    let theta = LinearMap::from_fn(f, &[k], &[k], |i| {
        let v = t2.theta().apply_on_legs(&t1.theta().apply_on_legs(&basis[i], 0)?, 1)?;
        into(&v, "θ₁⊗θ₂ leaves T_Φ")
    })?;

    let comp = Composite {
        torsor: t1.clone(),
        carrier: carrier.clone(),
        t1: t1.clone(),
        t2: t2.clone(),
        hr1,
        hl2,
        phi: phi.clone(),
    };
    let mu2 = t1.mu_iter(2)?;
    let mu = LinearMap::from_fn(f, &[k], &[k, k, k], |i| {
        let w = mu2.apply_on_legs(&basis[i], 0)?;
        let w = comp.phi_hat(&w, 1)?.permute_legs(&swap(6, 2, 3))?;
        corestrict(&w, &[(0, &carrier), (2, &carrier), (4, &carrier)])
            .map_err(membership("Im μ_Φ is not in T_Φ⊗T_Φ^op⊗T_Φ"))
    })?;
    let torsor = Torsor::new(algebra, mu, Some(theta))?.verified()?;
    Ok(Composite { torsor, ..comp })
}

/// `H_l(T₁) ≅ H_l(T_Φ)` and `H_r(T₂) ≅ H_r(T_Φ)`, with the report checking
/// the closed-form inverses.
#[derive(Clone, Debug)]
pub struct SideIsos {
    pub left: HopfIso,
    pub right: HopfIso,
    pub left_phi: SubHopf,
    pub right_phi: SubHopf,
    pub report: Report,
}

pub fn induced_side_isos(c: &Composite) -> Result<SideIsos> {
    let (t1, t2) = (&c.t1, &c.t2);
    let hl1 = SubHopf::compute(t1, Side::Left)?;
    let hr2 = SubHopf::compute(t2, Side::Right)?;
    let (hl_phi, hr_phi) = side_pair(&c.torsor)?;
    let cc = &c.carrier;
    let c_incl = cc.inclusion();
    let pair = |w: &Tensor| corestrict(w, &[(0, cc), (2, cc)]);
    let unpair = |v: &Tensor| c_incl.apply_on_legs(&c_incl.apply_on_legs(v, 0)?, 2);

    // τ₃₄∘(Id⊗Φ⊗Id)∘(μ₁⊗Id) on H_l(T₁).
    let left_fwd = hl1.map_into(hl_phi.carrier(), |z| {
        let w = c.phi_hat(&t1.mu().apply_on_legs(z, 0)?, 1)?;
        pair(&w.permute_legs(&swap(4, 2, 3))?)
    })?;
    // (Id⊗ε_{H_l(T₂)}⊗Id)∘τ₃₄ on H_l(T_Φ).
    let left_inv = hl_phi.map_into(hl1.carrier(), |v| {
        let w = unpair(v)?.permute_legs(&swap(4, 2, 3))?;
        let w = corestrict(&w, &[(1, c.hl2.carrier())])?;
        c.hl2.hopf().counit().apply_on_legs(&w, 1)
    })?;
    // τ₁₂∘(Id⊗Φ⁻¹⊗Id)∘(Id⊗μ₂) on H_r(T₂).
    let hr1_incl = c.hr1.inclusion();
    let right_fwd = hr2.map_into(hr_phi.carrier(), |z| {
        let w = t2.mu().apply_on_legs(z, 1)?;
        let w = transport(&w, 1, c.hl2.carrier(), c.phi.inverse_map(), &hr1_incl)?;
        pair(&w.permute_legs(&swap(4, 0, 1))?)
    })?;
    // (Id⊗ε_{H_r(T₁)}⊗Id)∘τ₁₂ on H_r(T_Φ).
    let right_inv = hr_phi.map_into(hr2.carrier(), |v| {
        let w = unpair(v)?.permute_legs(&swap(4, 0, 1))?;
        let w = corestrict(&w, &[(1, c.hr1.carrier())])?;
        c.hr1.hopf().counit().apply_on_legs(&w, 1)
    })?;

    let mut report = Report::new("side isomorphisms of a composite torsor");
    for (name, fwd, inv, src, dst) in [
        ("H_l(T₁) → H_l(T_Φ)", &left_fwd, &left_inv, &hl1, &hl_phi),
        ("H_r(T₂) → H_r(T_Φ)", &right_fwd, &right_inv, &hr2, &hr_phi),
    ] {
        let ls = repeat_labels(src.hopf().labels(), 1);
        let ld = repeat_labels(dst.hopf().labels(), 1);
        let there = inv.compose(fwd)?;
        let back = fwd.compose(inv)?;
        report.push(compare_maps(
            &format!("inverse ∘ forward = Id for {name}"),
            &there,
            &LinearMap::identity(there.field(), &[src.dim()]),
            &ls,
            &ls,
        ));
        report.push(compare_maps(
            &format!("forward ∘ inverse = Id for {name}"),
            &back,
            &LinearMap::identity(back.field(), &[dst.dim()]),
            &ld,
            &ld,
        ));
    }
    if !report.passed() {
        return Err(Error::VerificationFailure(report.failure_summary()));
    }
    let left = HopfIso::new(hl1.hopf().clone(), hl_phi.hopf().clone(), left_fwd)?;
    let right = HopfIso::new(hr2.hopf().clone(), hr_phi.hopf().clone(), right_fwd)?;
    report.push(Check::pass("H_l(T₁) → H_l(T_Φ) is a Hopf isomorphism"));
    report.push(Check::pass("H_r(T₂) → H_r(T_Φ) is a Hopf isomorphism"));
    Ok(SideIsos {
        left,
        right,
        left_phi: hl_phi,
        right_phi: hr_phi,
        report,
    })
}

/// An algebra map `f: T₁ → T₂` compatible with `μ` and `θ`, with the Hopf
/// morphisms `f_l = (f⊗f)|_{H_l}` and `f_r = (f⊗f)|_{H_r}` it induces.
#[derive(Clone, Debug)]
pub struct TorsorMorphism {
    pub f: LinearMap,
    pub f_l: LinearMap,
    pub f_r: LinearMap,
    pub report: Report,
}

impl TorsorMorphism {
    pub fn is_iso(&self) -> bool {
        invert_map(&self.f).is_ok()
    }
}

pub fn torsor_morphism_check(f: &LinearMap, t1: &VerifiedTorsor, t2: &VerifiedTorsor) -> Result<TorsorMorphism> {
    let s1 = side_pair(t1)?;
    let s2 = side_pair(t2)?;
    morphism_between(f, t1, &s1, t2, &s2)
}

pub(crate) fn morphism_between(
    f: &LinearMap,
    t1: &VerifiedTorsor,
    (hl1, hr1): &(SubHopf, SubHopf),
    t2: &VerifiedTorsor,
    (hl2, hr2): &(SubHopf, SubHopf),
) -> Result<TorsorMorphism> {
    let (n1, n2) = (t1.dim(), t2.dim());
    if f.source() != [n1] || f.target() != [n2] {
        return Err(Error::Shape(format!(
            "morphism of shape {:?}->{:?} between torsors of dimensions {n1} and {n2}",
            f.source(),
            f.target()
        )));
    }
    let mut report = Report::new("torsor morphism");
    let l1 = repeat_labels(t1.labels(), 1);
    let l2 = repeat_labels(t2.labels(), 1);
    report.push(check_morphism("f is an algebra morphism", f, t1.algebra(), t2.algebra()));
    let ff = f.tensor(f)?;
    let fff = ff.tensor(f)?;
    report.push(compare_maps(
        "(f⊗f⊗f)∘μ₁ = μ₂∘f",
        &fff.compose(t1.mu())?,
        &t2.mu().compose(f)?,
        &l1,
        &repeat_labels(t2.labels(), 3),
    ));
    report.push(compare_maps(
        "f∘θ₁ = θ₂∘f",
        &f.compose(t1.theta())?,
        &t2.theta().compose(f)?,
        &l1,
        &l2,
    ));
    if !report.passed() {
        return Err(Error::NotEquivariant(report.failure_summary()));
    }
    let f_l = hl1
        .map_into(hl2.carrier(), |v| ff.apply(v))
        .map_err(membership("(f⊗f)(H_l(T₁)) ⊄ H_l(T₂)"))?;
    let f_r = hr1
        .map_into(hr2.carrier(), |v| ff.apply(v))
        .map_err(membership("(f⊗f)(H_r(T₁)) ⊄ H_r(T₂)"))?;
    let mut left = check_hopf_morphism(&f_l, hl1.hopf(), hl2.hopf());
    left.subject = "f_l: H_l(T₁) → H_l(T₂)".into();
    let mut right = check_hopf_morphism(&f_r, hr1.hopf(), hr2.hopf());
    right.subject = "f_r: H_r(T₁) → H_r(T₂)".into();
    report.premise(left);
    report.premise(right);
    if !report.passed() {
        return Err(Error::NotEquivariant(report.failure_summary()));
    }
    Ok(TorsorMorphism {
        f: f.clone(),
        f_l,
        f_r,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{quadratic_torsor, registry_torsor, trivial_torsor, QuadraticVariant};
    use crate::hopf::{group_algebra, GroupTable};
    use crate::scalar::FieldSpec;
    use crate::side::opp_side_isos;

    fn z2_trivial() -> VerifiedTorsor {
        trivial_torsor(&group_algebra(FieldSpec::Rationals, &GroupTable::cyclic(2))).unwrap()
    }

    /// `Φ = i_l⁻¹ ∘ i_r` for two copies of a trivial torsor, with
    /// `i_l = Id⊗ε` and `i_r = ε⊗Id` computed here on carrier bases.
    fn trivial_phi(t: &VerifiedTorsor) -> HopfIso {
        let (hl, hr) = side_pair(t).unwrap();
        let n = t.dim();
        let f = t.field();
        // ε of a group algebra is 1 on every basis element.
        let eps_leg = LinearMap::from_fn(f, &[n], &[], |_| Ok(Tensor::scalar(f.one()))).unwrap();
        let i_r = LinearMap::from_fn(f, &[hr.dim()], &[n], |i| eps_leg.apply_on_legs(&hr.carrier().vector(i), 0)).unwrap();
        let i_l = LinearMap::from_fn(f, &[hl.dim()], &[n], |i| eps_leg.apply_on_legs(&hl.carrier().vector(i), 1)).unwrap();
        let map = invert_map(&i_l).unwrap().compose(&i_r).unwrap();
        HopfIso::new(hr.hopf().clone(), hl.hopf().clone(), map).unwrap()
    }

    #[test]
    fn trivial_with_trivial_gives_two_dimensional_torsor() {
        let t = z2_trivial();
        let c = compose_torsors(&t, &t, &trivial_phi(&t)).unwrap();
        assert_eq!(c.torsor().dim(), 2);
        assert!(c.torsor().verify().passed());
        let isos = induced_side_isos(&c).unwrap();
        assert!(isos.report.passed(), "{}", isos.report);
        assert_eq!(isos.left.source().dim(), 2);
        assert_eq!(isos.right.target().dim(), 2);
    }

    #[test]
    fn quaternion_with_its_opposite_lands_on_the_left_carrier() {
        let t = registry_torsor("quaternion").unwrap();
        let op = t.opposite();
        let (_, psi) = opp_side_isos(&t).unwrap();
        let c = compose_torsors(&t, &op, &psi).unwrap();
        assert_eq!(c.torsor().dim(), 4);
        let hl = SubHopf::compute(&t, Side::Left).unwrap();
        assert!(c.carrier().same_subspace(hl.carrier()));
        let isos = induced_side_isos(&c).unwrap();
        assert_eq!(isos.left_phi.dim(), 4);
    }

    #[test]
    fn non_matching_phi_is_refused() {
        let t = z2_trivial();
        let q = registry_torsor("quaternion").unwrap();
        let (_, psi) = opp_side_isos(&q).unwrap();
        assert!(matches!(compose_torsors(&t, &t, &psi), Err(Error::PhiNotIso(_))));
    }

    #[test]
    fn identity_and_theta_are_torsor_morphisms() {
        let t = registry_torsor("quaternion").unwrap();
        let id = LinearMap::identity(t.field(), &[4]);
        let m = torsor_morphism_check(&id, &t, &t).unwrap();
        assert_eq!(m.f_l, LinearMap::identity(t.field(), &[4]));
        let th = t.theta().clone();
        assert!(torsor_morphism_check(&th, &t, &t).is_ok());
    }

    #[test]
    fn collapsing_map_is_not_equivariant() {
        let f = FieldSpec::Rationals;
        let t = quadratic_torsor(f, &f.from_i64(2), QuadraticVariant::Sqrt).unwrap();
        let one = t.algebra().unit().clone();
        let collapse = LinearMap::from_fn(f, &[2], &[2], |i| {
            Ok(if i == 0 { one.clone() } else { Tensor::zeros(f, &[2]) })
        })
        .unwrap();
        let all_one = LinearMap::from_fn(f, &[2], &[2], |_| Ok(one.clone())).unwrap();
        for g in [collapse, all_one] {
            assert!(matches!(torsor_morphism_check(&g, &t, &t), Err(Error::NotEquivariant(_))));
        }
    }
}
