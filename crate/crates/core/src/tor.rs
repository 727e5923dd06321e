//! Decorated torsors `(T, i_l, i_r)` and the group law on their classes.

use crate::compose::{compose_torsors, induced_side_isos, morphism_between, Composite, SideIsos};
use crate::error::{Error, Result};
use crate::gallery::trivial_torsor;
use crate::hopf::{Hopf, HopfIso};
use crate::linalg::invert_map;
use crate::report::{compare_maps, repeat_labels, Check, Report};
use crate::side::{opp_side_isos, side_pair, SubHopf};
use crate::tensor::LinearMap;
use crate::torsor::VerifiedTorsor;

/// A torsor with Hopf isomorphisms `i_l: H_l(T) → H` and `i_r: H_r(T) → H′`.
#[derive(Clone, Debug)]
pub struct DecoratedTorsor {
    torsor: VerifiedTorsor,
    left: SubHopf,
    right: SubHopf,
    i_l: HopfIso,
    i_r: HopfIso,
}

impl DecoratedTorsor {
    /// Certifies `i_l` and `i_r`, given in carrier coordinates, as Hopf
    /// isomorphisms onto `h` and `h_prime`.
    pub fn new(torsor: VerifiedTorsor, i_l: LinearMap, h: Hopf, i_r: LinearMap, h_prime: Hopf) -> Result<Self> {
        let (left, right) = side_pair(&torsor)?;
        let i_l = HopfIso::new(left.hopf().clone(), h, i_l)?;
        let i_r = HopfIso::new(right.hopf().clone(), h_prime, i_r)?;
        Ok(DecoratedTorsor {
            torsor,
            left,
            right,
            i_l,
            i_r,
        })
    }

    pub fn from_isos(torsor: VerifiedTorsor, i_l: HopfIso, i_r: HopfIso) -> Result<Self> {
        let (left, right) = side_pair(&torsor)?;
        if !i_l.source().same_tables(left.hopf()) {
            return Err(Error::PhiNotIso("i_l does not start at H_l(T)".into()));
        }
        if !i_r.source().same_tables(right.hopf()) {
            return Err(Error::PhiNotIso("i_r does not start at H_r(T)".into()));
        }
        Ok(DecoratedTorsor {
            torsor,
            left,
            right,
            i_l,
            i_r,
        })
    }

    pub fn torsor(&self) -> &VerifiedTorsor {
        &self.torsor
    }

    pub fn left(&self) -> &SubHopf {
        &self.left
    }

    pub fn right(&self) -> &SubHopf {
        &self.right
    }

    pub fn i_l(&self) -> &HopfIso {
        &self.i_l
    }

    pub fn i_r(&self) -> &HopfIso {
        &self.i_r
    }

    /// The trivial torsor of `h` with `i_l = Id⊗ε` and `i_r = ε⊗Id`.
    pub fn unit(h: &Hopf) -> Result<Self> {
        let t = trivial_torsor(h)?;
        let (hl, hr) = side_pair(&t)?;
        let (f, n) = (h.field(), h.dim());
        let i_l = LinearMap::from_fn(f, &[hl.dim()], &[n], |i| {
            h.counit().apply_on_legs(&hl.carrier().vector(i), 1)
        })?;
        let i_r = LinearMap::from_fn(f, &[hr.dim()], &[n], |i| {
            h.counit().apply_on_legs(&hr.carrier().vector(i), 0)
        })?;
        DecoratedTorsor::new(t, i_l, h.clone(), i_r, h.clone())
    }

    /// The opposite torsor with `i_l = i_r∘(Id⊗θ)⁻¹` and `i_r = i_l∘(θ⊗Id)⁻¹`.
    pub fn inverse(&self) -> Result<Self> {
        let (chi, psi) = opp_side_isos(&self.torsor)?;
        let i_l = self.i_r.after(&psi.inverse())?;
        let i_r = self.i_l.after(&chi.inverse())?;
        DecoratedTorsor::from_isos(self.torsor.opposite(), i_l, i_r)
    }

    /// `self ∗ other`, composing along `Φ = i_l(other)⁻¹ ∘ i_r(self)`.
    pub fn multiply(&self, other: &DecoratedTorsor) -> Result<Product> {
        if !self.i_r.target().same_tables(other.i_l.target()) {
            return Err(Error::ReferenceHopfMismatch(
                "the right reference of the first factor differs from the left reference of the second".into(),
            ));
        }
        let phi = other.i_l.inverse().after(&self.i_r)?;
        let composite = compose_torsors(&self.torsor, &other.torsor, &phi)?;
        let isos = induced_side_isos(&composite)?;
        let i_l = self.i_l.after(&isos.left.inverse())?;
        let i_r = other.i_r.after(&isos.right.inverse())?;
        let decorated = DecoratedTorsor::from_isos(composite.torsor().clone(), i_l, i_r)?;
        let mut report = isos.report.clone();
        report.subject = "product of decorated torsors".into();
        report.note(
            "Φ = i_l(T₂)⁻¹∘i_r(T₁); the variant i_l(T₂)⁻¹∘i_l(T₁) starts at H_l(T₁), not at H_r(T₁)",
        );
        Ok(Product {
            decorated,
            composite,
            isos,
            report,
        })
    }
}

/// A product together with the composite it was built from.
#[derive(Clone, Debug)]
pub struct Product {
    pub decorated: DecoratedTorsor,
    pub composite: Composite,
    pub isos: SideIsos,
    pub report: Report,
}

/// Checks that `f: T₁ → T₂` is a torsor isomorphism with
/// `i_l(T₁) = i_l(T₂)∘f_l` and `i_r(T₁) = i_r(T₂)∘f_r`.
pub fn verify_equivalence_witness(f: &LinearMap, d1: &DecoratedTorsor, d2: &DecoratedTorsor) -> Result<Report> {
    let reject = |detail: String| Error::WitnessRejected(detail);
    if !d1.i_l.target().same_tables(d2.i_l.target()) || !d1.i_r.target().same_tables(d2.i_r.target()) {
        return Err(Error::ReferenceHopfMismatch("decorations point at different Hopf algebras".into()));
    }
    let m = morphism_between(
        f,
        &d1.torsor,
        &(d1.left.clone(), d1.right.clone()),
        &d2.torsor,
        &(d2.left.clone(), d2.right.clone()),
    )
    .map_err(|e| reject(e.to_string()))?;
    let mut report = Report::new("equivalence of decorated torsors");
    report.premise(m.report);
    report.push(match invert_map(f) {
        Ok(_) => Check::pass("f is invertible"),
        Err(e) => Check::fail("f is invertible", e.to_string()),
    });
    let ll = repeat_labels(d1.left.hopf().labels(), 1);
    let lr = repeat_labels(d1.right.hopf().labels(), 1);
    let lh = repeat_labels(d1.i_l.target().labels(), 1);
    let lh2 = repeat_labels(d1.i_r.target().labels(), 1);
    report.push(compare_maps(
        "i_l(T₁) = i_l(T₂)∘f_l",
        d1.i_l.map(),
        &d2.i_l.map().compose(&m.f_l)?,
        &ll,
        &lh,
    ));
    report.push(compare_maps(
        "i_r(T₁) = i_r(T₂)∘f_r",
        d1.i_r.map(),
        &d2.i_r.map().compose(&m.f_r)?,
        &lr,
        &lh2,
    ));
    if report.passed() {
        Ok(report)
    } else {
        Err(reject(report.failure_summary()))
    }
}

/// For `unit(H) ∗ d`, the map `ε⊗Id: T_Φ ⊂ H⊗T → T`.
pub fn left_unit_witness(c: &Composite, h: &Hopf) -> Result<LinearMap> {
    counit_witness(c, h, 0)
}

/// For `d ∗ unit(H)`, the map `Id⊗ε: T_Φ ⊂ T⊗H → T`.
pub fn right_unit_witness(c: &Composite, h: &Hopf) -> Result<LinearMap> {
    counit_witness(c, h, 1)
}

fn counit_witness(c: &Composite, h: &Hopf, leg: usize) -> Result<LinearMap> {
    let (t1, t2) = c.factors();
    let (trivial, other) = if leg == 0 { (t1, t2) } else { (t2, t1) };
    if trivial.dim() != h.dim() || trivial.algebra() != h.algebra() {
        return Err(Error::WitnessRejected("the unit factor is not built on this Hopf algebra".into()));
    }
    let k = c.carrier().dim();
    LinearMap::from_fn(h.field(), &[k], &[other.dim()], |i| {
        h.counit().apply_on_legs(&c.carrier().vector(i), leg)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::registry_torsor;
    use crate::hopf::{group_algebra, GroupTable};
    use crate::scalar::FieldSpec;
    use crate::side::Side;

    fn h2() -> Hopf {
        group_algebra(FieldSpec::Rationals, &GroupTable::cyclic(2))
    }

    #[test]
    fn unit_times_unit_is_equivalent_to_unit() {
        let h = h2();
        let u = DecoratedTorsor::unit(&h).unwrap();
        let p = u.multiply(&u).unwrap();
        assert_eq!(p.decorated.torsor().dim(), 2);
        let w = left_unit_witness(&p.composite, &h).unwrap();
        let r = verify_equivalence_witness(&w, &p.decorated, &u).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn identity_witnesses_reflexivity() {
        let u = DecoratedTorsor::unit(&h2()).unwrap();
        let id = LinearMap::identity(u.torsor().field(), &[2]);
        assert!(verify_equivalence_witness(&id, &u, &u).is_ok());
    }

    #[test]
    fn wrong_witness_is_rejected() {
        let u = DecoratedTorsor::unit(&h2()).unwrap();
        let zero = LinearMap::zero(u.torsor().field(), &[2], &[2]);
        assert!(matches!(
            verify_equivalence_witness(&zero, &u, &u),
            Err(Error::WitnessRejected(_))
        ));
    }

    #[test]
    fn product_with_inverse_lands_on_left_carrier() {
        let t = registry_torsor("quaternion").unwrap();
        let (hl, hr) = side_pair(&t).unwrap();
        let d = DecoratedTorsor::from_isos(
            t.clone(),
            HopfIso::identity(hl.hopf().clone()),
            HopfIso::identity(hr.hopf().clone()),
        )
        .unwrap();
        let inv = d.inverse().unwrap();
        let p = d.multiply(&inv).unwrap();
        let left = SubHopf::compute(&t, Side::Left).unwrap();
        assert!(p.composite.carrier().same_subspace(left.carrier()));
    }

    #[test]
    fn mismatched_references_are_refused() {
        let a = DecoratedTorsor::unit(&h2()).unwrap();
        let b = DecoratedTorsor::unit(&group_algebra(FieldSpec::Rationals, &GroupTable::cyclic(3))).unwrap();
        assert!(matches!(a.multiply(&b), Err(Error::ReferenceHopfMismatch(_))));
    }
}
