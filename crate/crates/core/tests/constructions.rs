use torsorkit::compose::{compose_torsors, torsor_morphism_check};
use torsorkit::cotorsor::{dualize_cotorsor, dualize_torsor, parmentier_cotorsor};
use torsorkit::gallery::{registry_torsor, trivial_torsor};
use torsorkit::hopf::{function_algebra, group_algebra, sweedler, GroupTable, HopfIso, TwistData};
use torsorkit::side::{opp_side_isos, side_pair, verify_coactions, Side, SubHopf};
use torsorkit::tor::{left_unit_witness, right_unit_witness, verify_equivalence_witness, DecoratedTorsor};
use torsorkit::{Error, FieldSpec, LinearMap};

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

#[test]
fn sweedler_trivial_torsor_sides_and_unit_law() {
    let h = sweedler(q()).unwrap();
    assert_ne!(h.antipode_squared(), LinearMap::identity(q(), &[4]));
    let t = trivial_torsor(&h).unwrap();
    let (hl, hr) = side_pair(&t).unwrap();
    assert_eq!((hl.dim(), hr.dim()), (4, 4));
    assert!(verify_coactions(&t, &hl, &hr).passed());

    let u = DecoratedTorsor::unit(&h).unwrap();
    let p = u.multiply(&u).unwrap();
    assert!(p.composite.torsor().verify().passed());
    let w = left_unit_witness(&p.composite, &h).unwrap();
    assert!(verify_equivalence_witness(&w, &p.decorated, &u).unwrap().passed());
    let w = right_unit_witness(&p.composite, &h).unwrap();
    assert!(verify_equivalence_witness(&w, &p.decorated, &u).unwrap().passed());
}

#[test]
fn sweedler_inverse_law() {
    let h = sweedler(q()).unwrap();
    let u = DecoratedTorsor::unit(&h).unwrap();
    let inv = u.inverse().unwrap();
    let p = u.multiply(&inv).unwrap();
    let hl = SubHopf::compute(u.torsor(), Side::Left).unwrap();
    assert!(p.composite.carrier().same_subspace(hl.carrier()));
    assert!(p.decorated.torsor().verify().passed());
}

#[test]
fn right_unit_on_the_quaternions() {
    let t = registry_torsor("quaternion").unwrap();
    let (hl, hr) = side_pair(&t).unwrap();
    let d = DecoratedTorsor::from_isos(t, HopfIso::identity(hl.hopf().clone()), HopfIso::identity(hr.hopf().clone()))
        .unwrap();
    let u = DecoratedTorsor::unit(hr.hopf()).unwrap();
    let p = d.multiply(&u).unwrap();
    let w = right_unit_witness(&p.composite, hr.hopf()).unwrap();
    let report = verify_equivalence_witness(&w, &p.decorated, &d).unwrap();
    assert!(report.passed(), "{report}");
    // The left witness does not even apply: the first factor is not a unit.
    assert!(left_unit_witness(&p.composite, hr.hopf()).is_err());
}

#[test]
fn composing_needs_matching_side_algebras() {
    let t = registry_torsor("quaternion").unwrap();
    let s = registry_torsor("trivial-z2").unwrap();
    let (_, psi) = opp_side_isos(&t).unwrap();
    assert!(matches!(compose_torsors(&s, &t, &psi), Err(Error::PhiNotIso(_))));
}

#[test]
fn opposite_of_opposite_and_theta_morphism() {
    for name in ["quaternion", "trivial-s3", "artin-schreier-f4"] {
        let t = registry_torsor(name).unwrap();
        assert_eq!(*t.opposite().opposite(), *t);
        let m = torsor_morphism_check(t.theta(), &t, &t).unwrap();
        assert!(m.report.passed() && m.is_iso(), "{name}");
    }
}

#[test]
fn klein_twist_over_f5() {
    let f5 = FieldSpec::Prime(5);
    let klein = GroupTable::klein();
    let sign = |k: usize| if k % 2 == 0 { f5.one() } else { -f5.one() };
    let tw = TwistData::bicharacter(f5, &klein, |x, y| sign((x / 2) * (y % 2))).unwrap();
    assert!(tw.verify().passed());
    let hf = tw.twisted().unwrap();
    assert!(hf.verify().passed());
    // Functions form a commutative algebra, so conjugating Δ by F changes nothing,
    assert_eq!(hf.comul(), tw.host().comul());
    let p = parmentier_cotorsor(&tw).unwrap();
    // while multiplying by F⁻¹ on one side does.
    assert_ne!(p.cotorsor.coalgebra().comul(), tw.host().comul());
    assert!(p.report.passed(), "{}", p.report);
    assert!(p.left_iso.is_some() && p.right_iso.is_some());
    let back = dualize_cotorsor(&p.cotorsor).unwrap();
    assert!(back.verify().passed());
}

#[test]
fn non_cocycle_is_refused_by_parmentier() {
    let f = q();
    let g = GroupTable::cyclic(2);
    // F(1,0) = 2 breaks the counit normalization.
    let tw = TwistData::bicharacter(f, &g, |a, b| f.from_i64(if (a, b) == (1, 0) { 2 } else { 1 })).unwrap();
    assert!(!tw.verify().passed());
    assert!(matches!(parmentier_cotorsor(&tw), Err(Error::TwistInvalid(_))));
}

#[test]
fn group_and_function_algebras_are_dual() {
    let g = GroupTable::s3();
    let kg = group_algebra(q(), &g);
    let fun = function_algebra(q(), &g);
    assert!(kg.dual().same_tables(&fun));
    assert!(fun.dual().same_tables(&kg));
    assert_eq!(kg.fingerprint(), kg.dual().dual().fingerprint());
    assert_ne!(kg.fingerprint(), fun.fingerprint());
}

#[test]
fn dualizing_the_registry_round_trips() {
    for name in ["trivial-z3", "quadratic-q2", "galois-f2-frobenius", "quaternion", "cyclic-f7-n3"] {
        let t = registry_torsor(name).unwrap();
        let c = dualize_torsor(&t);
        assert!(c.verify().passed(), "{name}");
        assert_eq!(dualize_cotorsor(&c).unwrap(), *t, "{name}");
    }
}
