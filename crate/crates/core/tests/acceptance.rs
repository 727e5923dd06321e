//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};

use torsorkit::algebra::{Algebra, CharacterSearch, Multiplication};
use torsorkit::compose::{compose_torsors, induced_side_isos};
use torsorkit::cotorsor::{dualize_torsor, parmentier_cotorsor};
use torsorkit::gallery::{
    cyclic_torsor, galois_torsor, quadratic_galois_spec, quadratic_torsor, quaternion_spec, registry_names,
    registry_torsor, trivial_torsor, CyclicSpec, QuadraticVariant,
};
use torsorkit::hopf::{function_algebra, group_algebra, GroupTable, HopfIso, TwistData};
use torsorkit::side::{galois_can, opp_side_isos, Side, SubHopf};
use torsorkit::tor::{left_unit_witness, verify_equivalence_witness, DecoratedTorsor};
use torsorkit::torsor::{self, Torsor, VerifiedTorsor};
use torsorkit::{FieldSpec, LinearMap, Tensor};

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

const TORSOR_CHECKS: [&str; 7] = [
    torsor::CHECK_MORPHISM,
    torsor::CHECK_THETA_AUT,
    torsor::CHECK_RIGHT_UNIT,
    torsor::CHECK_LEFT_UNIT,
    torsor::CHECK_COASSOC,
    torsor::CHECK_THETA_AXIOM,
    torsor::CHECK_EQUIVARIANCE,
];

fn quaternion() -> VerifiedTorsor {
    registry_torsor("quaternion").expect("quaternion builds")
}

/// Adds 1 to one entry of a map.
fn bump(map: &LinearMap, flat: usize) -> LinearMap {
    let (row, col) = (flat % map.rows(), flat / map.rows());
    let mut m = map.clone();
    let v = m.entry(row, col) + &map.field().one();
    m.set_entry(row, col, v);
    m
}

fn criterion_1() -> Outcome {
    for name in registry_names() {
        let t = registry_torsor(name).map_err(e)?;
        let r = t.verify();
        ensure(r.passed(), || format!("{name}: {}", r.failure_summary()))?;
        for check in TORSOR_CHECKS {
            ensure(r.checks.iter().any(|c| c.name == check && c.passed()), || {
                format!("{name}: {check} missing")
            })?;
        }
    }

    // Every structure constant of the quaternions, one at a time.
    let q = quaternion();
    let a = q.algebra();
    let f = q.field();
    let unit = a.unit_map();
    let mut mutations = 0;
    let total = [a.mul(), &unit, q.mu(), q.theta()].iter().map(|m| m.rows() * m.cols()).sum::<usize>();
    for table in 0..4 {
        let base = [a.mul(), &unit, q.mu(), q.theta()][table];
        for flat in 0..base.rows() * base.cols() {
            let bumped = bump(base, flat);
            let (mul, unit_t, mu, theta) = match table {
                0 => (bumped, a.unit().clone(), q.mu().clone(), q.theta().clone()),
                1 => (a.mul().clone(), bumped.column(0).clone(), q.mu().clone(), q.theta().clone()),
                2 => (a.mul().clone(), a.unit().clone(), bumped, q.theta().clone()),
                _ => (a.mul().clone(), a.unit().clone(), q.mu().clone(), bumped),
            };
            let alg = Algebra::new(f, a.labels().to_vec(), mul, unit_t).map_err(e)?;
            let t = Torsor::new(alg, mu, Some(theta)).map_err(e)?;
            let r = t.verify();
            let witnessed = r.all_checks().iter().any(|c| !c.passed() && c.witness().is_some());
            ensure(witnessed, || format!("table {table}, entry {flat}: no failing check with a witness"))?;
            mutations += 1;
        }
    }
    ensure(mutations == total && total == 64 + 4 + 256 + 16, || format!("{mutations} of {total} mutations"))
}

fn criterion_2() -> Outcome {
    for name in registry_names() {
        let t = registry_torsor(name).map_err(e)?;
        for side in [Side::Left, Side::Right] {
            let h = SubHopf::compute(&t, side).map_err(e)?;
            ensure(h.dim() == t.dim(), || format!("{name}: dim H_{} = {} ≠ {}", side.name(), h.dim(), t.dim()))?;
            let g = galois_can(&t, &h).map_err(e)?;
            ensure(g.can_inverse.is_some(), || format!("{name}: {} can not invertible", side.name()))?;
            // can⁻¹∘can = Id, entrywise.
            let inv = g.can_inverse.as_ref().unwrap();
            let id = LinearMap::identity(t.field(), g.can.source());
            ensure(inv.compose(&g.can).map_err(e)? == id, || format!("{name}: can⁻¹∘can ≠ Id"))?;
            ensure(g.coinvariant_dim == 1, || format!("{name}: coinvariants of dim {}", g.coinvariant_dim))?;
        }
    }
    Ok(())
}

/// Group-like elements `m⊗m⁻¹` for the monomials of a cyclic algebra,
/// recombined into idempotents, exhibit `H_l` as functions on `ℤ/n × ℤ/n`.
fn zeze(spec: &CyclicSpec) -> Outcome {
    let t = cyclic_torsor(spec).map_err(e)?;
    let (f, n, q) = (spec.field, spec.n, &spec.q);
    let nn = n * n;
    let a = t.algebra();
    let hl = SubHopf::compute(&t, Side::Left).map_err(e)?;
    let hr = SubHopf::compute(&t, Side::Right).map_err(e)?;
    ensure(hl.carrier().same_subspace(hr.carrier()), || "H_l ≠ H_r".into())?;
    ensure(hl.dim() == nn, || format!("dim H_l = {}", hl.dim()))?;
    let h = hl.hopf();
    ensure(h.algebra().is_commutative(), || "H_l not commutative".into())?;
    ensure(h.verify().passed(), || "H_l is not a Hopf algebra".into())?;

    // g_{ij} = m ⊗ m⁻¹ with m = x^i y^j; m^n is a scalar c, so m⁻¹ = m^{n−1}/c.
    let k = hl.dim();
    let mut g = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let m = a.basis(i * n + j);
            let c = a.scalar_coefficient(&a.power(&m, n as u32).map_err(e)?).ok_or("mⁿ not scalar")?;
            let m_inv = a.power(&m, n as u32 - 1).map_err(e)?.scaled(&c.inv().map_err(e)?);
            let coords = hl.carrier().coordinates(&m.outer(&m_inv)).ok_or("m⊗m⁻¹ outside H_l")?;
            g.push(Tensor::from_vec(f, &[k], coords).map_err(e)?);
        }
    }
    let (comul, counit, mul) = (h.comul(), h.counit(), h.mul());
    for (idx, gi) in g.iter().enumerate() {
        ensure(comul.apply(gi).map_err(e)? == gi.outer(gi), || format!("Δ(g{idx}) ≠ g⊗g"))?;
        ensure(counit.apply(gi).map_err(e)?.get(0).is_one(), || format!("ε(g{idx}) ≠ 1"))?;
    }
    // The g's multiply like ℤ/n × ℤ/n.
    for i in 0..nn {
        for j in 0..nn {
            let s = ((i / n + j / n) % n) * n + (i % n + j % n) % n;
            ensure(mul.apply(&g[i].outer(&g[j])).map_err(e)? == g[s], || format!("g{i}·g{j} ≠ g{s}"))?;
        }
    }
    // e_{ab} = n⁻² Σ q^{−(ai+bj)} g_{ij}.
    let qinv = q.pow(n as u64 - 1);
    let scale = f.from_i64(nn as i64).inv().map_err(e)?;
    let idem: Vec<Tensor> = (0..nn)
        .map(|ab| {
            let mut acc = Tensor::zeros(f, &[k]);
            for ij in 0..nn {
                let exp = ((ab / n) * (ij / n) + (ab % n) * (ij % n)) as u64;
                acc.add_scaled(&g[ij], &(&qinv.pow(exp) * &scale)).unwrap();
            }
            acc
        })
        .collect();
    let mut sum = Tensor::zeros(f, &[k]);
    for x in &idem {
        sum = sum.plus(x).map_err(e)?;
    }
    ensure(sum == *h.unit(), || "Σ e ≠ 1".into())?;
    for c in 0..nn {
        for d in 0..nn {
            let p = mul.apply(&idem[c].outer(&idem[d])).map_err(e)?;
            let want = if c == d { idem[c].clone() } else { Tensor::zeros(f, &[k]) };
            ensure(p == want, || format!("e{c}·e{d} wrong"))?;
        }
        // Δ(e_c) = Σ_{a+b=c} e_a⊗e_b
        let mut rhs = Tensor::zeros(f, &[k, k]);
        for x in 0..nn {
            let y = ((c / n + n - x / n) % n) * n + (c % n + n - x % n) % n;
            rhs = rhs.plus(&idem[x].outer(&idem[y])).map_err(e)?;
        }
        ensure(comul.apply(&idem[c]).map_err(e)? == rhs, || format!("Δ(e{c}) is not the group sum"))?;
        let eps = counit.apply(&idem[c]).map_err(e)?.get(0).clone();
        ensure(eps == if c == 0 { f.one() } else { f.zero() }, || format!("ε(e{c}) = {eps}"))?;
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    zeze(&quaternion_spec())?;
    let f7 = FieldSpec::Prime(7);
    zeze(&CyclicSpec {
        field: f7,
        n: 3,
        q: f7.from_i64(2),
        alpha: f7.one(),
        beta: f7.one(),
    })
}

fn criterion_4() -> Outcome {
    let f = FieldSpec::Rationals;
    for d in [2, 3, 5] {
        let dd = f.from_i64(d);
        let g = galois_torsor(&quadratic_galois_spec(f, &dd)).map_err(e)?;
        let q = quadratic_torsor(f, &dd, QuadraticVariant::Sqrt).map_err(e)?;
        ensure(g.torsor.mu() == q.mu(), || format!("d = {d}: μ tables differ"))?;

        // Oracle on K⊗K with basis 1⊗1, 1⊗t, t⊗1, t⊗t: P_id = ½ 1⊗1 + (2d)⁻¹ t⊗t.
        let half = f.ratio(1, 2).map_err(e)?;
        let c = f.ratio(1, 2 * d).map_err(e)?;
        let p_id = Tensor::from_vec(f, &[2, 2], vec![half.clone(), f.zero(), f.zero(), c.clone()]).map_err(e)?;
        let p_s = Tensor::from_vec(f, &[2, 2], vec![half, f.zero(), f.zero(), -c]).map_err(e)?;
        ensure(g.idempotents.len() == 2, || "two idempotents".into())?;
        ensure(g.idempotents[0] == p_id && g.idempotents[1] == p_s, || format!("d = {d}: P_σ values"))?;

        // Products in K⊗K computed by hand: (a⊗b)(c⊗e) = ac⊗be with t² = d.
        let prod = |x: &Tensor, y: &Tensor| -> Tensor {
            let mut out = Tensor::zeros(f, &[2, 2]);
            for i in 0..4 {
                for j in 0..4 {
                    let coeff = x.get(i) * y.get(j);
                    if coeff.is_zero() {
                        continue;
                    }
                    let (l, r) = ((i / 2) + (j / 2), (i % 2) + (j % 2));
                    let mut w = coeff;
                    if l == 2 {
                        w = &w * &dd;
                    }
                    if r == 2 {
                        w = &w * &dd;
                    }
                    out.add_at((l % 2) * 2 + r % 2, &w);
                }
            }
            out
        };
        let ps = &g.idempotents;
        let one = Tensor::basis(f, &[2, 2], 0);
        ensure(ps[0].plus(&ps[1]).map_err(e)? == one, || "Σ P_σ ≠ 1⊗1".into())?;
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { ps[i].clone() } else { Tensor::zeros(f, &[2, 2]) };
                ensure(prod(&ps[i], &ps[j]) == want, || format!("P{i}·P{j}"))?;
            }
        }
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let t = quaternion();
    let (_, psi) = opp_side_isos(&t).map_err(e)?;
    let c = compose_torsors(&t, &t.opposite(), &psi).map_err(e)?;
    let hl = SubHopf::compute(&t, Side::Left).map_err(e)?;
    ensure(c.carrier().same_subspace(hl.carrier()), || "T_Φ ≠ H_l(T)".into())?;
    let isos = induced_side_isos(&c).map_err(e)?;
    for (which, iso) in [("left", &isos.left), ("right", &isos.right)] {
        let n = iso.map().cols();
        let m = iso.map().rows();
        let f = iso.map().field();
        ensure(
            iso.inverse_map().compose(iso.map()).map_err(e)? == LinearMap::identity(f, &[n]),
            || format!("{which}: inverse∘forward ≠ Id"),
        )?;
        ensure(
            iso.map().compose(iso.inverse_map()).map_err(e)? == LinearMap::identity(f, &[m]),
            || format!("{which}: forward∘inverse ≠ Id"),
        )?;
    }
    let r = c.torsor().verify();
    ensure(r.passed(), || r.failure_summary())
}

fn criterion_6() -> Outcome {
    for n in [2, 3] {
        let h = group_algebra(FieldSpec::Rationals, &GroupTable::cyclic(n));
        let u = DecoratedTorsor::unit(&h).map_err(e)?;
        let p = u.multiply(&u).map_err(e)?;
        let w = left_unit_witness(&p.composite, &h).map_err(e)?;
        let r = verify_equivalence_witness(&w, &p.decorated, &u).map_err(e)?;
        ensure(r.passed(), || format!("Z/{n}: {}", r.failure_summary()))?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let f = FieldSpec::Rationals;
    let g = GroupTable::cyclic(2);
    let tw = TwistData::bicharacter(f, &g, |a, b| f.from_i64(if a * b == 1 { -1 } else { 1 })).map_err(e)?;
    let p = parmentier_cotorsor(&tw).map_err(e)?;
    ensure(p.report.passed(), || p.report.failure_summary())?;
    let cr = p.cotorsor.verify();
    ensure(cr.passed(), || cr.failure_summary())?;
    let h = tw.host();
    let hf = tw.twisted().map_err(e)?;
    let check = |iso: &Option<HopfIso>, target: &torsorkit::hopf::Hopf, what: &str| -> Outcome {
        let iso = iso.as_ref().ok_or_else(|| format!("{what}: no isomorphism"))?;
        ensure(iso.target().same_tables(target), || format!("{what}: wrong target"))
    };
    check(&p.left_iso, &h.dual(), "H_l ≅ H*")?;
    check(&p.right_iso, &hf.dual(), "H_r ≅ H_F*")?;

    let trivial = parmentier_cotorsor(&TwistData::trivial(h.clone())).map_err(e)?;
    let dual_trivial = trivial_torsor(&h.dual()).map_err(e)?;
    let d = dualize_torsor(&dual_trivial);
    ensure(
        trivial.cotorsor.nu() == d.nu()
            && trivial.cotorsor.theta() == d.theta()
            && trivial.cotorsor.coalgebra().comul() == d.coalgebra().comul()
            && trivial.cotorsor.coalgebra().counit() == d.coalgebra().counit(),
        || "trivial twist does not reproduce the dual trivial torsor".into(),
    )
}

fn criterion_8() -> Outcome {
    let q = FieldSpec::Rationals;
    let f5 = FieldSpec::Prime(5);
    let sign = |f: FieldSpec, k: usize| if k % 2 == 0 { f.one() } else { -f.one() };
    let klein = GroupTable::product(&GroupTable::cyclic(2), &GroupTable::cyclic(2));
    let twists = vec![
        ("trivial", TwistData::trivial(function_algebra(q, &GroupTable::cyclic(3)))),
        (
            "Z/2 sign",
            TwistData::bicharacter(q, &GroupTable::cyclic(2), |a, b| sign(q, a * b)).map_err(e)?,
        ),
        (
            "Klein over F5",
            TwistData::bicharacter(f5, &klein, |x, y| sign(f5, (x / 2) * (y % 2))).map_err(e)?,
        ),
    ];
    for (name, tw) in twists {
        let r = tw.verify();
        ensure(r.passed(), || format!("{name}: {}", r.failure_summary()))?;
        let h = tw.host();
        let u_inv = tw.u_inv().ok_or_else(|| format!("{name}: u not invertible"))?;
        let a = h.algebra();
        ensure(a.product(tw.u(), u_inv).map_err(e)? == *h.unit(), || format!("{name}: u·u⁻¹ ≠ 1"))?;
        ensure(a.product(u_inv, tw.u()).map_err(e)? == *h.unit(), || format!("{name}: u⁻¹·u ≠ 1"))?;
        let hf = tw.twisted().map_err(e)?;
        let hr = hf.verify();
        ensure(hr.passed(), || format!("{name}: H_F {}", hr.failure_summary()))?;
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    for name in registry_names() {
        let t = registry_torsor(name).map_err(e)?;
        ensure(t.theta_supplied(), || format!("{name}: θ was not supplied"))?;
        ensure(t.derived_theta().map_err(e)? == *t.theta(), || format!("{name}: derived θ differs"))?;
    }
    let h = group_algebra(FieldSpec::Rationals, &GroupTable::s3());
    let t = trivial_torsor(&h).map_err(e)?;
    // S² computed from the antipode table directly.
    let s = h.antipode();
    let n = h.dim();
    let mut s2 = LinearMap::zero(h.field(), &[n], &[n]);
    for i in 0..n {
        for j in 0..n {
            let mut acc = h.field().zero();
            for k in 0..n {
                acc += &(s.entry(i, k) * s.entry(k, j));
            }
            s2.set_entry(i, j, acc);
        }
    }
    ensure(t.derived_theta().map_err(e)? == s2, || "θ ≠ S² on Q[S3]".into())
}

fn criterion_10() -> Outcome {
    let q = quaternion();
    ensure(
        q.algebra().character_search().map_err(e)? == CharacterSearch::NoneByCommutatorIdeal,
        || "quaternions: expected no characters".into(),
    )?;
    let f5 = FieldSpec::Prime(5);
    for g in [GroupTable::cyclic(2), GroupTable::klein()] {
        let h = function_algebra(f5, &g);
        match h.algebra().character_search().map_err(e)? {
            CharacterSearch::Found(chars) => {
                ensure(chars.len() == g.order(), || format!("{}: {} characters", g.name(), chars.len()))?;
                // Each character is evaluation at a group element: a 0/1 vector with a single 1.
                for chi in &chars {
                    let ones = chi.iter().filter(|x| x.is_one()).count();
                    let zeros = chi.iter().filter(|x| x.is_zero()).count();
                    ensure(ones == 1 && zeros + 1 == chi.len(), || format!("{}: odd character", g.name()))?;
                }
            }
            other => return Err(format!("{}: {other:?}", g.name())),
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("registry torsors pass all axioms; quaternion mutations are caught", criterion_1),
        ("dim T = dim H_l = dim H_r, can bijective, scalar coinvariants", criterion_2),
        ("cyclic H_l = H_r ≅ functions on Z/n × Z/n", criterion_3),
        ("Galois and quadratic builds agree; P_σ idempotent system", criterion_4),
        ("quaternion composed with its opposite", criterion_5),
        ("unit law in Tor(H) for Z/2 and Z/3", criterion_6),
        ("Parmentier cotorsor and its side isomorphisms", criterion_7),
        ("twist calculus", criterion_8),
        ("derived θ matches the supplied θ; S² on Q[S3]", criterion_9),
        ("character obstruction and enumeration", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(()) => println!("PASS {}: {name}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}: {name}: {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
