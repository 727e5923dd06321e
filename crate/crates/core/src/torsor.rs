//! Quantum torsors: an algebra `T` with a law `μ: T → T ⊗ T^op ⊗ T` and
//! an automorphism `θ`, subject to five axioms.

use std::ops::Deref;

use sha2::{Digest, Sha256};

use crate::algebra::{check_automorphism, check_morphism, Algebra, TensorAlgebra};
use crate::error::{Error, Result};
use crate::par::{self, Task};
use crate::report::{compare_maps, repeat_labels, Check, Report};
use crate::tensor::{swap, LinearMap, Tensor, MAX_LEGS};

pub const CHECK_MORPHISM: &str = "μ is an algebra morphism T → T⊗T^op⊗T";
pub const CHECK_THETA_AUT: &str = "θ is an algebra automorphism";
pub const CHECK_RIGHT_UNIT: &str = "(Id⊗m)∘μ = ·⊗1";
pub const CHECK_LEFT_UNIT: &str = "(m⊗Id)∘μ = 1⊗·";
pub const CHECK_COASSOC: &str = "(Id⊗Id⊗μ)∘μ = (μ⊗Id⊗Id)∘μ";
pub const CHECK_THETA_AXIOM: &str = "θ⁽³⁾∘(μ⊗Id⊗Id)∘μ = (Id⊗μ^op⊗Id)∘μ";
pub const CHECK_EQUIVARIANCE: &str = "(θ⊗θ⊗θ)∘μ = μ∘θ";

/// Multiplies all legs of a tensor in `T^{⊗k}` together, left to right.
pub(crate) fn multiply_legs(algebra: &Algebra, v: &Tensor) -> Result<Tensor> {
    let mut out = v.clone();
    while out.legs() > 1 {
        out = algebra.mul().apply_on_legs(&out, 0)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Torsor {
    algebra: Algebra,
    mu: LinearMap,
    theta: LinearMap,
    theta_supplied: bool,
}

impl Torsor {
    /// Builds a presentation. Without `theta`, the automorphism is derived
    /// from `m` and `μ`.
    pub fn new(algebra: Algebra, mu: LinearMap, theta: Option<LinearMap>) -> Result<Self> {
        let n = algebra.dim();
        if mu.source() != [n] || mu.target() != [n, n, n] {
            return Err(Error::Shape(format!(
                "law of shape {:?}->{:?} on a {n}-dimensional algebra",
                mu.source(),
                mu.target()
            )));
        }
        if mu.field() != algebra.field() {
            return Err(Error::ModulusMismatch(algebra.field().name(), mu.field().name()));
        }
        let theta_supplied = theta.is_some();
        let theta = match theta {
            Some(t) => {
                if t.source() != [n] || t.target() != [n] {
                    return Err(Error::Shape(format!(
                        "θ of shape {:?}->{:?}",
                        t.source(),
                        t.target()
                    )));
                }
                t
            }
            None => derive_theta(&algebra, &mu)?,
        };
        Ok(Torsor {
            algebra,
            mu,
            theta,
            theta_supplied,
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn field(&self) -> crate::scalar::FieldSpec {
        self.algebra.field()
    }

    pub fn labels(&self) -> &[String] {
        self.algebra.labels()
    }

    pub fn mu(&self) -> &LinearMap {
        &self.mu
    }

    pub fn theta(&self) -> &LinearMap {
        &self.theta
    }

    pub fn theta_supplied(&self) -> bool {
        self.theta_supplied
    }

    /// `μ^op = τ_(13)∘μ`.
    /// Stable hex digest of the field and the `m`, `1`, `μ`, `θ` tables.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.field().name().as_bytes());
        let unit = self.algebra.unit_map();
        for map in [self.algebra.mul(), &unit, &self.mu, &self.theta] {
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

    pub fn mu_op(&self) -> LinearMap {
        self.mu.permute_target(&[2, 1, 0]).expect("three legs")
    }

    pub fn derived_theta(&self) -> Result<LinearMap> {
        derive_theta(&self.algebra, &self.mu)
    }

    pub fn has_commutative_law(&self) -> bool {
        self.mu == self.mu_op()
    }

    /// `T ⊗ T^op ⊗ T`.
    pub fn target_algebra(&self) -> TensorAlgebra {
        TensorAlgebra::new(vec![
            self.algebra.clone(),
            self.algebra.opposite(),
            self.algebra.clone(),
        ])
        .expect("one field")
    }

    /// `μ⁽ᵏ⁾: T → T^{⊗(2k+1)}`, with `μ⁽⁰⁾ = Id` and
    /// `μ⁽ᵏ⁾ = (μ⁽ᵏ⁻¹⁾⊗Id⊗Id)∘μ`.
    pub fn mu_iter(&self, k: usize) -> Result<LinearMap> {
        let legs = 2 * k + 2;
        if legs > MAX_LEGS {
            return Err(Error::LegCapExceeded { legs, cap: MAX_LEGS });
        }
        let n = self.dim();
        let mut current = LinearMap::identity(self.field(), &[n]);
        for _ in 0..k {
            let prev = current;
            let target = vec![n; prev.target().len() + 2];
            current = LinearMap::from_fn(self.field(), &[n], &target, |x| {
                prev.apply_on_legs(self.mu.column(x), 0)
            })?;
        }
        Ok(current)
    }

    /// `(T^op, m^op, 1, μ^op, θ)`.
    pub fn opposite(&self) -> Torsor {
        Torsor {
            algebra: self.algebra.opposite(),
            mu: self.mu_op(),
            theta: self.theta.clone(),
            theta_supplied: self.theta_supplied,
        }
    }

    fn per_column<F>(&self, target_legs: usize, f: F) -> Result<LinearMap>
    where
        F: Fn(&Tensor) -> Result<Tensor> + Sync + Send,
    {
        let n = self.dim();
        LinearMap::from_fn(self.field(), &[n], &vec![n; target_legs], |x| f(self.mu.column(x)))
    }

    pub fn verify(&self) -> Report {
        let n = self.dim();
        let f = self.field();
        let a = &self.algebra;
        let l1 = repeat_labels(a.labels(), 1);
        let l2 = repeat_labels(a.labels(), 2);
        let l5 = repeat_labels(a.labels(), 5);
        let id = LinearMap::identity(f, &[n]);
        let guard = |name: &'static str, r: Result<Check>| r.unwrap_or_else(|e| Check::fail(name, e.to_string()));

        let tasks: Vec<Task<'_, Check>> = vec![
            Box::new(|| check_morphism(CHECK_MORPHISM, &self.mu, a, &self.target_algebra())),
            Box::new(|| check_automorphism(CHECK_THETA_AUT, &self.theta, a)),
            Box::new(|| {
                guard(CHECK_RIGHT_UNIT, (|| {
                    let lhs = id.tensor(a.mul())?.compose(&self.mu)?;
                    let rhs = LinearMap::from_fn(f, &[n], &[n, n], |x| Ok(a.basis(x).outer(a.unit())))?;
                    Ok(compare_maps(CHECK_RIGHT_UNIT, &lhs, &rhs, &l1, &l2))
                })())
            }),
            Box::new(|| {
                guard(CHECK_LEFT_UNIT, (|| {
                    let lhs = a.mul().tensor(&id)?.compose(&self.mu)?;
                    let rhs = LinearMap::from_fn(f, &[n], &[n, n], |x| Ok(a.unit().outer(&a.basis(x))))?;
                    Ok(compare_maps(CHECK_LEFT_UNIT, &lhs, &rhs, &l1, &l2))
                })())
            }),
            Box::new(|| {
                guard(CHECK_COASSOC, (|| {
                    let lhs = self.per_column(5, |c| self.mu.apply_on_legs(c, 2))?;
                    let rhs = self.per_column(5, |c| self.mu.apply_on_legs(c, 0))?;
                    Ok(compare_maps(CHECK_COASSOC, &lhs, &rhs, &l1, &l5))
                })())
            }),
            Box::new(|| {
                guard(CHECK_THETA_AXIOM, (|| {
                    let mu_op = self.mu_op();
                    let lhs = self.per_column(5, |c| {
                        self.theta.apply_on_legs(&self.mu.apply_on_legs(c, 0)?, 2)
                    })?;
                    let rhs = self.per_column(5, |c| mu_op.apply_on_legs(c, 1))?;
                    Ok(compare_maps(CHECK_THETA_AXIOM, &lhs, &rhs, &l1, &l5))
                })())
            }),
            Box::new(|| {
                guard(CHECK_EQUIVARIANCE, (|| {
                    let lhs = self.per_column(3, |c| {
                        let mut v = c.clone();
                        for leg in 0..3 {
                            v = self.theta.apply_on_legs(&v, leg)?;
                        }
                        Ok(v)
                    })?;
                    let rhs = self.mu.compose(&self.theta)?;
                    Ok(compare_maps(CHECK_EQUIVARIANCE, &lhs, &rhs, &l1, &repeat_labels(a.labels(), 3)))
                })())
            }),
        ];

        let mut report = Report::new(format!("torsor of dimension {n} over {f}"));
        report.premise(a.verify());
        for c in par::run_all(tasks) {
            report.push(c);
        }
        report.flag("is_commutative", a.is_commutative());
        report.flag("has_commutative_law", self.has_commutative_law());
        match self.derived_theta() {
            Ok(d) => report.flag("θ agrees with the derived formula", d == self.theta),
            Err(e) => report.note(format!("θ could not be derived: {e}")),
        }
        report
    }

    /// Consumes the presentation and returns it as verified, or the first
    /// failing check as an error.
    pub fn verified(self) -> Result<VerifiedTorsor> {
        let r = self.verify();
        if r.passed() {
            Ok(VerifiedTorsor(self))
        } else {
            Err(Error::Unverified {
                kind: "torsor",
                detail: r.failure_summary(),
            })
        }
    }

    /// Re-expands each leg of `μ` once more and compares with `μ⁽²⁾`.
    /// Outer legs reproduce `μ⁽²⁾` exactly; the middle leg reproduces it
    /// with its neighbours swapped and `θ` on the middle position.
    pub fn sweedler_report(&self) -> Report {
        let n = self.dim();
        let l1 = repeat_labels(self.labels(), 1);
        let l5 = repeat_labels(self.labels(), 5);
        let mut report = Report::new("Sweedler re-expansion identities");
        let mu2 = match self.mu_iter(2) {
            Ok(m) => m,
            Err(e) => {
                report.push(Check::fail("μ⁽²⁾ is computable", e.to_string()));
                return report;
            }
        };
        for leg in 0..3 {
            let name = format!("re-expanding position {} of μ", leg + 1);
            let r = (|| -> Result<Check> {
                let lhs = self.per_column(5, |c| self.mu.apply_on_legs(c, leg))?;
                let rhs = if leg == 1 {
                    let twisted = LinearMap::from_fn(self.field(), &[n], &[n; 5], |x| {
                        self.theta
                            .apply_on_legs(mu2.column(x), 2)?
                            .permute_legs(&swap(5, 1, 3))
                    })?;
                    twisted
                } else {
                    mu2.clone()
                };
                Ok(compare_maps(&name, &lhs, &rhs, &l1, &l5))
            })();
            report.push(r.unwrap_or_else(|e| Check::fail(name.clone(), e.to_string())));
        }
        report
    }
}

/// `θ(x) = x⁽¹⁾ x⁽²⁾⁽³⁾ x⁽²⁾⁽²⁾ x⁽²⁾⁽¹⁾ x⁽³⁾`.
pub fn derive_theta(algebra: &Algebra, mu: &LinearMap) -> Result<LinearMap> {
    let n = algebra.dim();
    LinearMap::from_fn(algebra.field(), &[n], &[n], |x| {
        let expanded = mu.apply_on_legs(mu.column(x), 1)?;
        multiply_legs(algebra, &expanded.permute_legs(&[0, 3, 2, 1, 4])?)
    })
}

/// A torsor whose seven checks have passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifiedTorsor(Torsor);

impl VerifiedTorsor {
    pub fn into_inner(self) -> Torsor {
        self.0
    }

    pub fn opposite(&self) -> VerifiedTorsor {
        VerifiedTorsor(self.0.opposite())
    }
}

impl Deref for VerifiedTorsor {
    type Target = Torsor;

    fn deref(&self) -> &Torsor {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{group_algebra, GroupTable};
    use crate::scalar::FieldSpec;

    fn trivial_z2() -> Torsor {
        let h = group_algebra(FieldSpec::Rationals, &GroupTable::cyclic(2));
        let f = h.field();
        let mu = LinearMap::from_fn(f, &[2], &[2, 2, 2], |g| {
            let e = Tensor::basis(f, &[2], g);
            Ok(e.outer(&e).outer(&e))
        })
        .unwrap();
        Torsor::new(h.algebra().clone(), mu, None).unwrap()
    }

    #[test]
    fn group_like_torsor_passes_all_seven() {
        let t = trivial_z2();
        let r = t.verify();
        assert!(r.passed(), "{r}");
        assert_eq!(r.checks.len(), 7);
        assert_eq!(t.theta(), &LinearMap::identity(FieldSpec::Rationals, &[2]));
    }

    #[test]
    fn mu_iter_zero_is_identity_and_two_is_five_fold() {
        let t = trivial_z2();
        assert_eq!(t.mu_iter(0).unwrap(), LinearMap::identity(t.field(), &[2]));
        assert_eq!(&t.mu_iter(1).unwrap(), t.mu());
        let g = Tensor::basis(t.field(), &[2], 1);
        let g5 = g.outer(&g).outer(&g).outer(&g).outer(&g);
        assert_eq!(t.mu_iter(2).unwrap().apply(&g).unwrap(), g5);
        assert!(matches!(t.mu_iter(3), Err(Error::LegCapExceeded { .. })));
    }

    #[test]
    fn unverified_torsor_is_refused() {
        let t = trivial_z2();
        let f = t.field();
        let bad = LinearMap::from_fn(f, &[2], &[2, 2, 2], |g| {
            let e = Tensor::basis(f, &[2], g);
            let one = Tensor::basis(f, &[2], 0);
            Ok(e.outer(&one).outer(&one))
        })
        .unwrap();
        let bad = Torsor::new(t.algebra().clone(), bad, Some(LinearMap::identity(f, &[2]))).unwrap();
        let err = bad.verified().unwrap_err();
        assert!(matches!(err, Error::Unverified { kind: "torsor", .. }));
    }

    #[test]
    fn sweedler_identities_hold() {
        assert!(trivial_z2().sweedler_report().passed());
    }
}
