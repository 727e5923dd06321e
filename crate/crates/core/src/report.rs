//! Itemized verification reports with concrete failure witnesses.

use std::fmt;

use crate::tensor::{multi_index, LinearMap, Tensor};

/// Where two maps that should agree first disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Basis tensor fed to both sides.
    pub input: String,
    /// Output coordinate at which the sides differ.
    pub coordinate: String,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "on {}: coefficient of {} is {} on the left, {} on the right",
            self.input, self.coordinate, self.lhs, self.rhs
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail {
        witness: Option<Witness>,
        note: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            outcome: Outcome::Pass,
        }
    }

    pub fn fail(name: impl Into<String>, note: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            outcome: Outcome::Fail {
                witness: None,
                note: note.into(),
            },
        }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, note: impl Into<String>) -> Self {
        if ok {
            Check::pass(name)
        } else {
            Check::fail(name, note)
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            Outcome::Fail { witness, .. } => witness.as_ref(),
            Outcome::Pass => None,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Pass => write!(f, "PASS {}", self.name),
            Outcome::Fail { witness, note } => {
                write!(f, "FAIL {}", self.name)?;
                if let Some(w) = witness {
                    write!(f, " ({w})")?;
                }
                if !note.is_empty() {
                    write!(f, " [{note}]")?;
                }
                Ok(())
            }
        }
    }
}

/// Result of verifying one structure: its own checks, the checks of the
/// structures it is built on, and a few informational flags.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub subject: String,
    pub premises: Vec<Report>,
    pub checks: Vec<Check>,
    pub flags: Vec<(String, bool)>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            ..Report::default()
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn flag(&mut self, name: impl Into<String>, value: bool) {
        self.flags.push((name.into(), value));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn premise(&mut self, report: Report) {
        self.premises.push(report);
    }

    pub fn passed(&self) -> bool {
        self.premises.iter().all(Report::passed) && self.checks.iter().all(Check::passed)
    }

    /// All checks, premises first, depth first.
    pub fn all_checks(&self) -> Vec<&Check> {
        let mut out: Vec<&Check> = self.premises.iter().flat_map(Report::all_checks).collect();
        out.extend(self.checks.iter());
        out
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.all_checks().into_iter().find(|c| !c.passed())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.all_checks().into_iter().find(|c| c.name == name)
    }

    pub fn flag_value(&self, name: &str) -> Option<bool> {
        self.flags.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    /// A one-line summary of the first failure, for error messages.
    pub fn failure_summary(&self) -> String {
        match self.first_failure() {
            Some(c) => c.to_string(),
            None => "all checks pass".to_string(),
        }
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        writeln!(f, "{pad}{}", self.subject)?;
        for p in &self.premises {
            p.write_indented(f, depth + 1)?;
        }
        for c in &self.checks {
            writeln!(f, "{pad}  {c}")?;
        }
        for (name, v) in &self.flags {
            writeln!(f, "{pad}  {name}: {v}")?;
        }
        for n in &self.notes {
            writeln!(f, "{pad}  note: {n}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)?;
        write!(f, "{}", if self.passed() { "RESULT PASS" } else { "RESULT FAIL" })
    }
}

fn label_multi(dims: &[usize], flat: usize, labels: &[Vec<String>]) -> String {
    if dims.is_empty() {
        return "1".to_string();
    }
    multi_index(dims, flat)
        .iter()
        .enumerate()
        .map(|(leg, &i)| match labels.get(leg).and_then(|l| l.get(i)) {
            Some(s) => s.clone(),
            None => format!("e{i}"),
        })
        .collect::<Vec<_>>()
        .join("⊗")
}

/// Compares two maps entry by entry. `source_labels[k]` names the basis of
/// source leg `k`, and likewise for targets; missing labels fall back to
/// `e0, e1, ...`.
pub fn compare_maps(
    name: &str,
    lhs: &LinearMap,
    rhs: &LinearMap,
    source_labels: &[Vec<String>],
    target_labels: &[Vec<String>],
) -> Check {
    if lhs.source() != rhs.source() || lhs.target() != rhs.target() {
        return Check::fail(
            name,
            format!(
                "shapes differ: {:?}->{:?} vs {:?}->{:?}",
                lhs.source(),
                lhs.target(),
                rhs.source(),
                rhs.target()
            ),
        );
    }
    match lhs.first_difference(rhs) {
        None => Check::pass(name),
        Some((col, row)) => Check {
            name: name.to_string(),
            outcome: Outcome::Fail {
                witness: Some(Witness {
                    input: label_multi(lhs.source(), col, source_labels),
                    coordinate: label_multi(lhs.target(), row, target_labels),
                    lhs: lhs.entry(row, col).to_string(),
                    rhs: rhs.entry(row, col).to_string(),
                }),
                note: String::new(),
            },
        },
    }
}

/// Compares two tensors that should be equal, naming `input` as the
/// argument both sides were evaluated on.
pub fn compare_tensors(
    name: &str,
    input: &str,
    lhs: &Tensor,
    rhs: &Tensor,
    labels: &[Vec<String>],
) -> Check {
    if lhs.dims() != rhs.dims() {
        return Check::fail(
            name,
            format!("shapes differ: {:?} vs {:?}", lhs.dims(), rhs.dims()),
        );
    }
    match lhs.data().iter().zip(rhs.data()).position(|(a, b)| a != b) {
        None => Check::pass(name),
        Some(i) => Check {
            name: name.to_string(),
            outcome: Outcome::Fail {
                witness: Some(Witness {
                    input: input.to_string(),
                    coordinate: label_multi(lhs.dims(), i, labels),
                    lhs: lhs.get(i).to_string(),
                    rhs: rhs.get(i).to_string(),
                }),
                note: String::new(),
            },
        },
    }
}

/// Repeats one leg's labels `legs` times, for maps on tensor powers.
pub fn repeat_labels(labels: &[String], legs: usize) -> Vec<Vec<String>> {
    vec![labels.to_vec(); legs]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    #[test]
    fn witness_names_first_differing_entry() {
        let f = FieldSpec::Rationals;
        let a = LinearMap::identity(f, &[2]);
        let mut b = a.clone();
        b.set_entry(0, 1, f.from_i64(3));
        let labels = vec![vec!["x".to_string(), "y".to_string()]];
        let c = compare_maps("id", &a, &b, &labels, &labels);
        let w = c.witness().unwrap();
        assert_eq!((w.input.as_str(), w.coordinate.as_str()), ("y", "x"));
        assert_eq!((w.lhs.as_str(), w.rhs.as_str()), ("0", "3"));
        assert!(c.to_string().starts_with("FAIL id"));
    }

    #[test]
    fn premises_propagate_failure() {
        let mut inner = Report::new("inner");
        inner.push(Check::fail("broken", "because"));
        let mut outer = Report::new("outer");
        outer.push(Check::pass("fine"));
        assert!(outer.passed());
        outer.premise(inner);
        assert!(!outer.passed());
        assert_eq!(outer.first_failure().unwrap().name, "broken");
    }
}
