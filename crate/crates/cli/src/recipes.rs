//! Named gallery recipes, resolved to presentation documents.

use torsorkit::gallery::{
    cyclic_torsor, galois_torsor, quadratic_torsor, registry_names, registry_torsor, trivial_torsor, CyclicSpec,
    QuadraticVariant, REGISTRY,
};
use torsorkit::hopf::{function_algebra, group_algebra, sweedler, GroupTable, TwistData};
use torsorkit::FieldSpec;

use crate::format::{self, Document, Presentation, TwistFile};
use crate::CliError;

/// One line per buildable name, registry entries first.
pub fn listing() -> Vec<String> {
    let mut out: Vec<String> = REGISTRY.iter().map(|(n, d)| format!("{n:<22}{d}")).collect();
    for (pattern, what) in [
        ("trivial:<hopf-file>", "trivial torsor of a Hopf algebra"),
        ("quadratic:<field>:<d>", "k[X]/(X^2 - d), or X^2 + X + d in characteristic 2"),
        ("galois:<file>", "Galois torsor from a polynomial and its automorphisms"),
        ("cyclic:<field>:<n>:<q>:<a>:<b>", "cyclic algebra x^n = a, y^n = b, xy = q yx"),
        ("group:<field>:<group>", "group algebra (Hopf)"),
        ("functions:<field>:<group>", "function algebra (Hopf)"),
        ("sweedler:<field>", "Sweedler's four-dimensional Hopf algebra"),
        ("sign-twist:<field>:<z2|klein>", "bicharacter twist with values ±1"),
        ("unit-twist:<field>:<group>", "the twist 1⊗1 on a function algebra"),
    ] {
        out.push(format!("{pattern:<32}{what}"));
    }
    out.push("groups: z<n>, klein, s3".to_string());
    out
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn group(name: &str) -> Result<GroupTable, CliError> {
    match name {
        "klein" => Ok(GroupTable::klein()),
        "s3" => Ok(GroupTable::s3()),
        _ => name
            .strip_prefix('z')
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&n| n >= 1)
            .map(GroupTable::cyclic)
            .ok_or_else(|| usage(format!("unknown group {name:?} (expected z<n>, klein or s3)"))),
    }
}

fn field(text: &str) -> Result<FieldSpec, CliError> {
    Ok(FieldSpec::parse_name(text)?)
}

fn arity(recipe: &str, parts: &[&str], n: usize) -> Result<(), CliError> {
    if parts.len() == n {
        Ok(())
    } else {
        Err(usage(format!("{recipe} takes {} parameters, got {}", n - 1, parts.len() - 1)))
    }
}

fn torsor_doc(t: torsorkit::torsor::VerifiedTorsor, name: &str) -> Document {
    Document::new(Presentation::Torsor(t.into_inner())).with_meta("recipe", name)
}

/// Builds a registry entry or a recipe.
pub fn build(name: &str) -> Result<Document, CliError> {
    if registry_names().any(|n| n == name) {
        return Ok(torsor_doc(registry_torsor(name)?, name));
    }
    let parts: Vec<&str> = name.split(':').collect();
    match parts[0] {
        "trivial" => {
            // The file path may itself contain colons.
            let path = name.strip_prefix("trivial:").unwrap_or("");
            match format::load(path)?.presentation {
                Presentation::Hopf(h) => Ok(torsor_doc(trivial_torsor(&h.verified()?)?, name)),
                other => Err(usage(format!("trivial: expects a hopf file, found {}", other.kind()))),
            }
        }
        "quadratic" => {
            arity("quadratic", &parts, 3)?;
            let f = field(parts[1])?;
            let d = f.parse(parts[2])?;
            let variant = if f.characteristic() == 2 {
                QuadraticVariant::ArtinSchreier
            } else {
                QuadraticVariant::Sqrt
            };
            Ok(torsor_doc(quadratic_torsor(f, &d, variant)?, name))
        }
        "galois" => {
            let path = name.strip_prefix("galois:").unwrap_or("");
            match format::load(path)?.presentation {
                Presentation::Galois(spec) => Ok(torsor_doc(galois_torsor(&spec)?.torsor, name)),
                other => Err(usage(format!("galois: expects a galois file, found {}", other.kind()))),
            }
        }
        "cyclic" => {
            arity("cyclic", &parts, 6)?;
            let f = field(parts[1])?;
            let n = parts[2]
                .parse::<usize>()
                .map_err(|_| usage(format!("n must be a positive integer, got {:?}", parts[2])))?;
            let spec = CyclicSpec {
                field: f,
                n,
                q: f.parse(parts[3])?,
                alpha: f.parse(parts[4])?,
                beta: f.parse(parts[5])?,
            };
            Ok(torsor_doc(cyclic_torsor(&spec)?, name))
        }
        "group" | "functions" => {
            arity(parts[0], &parts, 3)?;
            let (f, g) = (field(parts[1])?, group(parts[2])?);
            let h = if parts[0] == "group" {
                group_algebra(f, &g)
            } else {
                function_algebra(f, &g)
            };
            Ok(Document::new(Presentation::Hopf(h)).with_meta("recipe", name))
        }
        "sweedler" => {
            arity("sweedler", &parts, 2)?;
            Ok(Document::new(Presentation::Hopf(sweedler(field(parts[1])?)?)).with_meta("recipe", name))
        }
        "sign-twist" | "unit-twist" => {
            arity(parts[0], &parts, 3)?;
            let f = field(parts[1])?;
            let t = if parts[0] == "unit-twist" {
                TwistData::trivial(function_algebra(f, &group(parts[2])?))
            } else {
                let sign = |e: usize| if e % 2 == 0 { f.one() } else { -f.one() };
                match parts[2] {
                    "z2" => TwistData::bicharacter(f, &GroupTable::cyclic(2), |a, b| sign(a * b))?,
                    "klein" => {
                        // β((a,b),(c,d)) = (−1)^{ad}, element (a,b) at index 2a + b.
                        let g = GroupTable::product(&GroupTable::cyclic(2), &GroupTable::cyclic(2));
                        TwistData::bicharacter(f, &g, |x, y| sign((x / 2) * (y % 2)))?
                    }
                    other => return Err(usage(format!("sign-twist supports z2 and klein, not {other:?}"))),
                }
            };
            let doc = Document::new(Presentation::Twist(TwistFile {
                field: f,
                basis: t.host().labels().to_vec(),
                f: t.f().clone(),
            }));
            Ok(doc.with_meta("recipe", name).with_meta("host", format!("functions:{}:{}", parts[1], parts[2])))
        }
        _ => Err(usage(format!("unknown gallery name {name:?}; try `gallery list`"))),
    }
}
