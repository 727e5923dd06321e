use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use torsorkit::algebra::Algebra;
use torsorkit::compose::{compose_torsors, induced_side_isos};
use torsorkit::cotorsor::{dualize_cotorsor, dualize_torsor, parmentier_cotorsor, Cotorsor};
use torsorkit::hopf::{Hopf, HopfIso, TwistData};
use torsorkit::side::{galois_can, opp_side_isos, side_pair, verify_coactions, Side, SubHopf};
use torsorkit::tor::{left_unit_witness, right_unit_witness, verify_equivalence_witness, DecoratedTorsor};
use torsorkit::torsor::{Torsor, VerifiedTorsor};
use torsorkit::{LinearMap, Report};

use crate::format::{self, DecoratedFile, Document, MatrixBlock, Presentation};
use crate::{recipes, CliError, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};

#[derive(Parser, Debug)]
#[command(name = "torsorkit", version, about = "Exact verification and construction of quantum torsors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Algebra,
    Hopf,
    Torsor,
    Cotorsor,
    Twist,
    Decorated,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every axiom of a presentation.
    Verify {
        #[arg(value_enum)]
        kind: Kind,
        file: String,
        /// Host Hopf algebra for a twist (defaults to the file's `host` recipe).
        #[arg(long)]
        host: Option<String>,
    },
    /// Compute H_l(T) or H_r(T) as a Hopf algebra.
    HopfSide {
        #[arg(long, value_enum)]
        side: SideArg,
        torsor: String,
        #[arg(short)]
        o: PathBuf,
    },
    /// Check the comodule-algebra structure of both coactions.
    Coactions { torsor: String },
    /// Check that the canonical map of one side is bijective.
    Can {
        #[arg(long, value_enum)]
        side: SideArg,
        torsor: String,
    },
    /// Compose T1 and T2 along a Hopf isomorphism Φ: H_r(T1) → H_l(T2).
    Compose {
        t1: String,
        t2: String,
        #[arg(long)]
        phi: String,
        #[arg(short)]
        o: PathBuf,
    },
    /// Operations on decorated torsors.
    Tor {
        #[command(subcommand)]
        op: TorOp,
    },
    /// Build the twisted Hopf algebra H_F.
    Twist {
        hopf: String,
        twist: String,
        #[arg(short)]
        o: PathBuf,
    },
    /// Build the cotorsor of a twist.
    Parmentier {
        hopf: String,
        twist: String,
        #[arg(short)]
        o: PathBuf,
    },
    /// Torsor ↔ cotorsor, Hopf algebra → dual.
    Dualize {
        file: String,
        #[arg(short)]
        o: PathBuf,
    },
    /// The opposite torsor, optionally with (Id⊗θ): H_r(T) → H_l(T^op).
    Opposite {
        torsor: String,
        #[arg(short)]
        o: PathBuf,
        #[arg(long)]
        phi_out: Option<PathBuf>,
    },
    /// Built-in examples and recipes.
    Gallery {
        #[command(subcommand)]
        op: GalleryOp,
    },
    /// Verify a file according to its declared kind.
    Report { file: String },
}

#[derive(Subcommand, Debug)]
enum TorOp {
    /// The unit class: trivial torsor of H with the counit decorations.
    Unit {
        hopf: String,
        #[arg(short)]
        o: PathBuf,
    },
    /// Decorate a torsor by the identity maps of H_l(T) and H_r(T).
    Decorate {
        torsor: String,
        #[arg(short)]
        o: PathBuf,
    },
    /// The inverse class: the opposite torsor with its decorations swapped
    Inverse {
        decorated: String,
        #[arg(short)]
        o: PathBuf,
    },
    /// The product class, composing along i_l(second)⁻¹∘i_r(first)
    Multiply {
        first: String,
        second: String,
        #[arg(short)]
        o: PathBuf,
        /// When one factor is a unit, write the counit map onto the other factor.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Check that a map is an equivalence of decorated torsors.
    Equiv {
        first: String,
        second: String,
        #[arg(long)]
        witness: String,
    },
}

#[derive(Subcommand, Debug)]
enum GalleryOp {
    List,
    Build {
        name: String,
        #[arg(short)]
        o: PathBuf,
    },
}

/// Runs one command line and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = if shown {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return if shown { EXIT_PASS } else { EXIT_INPUT };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

type Outcome = Result<i32, CliError>;

fn emit(out: &mut dyn Write, report: &Report) -> i32 {
    let _ = writeln!(out, "{report}");
    if report.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn wrote(out: &mut dyn Write, doc: &Document, path: &Path) -> Result<(), CliError> {
    format::save(doc, path)?;
    let _ = writeln!(out, "wrote {} to {}", doc.presentation.kind(), path.display());
    Ok(())
}

fn mismatch(spec: &str, want: &str, got: &Presentation) -> CliError {
    CliError::Usage(format!("{spec}: expected a {want} file, found {}", got.kind()))
}

fn load_torsor(spec: &str) -> Result<Torsor, CliError> {
    match format::load(spec)?.presentation {
        Presentation::Torsor(t) => Ok(t),
        other => Err(mismatch(spec, "torsor", &other)),
    }
}

fn load_verified(spec: &str) -> Result<VerifiedTorsor, CliError> {
    Ok(load_torsor(spec)?.verified()?)
}

fn load_hopf(spec: &str) -> Result<Hopf, CliError> {
    match format::load(spec)?.presentation {
        Presentation::Hopf(h) => Ok(h),
        other => Err(mismatch(spec, "hopf", &other)),
    }
}

/// A twist file together with its host: `--host` if given, otherwise the
/// recipe recorded under `meta.host`.
fn load_twist(spec: &str, host: Option<&str>) -> Result<TwistData, CliError> {
    let doc = format::load(spec)?;
    let Presentation::Twist(tw) = doc.presentation else {
        return Err(mismatch(spec, "twist", &doc.presentation));
    };
    let h = match host {
        Some(path) => load_hopf(path)?,
        None => {
            let recipe = doc
                .meta
                .get("host")
                .ok_or_else(|| CliError::Usage(format!("{spec}: no host given and no meta.host recipe")))?;
            match recipes::build(recipe)?.presentation {
                Presentation::Hopf(h) => h,
                other => return Err(mismatch(recipe, "hopf", &other)),
            }
        }
    };
    if h.field() != tw.field || h.dim() != tw.basis.len() {
        return Err(CliError::Usage(format!(
            "{spec}: twist of dimension {} over {} does not fit a host of dimension {} over {}",
            tw.basis.len(),
            tw.field,
            h.dim(),
            h.field()
        )));
    }
    Ok(TwistData::new(h, tw.f)?)
}

fn block(map: &LinearMap, source: String, target: String) -> MatrixBlock {
    MatrixBlock {
        map: map.clone(),
        source_fingerprint: source,
        target_fingerprint: target,
    }
}

fn check_fingerprint(what: &str, stored: &str, actual: &str) -> Result<(), CliError> {
    if stored == actual {
        Ok(())
    } else {
        Err(CliError::Fingerprint(format!(
            "{what}: file records {stored}, the current input has {actual}"
        )))
    }
}

fn decorated_doc(d: &DecoratedTorsor) -> Document {
    Document::new(Presentation::Decorated(Box::new(DecoratedFile {
        torsor: Torsor::clone(d.torsor()),
        left_reference: d.i_l().target().clone(),
        right_reference: d.i_r().target().clone(),
        i_l: block(d.i_l().map(), d.left().hopf().fingerprint(), d.i_l().target().fingerprint()),
        i_r: block(d.i_r().map(), d.right().hopf().fingerprint(), d.i_r().target().fingerprint()),
    })))
}

fn from_decorated_file(spec: &str, file: DecoratedFile) -> Result<DecoratedTorsor, CliError> {
    check_fingerprint(
        &format!("{spec}: i_l target"),
        &file.i_l.target_fingerprint,
        &file.left_reference.fingerprint(),
    )?;
    check_fingerprint(
        &format!("{spec}: i_r target"),
        &file.i_r.target_fingerprint,
        &file.right_reference.fingerprint(),
    )?;
    let d = DecoratedTorsor::new(
        file.torsor.verified()?,
        file.i_l.map,
        file.left_reference,
        file.i_r.map,
        file.right_reference,
    )?;
    check_fingerprint(
        &format!("{spec}: i_l source"),
        &file.i_l.source_fingerprint,
        &d.left().hopf().fingerprint(),
    )?;
    check_fingerprint(
        &format!("{spec}: i_r source"),
        &file.i_r.source_fingerprint,
        &d.right().hopf().fingerprint(),
    )?;
    Ok(d)
}

fn load_decorated(spec: &str) -> Result<DecoratedTorsor, CliError> {
    match format::load(spec)?.presentation {
        Presentation::Decorated(file) => from_decorated_file(spec, *file),
        other => Err(mismatch(spec, "decorated", &other)),
    }
}

fn header(out: &mut dyn Write, kind: &str, fingerprint: Option<String>, dim: usize) {
    match fingerprint {
        Some(fp) => {
            let _ = writeln!(out, "subject: {kind} {fp}");
        }
        None => {
            let _ = writeln!(out, "subject: {kind}");
        }
    }
    let _ = writeln!(out, "dimension: {dim}");
}

fn verify_algebra(out: &mut dyn Write, a: &Algebra) -> i32 {
    header(out, "algebra", None, a.dim());
    emit(out, &a.verify())
}

fn verify_document(out: &mut dyn Write, spec: &str, doc: Document, host: Option<&str>) -> Outcome {
    Ok(match doc.presentation {
        Presentation::Algebra(a) => verify_algebra(out, &a),
        Presentation::Hopf(h) => {
            header(out, "hopf", Some(h.fingerprint()), h.dim());
            emit(out, &h.verify())
        }
        Presentation::Torsor(t) => {
            header(out, "torsor", Some(t.fingerprint()), t.dim());
            emit(out, &t.verify())
        }
        Presentation::Cotorsor(c) => {
            header(out, "cotorsor", None, c.dim());
            emit(out, &c.verify())
        }
        Presentation::Twist(_) => {
            let tw = load_twist(spec, host)?;
            header(out, "twist", Some(tw.host().fingerprint()), tw.host().dim());
            emit(out, &tw.verify())
        }
        Presentation::Decorated(file) => {
            let t = file.torsor.clone();
            header(out, "decorated", Some(t.fingerprint()), t.dim());
            let report = t.verify();
            if !report.passed() {
                return Ok(emit(out, &report));
            }
            let d = from_decorated_file(spec, *file)?;
            let mut r = Report::new("decorated torsor");
            r.premise(report);
            r.push(torsorkit::Check::pass("i_l: H_l(T) → H is a Hopf isomorphism"));
            r.push(torsorkit::Check::pass("i_r: H_r(T) → H′ is a Hopf isomorphism"));
            r.note(format!(
                "dim H_l = {}, dim H_r = {}",
                d.left().dim(),
                d.right().dim()
            ));
            emit(out, &r)
        }
        other => return Err(CliError::Usage(format!("{spec}: nothing to verify in a {} file", other.kind()))),
    })
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Verify { kind, file, host } => {
            let doc = format::load(&file)?;
            let want = match kind {
                Kind::Algebra => "algebra",
                Kind::Hopf => "hopf",
                Kind::Torsor => "torsor",
                Kind::Cotorsor => "cotorsor",
                Kind::Twist => "twist",
                Kind::Decorated => "decorated",
            };
            // A Hopf algebra or torsor file also presents an algebra.
            let doc = match (kind, doc.presentation) {
                (Kind::Algebra, Presentation::Hopf(h)) => Document::new(Presentation::Algebra(h.algebra().clone())),
                (Kind::Algebra, Presentation::Torsor(t)) => Document::new(Presentation::Algebra(t.algebra().clone())),
                (_, p) if p.kind() == want => Document { presentation: p, meta: doc.meta },
                (_, p) => return Err(mismatch(&file, want, &p)),
            };
            verify_document(out, &file, doc, host.as_deref())
        }
        Command::Report { file } => {
            let doc = format::load(&file)?;
            verify_document(out, &file, doc, None)
        }
        Command::HopfSide { side, torsor, o } => {
            let t = load_verified(&torsor)?;
            let sub = SubHopf::compute(&t, side.into())?;
            let h = sub.hopf();
            let _ = writeln!(out, "{} Hopf algebra of dimension {}", sub.side().name(), sub.dim());
            let code = emit(out, &h.verify());
            let doc = Document::new(Presentation::Hopf(h.clone()))
                .with_meta("side", sub.side().name())
                .with_meta("torsor", t.fingerprint())
                .with_meta("carrier", sub.carrier().fingerprint());
            wrote(out, &doc, &o)?;
            Ok(code)
        }
        Command::Coactions { torsor } => {
            let t = load_verified(&torsor)?;
            let (hl, hr) = side_pair(&t)?;
            let _ = writeln!(out, "dim T = {}, dim H_l = {}, dim H_r = {}", t.dim(), hl.dim(), hr.dim());
            Ok(emit(out, &verify_coactions(&t, &hl, &hr)))
        }
        Command::Can { side, torsor } => {
            let t = load_verified(&torsor)?;
            let sub = SubHopf::compute(&t, side.into())?;
            let g = galois_can(&t, &sub)?;
            let _ = writeln!(out, "coinvariant dimension: {}", g.coinvariant_dim);
            Ok(emit(out, &g.report))
        }
        Command::Compose { t1, t2, phi, o } => {
            let a = load_verified(&t1)?;
            let b = load_verified(&t2)?;
            let block = match format::load(&phi)?.presentation {
                Presentation::Phi(m) => m,
                other => return Err(mismatch(&phi, "phi", &other)),
            };
            let hr1 = SubHopf::compute(&a, Side::Right)?;
            let hl2 = SubHopf::compute(&b, Side::Left)?;
            check_fingerprint("Φ source H_r(T1)", &block.source_fingerprint, &hr1.hopf().fingerprint())?;
            check_fingerprint("Φ target H_l(T2)", &block.target_fingerprint, &hl2.hopf().fingerprint())?;
            let iso = HopfIso::new(hr1.hopf().clone(), hl2.hopf().clone(), block.map)?;
            let c = compose_torsors(&a, &b, &iso)?;
            let isos = induced_side_isos(&c)?;
            let _ = writeln!(out, "composite of dimension {}", c.torsor().dim());
            let mut report = Report::new("composite torsor");
            report.premise(c.torsor().verify());
            report.premise(isos.report);
            let code = emit(out, &report);
            let doc = Document::new(Presentation::Torsor(Torsor::clone(c.torsor())))
                .with_meta("carrier", c.carrier().fingerprint())
                .with_meta("first", a.fingerprint())
                .with_meta("second", b.fingerprint());
            wrote(out, &doc, &o)?;
            Ok(code)
        }
        Command::Tor { op } => tor(op, out),
        Command::Twist { hopf, twist, o } => {
            let tw = load_twist(&twist, Some(&hopf))?;
            let report = tw.verify();
            let code = emit(out, &report);
            if code == EXIT_PASS {
                let hf = tw.twisted()?;
                wrote(out, &Document::new(Presentation::Hopf(hf)).with_meta("twist_host", tw.host().fingerprint()), &o)?;
            }
            Ok(code)
        }
        Command::Parmentier { hopf, twist, o } => {
            let tw = load_twist(&twist, Some(&hopf))?;
            let p = parmentier_cotorsor(&tw)?;
            let code = emit(out, &p.report);
            wrote(out, &Document::new(Presentation::Cotorsor(p.cotorsor)), &o)?;
            Ok(code)
        }
        Command::Dualize { file, o } => {
            let doc = format::load(&file)?;
            let dual = match doc.presentation {
                Presentation::Torsor(t) => Presentation::Cotorsor(dualize_torsor(&t)),
                Presentation::Cotorsor(c) => Presentation::Torsor(dualize_cotorsor(&c)?),
                Presentation::Hopf(h) => Presentation::Hopf(h.dual()),
                other => return Err(CliError::Usage(format!("{file}: cannot dualize a {} file", other.kind()))),
            };
            let report = match &dual {
                Presentation::Cotorsor(c) => Cotorsor::verify(c),
                Presentation::Torsor(t) => t.verify(),
                Presentation::Hopf(h) => h.verify(),
                _ => unreachable!(),
            };
            let code = emit(out, &report);
            wrote(out, &Document::new(dual), &o)?;
            Ok(code)
        }
        Command::Opposite { torsor, o, phi_out } => {
            let t = load_verified(&torsor)?;
            let op = t.opposite();
            wrote(out, &Document::new(Presentation::Torsor(Torsor::clone(&op))), &o)?;
            if let Some(path) = phi_out {
                let (_, psi) = opp_side_isos(&t)?;
                let b = block(psi.map(), psi.source().fingerprint(), psi.target().fingerprint());
                wrote(out, &Document::new(Presentation::Phi(b)).with_meta("map", "(Id⊗θ): H_r(T) → H_l(T^op)"), &path)?;
            }
            Ok(EXIT_PASS)
        }
        Command::Gallery { op } => match op {
            GalleryOp::List => {
                for line in recipes::listing() {
                    let _ = writeln!(out, "{line}");
                }
                Ok(EXIT_PASS)
            }
            GalleryOp::Build { name, o } => {
                let doc = recipes::build(&name)?;
                wrote(out, &doc, &o)?;
                Ok(EXIT_PASS)
            }
        },
    }
}

fn tor(op: TorOp, out: &mut dyn Write) -> Outcome {
    match op {
        TorOp::Unit { hopf, o } => {
            let h = load_hopf(&hopf)?.verified()?;
            let d = DecoratedTorsor::unit(&h)?;
            wrote(out, &decorated_doc(&d), &o)?;
            Ok(EXIT_PASS)
        }
        TorOp::Decorate { torsor, o } => {
            let t = load_verified(&torsor)?;
            let (hl, hr) = side_pair(&t)?;
            let d = DecoratedTorsor::from_isos(t, HopfIso::identity(hl.hopf().clone()), HopfIso::identity(hr.hopf().clone()))?;
            wrote(out, &decorated_doc(&d), &o)?;
            Ok(EXIT_PASS)
        }
        TorOp::Inverse { decorated, o } => {
            let d = load_decorated(&decorated)?.inverse()?;
            wrote(out, &decorated_doc(&d), &o)?;
            Ok(EXIT_PASS)
        }
        TorOp::Multiply {
            first,
            second,
            o,
            witness_out,
        } => {
            let a = load_decorated(&first)?;
            let b = load_decorated(&second)?;
            let p = a.multiply(&b)?;
            let _ = writeln!(out, "product of dimension {}", p.decorated.torsor().dim());
            let code = emit(out, &p.report);
            wrote(out, &decorated_doc(&p.decorated), &o)?;
            if let Some(path) = witness_out {
                let is_unit = |d: &DecoratedTorsor| -> Result<bool, CliError> {
                    let h = d.i_l().target();
                    let u = DecoratedTorsor::unit(h)?;
                    Ok(u.torsor() == d.torsor() && u.i_l().map() == d.i_l().map() && u.i_r().map() == d.i_r().map())
                };
                let (w, target) = if is_unit(&a)? {
                    (left_unit_witness(&p.composite, a.i_r().target())?, &b)
                } else if is_unit(&b)? {
                    (right_unit_witness(&p.composite, b.i_l().target())?, &a)
                } else {
                    return Err(CliError::Usage("--witness-out needs a unit factor".into()));
                };
                let blk = block(&w, p.decorated.torsor().fingerprint(), target.torsor().fingerprint());
                wrote(out, &Document::new(Presentation::Phi(blk)).with_meta("map", "counit on the unit factor"), &path)?;
            }
            Ok(code)
        }
        TorOp::Equiv { first, second, witness } => {
            let a = load_decorated(&first)?;
            let b = load_decorated(&second)?;
            let w = match format::load(&witness)?.presentation {
                Presentation::Phi(m) => m,
                other => return Err(mismatch(&witness, "phi", &other)),
            };
            check_fingerprint("witness source", &w.source_fingerprint, &a.torsor().fingerprint())?;
            check_fingerprint("witness target", &w.target_fingerprint, &b.torsor().fingerprint())?;
            let f = w.map.reshape(&[a.torsor().dim()], &[b.torsor().dim()])?;
            match verify_equivalence_witness(&f, &a, &b) {
                Ok(r) => Ok(emit(out, &r)),
                Err(e @ torsorkit::Error::WitnessRejected(_)) => {
                    let _ = writeln!(out, "FAIL equivalence witness ({e})");
                    let _ = writeln!(out, "RESULT FAIL");
                    Ok(EXIT_FAIL)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}
