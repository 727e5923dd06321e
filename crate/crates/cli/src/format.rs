//! The JSON presentation file format.
//!
//! Structure tensors are stored as sparse entry lists
//! `[target indices…, source indices…, "coefficient"]`; coefficients are
//! always strings. Matrices between carriers are dense and row-major.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde_json::{Map, Value};
use torsorkit::algebra::Algebra;
use torsorkit::cotorsor::{Coalgebra, Cotorsor};
use torsorkit::gallery::{registry_torsor, GaloisSpec};
use torsorkit::hopf::Hopf;
use torsorkit::tensor::{flat_index, multi_index, volume};
use torsorkit::torsor::Torsor;
use torsorkit::{FieldSpec, LinearMap, Scalar, Tensor};

use crate::CliError;

pub const FORMAT_VERSION: u64 = 1;
pub const REGISTRY_PREFIX: &str = "registry:";

/// A dense matrix between two carriers, tagged with their fingerprints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixBlock {
    pub map: LinearMap,
    pub source_fingerprint: String,
    pub target_fingerprint: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistFile {
    pub field: FieldSpec,
    pub basis: Vec<String>,
    pub f: Tensor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedFile {
    pub torsor: Torsor,
    pub left_reference: Hopf,
    pub right_reference: Hopf,
    pub i_l: MatrixBlock,
    pub i_r: MatrixBlock,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    Algebra(Algebra),
    Hopf(Hopf),
    Torsor(Torsor),
    Cotorsor(Cotorsor),
    Twist(TwistFile),
    Phi(MatrixBlock),
    Decorated(Box<DecoratedFile>),
    Galois(GaloisSpec),
}

impl Presentation {
    pub fn kind(&self) -> &'static str {
        match self {
            Presentation::Algebra(_) => "algebra",
            Presentation::Hopf(_) => "hopf",
            Presentation::Torsor(_) => "torsor",
            Presentation::Cotorsor(_) => "cotorsor",
            Presentation::Twist(_) => "twist",
            Presentation::Phi(_) => "phi",
            Presentation::Decorated(_) => "decorated",
            Presentation::Galois(_) => "galois",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub presentation: Presentation,
    pub meta: BTreeMap<String, String>,
}

impl Document {
    pub fn new(presentation: Presentation) -> Self {
        Document {
            presentation,
            meta: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }
}

// ---------------------------------------------------------------- reading

fn err(path: &str, message: impl Into<String>) -> CliError {
    CliError::Format {
        path: path.to_string(),
        message: message.into(),
    }
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, CliError> {
    obj.get(key).ok_or_else(|| err(path, format!("missing field \"{key}\"")))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize, CliError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| err(path, "expected a non-negative integer"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, CliError> {
    v.as_str().ok_or_else(|| err(path, "expected a string"))
}

fn scalar(field: FieldSpec, v: &Value, path: &str) -> Result<Scalar, CliError> {
    let text = as_str(v, path)?;
    field.parse(text).map_err(|e| err(path, e.to_string()))
}

fn read_field(v: &Value, path: &str) -> Result<FieldSpec, CliError> {
    let obj = as_object(v, path)?;
    match as_str(get(obj, "kind", path)?, &format!("{path}.kind"))? {
        "rationals" => Ok(FieldSpec::Rationals),
        "prime" => {
            let p = get(obj, "p", path)?
                .as_u64()
                .ok_or_else(|| err(&format!("{path}.p"), "expected a prime"))?;
            FieldSpec::prime(p).map_err(|e| err(&format!("{path}.p"), e.to_string()))
        }
        other => Err(err(&format!("{path}.kind"), format!("unknown field kind {other:?}"))),
    }
}

/// Legs of each named table: (target, source).
fn table_shape(name: &str) -> (usize, usize) {
    match name {
        "mul" => (1, 2),
        "unit" => (1, 0),
        "comul" => (2, 1),
        "counit" => (0, 1),
        "antipode" | "theta" => (1, 1),
        "mu" => (3, 1),
        "nu" => (1, 3),
        "F" => (2, 0),
        _ => unreachable!("unknown table {name}"),
    }
}

struct Reader<'a> {
    field: FieldSpec,
    dim: usize,
    tables: Option<&'a Map<String, Value>>,
    path: String,
}

impl<'a> Reader<'a> {
    fn table(&self, name: &str) -> Result<Option<LinearMap>, CliError> {
        let Some(v) = self.tables.and_then(|t| t.get(name)) else {
            return Ok(None);
        };
        let path = format!("{}.tables.{name}", self.path);
        let (t, s) = table_shape(name);
        let n = self.dim;
        let target = vec![n; t];
        let source = vec![n; s];
        let mut columns = vec![Tensor::zeros(self.field, &target); volume(&source)];
        let mut seen = std::collections::HashSet::new();
        for (e, entry) in as_array(v, &path)?.iter().enumerate() {
            let epath = format!("{path}[{e}]");
            let items = as_array(entry, &epath)?;
            if items.len() != t + s + 1 {
                return Err(err(
                    &epath,
                    format!("expected {} indices and a coefficient, found {} items", t + s, items.len()),
                ));
            }
            let mut idx = Vec::with_capacity(t + s);
            for (k, item) in items[..t + s].iter().enumerate() {
                let i = as_usize(item, &format!("{epath}[{k}]"))?;
                if i >= n {
                    return Err(CliError::IndexOutOfRange {
                        path: format!("{epath}[{k}]"),
                        index: i,
                        dim: n,
                    });
                }
                idx.push(i);
            }
            if !seen.insert(idx.clone()) {
                return Err(err(&epath, "duplicate entry"));
            }
            let c = scalar(self.field, &items[t + s], &format!("{epath}[{}]", t + s))?;
            let col = flat_index(&source, &idx[t..]);
            let row = flat_index(&target, &idx[..t]);
            columns[col].set(row, c);
        }
        LinearMap::from_columns(self.field, &source, &target, columns)
            .map(Some)
            .map_err(|e| err(&path, e.to_string()))
    }

    fn required(&self, name: &str) -> Result<LinearMap, CliError> {
        self.table(name)?
            .ok_or_else(|| err(&format!("{}.tables", self.path), format!("missing table \"{name}\"")))
    }

    fn algebra(&self, basis: Vec<String>) -> Result<Algebra, CliError> {
        let mul = self.required("mul")?;
        let unit = self.required("unit")?.column(0).clone();
        Algebra::new(self.field, basis, mul, unit).map_err(|e| err(&self.path, e.to_string()))
    }
}

fn read_matrix(field: FieldSpec, v: &Value, path: &str) -> Result<MatrixBlock, CliError> {
    let obj = as_object(v, path)?;
    let rows = as_usize(get(obj, "rows", path)?, &format!("{path}.rows"))?;
    let cols = as_usize(get(obj, "cols", path)?, &format!("{path}.cols"))?;
    let mpath = format!("{path}.matrix");
    let items = as_array(get(obj, "matrix", path)?, &mpath)?;
    if items.len() != rows * cols {
        return Err(err(&mpath, format!("expected {} entries, found {}", rows * cols, items.len())));
    }
    let entries = items
        .iter()
        .enumerate()
        .map(|(i, x)| scalar(field, x, &format!("{mpath}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let map = LinearMap::from_matrix(field, rows, cols, &entries).map_err(|e| err(path, e.to_string()))?;
    let fp = |k: &str| -> Result<String, CliError> {
        Ok(as_str(get(obj, k, path)?, &format!("{path}.{k}"))?.to_string())
    };
    Ok(MatrixBlock {
        map,
        source_fingerprint: fp("source_fingerprint")?,
        target_fingerprint: fp("target_fingerprint")?,
    })
}

fn read_body(obj: &Map<String, Value>, path: &str) -> Result<Presentation, CliError> {
    let version = get(obj, "format_version", path)?
        .as_u64()
        .ok_or_else(|| err(&format!("{path}.format_version"), "expected an integer"))?;
    if version != FORMAT_VERSION {
        return Err(CliError::UnsupportedVersion(version));
    }
    let kind = as_str(get(obj, "kind", path)?, &format!("{path}.kind"))?;
    let field = read_field(get(obj, "field", path)?, &format!("{path}.field"))?;

    match kind {
        "phi" => return read_matrix(field, &Value::Object(obj.clone()), path).map(Presentation::Phi),
        "galois" => {
            let poly = as_array(get(obj, "poly", path)?, &format!("{path}.poly"))?
                .iter()
                .enumerate()
                .map(|(i, v)| scalar(field, v, &format!("{path}.poly[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let mut action = Vec::new();
            for (s, sigma) in as_array(get(obj, "action", path)?, &format!("{path}.action"))?
                .iter()
                .enumerate()
            {
                let spath = format!("{path}.action[{s}]");
                action.push(
                    as_array(sigma, &spath)?
                        .iter()
                        .enumerate()
                        .map(|(i, v)| scalar(field, v, &format!("{spath}[{i}]")))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            return Ok(Presentation::Galois(GaloisSpec { field, poly, action }));
        }
        _ => {}
    }

    let dim = as_usize(get(obj, "dim", path)?, &format!("{path}.dim"))?;
    let basis: Vec<String> = as_array(get(obj, "basis", path)?, &format!("{path}.basis"))?
        .iter()
        .enumerate()
        .map(|(i, v)| as_str(v, &format!("{path}.basis[{i}]")).map(str::to_string))
        .collect::<Result<_, _>>()?;
    if basis.len() != dim {
        return Err(err(&format!("{path}.basis"), format!("{} labels for dimension {dim}", basis.len())));
    }
    let tables = match obj.get("tables") {
        Some(t) => Some(as_object(t, &format!("{path}.tables"))?),
        None => None,
    };
    let r = Reader {
        field,
        dim,
        tables,
        path: path.to_string(),
    };
    let core = |e: torsorkit::Error| err(path, e.to_string());

    Ok(match kind {
        "algebra" => Presentation::Algebra(r.algebra(basis)?),
        "hopf" => {
            let a = r.algebra(basis)?;
            Presentation::Hopf(
                Hopf::new(a, r.required("comul")?, r.required("counit")?, r.required("antipode")?).map_err(core)?,
            )
        }
        "torsor" => {
            let a = r.algebra(basis)?;
            Presentation::Torsor(Torsor::new(a, r.required("mu")?, r.table("theta")?).map_err(core)?)
        }
        "cotorsor" => {
            let c = Coalgebra::new(field, basis, r.required("comul")?, r.required("counit")?).map_err(core)?;
            Presentation::Cotorsor(Cotorsor::new(c, r.required("nu")?, r.required("theta")?).map_err(core)?)
        }
        "twist" => Presentation::Twist(TwistFile {
            field,
            basis,
            f: r.required("F")?.column(0).clone(),
        }),
        "decorated" => {
            let a = r.algebra(basis)?;
            let torsor = Torsor::new(a, r.required("mu")?, r.table("theta")?).map_err(core)?;
            let reference = |key: &str| -> Result<Hopf, CliError> {
                let p = format!("{path}.{key}");
                match read_body(as_object(get(obj, key, path)?, &p)?, &p)? {
                    Presentation::Hopf(h) => Ok(h),
                    other => Err(err(&p, format!("expected a hopf presentation, found {}", other.kind()))),
                }
            };
            Presentation::Decorated(Box::new(DecoratedFile {
                torsor,
                left_reference: reference("left_reference")?,
                right_reference: reference("right_reference")?,
                i_l: read_matrix(field, get(obj, "i_l", path)?, &format!("{path}.i_l"))?,
                i_r: read_matrix(field, get(obj, "i_r", path)?, &format!("{path}.i_r"))?,
            }))
        }
        other => return Err(err(&format!("{path}.kind"), format!("unknown kind {other:?}"))),
    })
}

pub fn parse_str(text: &str) -> Result<Document, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Format {
        path: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let obj = as_object(&v, "$")?;
    let presentation = read_body(obj, "$")?;
    let mut meta = BTreeMap::new();
    if let Some(m) = obj.get("meta") {
        for (k, v) in as_object(m, "$.meta")? {
            meta.insert(k.clone(), as_str(v, &format!("$.meta.{k}"))?.to_string());
        }
    }
    Ok(Document { presentation, meta })
}

/// Reads a file, or builds a registry entry for `registry:<name>`.
pub fn load(spec: &str) -> Result<Document, CliError> {
    if let Some(name) = spec.strip_prefix(REGISTRY_PREFIX) {
        let t = registry_torsor(name)?;
        return Ok(Document::new(Presentation::Torsor(t.into_inner())).with_meta("source", spec));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| CliError::Io {
        path: spec.to_string(),
        message: e.to_string(),
    })?;
    parse_str(&text).map_err(|e| match e {
        CliError::Format { path, message } => CliError::Format {
            path: format!("{spec}: {path}"),
            message,
        },
        other => other,
    })
}

// ---------------------------------------------------------------- writing

fn field_value(f: FieldSpec) -> Value {
    let mut m = Map::new();
    match f {
        FieldSpec::Rationals => {
            m.insert("kind".into(), "rationals".into());
        }
        FieldSpec::Prime(p) => {
            m.insert("kind".into(), "prime".into());
            m.insert("p".into(), p.into());
        }
    }
    Value::Object(m)
}

fn entries(map: &LinearMap) -> Value {
    let mut out = Vec::new();
    for (col, c) in map.columns().iter().enumerate() {
        let s = multi_index(map.source(), col);
        for (row, x) in c.nonzeros() {
            let mut e: Vec<Value> = multi_index(map.target(), row).into_iter().map(Value::from).collect();
            e.extend(s.iter().map(|&i| Value::from(i)));
            e.push(x.to_string().into());
            out.push(Value::Array(e));
        }
    }
    Value::Array(out)
}

fn tensor_map(f: FieldSpec, t: &Tensor) -> LinearMap {
    LinearMap::from_columns(f, &[], t.dims(), vec![t.clone()]).expect("tensor as a map")
}

fn header(kind: &str, field: FieldSpec) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("format_version".into(), FORMAT_VERSION.into());
    m.insert("kind".into(), kind.into());
    m.insert("field".into(), field_value(field));
    m
}

fn with_basis(mut m: Map<String, Value>, labels: &[String]) -> Map<String, Value> {
    m.insert("dim".into(), labels.len().into());
    m.insert("basis".into(), labels.iter().map(|s| Value::from(s.as_str())).collect());
    m
}

fn algebra_tables(a: &Algebra) -> Map<String, Value> {
    let mut t = Map::new();
    t.insert("mul".into(), entries(a.mul()));
    t.insert("unit".into(), entries(&tensor_map(a.field(), a.unit())));
    t
}

fn hopf_body(h: &Hopf) -> Map<String, Value> {
    let mut m = with_basis(header("hopf", h.field()), h.labels());
    let mut t = algebra_tables(h.algebra());
    t.insert("comul".into(), entries(h.comul()));
    t.insert("counit".into(), entries(h.counit()));
    t.insert("antipode".into(), entries(h.antipode()));
    m.insert("tables".into(), Value::Object(t));
    m
}

fn torsor_tables(t: &Torsor) -> Map<String, Value> {
    let mut tables = algebra_tables(t.algebra());
    tables.insert("mu".into(), entries(t.mu()));
    tables.insert("theta".into(), entries(t.theta()));
    tables
}

fn matrix_value(mut m: Map<String, Value>, b: &MatrixBlock) -> Map<String, Value> {
    m.insert("rows".into(), b.map.rows().into());
    m.insert("cols".into(), b.map.cols().into());
    m.insert("source_fingerprint".into(), b.source_fingerprint.clone().into());
    m.insert("target_fingerprint".into(), b.target_fingerprint.clone().into());
    m.insert(
        "matrix".into(),
        b.map.to_matrix().iter().map(|x| Value::from(x.to_string())).collect(),
    );
    m
}

fn body(p: &Presentation) -> Map<String, Value> {
    match p {
        Presentation::Algebra(a) => {
            let mut m = with_basis(header("algebra", a.field()), a.labels());
            m.insert("tables".into(), Value::Object(algebra_tables(a)));
            m
        }
        Presentation::Hopf(h) => hopf_body(h),
        Presentation::Torsor(t) => {
            let mut m = with_basis(header("torsor", t.field()), t.labels());
            m.insert("tables".into(), Value::Object(torsor_tables(t)));
            m
        }
        Presentation::Cotorsor(c) => {
            let mut m = with_basis(header("cotorsor", c.field()), c.labels());
            let mut t = Map::new();
            t.insert("comul".into(), entries(c.coalgebra().comul()));
            t.insert("counit".into(), entries(c.coalgebra().counit()));
            t.insert("nu".into(), entries(c.nu()));
            t.insert("theta".into(), entries(c.theta()));
            m.insert("tables".into(), Value::Object(t));
            m
        }
        Presentation::Twist(tw) => {
            let mut m = with_basis(header("twist", tw.field), &tw.basis);
            let mut t = Map::new();
            t.insert("F".into(), entries(&tensor_map(tw.field, &tw.f)));
            m.insert("tables".into(), Value::Object(t));
            m
        }
        Presentation::Phi(b) => matrix_value(header("phi", b.map.field()), b),
        Presentation::Decorated(d) => {
            let mut m = with_basis(header("decorated", d.torsor.field()), d.torsor.labels());
            m.insert("tables".into(), Value::Object(torsor_tables(&d.torsor)));
            m.insert("left_reference".into(), Value::Object(hopf_body(&d.left_reference)));
            m.insert("right_reference".into(), Value::Object(hopf_body(&d.right_reference)));
            m.insert("i_l".into(), Value::Object(matrix_value(Map::new(), &d.i_l)));
            m.insert("i_r".into(), Value::Object(matrix_value(Map::new(), &d.i_r)));
            m
        }
        Presentation::Galois(g) => {
            let mut m = header("galois", g.field);
            let strings = |v: &[Scalar]| -> Value { v.iter().map(|x| Value::from(x.to_string())).collect() };
            m.insert("poly".into(), strings(&g.poly));
            m.insert("action".into(), g.action.iter().map(|s| strings(s)).collect());
            m
        }
    }
}

fn is_leaf(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

/// Pretty-prints with scalar-only arrays and small scalar objects on one
/// line, so that each table entry occupies exactly one line.
fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    let close = "  ".repeat(indent);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_leaf) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad);
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{close}]");
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) if m.len() <= 2 && m.values().all(is_leaf) => {
            out.push('{');
            for (i, (k, x)) in m.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{}: {}", Value::from(k.as_str()), x);
            }
            out.push('}');
        }
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                let _ = write!(out, "{pad}{}: ", Value::from(k.as_str()));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{close}}}");
        }
        leaf => out.push_str(&leaf.to_string()),
    }
}

/// The canonical text of a document.
pub fn to_string(doc: &Document) -> String {
    let mut m = body(&doc.presentation);
    let meta: Map<String, Value> = doc.meta.iter().map(|(k, v)| (k.clone(), Value::from(v.as_str()))).collect();
    m.insert("meta".into(), Value::Object(meta));
    let mut out = String::new();
    write_value(&Value::Object(m), 0, &mut out);
    out.push('\n');
    out
}

pub fn save(doc: &Document, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, to_string(doc)).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
