//! Versioned JSON problem documents and their conversion to and from
//! library objects.
//!
//! Exact-backend numbers are strings such as `"3/4"` or `"-2"`; approx
//! numbers are plain JSON numbers.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{format_rational, parse_rational, Cplx, HermMatrix, Mat, MultiIndex, Real, Q};
use crate::linop::PolyOperator;
use crate::matpoly::{MatrixPolynomial, RegionK, RegionKind};
use crate::measures::{AtomicMapMeasure, AtomicOperatorMeasure, ChoiMap, MapAtom, OperatorAtom};
use crate::moments::OperatorSequence;
use crate::preserver::CovariantMeasureFamily;

pub const FORMAT_VERSION: &str = "1";

/// Error raised while reading a document; `field` is a dotted path.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{field}: {message}")]
pub struct DocError {
    pub field: String,
    pub message: String,
}

impl DocError {
    fn new(field: impl Into<String>, message: impl std::fmt::Display) -> Self {
        DocError { field: field.into(), message: message.to_string() }
    }
}

pub type DocResult<T> = std::result::Result<T, DocError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Approx,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Kind {
    Operator,
    Measure,
    MapMeasureFamily,
    Sequence,
    Region,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psd: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub re: Vec<Vec<Number>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<Number>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub exponents: Vec<u32>,
    pub coeff: MatrixDoc,
}

pub type PolyDoc = Vec<TermDoc>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ImageDoc {
    pub basis_index: usize,
    pub exponents: Vec<u32>,
    pub image: PolyDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct OperatorDoc {
    pub nvars: usize,
    pub dim: usize,
    pub max_deg: u32,
    pub images: Vec<ImageDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum RegionDoc {
    All { nvars: usize },
    Box { lo: Vec<Number>, hi: Vec<Number> },
    Ball { center: Vec<Number>, radius: Number },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDoc {
    pub point: Vec<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choi: Option<MatrixDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    pub nvars: usize,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<RegionDoc>,
    pub atoms: Vec<AtomDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyAtomDoc {
    pub offset: Vec<Number>,
    pub choi: MatrixDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub nvars: usize,
    pub dim: usize,
    pub region: RegionDoc,
    pub atoms: Vec<FamilyAtomDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub exponents: Vec<u32>,
    pub matrix: MatrixDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDoc {
    pub nvars: usize,
    pub dim: usize,
    pub order: u32,
    pub entries: Vec<EntryDoc>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Operator(OperatorDoc),
    Measure(MeasureDoc),
    MapMeasureFamily(FamilyDoc),
    Sequence(SequenceDoc),
    Region(RegionDoc),
}

impl Payload {
    pub fn kind(&self) -> Kind {
        match self {
            Payload::Operator(_) => Kind::Operator,
            Payload::Measure(_) => Kind::Measure,
            Payload::MapMeasureFamily(_) => Kind::MapMeasureFamily,
            Payload::Sequence(_) => Kind::Sequence,
            Payload::Region(_) => Kind::Region,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub backend: Backend,
    pub tolerances: Option<Tolerances>,
    pub payload: Payload,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    version: String,
    kind: Kind,
    backend: Backend,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tolerances: Option<Tolerances>,
    payload: Value,
}

fn typed_payload<T: serde::de::DeserializeOwned>(v: Value) -> DocResult<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "payload".to_string() } else { format!("payload.{path}") };
        DocError::new(field, e.into_inner())
    })
}

/// Parses a document; errors name the offending field, with line and column
/// for syntax errors.
pub fn parse_document(text: &str) -> DocResult<Document> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawDocument = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        DocError::new(if path == "." { "document".to_string() } else { path }, e.into_inner())
    })?;
    if raw.version != FORMAT_VERSION {
        return Err(DocError::new("version", format!("unsupported version {:?}, expected \"1\"", raw.version)));
    }
    let payload = match raw.kind {
        Kind::Operator => Payload::Operator(typed_payload(raw.payload)?),
        Kind::Measure => Payload::Measure(typed_payload(raw.payload)?),
        Kind::MapMeasureFamily => Payload::MapMeasureFamily(typed_payload(raw.payload)?),
        Kind::Sequence => Payload::Sequence(typed_payload(raw.payload)?),
        Kind::Region => Payload::Region(typed_payload(raw.payload)?),
    };
    Ok(Document { backend: raw.backend, tolerances: raw.tolerances, payload })
}

/// Pretty-printed JSON with a trailing newline.
pub fn render_document(doc: &Document) -> String {
    let payload = match &doc.payload {
        Payload::Operator(p) => serde_json::to_value(p),
        Payload::Measure(p) => serde_json::to_value(p),
        Payload::MapMeasureFamily(p) => serde_json::to_value(p),
        Payload::Sequence(p) => serde_json::to_value(p),
        Payload::Region(p) => serde_json::to_value(p),
    }
    .expect("document values serialize");
    let raw = RawDocument {
        version: FORMAT_VERSION.to_string(),
        kind: doc.payload.kind(),
        backend: doc.backend,
        tolerances: doc.tolerances.clone(),
        payload,
    };
    let mut s = serde_json::to_string_pretty(&raw).expect("document values serialize");
    s.push('\n');
    s
}

/// Scalars with a JSON representation tied to a backend.
pub trait JsonScalar: Real {
    const BACKEND: Backend;
    fn from_number(n: &Number) -> std::result::Result<Self, String>;
    fn to_number(&self) -> Number;

    fn to_json(&self) -> Value {
        serde_json::to_value(self.to_number()).expect("numbers serialize")
    }
}

impl JsonScalar for Q {
    const BACKEND: Backend = Backend::Exact;

    fn from_number(n: &Number) -> std::result::Result<Self, String> {
        match n {
            Number::Text(s) => parse_rational(s).ok_or_else(|| format!("cannot parse {s:?} as a rational")),
            Number::Float(v) => Err(format!("exact backend expects a \"p/q\" string, found number {v}")),
        }
    }

    fn to_number(&self) -> Number {
        Number::Text(format_rational(self))
    }
}

impl JsonScalar for f64 {
    const BACKEND: Backend = Backend::Approx;

    fn from_number(n: &Number) -> std::result::Result<Self, String> {
        match n {
            Number::Float(v) => Ok(*v),
            Number::Text(s) => Err(format!("approx backend expects a JSON number, found string {s:?}")),
        }
    }

    fn to_number(&self) -> Number {
        Number::Float(*self)
    }
}

fn scalar<R: JsonScalar>(n: &Number, field: &str) -> DocResult<R> {
    R::from_number(n).map_err(|m| DocError::new(field, m))
}

fn vector<R: JsonScalar>(v: &[Number], len: usize, field: &str) -> DocResult<Vec<R>> {
    if v.len() != len {
        return Err(DocError::new(field, format!("expected {len} coordinates, found {}", v.len())));
    }
    v.iter().enumerate().map(|(i, n)| scalar(n, &format!("{field}[{i}]"))).collect()
}

fn exponents(e: &[u32], nvars: usize, field: &str) -> DocResult<MultiIndex> {
    if e.len() != nvars {
        return Err(DocError::new(field, format!("expected {nvars} exponents, found {}", e.len())));
    }
    Ok(MultiIndex::new(e.to_vec()))
}

fn real_grid<R: JsonScalar>(rows: &[Vec<Number>], dim: usize, field: &str) -> DocResult<Vec<Vec<R>>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(DocError::new(field, format!("expected a {dim}×{dim} array")));
    }
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter().enumerate().map(|(j, n)| scalar(n, &format!("{field}[{i}][{j}]"))).collect()
        })
        .collect()
}

pub fn matrix_from_doc<R: JsonScalar>(m: &MatrixDoc, dim: usize, field: &str) -> DocResult<HermMatrix<R>> {
    let re = real_grid::<R>(&m.re, dim, &format!("{field}.re"))?;
    let im = match &m.im {
        Some(im) => real_grid::<R>(im, dim, &format!("{field}.im"))?,
        None => vec![vec![R::zero(); dim]; dim],
    };
    let mat = Mat::from_fn(dim, dim, |i, j| Cplx::new(re[i][j].clone(), im[i][j].clone()));
    HermMatrix::new(mat).map_err(|e| DocError::new(field, e))
}

pub fn matrix_to_doc<R: JsonScalar>(m: &HermMatrix<R>) -> MatrixDoc {
    let d = m.dim();
    let grid = |f: &dyn Fn(&Cplx<R>) -> R| -> Vec<Vec<Number>> {
        (0..d).map(|i| (0..d).map(|j| f(m.get(i, j)).to_number()).collect()).collect()
    };
    let has_im = (0..d).any(|i| (0..d).any(|j| !m.get(i, j).im.is_zero()));
    MatrixDoc { re: grid(&|z| z.re.clone()), im: has_im.then(|| grid(&|z| z.im.clone())) }
}

pub fn poly_from_doc<R: JsonScalar>(
    terms: &[TermDoc],
    nvars: usize,
    dim: usize,
    field: &str,
) -> DocResult<MatrixPolynomial<R>> {
    let mut p = MatrixPolynomial::zero(nvars, dim);
    for (k, t) in terms.iter().enumerate() {
        let f = format!("{field}[{k}]");
        let alpha = exponents(&t.exponents, nvars, &format!("{f}.exponents"))?;
        p.add_term(alpha, &matrix_from_doc(&t.coeff, dim, &format!("{f}.coeff"))?);
    }
    Ok(p)
}

pub fn poly_to_doc<R: JsonScalar>(p: &MatrixPolynomial<R>) -> PolyDoc {
    p.terms()
        .map(|(a, c)| TermDoc { exponents: a.exponents().to_vec(), coeff: matrix_to_doc(c) })
        .collect()
}

pub fn operator_from_doc<R: JsonScalar>(op: &OperatorDoc) -> DocResult<PolyOperator<R>> {
    let mut images = std::collections::BTreeMap::new();
    for (k, img) in op.images.iter().enumerate() {
        let f = format!("payload.images[{k}]");
        if img.basis_index >= op.dim * op.dim {
            return Err(DocError::new(format!("{f}.basisIndex"), format!("must be below {}", op.dim * op.dim)));
        }
        let alpha = exponents(&img.exponents, op.nvars, &format!("{f}.exponents"))?;
        let p = poly_from_doc(&img.image, op.nvars, op.dim, &format!("{f}.image"))?;
        if images.insert((img.basis_index, alpha), p).is_some() {
            return Err(DocError::new(f, "duplicate basis image"));
        }
    }
    PolyOperator::from_images(op.nvars, op.dim, op.max_deg, images).map_err(|e| DocError::new("payload.images", e))
}

pub fn operator_to_doc<R: JsonScalar>(t: &PolyOperator<R>) -> OperatorDoc {
    OperatorDoc {
        nvars: t.nvars(),
        dim: t.dim(),
        max_deg: t.max_deg(),
        images: t
            .images()
            .iter()
            .map(|((i, a), p)| ImageDoc { basis_index: *i, exponents: a.exponents().to_vec(), image: poly_to_doc(p) })
            .collect(),
    }
}

fn region_number(n: &Number, backend: Backend, field: &str) -> DocResult<Q> {
    match backend {
        Backend::Exact => scalar::<Q>(n, field),
        Backend::Approx => {
            let v = scalar::<f64>(n, field)?;
            v.to_rational().ok_or_else(|| DocError::new(field, "not a finite number"))
        }
    }
}

pub fn region_from_doc(r: &RegionDoc, backend: Backend, field: &str) -> DocResult<RegionK> {
    let list = |v: &[Number], name: &str| -> DocResult<Vec<Q>> {
        v.iter().enumerate().map(|(i, n)| region_number(n, backend, &format!("{field}.{name}[{i}]"))).collect()
    };
    let out = match r {
        RegionDoc::All { nvars } => Ok(RegionK::all_space(*nvars)),
        RegionDoc::Box { lo, hi } => RegionK::boxed(list(lo, "lo")?, list(hi, "hi")?),
        RegionDoc::Ball { center, radius } => {
            RegionK::ball(list(center, "center")?, region_number(radius, backend, &format!("{field}.radius"))?)
        }
    };
    out.map_err(|e| DocError::new(field, e))
}

fn region_value<R: JsonScalar>(q: &Q) -> Number {
    crate::algebra::convert::<Q, R>(q).to_number()
}

/// The geometry of `K − shift` in the given backend.
pub fn region_to_doc<R: JsonScalar>(k: &RegionK) -> RegionDoc {
    let sub = |v: &[Q]| -> Vec<Number> {
        v.iter().zip(k.shift()).map(|(a, s)| region_value::<R>(&(a - s))).collect()
    };
    match k.kind() {
        RegionKind::AllSpace { nvars } => RegionDoc::All { nvars: *nvars },
        RegionKind::Box { lo, hi } => RegionDoc::Box { lo: sub(lo), hi: sub(hi) },
        RegionKind::Ball { center, radius } => RegionDoc::Ball { center: sub(center), radius: region_value::<R>(radius) },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LoadedMeasure<R: Real> {
    Operator(AtomicOperatorMeasure<R>),
    Map(AtomicMapMeasure<R>),
}

pub fn measure_from_doc<R: JsonScalar>(m: &MeasureDoc, tol: f64) -> DocResult<LoadedMeasure<R>> {
    let support = match &m.support {
        Some(r) => region_from_doc(r, R::BACKEND, "payload.support")?,
        None => RegionK::all_space(m.nvars),
    };
    if support.nvars() != m.nvars {
        return Err(DocError::new("payload.support", format!("region has {} variables, expected {}", support.nvars(), m.nvars)));
    }
    let is_map = m.atoms.first().is_some_and(|a| a.choi.is_some());
    let mut op_atoms = Vec::new();
    let mut map_atoms = Vec::new();
    for (k, a) in m.atoms.iter().enumerate() {
        let f = format!("payload.atoms[{k}]");
        let point = vector::<R>(&a.point, m.nvars, &format!("{f}.point"))?;
        match (&a.weight, &a.choi, is_map) {
            (Some(w), None, false) => {
                let weight = matrix_from_doc(w, m.dim, &format!("{f}.weight"))?;
                op_atoms.push(OperatorAtom { point, weight });
            }
            (None, Some(c), true) => {
                let choi = matrix_from_doc(c, m.dim * m.dim, &format!("{f}.choi"))?;
                let map = ChoiMap::from_choi(m.dim, choi).map_err(|e| DocError::new(format!("{f}.choi"), e))?;
                map_atoms.push(MapAtom { point, map });
            }
            _ => {
                return Err(DocError::new(
                    f,
                    "every atom needs exactly one of \"weight\" or \"choi\", the same for all atoms",
                ))
            }
        }
    }
    if is_map {
        AtomicMapMeasure::with_tol(m.dim, map_atoms, support, tol)
            .map(LoadedMeasure::Map)
            .map_err(|e| DocError::new("payload.atoms", e))
    } else {
        AtomicOperatorMeasure::with_tol(m.dim, op_atoms, support, tol)
            .map(LoadedMeasure::Operator)
            .map_err(|e| DocError::new("payload.atoms", e))
    }
}

pub fn operator_measure_to_doc<R: JsonScalar>(mu: &AtomicOperatorMeasure<R>) -> MeasureDoc {
    MeasureDoc {
        nvars: mu.nvars(),
        dim: mu.dim(),
        support: Some(region_to_doc::<R>(mu.support())),
        atoms: mu
            .atoms()
            .iter()
            .map(|a| AtomDoc {
                point: a.point.iter().map(JsonScalar::to_number).collect(),
                weight: Some(matrix_to_doc(&a.weight)),
                choi: None,
            })
            .collect(),
    }
}

pub fn family_from_doc<R: JsonScalar>(f: &FamilyDoc, tol: f64) -> DocResult<CovariantMeasureFamily<R>> {
    let region = region_from_doc(&f.region, R::BACKEND, "payload.region")?;
    if region.nvars() != f.nvars {
        return Err(DocError::new("payload.region", format!("region has {} variables, expected {}", region.nvars(), f.nvars)));
    }
    let mut offsets = Vec::new();
    let mut maps = Vec::new();
    for (k, a) in f.atoms.iter().enumerate() {
        let field = format!("payload.atoms[{k}]");
        offsets.push(vector::<R>(&a.offset, f.nvars, &format!("{field}.offset"))?);
        let choi = matrix_from_doc(&a.choi, f.dim * f.dim, &format!("{field}.choi"))?;
        maps.push(ChoiMap::from_choi(f.dim, choi).map_err(|e| DocError::new(format!("{field}.choi"), e))?);
    }
    CovariantMeasureFamily::new(offsets, maps, region, tol).map_err(|e| DocError::new("payload.atoms", e))
}

pub fn family_to_doc<R: JsonScalar>(f: &CovariantMeasureFamily<R>) -> FamilyDoc {
    FamilyDoc {
        nvars: f.nvars(),
        dim: f.dim(),
        region: region_to_doc::<R>(f.region()),
        atoms: f
            .offsets()
            .iter()
            .zip(f.maps())
            .map(|(c, m)| FamilyAtomDoc {
                offset: c.iter().map(JsonScalar::to_number).collect(),
                choi: matrix_to_doc(m.choi()),
            })
            .collect(),
    }
}

pub fn sequence_from_doc<R: JsonScalar>(s: &SequenceDoc) -> DocResult<OperatorSequence<R>> {
    let mut entries = std::collections::BTreeMap::new();
    for (k, e) in s.entries.iter().enumerate() {
        let f = format!("payload.entries[{k}]");
        let alpha = exponents(&e.exponents, s.nvars, &format!("{f}.exponents"))?;
        let m = matrix_from_doc(&e.matrix, s.dim, &format!("{f}.matrix"))?;
        if entries.insert(alpha, m).is_some() {
            return Err(DocError::new(f, "duplicate entry"));
        }
    }
    OperatorSequence::new(s.nvars, s.dim, s.order, entries).map_err(|e| DocError::new("payload.entries", e))
}

pub fn sequence_to_doc<R: JsonScalar>(s: &OperatorSequence<R>) -> SequenceDoc {
    SequenceDoc {
        nvars: s.nvars(),
        dim: s.dim(),
        order: s.order(),
        entries: s
            .entries()
            .iter()
            .map(|(a, m)| EntryDoc { exponents: a.exponents().to_vec(), matrix: matrix_to_doc(m) })
            .collect(),
    }
}

/// Wraps a payload in a document for the backend of `R`.
pub fn document<R: JsonScalar>(payload: Payload) -> Document {
    Document { backend: R::BACKEND, tolerances: None, payload }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::shift_example_operator;
    use crate::moments::bisgaard_sequence;

    fn qi(v: i64) -> Q {
        <Q as Real>::from_i64(v)
    }

    #[test]
    fn operator_round_trip() {
        let t = shift_example_operator(&ChoiMap::<Q>::depolarizing(2), &qi(2), 2).unwrap();
        let doc = document::<Q>(Payload::Operator(operator_to_doc(&t)));
        let text = render_document(&doc);
        let back = parse_document(&text).unwrap();
        assert_eq!(back, doc);
        let Payload::Operator(op) = &back.payload else { panic!() };
        assert_eq!(operator_from_doc::<Q>(op).unwrap(), t);
    }

    #[test]
    fn approx_sequence_round_trip() {
        let s = bisgaard_sequence(1).unwrap().convert::<f64>();
        let doc = document::<f64>(Payload::Sequence(sequence_to_doc(&s)));
        let back = parse_document(&render_document(&doc)).unwrap();
        assert_eq!(back, doc);
        let Payload::Sequence(sd) = &back.payload else { panic!() };
        assert_eq!(sequence_from_doc::<f64>(sd).unwrap(), s);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"version":"1","kind":"region","backend":"exact","payload":{"type":"all","nvars":1},"extra":1}"#;
        let e = parse_document(text).unwrap_err();
        assert!(e.message.contains("extra"), "{e}");
        let text = r#"{"version":"1","kind":"region","backend":"exact","payload":{"type":"box","lo":["0"],"hi":["1"],"mid":["0"]}}"#;
        let e = parse_document(text).unwrap_err();
        assert!(e.message.contains("mid"), "{e}");
    }

    #[test]
    fn errors_name_the_field() {
        let text = r#"{"version":"1","kind":"sequence","backend":"exact","payload":
            {"nvars":1,"dim":1,"order":0,"entries":[{"exponents":[0],"matrix":{"re":[[1]]}}]}}"#;
        let doc = parse_document(text).unwrap();
        let Payload::Sequence(s) = &doc.payload else { panic!() };
        let e = sequence_from_doc::<Q>(s).unwrap_err();
        assert_eq!(e.field, "payload.entries[0].matrix.re[0][0]");

        let e = parse_document(r#"{"version":"2","kind":"region","backend":"exact","payload":{}}"#).unwrap_err();
        assert_eq!(e.field, "version");
        let e = parse_document("{\"version\":\"1\",\n\"kind\": 3}").unwrap_err();
        assert_eq!(e.field, "kind");
        assert!(e.message.contains("line 2"), "{e}");
    }

    #[test]
    fn region_documents() {
        let doc = RegionDoc::Ball { center: vec![Number::Text("1/2".into())], radius: Number::Text("2".into()) };
        let k = region_from_doc(&doc, Backend::Exact, "payload").unwrap();
        assert_eq!(region_to_doc::<Q>(&k), doc);
        let shifted = k.translated(&[qi(1)]).unwrap();
        assert_eq!(
            region_to_doc::<Q>(&shifted),
            RegionDoc::Ball { center: vec![Number::Text("-1/2".into())], radius: Number::Text("2".into()) }
        );
    }
}
