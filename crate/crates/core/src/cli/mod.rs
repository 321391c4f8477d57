//! Command-line front end.
//!
//! Exit codes: `0` pass (or success), `1` a failed check, `2` usage, parse
//! or library error.

pub mod doc;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::algebra::{parse_rational, Real, DEFAULT_PSD_TOL, Q};
use crate::linop::{extract_canonical, PolyOperator};
use crate::matpoly::{GridSpec, MatrixPolynomial, RegionK};
use crate::moments::{default_probes, sequence_from_measure, truncated_moment_test, MomentMode, OperatorSequence};
use crate::preserver::{
    bisgaard_demo, borcea_necessary_check, build_from_family, check_preserver_sampling, default_probe_matrices,
    default_y_grid, shift_demo,
};
use doc::{Backend, DocError, Document, JsonScalar, LoadedMeasure, Payload};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Default absolute tolerance for sampled positivity.
pub const DEFAULT_SAMPLE_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(name = "opmoment", version, about = "Operator polynomials, operator moment tests and positivity preservers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalOpts,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Arithmetic backend; documents are converted when it differs.
    #[arg(long, global = true, value_enum)]
    backend: Option<Backend>,
    /// Tolerance override (PSD tolerance, or sampling tolerance for preserve-check).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, env = "OPMOMENT_SEED", default_value_t = 0)]
    seed: u64,
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    #[value(alias = "compression")]
    Local,
    Block,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the canonical maps Q_β(E_i) of an operator document.
    Canon {
        input: PathBuf,
        /// Restrict to |β| ≤ N.
        #[arg(long)]
        max_deg: Option<u32>,
    },
    /// Apply an operator document to a polynomial file (a list of {exponents, coeff}).
    Apply { operator: PathBuf, polynomial: PathBuf },
    /// Truncated moment test of a sequence or operator-measure document.
    MomentCheck {
        input: PathBuf,
        #[arg(long)]
        region: Option<String>,
        /// Truncation order D of the moment matrix.
        #[arg(long)]
        order: Option<u32>,
        #[arg(long, value_enum, default_value = "block")]
        mode: ModeArg,
    },
    /// Sampled positivity-preservation check of an operator or family document.
    PreserveCheck {
        input: PathBuf,
        #[arg(long)]
        region: Option<String>,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        /// Degree of the random positive inputs (and of the family-built operator).
        #[arg(long)]
        max_deg: Option<u32>,
        /// Sampling grid: `N` points per axis, optionally `N@lo:hi,lo:hi` for a window.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Moment conditions on the canonical maps Q_α(A)(y) over a y-grid.
    Borcea {
        input: PathBuf,
        #[arg(long)]
        region: Option<String>,
        /// y-grid: `N` points per axis, optionally `N@lo:hi,lo:hi`.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long)]
        max_deg: Option<u32>,
        #[arg(long, value_enum, default_value = "block")]
        mode: ModeArg,
    },
    /// Self-contained reproductions: `bisgaard` or `shift`.
    Demo { name: String },
}

/// Output of a command: the rendered report and the exit code.
struct Outcome {
    text: String,
    json: Value,
    code: i32,
}

#[derive(Debug)]
struct CliError(String);

impl From<DocError> for CliError {
    fn from(e: DocError) -> Self {
        CliError(e.to_string())
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let _ = if cli.global.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("reports serialize"))
            } else {
                write!(out, "{}", o.text)
            };
            o.code
        }
        Err(CliError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Demo { name } => demo(name),
        Command::Canon { input, max_deg } => {
            let d = read_doc(input)?;
            match g.backend.unwrap_or(d.backend) {
                Backend::Exact => canon::<Q>(&d, *max_deg),
                Backend::Approx => canon::<f64>(&d, *max_deg),
            }
        }
        Command::Apply { operator, polynomial } => {
            let d = read_doc(operator)?;
            let poly = read_text(polynomial)?;
            match g.backend.unwrap_or(d.backend) {
                Backend::Exact => apply::<Q>(&d, &poly),
                Backend::Approx => apply::<f64>(&d, &poly),
            }
        }
        Command::MomentCheck { input, region, order, mode } => {
            let d = read_doc(input)?;
            match g.backend.unwrap_or(d.backend) {
                Backend::Exact => moment_check::<Q>(&d, region.as_deref(), *order, *mode, g),
                Backend::Approx => moment_check::<f64>(&d, region.as_deref(), *order, *mode, g),
            }
        }
        Command::PreserveCheck { input, region, trials, max_deg, grid } => {
            let d = read_doc(input)?;
            let args = (region.as_deref(), *trials, *max_deg, grid.as_deref());
            match g.backend.unwrap_or(d.backend) {
                Backend::Exact => preserve_check::<Q>(&d, args, g),
                Backend::Approx => preserve_check::<f64>(&d, args, g),
            }
        }
        Command::Borcea { input, region, grid, order, max_deg, mode } => {
            let d = read_doc(input)?;
            let args = (region.as_deref(), grid.as_deref(), *order, *max_deg, *mode);
            match g.backend.unwrap_or(d.backend) {
                Backend::Exact => borcea::<Q>(&d, args, g),
                Backend::Approx => borcea::<f64>(&d, args, g),
            }
        }
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn read_doc(path: &Path) -> CliResult<Document> {
    doc::parse_document(&read_text(path)?).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn psd_tol(d: &Document, g: &GlobalOpts) -> f64 {
    g.tol.or(d.tolerances.as_ref().and_then(|t| t.psd)).unwrap_or(DEFAULT_PSD_TOL)
}

fn sample_tol(d: &Document, g: &GlobalOpts) -> f64 {
    g.tol.or(d.tolerances.as_ref().and_then(|t| t.sample)).unwrap_or(DEFAULT_SAMPLE_TOL)
}

fn verdict_code(pass: bool) -> i32 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn wrong_kind(d: &Document, expected: &str) -> CliError {
    let found = serde_json::to_string(&d.payload.kind()).expect("kinds serialize");
    CliError(format!("kind: expected {expected}, found {found}"))
}

fn load_operator<R: JsonScalar>(d: &Document) -> CliResult<PolyOperator<R>> {
    let Payload::Operator(op) = &d.payload else {
        return Err(wrong_kind(d, "operator"));
    };
    Ok(match d.backend {
        Backend::Exact => doc::operator_from_doc::<Q>(op)?.convert(),
        Backend::Approx => doc::operator_from_doc::<f64>(op)?.convert(),
    })
}

fn load_operator_or_family<R: JsonScalar>(d: &Document, max_deg: Option<u32>, tol: f64) -> CliResult<PolyOperator<R>> {
    match &d.payload {
        Payload::Operator(_) => {
            let t = load_operator::<R>(d)?;
            Ok(match max_deg {
                Some(m) => t.truncate(m)?,
                None => t,
            })
        }
        Payload::MapMeasureFamily(f) => {
            let family = match d.backend {
                Backend::Exact => doc::family_from_doc::<Q>(f, tol)?.convert::<R>(),
                Backend::Approx => doc::family_from_doc::<f64>(f, tol)?.convert::<R>(),
            };
            Ok(build_from_family(&family, max_deg.unwrap_or(2))?)
        }
        _ => Err(wrong_kind(d, "operator or mapMeasureFamily")),
    }
}

/// The sequence, its default region, and the default truncation order.
fn load_sequence<R: JsonScalar>(
    d: &Document,
    order: Option<u32>,
    tol: f64,
) -> CliResult<(OperatorSequence<R>, RegionK, u32)> {
    fn measure_sequence<S: JsonScalar>(m: &doc::MeasureDoc, order: u32, tol: f64) -> CliResult<(OperatorSequence<S>, RegionK)> {
        match doc::measure_from_doc::<S>(m, tol)? {
            LoadedMeasure::Operator(mu) => Ok((sequence_from_measure(&mu, order), mu.support().clone())),
            LoadedMeasure::Map(_) => Err(CliError("payload.atoms: moment-check needs operator weights, not Choi matrices".into())),
        }
    }
    match &d.payload {
        Payload::Sequence(s) => {
            let seq: OperatorSequence<R> = match d.backend {
                Backend::Exact => doc::sequence_from_doc::<Q>(s)?.convert(),
                Backend::Approx => doc::sequence_from_doc::<f64>(s)?.convert(),
            };
            let (k, dd) = (RegionK::all_space(seq.nvars()), seq.order() / 2);
            Ok((seq, k, dd))
        }
        Payload::Measure(m) => {
            // room for localizing matrices of quadratic constraints
            let dd = order.unwrap_or(2);
            let (s, k) = match d.backend {
                Backend::Exact => measure_sequence::<Q>(m, 2 * dd + 2, tol).map(|(s, k)| (s.convert(), k))?,
                Backend::Approx => measure_sequence::<f64>(m, 2 * dd + 2, tol).map(|(s, k)| (s.convert(), k))?,
            };
            Ok((s, k, dd))
        }
        _ => Err(wrong_kind(d, "sequence or measure")),
    }
}

fn family_region(d: &Document) -> CliResult<Option<RegionK>> {
    match &d.payload {
        Payload::MapMeasureFamily(f) => Ok(Some(doc::region_from_doc(&f.region, d.backend, "payload.region")?)),
        _ => Ok(None),
    }
}

fn canon<R: JsonScalar>(d: &Document, max_deg: Option<u32>) -> CliResult<Outcome> {
    let mut t = load_operator::<R>(d)?;
    if let Some(m) = max_deg {
        t = t.truncate(m)?;
    }
    let c = extract_canonical(&t);
    Ok(Outcome { text: report::canon_text(&c), json: report::canon_json(&c), code: EXIT_PASS })
}

fn apply<R: JsonScalar>(d: &Document, poly_text: &str) -> CliResult<Outcome> {
    let t = load_operator::<R>(d)?;
    let terms: doc::PolyDoc = serde_json::from_str(poly_text).map_err(|e| CliError(format!("polynomial: {e}")))?;
    let p: MatrixPolynomial<R> = match d.backend {
        Backend::Exact => doc::poly_from_doc::<Q>(&terms, t.nvars(), t.dim(), "polynomial")?.convert(),
        Backend::Approx => doc::poly_from_doc::<f64>(&terms, t.nvars(), t.dim(), "polynomial")?.convert(),
    };
    let image = t.apply(&p)?;
    let json = serde_json::json!({ "report": "apply", "image": report::poly_json(&image) });
    Ok(Outcome { text: format!("{}\n", report::fmt_poly(&image)), json, code: EXIT_PASS })
}

fn moment_check<R: JsonScalar>(
    d: &Document,
    region: Option<&str>,
    order: Option<u32>,
    mode: ModeArg,
    g: &GlobalOpts,
) -> CliResult<Outcome> {
    let tol = psd_tol(d, g);
    let (seq, default_region, default_order) = load_sequence::<R>(d, order, tol)?;
    let k = match region {
        Some(r) => parse_region(r)?,
        None => default_region,
    };
    let dd = order.unwrap_or(default_order);
    let mode = match mode {
        ModeArg::Local => MomentMode::Compression,
        ModeArg::Block => MomentMode::Block,
    };
    let v = truncated_moment_test(&seq, &k, dd, mode, &default_probes::<R>(seq.dim()), tol)?;
    Ok(Outcome { text: report::moment_text(&v), json: report::moment_json(&v), code: verdict_code(v.pass) })
}

fn preserve_check<R: JsonScalar>(
    d: &Document,
    (region, trials, max_deg, grid): (Option<&str>, usize, Option<u32>, Option<&str>),
    g: &GlobalOpts,
) -> CliResult<Outcome> {
    let t = load_operator_or_family::<R>(d, max_deg, psd_tol(d, g))?;
    let k = resolve_region(region, family_region(d)?, t.nvars())?;
    let grid = parse_grid(grid, GridSpec::default().per_axis)?;
    let deg = max_deg.unwrap_or(t.max_deg());
    let r = check_preserver_sampling(&t, &k, trials, deg, &grid, sample_tol(d, g), g.seed)?;
    Ok(Outcome { text: report::preserver_text(&r), json: report::preserver_json(&r), code: verdict_code(r.pass) })
}

fn borcea<R: JsonScalar>(
    d: &Document,
    (region, grid, order, max_deg, mode): (Option<&str>, Option<&str>, Option<u32>, Option<u32>, ModeArg),
    g: &GlobalOpts,
) -> CliResult<Outcome> {
    let family_deg = max_deg.or(order.map(|o| 2 * o));
    let t = load_operator_or_family::<R>(d, family_deg, psd_tol(d, g))?;
    let k = resolve_region(region, family_region(d)?, t.nvars())?;
    let ys = default_y_grid::<R>(&k, &parse_grid(grid, 5)?)?;
    let dd = order.unwrap_or(t.max_deg() / 2);
    let mode = match mode {
        ModeArg::Local => crate::preserver::BorceaMode::Local,
        ModeArg::Block => crate::preserver::BorceaMode::Block,
    };
    let mats = default_probe_matrices::<R>(t.dim());
    let vecs = default_probes::<R>(t.dim());
    let r = borcea_necessary_check(&t, &k, &ys, dd, mode, &mats, &vecs, psd_tol(d, g))?;
    Ok(Outcome { text: report::borcea_text(&r), json: report::borcea_json(&r), code: verdict_code(r.pass) })
}

fn demo(name: &str) -> CliResult<Outcome> {
    match name {
        "bisgaard" => {
            let d = bisgaard_demo()?;
            Ok(Outcome { text: report::bisgaard_text(&d), json: report::bisgaard_json(&d), code: verdict_code(d.all_expected) })
        }
        "shift" => {
            let d = shift_demo()?;
            Ok(Outcome { text: report::shift_text(&d), json: report::shift_json(&d), code: verdict_code(d.all_expected) })
        }
        other => Err(CliError(format!("unknown demo {other:?}; expected \"bisgaard\" or \"shift\""))),
    }
}

fn resolve_region(flag: Option<&str>, from_doc: Option<RegionK>, nvars: usize) -> CliResult<RegionK> {
    let k = match (flag, from_doc) {
        (Some(r), _) => parse_region(r)?,
        (None, Some(k)) => k,
        (None, None) => RegionK::boxed(vec![Q::from_integer((-1).into()); nvars], vec![Q::from_integer(1.into()); nvars])?,
    };
    if k.nvars() != nvars {
        return Err(CliError(format!("region has {} variables, operator has {nvars}", k.nvars())));
    }
    Ok(k)
}

fn rational(s: &str) -> CliResult<Q> {
    parse_rational(s.trim()).ok_or_else(|| CliError(format!("cannot parse {s:?} as a number")))
}

fn intervals(s: &str) -> CliResult<(Vec<Q>, Vec<Q>)> {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for part in s.split(',') {
        let (a, b) = part.split_once(':').ok_or_else(|| CliError(format!("expected lo:hi, found {part:?}")))?;
        lo.push(rational(a)?);
        hi.push(rational(b)?);
    }
    Ok((lo, hi))
}

/// `all` or `all:N`, `box:lo:hi,lo:hi,…`, `ball:c1,c2,…@r`.
pub fn parse_region(s: &str) -> std::result::Result<RegionK, String> {
    parse_region_inner(s).map_err(|CliError(m)| format!("--region: {m}"))
}

fn parse_region_inner(s: &str) -> CliResult<RegionK> {
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    match kind {
        "all" => {
            let n = if rest.is_empty() { 1 } else { rest.parse().map_err(|_| CliError(format!("bad variable count {rest:?}")))? };
            Ok(RegionK::all_space(n))
        }
        "box" => {
            let (lo, hi) = intervals(rest)?;
            Ok(RegionK::boxed(lo, hi)?)
        }
        "ball" => {
            let (c, r) = rest.split_once('@').ok_or_else(|| CliError("expected ball:c1,c2@r".into()))?;
            let center = c.split(',').map(rational).collect::<CliResult<Vec<_>>>()?;
            Ok(RegionK::ball(center, rational(r)?)?)
        }
        _ => Err(CliError(format!("unknown region kind {kind:?}"))),
    }
}

impl From<String> for CliError {
    fn from(s: String) -> Self {
        CliError(s)
    }
}

/// `N` or `N@lo:hi,lo:hi`.
fn parse_grid(s: Option<&str>, default_per_axis: usize) -> CliResult<GridSpec> {
    let Some(s) = s else {
        return Ok(GridSpec::new(default_per_axis));
    };
    let (n, window) = s.split_once('@').map_or((s, None), |(a, b)| (a, Some(b)));
    let per_axis = n.trim().parse().map_err(|_| CliError(format!("--grid: bad point count {n:?}")))?;
    let grid = GridSpec::new(per_axis);
    Ok(match window {
        Some(w) => {
            let (lo, hi) = intervals(w)?;
            grid.with_window(lo.iter().map(Real::to_f64).collect(), hi.iter().map(Real::to_f64).collect())
        }
        None => grid,
    })
}
