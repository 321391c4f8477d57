//! Machine-readable (JSON) and human-readable renderings of reports.

use serde_json::{json, Value};

use super::doc::{matrix_to_doc, poly_to_doc, JsonScalar};
use crate::algebra::{Cplx, HermMatrix, PsdVerdict};
use crate::linop::CanonicalRep;
use crate::matpoly::MatrixPolynomial;
use crate::moments::MomentVerdict;
use crate::preserver::{BisgaardDemo, BorceaReport, PreserverReport, ShiftDemo};

pub const FAIL_NOTE: &str = "a fail is a certificate; a pass is evidence only";

pub fn vector_json<R: JsonScalar>(v: &[Cplx<R>]) -> Value {
    json!({
        "re": v.iter().map(|z| z.re.to_json()).collect::<Vec<_>>(),
        "im": v.iter().map(|z| z.im.to_json()).collect::<Vec<_>>(),
    })
}

pub fn point_json<R: JsonScalar>(y: &[R]) -> Value {
    Value::Array(y.iter().map(JsonScalar::to_json).collect())
}

pub fn matrix_json<R: JsonScalar>(m: &HermMatrix<R>) -> Value {
    serde_json::to_value(matrix_to_doc(m)).expect("matrices serialize")
}

pub fn poly_json<R: JsonScalar>(p: &MatrixPolynomial<R>) -> Value {
    serde_json::to_value(poly_to_doc(p)).expect("polynomials serialize")
}

fn psd_json<R: JsonScalar>(v: &PsdVerdict<R>) -> Value {
    let mut o = json!({ "psd": v.is_psd });
    if let Some(e) = v.min_eigenvalue {
        o["minEigenvalue"] = json!(e);
    }
    if let Some(w) = &v.witness {
        o["witness"] = vector_json(w);
    }
    o
}

pub fn moment_json<R: JsonScalar>(v: &MomentVerdict<R>) -> Value {
    let checks: Vec<Value> = v
        .checks
        .iter()
        .map(|c| {
            let mut o = psd_json(&c.verdict);
            o["label"] = json!(c.label);
            o["size"] = json!(c.size);
            o
        })
        .collect();
    let mut o = json!({
        "report": "momentCheck",
        "mode": v.mode.to_string(),
        "verdict": if v.pass { "pass" } else { "fail" },
        "checks": checks,
        "note": FAIL_NOTE,
    });
    if let Some((label, w)) = v.witness() {
        o["witness"] = json!({ "matrix": label, "vector": vector_json(w) });
    }
    o
}

pub fn preserver_json(r: &PreserverReport) -> Value {
    let mut o = json!({
        "report": "preserveCheck",
        "trials": r.trials,
        "pointsPerTrial": r.points_per_trial,
        "tol": r.tol,
        "verdict": if r.pass { "pass" } else { "fail" },
        "note": FAIL_NOTE,
    });
    if let Some(w) = &r.worst {
        o["worst"] = json!({ "trial": w.trial, "seed": w.seed, "point": w.point, "minEig": w.min_eig });
    }
    o
}

pub fn borcea_json<R: JsonScalar>(r: &BorceaReport<R>) -> Value {
    let cells: Vec<Value> = r
        .cells
        .iter()
        .map(|c| {
            let mut o = json!({
                "y": point_json(&c.y),
                "probe": c.probe,
                "verdict": if c.verdict.pass { "pass" } else { "fail" },
            });
            if let Some((label, _)) = c.verdict.witness() {
                o["failing"] = json!(label);
            }
            o
        })
        .collect();
    let mut o = json!({
        "report": "borcea",
        "mode": r.mode.to_string(),
        "order": r.order,
        "verdict": if r.pass { "pass" } else { "fail" },
        "cells": cells,
        "note": FAIL_NOTE,
    });
    if let Some(c) = r.first_failure() {
        let mut f = json!({ "y": point_json(&c.y), "probe": c.probe });
        if let Some((label, w)) = c.verdict.witness() {
            f["matrix"] = json!(label);
            f["vector"] = vector_json(w);
        }
        o["firstFailure"] = f;
    }
    o
}

pub fn canon_json<R: JsonScalar>(c: &CanonicalRep<R>) -> Value {
    let entries: Vec<Value> = c
        .entries()
        .iter()
        .map(|((i, beta), q)| json!({ "basisIndex": i, "exponents": beta.exponents(), "q": poly_json(q) }))
        .collect();
    json!({
        "report": "canonical",
        "nvars": c.nvars(),
        "dim": c.dim(),
        "maxDeg": c.max_deg(),
        "entries": entries,
    })
}

pub fn bisgaard_json(d: &BisgaardDemo) -> Value {
    json!({
        "report": "demo",
        "demo": "bisgaard",
        "momentMatrix": matrix_json(&d.moment_matrix),
        "witness": vector_json(&d.witness),
        "witnessValue": d.witness_value.to_json(),
        "minEigenvalue": d.min_eigenvalue,
        "block": borcea_json(&d.block),
        "local": d.local.iter().map(borcea_json).collect::<Vec<_>>(),
        "sampling": preserver_json(&d.sampling),
        "allExpected": d.all_expected,
    })
}

pub fn shift_json(d: &ShiftDemo) -> Value {
    let rows: Vec<Value> = d
        .rows
        .iter()
        .map(|r| json!({ "y": r.y.to_json(), "map": r.map, "m": r.m, "factor": r.factor.to_json(), "ok": r.ok }))
        .collect();
    json!({
        "report": "demo",
        "demo": "shift",
        "maxDeg": d.max_deg,
        "rows": rows,
        "allExpected": d.all_expected,
    })
}

pub fn fmt_scalar<R: JsonScalar>(x: &R) -> String {
    match x.to_number() {
        super::doc::Number::Text(s) => s,
        super::doc::Number::Float(v) => format!("{v}"),
    }
}

fn fmt_complex<R: JsonScalar>(z: &Cplx<R>) -> String {
    if z.im.is_zero() {
        fmt_scalar(&z.re)
    } else if z.re.is_zero() {
        format!("{}i", fmt_scalar(&z.im))
    } else if z.im.is_negative() {
        format!("{}-{}i", fmt_scalar(&z.re), fmt_scalar(&-z.im.clone()))
    } else {
        format!("{}+{}i", fmt_scalar(&z.re), fmt_scalar(&z.im))
    }
}

pub fn fmt_vector<R: JsonScalar>(v: &[Cplx<R>]) -> String {
    format!("({})", v.iter().map(fmt_complex).collect::<Vec<_>>().join(", "))
}

pub fn fmt_matrix<R: JsonScalar>(m: &HermMatrix<R>) -> String {
    let d = m.dim();
    let rows: Vec<String> = (0..d)
        .map(|i| format!("[{}]", (0..d).map(|j| fmt_complex(m.get(i, j))).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn fmt_poly<R: JsonScalar>(p: &MatrixPolynomial<R>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.terms()
        .map(|(a, c)| if a.is_zero() { fmt_matrix(c) } else { format!("{}·{a}", fmt_matrix(c)) })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn moment_text<R: JsonScalar>(v: &MomentVerdict<R>) -> String {
    let mut out = format!("mode: {}\n", v.mode);
    for c in &v.checks {
        let eig = c.verdict.min_eigenvalue.map(|e| format!(", min eigenvalue {e}")).unwrap_or_default();
        out += &format!("  {} ({}×{}): {}{eig}\n", c.label, c.size, c.size, if c.verdict.is_psd { "PSD" } else { "not PSD" });
    }
    if let Some((label, w)) = v.witness() {
        out += &format!("witness in {label}: {}\n", fmt_vector(w));
    }
    out += &format!("verdict: {} ({FAIL_NOTE})\n", if v.pass { "pass" } else { "fail" });
    out
}

pub fn preserver_text(r: &PreserverReport) -> String {
    let mut out = format!("trials: {}, points per trial: {}, tol: {}\n", r.trials, r.points_per_trial, r.tol);
    if let Some(w) = &r.worst {
        out += &format!("worst: trial {} (seed {}) at {:?}, min eigenvalue {}\n", w.trial, w.seed, w.point, w.min_eig);
    }
    out += &format!("verdict: {} ({FAIL_NOTE})\n", if r.pass { "pass" } else { "fail" });
    out
}

pub fn borcea_text<R: JsonScalar>(r: &BorceaReport<R>) -> String {
    let failed = r.cells.iter().filter(|c| !c.verdict.pass).count();
    let mut out = format!("mode: {}, D = {}, cells: {}, failing: {failed}\n", r.mode, r.order, r.cells.len());
    if let Some(c) = r.first_failure() {
        let y: Vec<String> = c.y.iter().map(fmt_scalar).collect();
        out += &format!("first failure: y = ({}), probe {}", y.join(", "), c.probe);
        if let Some((label, w)) = c.verdict.witness() {
            out += &format!(", {label}, witness {}", fmt_vector(w));
        }
        out.push('\n');
    }
    out += &format!("verdict: {} ({FAIL_NOTE})\n", if r.pass { "pass" } else { "fail" });
    out
}

pub fn canon_text<R: JsonScalar>(c: &CanonicalRep<R>) -> String {
    c.entries()
        .iter()
        .map(|((i, beta), q)| format!("Q_{:?}(E_{i}) = {}\n", beta.exponents(), fmt_poly(q)))
        .collect()
}

pub fn bisgaard_text(d: &BisgaardDemo) -> String {
    let mut out = format!("moment matrix (D = 1): {}\n", fmt_matrix(&d.moment_matrix));
    out += &format!("exact witness v = {}, <Mv, v> = {}\n", fmt_vector(&d.witness), fmt_scalar(&d.witness_value));
    out += &format!("minimum eigenvalue: {}\n", d.min_eigenvalue);
    out += &format!("block check, D = 1: {}\n", if d.block.pass { "pass" } else { "fail" });
    for r in &d.local {
        out += &format!("local check, D = {}: {}\n", r.order, if r.pass { "pass" } else { "fail" });
    }
    out += &format!(
        "sampled preservation on [-1, 1], {} trials: {}\n",
        d.sampling.trials,
        if d.sampling.pass { "pass" } else { "fail" }
    );
    out += &format!("all expectations hold: {}\n", d.all_expected);
    out
}

pub fn shift_text(d: &ShiftDemo) -> String {
    let mut out = String::from("y      map                   m  y^m    Q_m = y^m·T̃\n");
    for r in &d.rows {
        out += &format!("{:<6} {:<21} {}  {:<6} {}\n", fmt_scalar(&r.y), r.map, r.m, fmt_scalar(&r.factor), if r.ok { "ok" } else { "MISMATCH" });
    }
    out += &format!("all expectations hold: {}\n", d.all_expected);
    out
}
