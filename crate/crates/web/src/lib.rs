//! Browser bindings. Every export takes and returns plain strings; results are JSON.

use iterasym_core::exact::{fmt_rational, parse_rational, ExactReal, Rational};
use iterasym_core::extract::{self, FitOptions, ScanResult};
use iterasym_core::maps::{make_map, MapSpec, RecurrenceMap};
use iterasym_core::orbit::PrecisionPolicy;
use iterasym_core::precision::Hp;
use iterasym_core::series::render;
use iterasym_core::templates::{derive_expansion, template_for, verify_template};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Digits above this make the page unresponsive.
pub const MAX_DIGITS: u32 = 40;
pub const MAX_SCAN_POINTS: u32 = 41;

fn map_of(spec: &str) -> Result<RecurrenceMap, String> {
    let spec: MapSpec = spec.parse().map_err(|e| format!("{e}"))?;
    make_map(spec).map_err(|e| e.to_string())
}

fn policy(digits: u32) -> Result<PrecisionPolicy, String> {
    if !(1..=MAX_DIGITS).contains(&digits) {
        return Err(format!("digits must be between 1 and {MAX_DIGITS}"));
    }
    Ok(PrecisionPolicy::auto(digits, 1000))
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

pub fn estimate_json(spec: &str, digits: u32) -> Result<String, String> {
    let map = map_of(spec)?;
    let e = extract::estimate(&map, &policy(digits)?, &FitOptions::default())
        .map_err(|e| e.to_string())?;
    Ok(json(&e))
}

#[derive(Serialize)]
struct ScanPoint {
    x0: String,
    x: f64,
    value: String,
    certified_digits: u32,
}

#[derive(Serialize)]
struct Scan {
    map: String,
    points: Vec<ScanPoint>,
    argmin: usize,
}

/// `n` evenly spaced exact starting values from `lo` to `hi`.
pub fn grid(lo: &str, hi: &str, n: u32) -> Result<Vec<Rational>, String> {
    let lo = parse_rational(lo).map_err(|e| e.to_string())?;
    let hi = parse_rational(hi).map_err(|e| e.to_string())?;
    if !(2..=MAX_SCAN_POINTS).contains(&n) {
        return Err(format!("points must be between 2 and {MAX_SCAN_POINTS}"));
    }
    if hi <= lo {
        return Err("the interval is empty".into());
    }
    let step = (&hi - &lo) / Rational::from_integer((n - 1).into());
    Ok((0..n)
        .map(|i| &lo + &step * Rational::from_integer(i.into()))
        .collect())
}

pub fn scan_json(spec: &str, lo: &str, hi: &str, n: u32, digits: u32) -> Result<String, String> {
    let base = map_of(spec)?.spec().clone();
    let xs: Vec<ExactReal> = grid(lo, hi, n)?
        .into_iter()
        .map(ExactReal::rational)
        .collect();
    let ScanResult { rows, argmin } =
        extract::minimality_scan(&base, &xs, &policy(digits)?).map_err(|e| e.to_string())?;
    let points = rows
        .into_iter()
        .map(|r| ScanPoint {
            x: r.x0.as_rational().map(rational_f64).unwrap_or(f64::NAN),
            x0: r.x0.to_string(),
            value: r.estimate.value,
            certified_digits: r.estimate.certified_digits,
        })
        .collect();
    Ok(json(&Scan {
        map: base.to_string(),
        points,
        argmin,
    }))
}

fn rational_f64(r: &Rational) -> f64 {
    Hp::from_rational(r, 20).to_f64()
}

#[derive(Serialize)]
struct Expansion {
    map: String,
    equation: String,
    provenance: String,
    order: String,
    text: String,
    latex: String,
    verify: String,
}

/// Stored expansion when there is one and `order` does not exceed it, else a matched one.
pub fn expand_json(spec: &str, order: &str) -> Result<String, String> {
    let map = map_of(spec)?;
    let order = parse_rational(order).map_err(|e| e.to_string())?;
    let t = match template_for(&map) {
        Ok(t) if order <= t.order => {
            let mut t = t;
            t.series = t.series.truncate(&order);
            t.order = order.clone();
            t
        }
        _ => derive_expansion(&map, &order).map_err(|e| e.to_string())?,
    };
    let report = verify_template(&t, &t.order).map_err(|e| e.to_string())?;
    Ok(json(&Expansion {
        map: map.spec().to_string(),
        equation: t.equation.formula(),
        provenance: t.note.clone(),
        order: fmt_rational(&t.order),
        text: render::to_text(&t.series),
        latex: render::to_latex(&t.series),
        verify: report.to_string(),
    }))
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// Constant of one map, e.g. `estimate("logistic(p=1/2, x0=1/2)", 15)`.
#[wasm_bindgen]
pub fn estimate(spec: &str, digits: u32) -> Result<String, JsError> {
    js(estimate_json(spec, digits))
}

/// `C(x0)` on a grid, for the minimality plot.
#[wasm_bindgen]
pub fn scan(spec: &str, lo: &str, hi: &str, points: u32, digits: u32) -> Result<String, JsError> {
    js(scan_json(spec, lo, hi, points, digits))
}

/// Exact expansion through `order` with its residual check.
#[wasm_bindgen]
pub fn expand(spec: &str, order: &str) -> Result<String, JsError> {
    js(expand_json(spec, order))
}
