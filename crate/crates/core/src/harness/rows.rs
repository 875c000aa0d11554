//! Report rows and their CSV/JSON serialization.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::config::ExperimentId;
use crate::characters::MultiplicityRule;
use crate::error::{Error, Result};

/// Knob values of one row; a knob that the experiment does not use is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Knobs {
    pub phi: Option<usize>,
    pub n: Option<u32>,
    pub r: Option<f64>,
    pub t: Option<f64>,
    pub degree: Option<usize>,
    pub speed: Option<f64>,
    /// Fixed point index for the Gaussian limit.
    pub k: Option<usize>,
    pub multiplicities: Option<MultiplicityRule>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub experiment: ExperimentId,
    pub knobs: Knobs,
    pub left: C64,
    pub right: C64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub runtime_s: f64,
    /// Error message when the row could not be computed; the values are then zero.
    pub error: Option<String>,
}

/// `|L - R| / max(|L|, |R|, 1e-300)`.
pub fn relative_error(left: C64, right: C64) -> f64 {
    (left - right).norm() / left.norm().max(right.norm()).max(1e-300)
}

impl ReportRow {
    pub fn new(experiment: ExperimentId, knobs: Knobs, left: C64, right: C64) -> Self {
        ReportRow {
            experiment,
            knobs,
            left,
            right,
            abs_err: (left - right).norm(),
            rel_err: relative_error(left, right),
            runtime_s: 0.0,
            error: None,
        }
    }

    pub fn failed(experiment: ExperimentId, knobs: Knobs, error: &Error) -> Self {
        let zero = C64::new(0.0, 0.0);
        ReportRow {
            experiment,
            knobs,
            left: zero,
            right: zero,
            abs_err: 0.0,
            rel_err: 0.0,
            runtime_s: 0.0,
            error: Some(error.to_string()),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub const CSV_HEADER: &str = "experiment,phi,n,r,t,degree,speed,k,multiplicities,\
left_re,left_im,right_re,right_im,abs_err,rel_err,runtime_s,error";

/// 17 significant digits.
fn float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_float(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

fn rule(m: &MultiplicityRule) -> String {
    format!(
        "{}/{}/{}/{}",
        m.attracting, m.repelling, m.elliptic_upper, m.elliptic_lower
    )
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\"").replace('\n', " "))
    } else {
        s.to_string()
    }
}

/// One CSV data line without the terminator.
pub fn csv_line(row: &ReportRow) -> String {
    let k = &row.knobs;
    [
        row.experiment.as_str().to_string(),
        opt(k.phi),
        opt(k.n),
        opt_float(k.r),
        opt_float(k.t),
        opt(k.degree),
        opt_float(k.speed),
        opt(k.k),
        k.multiplicities.as_ref().map(rule).unwrap_or_default(),
        float(row.left.re),
        float(row.left.im),
        float(row.right.re),
        float(row.right.im),
        float(row.abs_err),
        float(row.rel_err),
        float(row.runtime_s),
        csv_text(row.error.as_deref().unwrap_or("")),
    ]
    .join(",")
}

pub fn to_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", csv_line(row));
    }
    out
}

/// Pretty JSON array with a trailing newline.
pub fn to_json(rows: &[ReportRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn rows_from_json(text: &str) -> Result<Vec<ReportRow>> {
    serde_json::from_str(text).map_err(|e| Error::config("rows", e.to_string()))
}

/// Writes `rows` to `path` in `format`.
pub fn emit(rows: &[ReportRow], format: Format, path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::config("rows", "nothing to emit"));
    }
    let text = match format {
        Format::Csv => to_csv(rows),
        Format::Json => to_json(rows),
    };
    fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
