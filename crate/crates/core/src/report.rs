//! Deterministic CSV and JSON output.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), lines end in
//! LF, and column and key order are fixed.

use std::str::FromStr;

use num_complex::Complex64;
use serde_json::{json, Map, Number, Value};

use crate::approximation::{ConvergenceRow, Study};
use crate::cochain::Cochain0;
use crate::error::{Error, Result};
use crate::grid::GridSpec;

pub const CSV_HEADER: &str = "N,h,l2_error,order,w_norm,ratio_bound,iterations,residual";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Report(format!("unsupported format '{other}'"))),
        }
    }
}

/// 17 significant digits; non-finite values spell out `NaN`, `inf`, `-inf`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// JSON number carrying exactly the digits of [`format_float`]; `null` if not finite.
pub fn json_float(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&format_float(x)).expect("valid JSON number"))
    } else {
        Value::Null
    }
}

fn json_opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, json_float)
}

pub fn grid_json(g: &GridSpec) -> Value {
    json!({
        "N": g.n,
        "M": g.m,
        "a1": json_float(g.a1),
        "b1": json_float(g.b1),
        "a2": json_float(g.a2),
        "b2": json_float(g.b2),
        "h": json_float(g.h),
    })
}

/// `[[re, im], ...]` in row-major (k fastest) order.
pub fn cochain_json(phi: &Cochain0) -> Value {
    Value::Array(phi.to_vec().iter().map(complex_json).collect())
}

pub fn complex_json(z: &Complex64) -> Value {
    Value::Array(vec![json_float(z.re), json_float(z.im)])
}

pub fn row_json(r: &ConvergenceRow) -> Value {
    json!({
        "N": r.n,
        "M": r.m,
        "h": json_float(r.h),
        "l2_error": json_opt(r.l2_error),
        "order": json_opt(r.order),
        "w_norm": json_float(r.w_norm),
        "ratio_bound": json_float(r.ratio_bound),
        "steklov_error": json_opt(r.steklov_error),
        "method": r.method.to_string(),
        "iterations": r.iterations,
        "residual": json_float(r.residual),
    })
}

fn csv_opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

/// Convergence rows as CSV or as a JSON array.
pub fn emit_rows(rows: &[ConvergenceRow], format: ReportFormat) -> Result<Vec<u8>> {
    if rows.is_empty() {
        return Err(Error::Report("nothing to report".into()));
    }
    match format {
        ReportFormat::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for r in rows {
                let fields = [
                    r.n.to_string(),
                    format_float(r.h),
                    csv_opt(r.l2_error),
                    csv_opt(r.order),
                    format_float(r.w_norm),
                    format_float(r.ratio_bound),
                    r.iterations.to_string(),
                    format_float(r.residual),
                ];
                out.push_str(&fields.join(","));
                out.push('\n');
            }
            Ok(out.into_bytes())
        }
        ReportFormat::Json => emit_json(&Value::Array(rows.iter().map(row_json).collect())),
    }
}

/// A whole study; JSON also carries the problem name and any failure.
pub fn emit_study(study: &Study, format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Csv => emit_rows(&study.rows, format),
        ReportFormat::Json => {
            if study.rows.is_empty() {
                return Err(Error::Report("nothing to report".into()));
            }
            let failure = match &study.failure {
                None => Value::Null,
                Some(f) => json!({ "N": f.n, "message": f.message, "numerical": f.numerical }),
            };
            let mut map = Map::new();
            map.insert("problem".into(), Value::String(study.problem.clone()));
            map.insert("rows".into(), Value::Array(study.rows.iter().map(row_json).collect()));
            map.insert("failure".into(), failure);
            emit_json(&Value::Object(map))
        }
    }
}

/// Pretty-printed JSON with a trailing newline. Empty payloads are rejected.
pub fn emit_json(value: &Value) -> Result<Vec<u8>> {
    let empty = match value {
        Value::Null => true,
        Value::Array(a) => a.is_empty(),
        Value::Object(o) => o.is_empty(),
        _ => false,
    };
    if empty {
        return Err(Error::Report("nothing to report".into()));
    }
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::Method;

    fn row(n: usize, e: Option<f64>) -> ConvergenceRow {
        ConvergenceRow {
            n,
            m: n,
            h: 1.0 / n as f64,
            l2_error: e,
            order: None,
            w_norm: 2.5,
            ratio_bound: 0.25,
            steklov_error: None,
            method: Method::Direct,
            iterations: 0,
            residual: 1e-16,
        }
    }

    #[test]
    fn empty_payload_is_an_error() {
        assert!(emit_rows(&[], ReportFormat::Csv).is_err());
        assert!(emit_rows(&[], ReportFormat::Json).is_err());
        assert!(emit_json(&Value::Null).is_err());
        assert!(emit_json(&json!({})).is_err());
    }

    #[test]
    fn csv_layout() {
        let out = String::from_utf8(emit_rows(&[row(4, Some(0.1)), row(8, None)], ReportFormat::Csv).unwrap()).unwrap();
        let lines: Vec<_> = out.split('\n').collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(
            lines[1],
            "4,2.5000000000000000e-1,1.0000000000000001e-1,,2.5000000000000000e0,2.5000000000000000e-1,0,9.9999999999999998e-17"
        );
        assert!(lines[2].starts_with("8,1.2500000000000000e-1,,,"));
        assert_eq!(lines[3], "");
        assert!(!out.contains('\r'));
    }

    #[test]
    fn json_floats_keep_seventeen_digits() {
        let out = String::from_utf8(emit_json(&json!({ "x": json_float(0.1) })).unwrap()).unwrap();
        assert_eq!(out, "{\n  \"x\": 1.0000000000000001e-1\n}\n");
        let back: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
        assert_eq!(json_float(f64::NAN), Value::Null);
    }

    #[test]
    fn output_is_repeatable() {
        let rows = [row(4, Some(0.3)), row(8, Some(0.15))];
        for fmt in [ReportFormat::Csv, ReportFormat::Json] {
            assert_eq!(emit_rows(&rows, fmt).unwrap(), emit_rows(&rows, fmt).unwrap());
        }
    }

    #[test]
    fn format_names() {
        assert_eq!("CSV".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
        assert!(matches!("xml".parse::<ReportFormat>(), Err(Error::Report(_))));
    }
}
