//! The `eval` subcommand: parses a function request document, dispatches to
//! the library, and renders the result with diagnostics.
//!
//! Matrix arguments accept either the shared encoding
//! `{"dim": n, "entries": [[[re,im], ...], ...]}` or a bare number as a 1x1
//! shorthand. Malformed input is reported with the JSON path of the fault.

use hypermat::euler::{euler_integral_with_nodes, EulerIntegralSpec};
use hypermat::hyper::{pfq, HyperParams, SeriesConfig};
use hypermat::special::{beta_matrix, gamma_matrix, pochhammer};
use hypermat::{CMatrix, Complex64};
use serde_json::Value;

use crate::CliError;

pub fn evaluate(text: &str) -> Result<String, CliError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CliError::parse("$", e))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| CliError::parse("$", "expected a JSON object"))?;
    let fn_name = obj
        .get("fn")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::parse("$.fn", "expected a function name string"))?;

    match fn_name {
        "gamma" => {
            let p = matrix_arg(obj.get("p"), "$.p")?;
            let result = gamma_matrix(&p).map_err(CliError::from_lib)?;
            Ok(render(fn_name, &result, serde_json::json!({})))
        }
        "beta" => {
            let p = matrix_arg(obj.get("p"), "$.p")?;
            let q = matrix_arg(obj.get("q"), "$.q")?;
            let result = beta_matrix(&p, &q).map_err(CliError::from_lib)?;
            Ok(render(fn_name, &result, serde_json::json!({})))
        }
        "pochhammer" => {
            let p = matrix_arg(obj.get("p"), "$.p")?;
            let m = obj
                .get("m")
                .and_then(Value::as_u64)
                .ok_or_else(|| CliError::parse("$.m", "expected a non-negative integer"))?;
            let result = pochhammer(&p, m as usize);
            Ok(render(fn_name, &result, serde_json::json!({ "m": m })))
        }
        "pfq" => {
            let num = matrix_list(obj.get("num"), "$.num")?;
            let den = matrix_list(obj.get("den"), "$.den")?;
            let z = complex_arg(obj.get("z"), "$.z")?;
            let cfg = series_config(obj)?;
            let params = if num.is_empty() && den.is_empty() {
                HyperParams::empty(1)
            } else {
                HyperParams::new(num, den).map_err(CliError::from_lib)?
            };
            let r = pfq(&params, z, &cfg).map_err(CliError::from_lib)?;
            Ok(render(
                fn_name,
                &r.value,
                serde_json::json!({
                    "terms_used": r.terms_used,
                    "last_term_norm": r.last_term_norm,
                    "converged": r.converged,
                }),
            ))
        }
        "euler_integral" => {
            let p = matrix_arg(obj.get("p"), "$.p")?;
            let q = matrix_arg(obj.get("q"), "$.q")?;
            let r = matrix_arg(obj.get("r"), "$.r")?;
            let z = complex_arg(obj.get("z"), "$.z")?;
            let q_exp = obj.get("q_exp").and_then(Value::as_u64).unwrap_or(2) as u32;
            let tol = obj.get("tol").and_then(Value::as_f64).unwrap_or(1e-9);
            let spec = EulerIntegralSpec::new(&p, &q, &r, z, q_exp).map_err(CliError::from_lib)?;
            let (result, nodes) =
                euler_integral_with_nodes(&spec, tol).map_err(CliError::from_lib)?;
            Ok(render(
                fn_name,
                &result,
                serde_json::json!({ "nodes": nodes, "q_exp": q_exp }),
            ))
        }
        other => Err(CliError::parse(
            "$.fn",
            format!("unknown function {other:?}; expected gamma, beta, pochhammer, pfq, or euler_integral"),
        )),
    }
}

fn series_config(obj: &serde_json::Map<String, Value>) -> Result<SeriesConfig, CliError> {
    let mut cfg = SeriesConfig::default();
    if let Some(v) = obj.get("tol") {
        cfg.tol = v
            .as_f64()
            .ok_or_else(|| CliError::parse("$.tol", "expected a number"))?;
    }
    if let Some(v) = obj.get("max_terms") {
        cfg.max_terms = v
            .as_u64()
            .ok_or_else(|| CliError::parse("$.max_terms", "expected an integer"))?
            as usize;
    }
    Ok(cfg)
}

fn render(fn_name: &str, result: &CMatrix, diagnostics: Value) -> String {
    let doc = serde_json::json!({
        "fn": fn_name,
        "result": result,
        "diagnostics": diagnostics,
    });
    serde_json::to_string_pretty(&doc).expect("result serializes")
}

/// A matrix argument: bare number (1x1) or the shared JSON encoding.
fn matrix_arg(v: Option<&Value>, path: &str) -> Result<CMatrix, CliError> {
    let v = v.ok_or_else(|| CliError::parse(path, "missing matrix argument"))?;
    if let Some(x) = v.as_f64() {
        if !x.is_finite() {
            return Err(CliError::parse(path, "non-finite value"));
        }
        return Ok(CMatrix::scalar(1, Complex64::new(x, 0.0)));
    }
    if v.is_object() {
        return serde_json::from_value::<CMatrix>(v.clone())
            .map_err(|e| CliError::parse(path, e));
    }
    Err(CliError::parse(
        path,
        "expected a number or {\"dim\", \"entries\"} object",
    ))
}

fn matrix_list(v: Option<&Value>, path: &str) -> Result<Vec<CMatrix>, CliError> {
    let v = v.ok_or_else(|| CliError::parse(path, "missing parameter list"))?;
    let arr = v
        .as_array()
        .ok_or_else(|| CliError::parse(path, "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, item)| matrix_arg(Some(item), &format!("{path}[{i}]")))
        .collect()
}

/// A complex scalar: bare number or [re, im] pair.
fn complex_arg(v: Option<&Value>, path: &str) -> Result<Complex64, CliError> {
    let v = v.ok_or_else(|| CliError::parse(path, "missing argument"))?;
    if let Some(x) = v.as_f64() {
        return Ok(Complex64::new(x, 0.0));
    }
    if let Some(arr) = v.as_array() {
        if arr.len() == 2 {
            let re = arr[0]
                .as_f64()
                .ok_or_else(|| CliError::parse(path, "expected [re, im] numbers"))?;
            let im = arr[1]
                .as_f64()
                .ok_or_else(|| CliError::parse(path, "expected [re, im] numbers"))?;
            return Ok(Complex64::new(re, im));
        }
    }
    Err(CliError::parse(path, "expected a number or [re, im] pair"))
}
