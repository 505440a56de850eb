//! Row formatting for CSV and JSON output.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::Signed;
use rootmult_core::ExactScalar;
use serde_json::{json, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?}")),
        }
    }
}

/// Integer, terminating decimal, or `n/d`.
pub fn exact(x: &ExactScalar) -> String {
    x.to_exact_decimal().unwrap_or_else(|| x.to_string())
}

pub fn rational_json(x: &ExactScalar) -> Value {
    json!({ "num": x.numer().to_string(), "den": x.denom().to_string() })
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

/// Rounds `x` to `digits` significant decimal digits, half away from zero,
/// and drops trailing zeros.
pub fn significant(x: &ExactScalar, digits: u32) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let num = x.numer().abs();
    let den = x.denom().clone();
    // 10^e ≤ |x| < 10^(e+1)
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let scaled_cmp = |e: i64| {
        if e >= 0 {
            num.cmp(&(&den * pow10(e as u32)))
        } else {
            (&num * pow10((-e) as u32)).cmp(&den)
        }
    };
    while scaled_cmp(e) == std::cmp::Ordering::Less {
        e -= 1;
    }
    while scaled_cmp(e + 1) != std::cmp::Ordering::Less {
        e += 1;
    }
    let mut shift = digits as i64 - 1 - e;
    let round = |shift: i64| -> BigInt {
        let (n, d) = if shift >= 0 {
            (&num * pow10(shift as u32), den.clone())
        } else {
            (num.clone(), &den * pow10((-shift) as u32))
        };
        (n * 2 + &d) / (d * 2)
    };
    let mut r = round(shift);
    if r == pow10(digits) {
        shift -= 1;
        r = round(shift);
    }
    let mut text = r.to_string();
    if shift <= 0 {
        text.push_str(&"0".repeat((-shift) as usize));
    } else {
        let shift = shift as usize;
        if text.len() <= shift {
            text = format!("{}{}", "0".repeat(shift + 1 - text.len()), text);
        }
        text.insert(text.len() - shift, '.');
        let trimmed = text.trim_end_matches('0').trim_end_matches('.');
        text = trimmed.to_string();
    }
    if x.is_negative() {
        text.insert(0, '-');
    }
    text
}

/// One line of `multiplicity` or `table` output.
#[derive(Clone, Debug)]
pub struct Row {
    pub lambda: String,
    pub q: u64,
    pub n: u64,
    pub method: &'static str,
    pub value: ExactScalar,
    pub main_term: Option<ExactScalar>,
    pub error_scale: Option<ExactScalar>,
    pub ratio: Option<ExactScalar>,
    pub elapsed_ms: f64,
    pub monitored_k: Option<ExactScalar>,
}

pub const ROW_HEADER: [&str; 9] = [
    "lambda",
    "q",
    "n",
    "method",
    "value",
    "main_term",
    "error_scale",
    "ratio",
    "elapsed_ms",
];

fn opt(x: &Option<ExactScalar>, f: impl Fn(&ExactScalar) -> String) -> String {
    x.as_ref().map(f).unwrap_or_default()
}

fn opt_json(x: &Option<ExactScalar>) -> Value {
    x.as_ref().map(rational_json).unwrap_or(Value::Null)
}

pub fn write_rows(
    out: impl Write,
    format: Format,
    command: &str,
    rows: &[Row],
    with_k: bool,
) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header: Vec<&str> = ROW_HEADER.to_vec();
            if with_k {
                header.push("monitored_k");
            }
            w.write_record(&header)?;
            for r in rows {
                let mut rec = vec![
                    r.lambda.clone(),
                    r.q.to_string(),
                    r.n.to_string(),
                    r.method.to_string(),
                    exact(&r.value),
                    opt(&r.main_term, exact),
                    opt(&r.error_scale, exact),
                    opt(&r.ratio, |x| significant(x, 12)),
                    format!("{:.3}", r.elapsed_ms),
                ];
                if with_k {
                    rec.push(opt(&r.monitored_k, |x| significant(x, 12)));
                }
                w.write_record(&rec)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut v = json!({
                        "lambda": r.lambda,
                        "q": r.q,
                        "n": r.n,
                        "method": r.method,
                        "value": rational_json(&r.value),
                        "main_term": opt_json(&r.main_term),
                        "error_scale": opt_json(&r.error_scale),
                        "ratio": opt_json(&r.ratio),
                        "elapsed_ms": r.elapsed_ms,
                    });
                    if with_k {
                        v["monitored_k"] = opt_json(&r.monitored_k);
                    }
                    v
                })
                .collect();
            write_json(out, &json!({ "command": command, "rows": rows }))?;
        }
    }
    Ok(())
}

pub fn write_json(mut out: impl Write, value: &Value) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Internal(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}
