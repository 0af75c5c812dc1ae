//! Text serialization helpers shared by every CSV writer in the crate.
//!
//! Floats are written with 17 significant digits so that parsing the text
//! back reproduces the exact bit pattern; reruns of a deterministic
//! pipeline therefore produce byte-identical files.

use crate::error::{Error, Result};

/// Formats a float with 17 significant digits (round-trip exact).
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Parses a float written by [`fmt_f64`] (also accepts plain decimals).
pub fn parse_f64(s: &str, what: &str) -> Result<f64> {
    match s {
        "nan" => Ok(f64::NAN),
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s.parse::<f64>().map_err(|_| {
            Error::Format(format!("expected a number for {what}, got {s:?}"))
        }),
    }
}

/// Splits a CSV line produced by this crate (no quoting is ever emitted).
pub fn split_line(line: &str) -> Vec<&str> {
    line.split(',').collect()
}
