use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{BigReal, NumericsError};

#[derive(Debug, Error)]
pub enum ReportFormatError {
    #[error("malformed report JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {source}")]
    Number { field: &'static str, source: NumericsError },
}

/// The outcome of one [`verify`](super::verify) run.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub id: String,
    pub params: BTreeMap<String, String>,
    pub precision_bits: u32,
    /// Terms summed per series, in series order.
    pub terms_used: Vec<usize>,
    pub partial_sum: BigReal,
    pub rhs: BigReal,
    pub abs_error: BigReal,
    /// Heuristic bound on the omitted tails, not a proof.
    pub tail_estimate: BigReal,
    pub converged: bool,
    pub elapsed_ms: u64,
}

/// Wire form: reals as decimal strings that round-trip at `precision_bits`.
#[derive(Serialize, Deserialize)]
struct Wire {
    id: String,
    params: BTreeMap<String, String>,
    precision_bits: u32,
    terms_used: Vec<usize>,
    partial_sum: String,
    rhs: String,
    abs_error: String,
    tail_estimate: String,
    converged: bool,
    elapsed_ms: u64,
}

pub const CSV_HEADER: &str = "id,params,terms_used,abs_error,tail_estimate,converged";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl VerificationReport {
    fn wire(&self) -> Wire {
        Wire {
            id: self.id.clone(),
            params: self.params.clone(),
            precision_bits: self.precision_bits,
            terms_used: self.terms_used.clone(),
            partial_sum: self.partial_sum.to_decimal_string(),
            rhs: self.rhs.to_decimal_string(),
            abs_error: self.abs_error.to_decimal_string(),
            tail_estimate: self.tail_estimate.to_decimal_string(),
            converged: self.converged,
            elapsed_ms: self.elapsed_ms,
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.wire()).expect("plain data serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.wire()).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ReportFormatError> {
        let w: Wire = serde_json::from_str(text)?;
        let prec = w.precision_bits;
        let num = |field: &'static str, s: &str| {
            BigReal::parse_decimal(s, prec).map_err(|source| ReportFormatError::Number { field, source })
        };
        Ok(VerificationReport {
            partial_sum: num("partial_sum", &w.partial_sum)?,
            rhs: num("rhs", &w.rhs)?,
            abs_error: num("abs_error", &w.abs_error)?,
            tail_estimate: num("tail_estimate", &w.tail_estimate)?,
            id: w.id,
            params: w.params,
            precision_bits: prec,
            terms_used: w.terms_used,
            converged: w.converged,
            elapsed_ms: w.elapsed_ms,
        })
    }

    /// `name=value` pairs separated by `;`.
    pub fn params_display(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    fn terms_display(&self) -> String {
        self.terms_used
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }

    /// One row under [`CSV_HEADER`].
    pub fn to_csv_row(&self) -> String {
        [
            csv_field(&self.id),
            csv_field(&self.params_display()),
            csv_field(&self.terms_display()),
            self.abs_error.to_decimal_digits(6),
            self.tail_estimate.to_decimal_digits(6),
            self.converged.to_string(),
        ]
        .join(",")
    }

    /// Human-readable block; omits the timing so output is reproducible.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = if self.converged { "CONVERGED" } else { "NOT CONVERGED" };
        let params = if self.params.is_empty() {
            String::new()
        } else {
            format!(" [{}]", self.params_display())
        };
        let _ = writeln!(out, "{}{}: {}", self.id, params, status);
        let _ = writeln!(out, "  precision      {} bits", self.precision_bits);
        let _ = writeln!(out, "  terms used     {}", self.terms_display());
        let _ = writeln!(out, "  partial sum    {}", self.partial_sum.to_decimal_digits(40));
        let _ = writeln!(out, "  rhs            {}", self.rhs.to_decimal_digits(40));
        let _ = writeln!(out, "  abs error      {}", self.abs_error.to_decimal_digits(6));
        let _ = writeln!(out, "  tail (heur.)   {}", self.tail_estimate.to_decimal_digits(6));
        out
    }
}
