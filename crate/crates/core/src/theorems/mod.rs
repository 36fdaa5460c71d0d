//! Classification of k-hulls and executable checks of the structural facts
//! about supports of sums, products and inverses.
//!
//! Every verifier returns a [`Report`] whose JSON form is
//! `{procedure, parameters, status, witness?, citation, details}`.

mod classify;
mod suite;
mod verifiers;

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::series::SeriesError;
use crate::supports::SupportError;

pub use classify::{classify_khull, Assumptions, Classification, Flag};
pub use suite::{classify_catalog, descriptor_catalog, run_suite, SuiteConfig, SUITE_PROCEDURES};
pub use verifiers::{
    brute_force_closure_probe, check_equivalence_lemma, refute_truncation_closure_f2, verify_fp_gap,
    verify_neumann_support, verify_product_support, ProbeOp,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Support(#[from] SupportError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("search budget exceeded: {0}")]
    SearchBudget(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    HypothesisUnmet,
    /// Confirmed within explicit bounds only.
    BoundedPass,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::HypothesisUnmet => "hypothesis-unmet",
            Status::BoundedPass => "bounded-pass",
        }
    }

    /// Whether the outcome counts as a verification failure.
    pub fn is_failure(self) -> bool {
        self == Status::Fail
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of one verification procedure.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub procedure: String,
    pub parameters: BTreeMap<String, Value>,
    pub status: Status,
    pub witness: Option<Value>,
    /// The rule or fact the procedure checks, by name.
    pub citation: String,
    pub details: Value,
}

impl Report {
    fn new(procedure: &str, citation: &str) -> Self {
        Report {
            procedure: procedure.to_string(),
            parameters: BTreeMap::new(),
            status: Status::Pass,
            witness: None,
            citation: citation.to_string(),
            details: json!({}),
        }
    }

    fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "procedure": self.procedure,
            "parameters": self.parameters,
            "status": self.status.as_str(),
            "citation": self.citation,
            "details": self.details,
        });
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        v
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{} [{}]: {}", self.procedure, params.join(" "), self.status)?;
        if let Some(w) = &self.witness {
            write!(f, " witness={w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
