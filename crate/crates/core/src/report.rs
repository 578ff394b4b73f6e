//! Machine-readable verification records.

use serde::{Deserialize, Serialize};

use crate::boson::Mismatch;
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// What a passing check actually covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verified {
    /// Operator coefficients with `|p|, |q| ≤ radius + 1/2`.
    Radius(u32),
    /// Series coefficients of total degree `≤ degree`.
    Degree(u32),
    /// An identity of polynomials or truncated series.
    Exact,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub identity: String,
    pub indices: String,
    pub window: Option<u32>,
    pub verified: Verified,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub mismatches: Vec<Mismatch>,
}

impl CheckRecord {
    pub fn new(identity: impl Into<String>, indices: impl Into<String>, window: Option<u32>) -> Self {
        CheckRecord {
            identity: identity.into(),
            indices: indices.into(),
            window,
            verified: Verified::None,
            status: Status::Fail,
            detail: None,
            mismatches: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_status(mut self, status: Status, verified: Verified) -> Self {
        self.status = status;
        self.verified = verified;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Turns a comparison outcome into a record: truncation errors are
    /// inconclusive, other errors are failures.
    pub fn from_outcome(self, outcome: Result<(Verified, Vec<Mismatch>), Error>) -> Self {
        match outcome {
            Ok((verified, mismatches)) => {
                let status = if mismatches.is_empty() { Status::Pass } else { Status::Fail };
                CheckRecord {
                    verified,
                    status,
                    mismatches,
                    ..self
                }
            }
            Err(e) => {
                let status = if is_truncation(&e) { Status::Inconclusive } else { Status::Fail };
                CheckRecord {
                    status,
                    detail: Some(e.to_string()),
                    ..self
                }
            }
        }
    }
}

/// Errors caused by finite windows or caps rather than by a false identity.
pub fn is_truncation(e: &Error) -> bool {
    matches!(
        e,
        Error::WindowTooSmall { .. } | Error::RadiusTooLarge { .. } | Error::CapExceeded(_) | Error::RankDeficient { .. }
    )
}

/// Overall status: any failure wins, then any inconclusive record.
pub fn summarize(records: &[CheckRecord]) -> Status {
    if records.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else if records.iter().any(|r| r.status == Status::Inconclusive) {
        Status::Inconclusive
    } else {
        Status::Pass
    }
}
