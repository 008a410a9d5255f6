//! Run reports: what was asked, a digest of the inputs, and the verdict.

use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    Impossible,
    InputError,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail | Outcome::Impossible => 1,
            Outcome::InputError => 2,
        }
    }
}

#[derive(Serialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 over the arguments and the contents of any files they name.
    pub inputs_digest: String,
    pub outcome: Outcome,
    /// Truncation order the verdict is certified to.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<i32>,
    /// What that order means for membership claims.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certification: Option<String>,
    pub result: serde_json::Value,
    /// Wall-clock time; the only field that varies between identical runs.
    pub timing_ms: u64,
}

impl RunReport {
    pub fn new(
        command: String,
        inputs_digest: String,
        outcome: Outcome,
        order: Option<i32>,
        result: serde_json::Value,
        started: Instant,
    ) -> Self {
        let timing_ms = started.elapsed().as_millis() as u64;
        let certification = order.map(certification);
        RunReport { command, inputs_digest, outcome, order, certification, result, timing_ms }
    }
}

/// Membership in `(F)` is decided in `k[[x]]/m^{N+1}` only; raising `N`
/// removes false positives.
pub fn certification(order: i32) -> String {
    format!("membership in (F) certified modulo m^{}", order + 1)
}

/// Arguments naming readable files contribute their contents as well as
/// their names, so editing a ring document changes the digest. The output
/// format is presentation only and is left out.
pub fn inputs_digest(args: &[String]) -> String {
    let mut h = Sha256::new();
    let mut skip_next = false;
    for a in args {
        if std::mem::take(&mut skip_next) || a.starts_with("--format=") {
            continue;
        }
        if a == "--format" {
            skip_next = true;
            continue;
        }
        h.update(a.as_bytes());
        h.update([0]);
        if let Ok(bytes) = std::fs::read(a) {
            h.update(&bytes);
            h.update([0]);
        }
    }
    hex::encode(h.finalize())
}
