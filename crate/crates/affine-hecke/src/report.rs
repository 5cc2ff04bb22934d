//! Structured outcomes of theorem checks.
//!
//! Every checker produces a [`VerificationReport`]: one record per witness
//! (a conjugacy class, a basis element, a matrix identity), each carrying
//! the two sides it compared and a pass flag.  The JSON payload is
//! deterministic — records arrive in a fixed order from the checkers and the
//! field layout is `suite`, `instance`, `records`, `pass` — so two runs with
//! identical inputs serialize byte-identically.  Wall time is kept outside
//! the comparison payload.

use serde::{Deserialize, Serialize};

/// One comparison: a witness label and the two sides, rendered exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub witness: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

/// Outcome of one suite run on one instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub instance: String,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
    /// Measured outside the deterministic payload; never serialized.
    #[serde(skip)]
    pub wall_time_ms: Option<u128>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, instance: impl Into<String>) -> Self {
        VerificationReport {
            suite: suite.into(),
            instance: instance.into(),
            records: Vec::new(),
            pass: true,
            wall_time_ms: None,
        }
    }

    /// Append a comparison; the overall flag is the conjunction of records.
    pub fn record(
        &mut self,
        witness: impl Into<String>,
        lhs: impl Into<String>,
        rhs: impl Into<String>,
        pass: bool,
    ) {
        self.records.push(CheckRecord {
            witness: witness.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            pass,
        });
        self.pass &= pass;
    }

    /// Fold another report's records in, prefixing their witnesses.
    pub fn absorb(&mut self, prefix: &str, other: &VerificationReport) {
        for r in &other.records {
            let witness = if prefix.is_empty() {
                r.witness.clone()
            } else {
                format!("{prefix} {}", r.witness)
            };
            self.records.push(CheckRecord { witness, ..r.clone() });
        }
        self.pass &= other.pass;
    }

    /// First failing record, the replay handle for a red run.
    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.records.iter().find(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Aligned table for terminals; one row per record plus a verdict line.
    pub fn render_text(&self) -> String {
        let mut w_wit = "witness".len();
        let mut w_lhs = "lhs".len();
        let mut w_rhs = "rhs".len();
        for r in &self.records {
            w_wit = w_wit.max(r.witness.len());
            w_lhs = w_lhs.max(r.lhs.len());
            w_rhs = w_rhs.max(r.rhs.len());
        }
        let mut out = format!("suite: {}\ninstance: {}\n", self.suite, self.instance);
        out.push_str(&format!(
            "{:<w_wit$}  {:<w_lhs$}  {:<w_rhs$}  ok\n",
            "witness", "lhs", "rhs"
        ));
        for r in &self.records {
            out.push_str(&format!(
                "{:<w_wit$}  {:<w_lhs$}  {:<w_rhs$}  {}\n",
                r.witness,
                r.lhs,
                r.rhs,
                if r.pass { "yes" } else { "NO" }
            ));
        }
        out.push_str(&format!(
            "result: {} ({} checks)",
            if self.pass { "PASS" } else { "FAIL" },
            self.records.len()
        ));
        if let Some(ms) = self.wall_time_ms {
            out.push_str(&format!(" [{} ms]", ms));
        }
        out.push('\n');
        out
    }
}
