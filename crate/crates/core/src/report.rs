use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One counterexample found by a verifier sweep.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mismatch {
    pub check: String,
    pub fields: BTreeMap<String, String>,
}

impl Mismatch {
    pub fn new(check: &str) -> Self {
        Mismatch { check: check.to_owned(), fields: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl Into<String>) -> Self {
        self.fields.insert(key.to_owned(), value.into());
        self
    }
}

/// Outcome of one verifier over one graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    /// Number of instances in which the verified statement was actually exercised.
    pub cases: u64,
    /// Preconditions that failed (reported separately from mismatches).
    pub skipped: u64,
    pub mismatches: Vec<Mismatch>,
}

impl Report {
    pub fn new(check: &str) -> Self {
        Report { check: check.to_owned(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn merge(&mut self, other: Report) {
        self.cases += other.cases;
        self.skipped += other.skipped;
        self.mismatches.extend(other.mismatches);
    }

    pub(crate) fn from_parts(check: &str, parts: Vec<Report>) -> Report {
        let mut out = Report::new(check);
        for p in parts {
            out.merge(p);
        }
        out
    }
}
