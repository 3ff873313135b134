//! Append-only record of every analyzed run per (test, level of fidelity).
//!
//! Entries are stamped with a logical sequence number rather than wall
//! time, so a persisted ledger reloads byte-for-byte and "earlier" is
//! unambiguous.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Ident, Lof, Verdict};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub seq: u64,
    pub test_id: Ident,
    pub lof: Lof,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub story_id: Option<Ident>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_id: Option<Ident>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report_id: Option<Ident>,
    pub verdict: Verdict,
    /// Set for LoF-0 entries: component tests are run by the SuT's own build
    /// and only attested here.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attestation: Option<String>,
}

/// An entry before it is stamped.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub test_id: Ident,
    pub lof: Lof,
    pub story_id: Ident,
    pub trace_id: Ident,
    pub report_id: Ident,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("gate violation: test {test_id} has no passing {missing} run, required before {lof}")]
pub struct GateViolation {
    pub test_id: Ident,
    pub lof: Lof,
    pub missing: Lof,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LofLedger {
    entries: Vec<LedgerEntry>,
}

impl LofLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds a ledger from persisted entries, re-checking the gate for
    /// each so a hand-edited file cannot smuggle in an ungated pass.
    pub fn from_entries(entries: Vec<LedgerEntry>) -> Result<Self, LedgerError> {
        let mut l = Self::new();
        for e in entries {
            if e.seq != l.next_seq() {
                return Err(LedgerError::Sequence {
                    expected: l.next_seq(),
                    found: e.seq,
                });
            }
            if e.attestation.is_none() {
                l.check_gate(&e.test_id, e.lof)?;
            }
            l.entries.push(e);
        }
        Ok(l)
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn next_seq(&self) -> u64 {
        self.entries.last().map_or(1, |e| e.seq + 1)
    }

    pub fn for_test<'a>(&'a self, test: &'a str, lof: Lof) -> impl Iterator<Item = &'a LedgerEntry> {
        self.entries
            .iter()
            .filter(move |e| e.test_id == test && e.lof == lof)
    }

    /// The most recent pass for (test, lof); it supersedes earlier passes.
    pub fn current_pass(&self, test: &str, lof: Lof) -> Option<&LedgerEntry> {
        self.entries
            .iter()
            .rev()
            .find(|e| e.test_id == test && e.lof == lof && e.verdict == Verdict::Pass)
    }

    /// Runs at LoF-n (n >= 2) need a pass at LoF-(n-1). LoF-1 is ungated.
    pub fn check_gate(&self, test: &Ident, lof: Lof) -> Result<(), GateViolation> {
        if lof <= Lof::SIMULATION {
            return Ok(());
        }
        let missing = lof.below().expect("lof >= 2");
        match self.current_pass(test.as_str(), missing) {
            Some(_) => Ok(()),
            None => Err(GateViolation {
                test_id: test.clone(),
                lof,
                missing,
            }),
        }
    }

    /// Appends a run, enforcing the gate.
    pub fn record(&mut self, run: RunRecord) -> Result<&LedgerEntry, GateViolation> {
        self.check_gate(&run.test_id, run.lof)?;
        let seq = self.next_seq();
        self.entries.push(LedgerEntry {
            seq,
            test_id: run.test_id,
            lof: run.lof,
            story_id: Some(run.story_id),
            trace_id: Some(run.trace_id),
            report_id: Some(run.report_id),
            verdict: run.verdict,
            attestation: None,
        });
        Ok(self.entries.last().expect("just pushed"))
    }

    /// Records that the test's component tests pass (LoF-0).
    pub fn attest_component(&mut self, test: Ident, note: impl Into<String>) -> &LedgerEntry {
        let seq = self.next_seq();
        self.entries.push(LedgerEntry {
            seq,
            test_id: test,
            lof: Lof::COMPONENT,
            story_id: None,
            trace_id: None,
            report_id: None,
            verdict: Verdict::Pass,
            attestation: Some(note.into()),
        });
        self.entries.last().expect("just pushed")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("ledger sequence broken: expected {expected}, found {found}")]
    Sequence { expected: u64, found: u64 },
    #[error(transparent)]
    Gate(#[from] GateViolation),
}
