use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Ident, Lof, PropertyKind};
use crate::monitor::Signal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// An environment assumption did not hold for the story.
    Inapplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inapplicable => "inapplicable",
        })
    }
}

/// A signal sample; positive infinity is encoded as JSON `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reading(pub f64);

impl Serialize for Reading {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_none()
        }
    }
}

impl<'de> Deserialize<'de> for Reading {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Reading(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY)))
    }
}

/// A threshold literal of a violated property, in SI and as written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub si: f64,
    pub si_unit: String,
    pub original: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub property_id: Ident,
    pub kind: PropertyKind,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_violation_t: Option<f64>,
    /// Signal values at the violation (or at the final step for `eventually`).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub witness: BTreeMap<Signal, Reading>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub thresholds: Vec<Threshold>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "reason")]
pub enum ConformanceViolation {
    /// The state channel does not start in the machine's initial state.
    WrongInitial { expected: String, observed: String },
    /// An observed change of state that the machine does not declare.
    UndeclaredTransition { from: String, to: String },
    /// The run ended outside the final state.
    NotFinal { expected: String, observed: String },
    EmptyTrace,
}

impl fmt::Display for ConformanceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConformanceViolation::WrongInitial { expected, observed } => {
                write!(f, "starts in {observed}, expected {expected}")
            }
            ConformanceViolation::UndeclaredTransition { from, to } => {
                write!(f, "undeclared transition {from} -> {to}")
            }
            ConformanceViolation::NotFinal { expected, observed } => {
                write!(f, "ends in {observed}, expected {expected}")
            }
            ConformanceViolation::EmptyTrace => f.write_str("empty state channel"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conformance {
    pub conformant: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<ConformanceViolation>,
}

impl Conformance {
    pub fn ok() -> Self {
        Self {
            conformant: true,
            violation: None,
        }
    }

    pub fn violated(v: ConformanceViolation) -> Self {
        Self {
            conformant: false,
            violation: Some(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportStats {
    pub deviation_pct_max: f64,
    pub col_count: u32,
    pub mission_success: bool,
    pub duration_s: f64,
    pub battery_used_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub id: Ident,
    pub test_id: Ident,
    pub trace_id: Ident,
    pub story_id: Ident,
    pub lof: Lof,
    pub per_property: Vec<PropertyResult>,
    pub conformance: Conformance,
    pub overall: Verdict,
    /// Environment properties whose assumptions the story did not meet.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assumption_warnings: Vec<String>,
    pub stats: ReportStats,
}

impl TestReport {
    /// Pass iff every test-kind property passes and the run conforms.
    pub fn compute_overall(per_property: &[PropertyResult], conformance: &Conformance) -> Verdict {
        let all_pass = per_property
            .iter()
            .filter(|p| p.kind == PropertyKind::Test)
            .all(|p| p.verdict == Verdict::Pass);
        if all_pass && conformance.conformant {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.overall == Verdict::Pass
    }

    pub fn has_inapplicable(&self) -> bool {
        self.per_property.iter().any(|p| p.verdict == Verdict::Inapplicable)
    }

    pub fn result(&self, property: &str) -> Option<&PropertyResult> {
        self.per_property.iter().find(|p| p.property_id == property)
    }
}
