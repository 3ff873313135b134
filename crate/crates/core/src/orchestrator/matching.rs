use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::ExecRequirement;
use crate::sim::BackendDescriptor;

/// Something a test needs that a backend does not offer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "missing")]
pub enum Missing {
    Capability { name: String },
    Param { capability: String, param: String },
}

impl fmt::Display for Missing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Missing::Capability { name } => f.write_str(name),
            Missing::Param { capability, param } => write!(f, "{capability}.{param}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchResult {
    Ok,
    Missing(Vec<Missing>),
}

impl MatchResult {
    pub fn is_ok(&self) -> bool {
        matches!(self, MatchResult::Ok)
    }
}

/// Ok iff every required capability exists on the backend and every
/// parameter the test sets is in that capability's schema.
pub fn match_capabilities(reqs: &[ExecRequirement], backend: &BackendDescriptor) -> MatchResult {
    let mut missing = Vec::new();
    for r in reqs {
        match backend.capability(&r.capability) {
            None => missing.push(Missing::Capability {
                name: r.capability.clone(),
            }),
            Some(cap) => missing.extend(r.params.keys().filter(|k| !cap.accepts(k)).map(|k| {
                Missing::Param {
                    capability: r.capability.clone(),
                    param: k.clone(),
                }
            })),
        }
    }
    if missing.is_empty() {
        MatchResult::Ok
    } else {
        MatchResult::Missing(missing)
    }
}
