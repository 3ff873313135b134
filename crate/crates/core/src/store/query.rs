use std::collections::BTreeSet;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ProjectStore;
use crate::model::{ArtifactKind, ArtifactRef, LinkType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Follow links from their source to their target.
    Forward,
    /// Follow links from their target back to their source.
    Backward,
}

impl FromStr for Direction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "forward" => Ok(Direction::Forward),
            "backward" => Ok(Direction::Backward),
            _ => Err(format!("direction must be forward or backward, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("unknown start artifact {0}")]
    UnknownStart(ArtifactRef),
    #[error("step {step} ({link_type}) cannot follow a {at} artifact {direction}")]
    InvalidPath {
        step: usize,
        link_type: LinkType,
        at: ArtifactKind,
        direction: &'static str,
    },
}

/// Artifacts reached from `start` by following `path` one link type per
/// step. Results are sorted by id and, by construction, all of the kind
/// the last step leads to.
pub fn trace_query(
    store: &ProjectStore,
    start: &ArtifactRef,
    path: &[LinkType],
    direction: Direction,
) -> Result<Vec<ArtifactRef>, QueryError> {
    if !store.contains(start) {
        return Err(QueryError::UnknownStart(start.clone()));
    }
    let mut kind = start.kind;
    for (i, lt) in path.iter().enumerate() {
        let (from, to) = lt.endpoints();
        let (need, next) = match direction {
            Direction::Forward => (from, to),
            Direction::Backward => (to, from),
        };
        if kind != need {
            return Err(QueryError::InvalidPath {
                step: i + 1,
                link_type: *lt,
                at: kind,
                direction: match direction {
                    Direction::Forward => "forward",
                    Direction::Backward => "backward",
                },
            });
        }
        kind = next;
    }
    let mut frontier: BTreeSet<ArtifactRef> = BTreeSet::from([start.clone()]);
    for lt in path {
        frontier = store
            .links()
            .iter()
            .filter(|l| l.link_type() == *lt)
            .filter_map(|l| match direction {
                Direction::Forward if frontier.contains(l.from()) => Some(l.to().clone()),
                Direction::Backward if frontier.contains(l.to()) => Some(l.from().clone()),
                _ => None,
            })
            .collect();
    }
    let mut out: Vec<ArtifactRef> = frontier.into_iter().collect();
    out.sort_by(|a, b| a.id.cmp(&b.id).then(a.kind.cmp(&b.kind)));
    Ok(out)
}
