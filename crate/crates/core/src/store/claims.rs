//! Safety-claim evaluation over `evidences` links.
//!
//! A leaf claim is supported by at least one linked report that passed at
//! the required level of fidelity with every environment assumption met.
//! A composite claim is supported when all its subclaims are. Required
//! levels are inherited: a subclaim must meet the strictest level demanded
//! anywhere above it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::query::{trace_query, Direction};
use super::{ProjectStore, StoreError};
use crate::model::{
    find_claim_cycle, ArtifactKind, ArtifactRef, Ident, LinkType, Lof, SafetyClaim, TestReport,
    TraceLink,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClaimError {
    #[error("unknown claim {0}")]
    Unknown(Ident),
    #[error("claim cycle: {}", .0.iter().map(Ident::as_str).collect::<Vec<_>>().join(" -> "))]
    Cycle(Vec<Ident>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimStatus {
    pub claim_id: Ident,
    pub supported: bool,
    /// Effective requirement after inheritance.
    pub required_lof: Lof,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reasons: Vec<String>,
    /// Reports that qualify as support (leaf claims only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub evidence: Vec<Ident>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subclaims: Vec<ClaimStatus>,
}

/// `evidences` links for a leaf claim: every report reachable from the
/// requirements it covers.
pub fn evidence_links(claim: &SafetyClaim, store: &ProjectStore) -> Vec<TraceLink> {
    let path = [
        LinkType::Verifies,
        LinkType::Materializes,
        LinkType::Produced,
        LinkType::Analyzed,
    ];
    let mut out = Vec::new();
    for req in &claim.covers {
        let start = ArtifactRef::new(ArtifactKind::Requirement, req.clone());
        for r in trace_query(store, &start, &path, Direction::Forward).unwrap_or_default() {
            let link = TraceLink::typed(LinkType::Evidences, r.id, claim.id.clone());
            if !out.contains(&link) {
                out.push(link);
            }
        }
    }
    out
}

/// Brings the stored `evidences` links in line with [`evidence_links`] for
/// every leaf claim: missing links are added, stale ones retracted.
pub fn sync_evidence(store: &mut ProjectStore) -> Result<(), StoreError> {
    let leaves: Vec<SafetyClaim> = store.claims().filter(|c| c.is_leaf()).cloned().collect();
    let wanted: Vec<TraceLink> = leaves.iter().flat_map(|c| evidence_links(c, store)).collect();
    store.retract_links(|l| l.link_type() == LinkType::Evidences && !wanted.contains(l))?;
    store.append_links(&wanted)?;
    Ok(())
}

pub fn evaluate_claim(claim_id: &Ident, store: &ProjectStore) -> Result<ClaimStatus, ClaimError> {
    let all: Vec<&SafetyClaim> = store.claims().collect();
    if let Some(cycle) = find_claim_cycle(&all) {
        return Err(ClaimError::Cycle(cycle));
    }
    let claim = store
        .claim(claim_id.as_str())
        .ok_or_else(|| ClaimError::Unknown(claim_id.clone()))?;
    evaluate(claim, Lof::COMPONENT, store)
}

fn evaluate(claim: &SafetyClaim, inherited: Lof, store: &ProjectStore) -> Result<ClaimStatus, ClaimError> {
    let required = claim.required_lof.max(inherited);
    if !claim.is_leaf() {
        let mut subclaims = Vec::new();
        let mut reasons = Vec::new();
        for id in &claim.subclaims {
            let sub = store.claim(id.as_str()).ok_or_else(|| ClaimError::Unknown(id.clone()))?;
            let status = evaluate(sub, required, store)?;
            reasons.extend(status.reasons.iter().map(|r| format!("{id}: {r}")));
            subclaims.push(status);
        }
        return Ok(ClaimStatus {
            claim_id: claim.id.clone(),
            supported: subclaims.iter().all(|s| s.supported),
            required_lof: required,
            reasons,
            evidence: Vec::new(),
            subclaims,
        });
    }

    let reports: Vec<&TestReport> = store
        .links()
        .iter()
        .filter(|l| l.link_type() == LinkType::Evidences && l.to().id == claim.id)
        .filter_map(|l| store.report(l.from().id.as_str()))
        .collect();
    let passing: Vec<&TestReport> = reports.iter().copied().filter(|r| r.passed()).collect();
    let assumed: Vec<&TestReport> = passing.iter().copied().filter(|r| !r.has_inapplicable()).collect();
    let mut evidence: Vec<Ident> = assumed
        .iter()
        .filter(|r| r.lof >= required)
        .map(|r| r.id.clone())
        .collect();
    evidence.sort();
    let reason = if reports.is_empty() {
        Some("no evidence".to_string())
    } else if passing.is_empty() {
        Some("no passing evidence".to_string())
    } else if assumed.is_empty() {
        Some("environment assumptions unmet".to_string())
    } else if evidence.is_empty() {
        let best = assumed.iter().map(|r| r.lof).max().expect("non-empty");
        Some(format!("insufficient fidelity: best evidence {best}, required {required}"))
    } else {
        None
    };
    Ok(ClaimStatus {
        claim_id: claim.id.clone(),
        supported: reason.is_none(),
        required_lof: required,
        reasons: reason.into_iter().collect(),
        evidence,
        subclaims: Vec::new(),
    })
}
