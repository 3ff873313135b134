//! Typed traceability links between artifacts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Ident;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArtifactKind {
    Requirement,
    Property,
    Test,
    Story,
    Trace,
    Report,
    Claim,
}

impl ArtifactKind {
    pub const ALL: [ArtifactKind; 7] = [
        ArtifactKind::Requirement,
        ArtifactKind::Property,
        ArtifactKind::Test,
        ArtifactKind::Story,
        ArtifactKind::Trace,
        ArtifactKind::Report,
        ArtifactKind::Claim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ArtifactKind::Requirement => "requirement",
            ArtifactKind::Property => "property",
            ArtifactKind::Test => "test",
            ArtifactKind::Story => "story",
            ArtifactKind::Trace => "trace",
            ArtifactKind::Report => "report",
            ArtifactKind::Claim => "claim",
        }
    }
}

impl fmt::Display for ArtifactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ArtifactKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ArtifactKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown artifact kind {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ArtifactRef {
    pub kind: ArtifactKind,
    pub id: Ident,
}

impl ArtifactRef {
    pub fn new(kind: ArtifactKind, id: Ident) -> Self {
        Self { kind, id }
    }
}

impl fmt::Display for ArtifactRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind, self.id)
    }
}

impl FromStr for ArtifactRef {
    type Err = String;
    /// Parses `kind:id`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (k, id) = s
            .split_once(':')
            .ok_or_else(|| format!("expected kind:id, got {s:?}"))?;
        Ok(Self::new(k.parse()?, Ident::new(id).map_err(|e| e.to_string())?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkType {
    /// requirement -> property
    Validates,
    /// requirement -> test
    Verifies,
    /// test -> story
    Materializes,
    /// story -> trace
    Produced,
    /// trace -> report
    Analyzed,
    /// report -> claim
    Evidences,
}

impl LinkType {
    pub const ALL: [LinkType; 6] = [
        LinkType::Validates,
        LinkType::Verifies,
        LinkType::Materializes,
        LinkType::Produced,
        LinkType::Analyzed,
        LinkType::Evidences,
    ];

    /// Required (from, to) artifact kinds.
    pub fn endpoints(self) -> (ArtifactKind, ArtifactKind) {
        use ArtifactKind::*;
        match self {
            LinkType::Validates => (Requirement, Property),
            LinkType::Verifies => (Requirement, Test),
            LinkType::Materializes => (Test, Story),
            LinkType::Produced => (Story, Trace),
            LinkType::Analyzed => (Trace, Report),
            LinkType::Evidences => (Report, Claim),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LinkType::Validates => "validates",
            LinkType::Verifies => "verifies",
            LinkType::Materializes => "materializes",
            LinkType::Produced => "produced",
            LinkType::Analyzed => "analyzed",
            LinkType::Evidences => "evidences",
        }
    }
}

impl fmt::Display for LinkType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LinkType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        LinkType::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown link type {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{link_type} link must connect {expected_from} -> {expected_to}, got {from} -> {to}")]
pub struct LinkKindMismatch {
    pub link_type: LinkType,
    pub expected_from: ArtifactKind,
    pub expected_to: ArtifactKind,
    pub from: ArtifactKind,
    pub to: ArtifactKind,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
struct RawLink {
    from: ArtifactRef,
    to: ArtifactRef,
    link_type: LinkType,
}

/// A link whose endpoint kinds match its type; mismatches cannot be built
/// or deserialized.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLink", into = "RawLink")]
pub struct TraceLink {
    from: ArtifactRef,
    to: ArtifactRef,
    link_type: LinkType,
}

impl TraceLink {
    pub fn new(
        from: ArtifactRef,
        to: ArtifactRef,
        link_type: LinkType,
    ) -> Result<Self, LinkKindMismatch> {
        let (ef, et) = link_type.endpoints();
        if from.kind != ef || to.kind != et {
            return Err(LinkKindMismatch {
                link_type,
                expected_from: ef,
                expected_to: et,
                from: from.kind,
                to: to.kind,
            });
        }
        Ok(Self { from, to, link_type })
    }

    /// Builds a link from ids alone; kinds follow from the type.
    pub fn typed(link_type: LinkType, from: Ident, to: Ident) -> Self {
        let (f, t) = link_type.endpoints();
        Self {
            from: ArtifactRef::new(f, from),
            to: ArtifactRef::new(t, to),
            link_type,
        }
    }

    pub fn from(&self) -> &ArtifactRef {
        &self.from
    }

    pub fn to(&self) -> &ArtifactRef {
        &self.to
    }

    pub fn link_type(&self) -> LinkType {
        self.link_type
    }
}

impl TryFrom<RawLink> for TraceLink {
    type Error = LinkKindMismatch;
    fn try_from(r: RawLink) -> Result<Self, Self::Error> {
        TraceLink::new(r.from, r.to, r.link_type)
    }
}

impl From<TraceLink> for RawLink {
    fn from(l: TraceLink) -> Self {
        RawLink {
            from: l.from,
            to: l.to,
            link_type: l.link_type,
        }
    }
}
