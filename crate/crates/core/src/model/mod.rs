//! Domain types for requirements, V&V properties, test models, stories,
//! traces, reports, traceability links and safety claims.
//!
//! Everything here is plain immutable data plus validation; parsing lives in
//! [`crate::lang`] and execution in [`crate::sim`] and [`crate::orchestrator`].

pub mod capability;
mod claim;
mod ident;
mod link;
mod lof;
mod project;
mod property;
mod report;
mod requirement;
mod scenario;
mod story;
mod test_model;
mod trace;
mod units;

pub use claim::SafetyClaim;
pub use ident::{Ident, InvalidIdent};
pub use link::{ArtifactKind, ArtifactRef, LinkKindMismatch, LinkType, TraceLink};
pub use lof::{InvalidLof, Lof};
pub use project::{
    environment_issues, exec_requirement_issues, find_claim_cycle, mission_issues, story_issues,
    test_model_issues, validate_project, Diagnostic, Located, Project, Source,
};
pub use property::{
    ArithOp, BoolExpr, Comparison, Literal, PropertyKind, Quantifier, RelOp, Term, VVProperty,
    EQ_TOLERANCE,
};
pub use report::{
    Conformance, ConformanceViolation, PropertyResult, Reading, ReportStats, TestReport,
    Threshold, Verdict,
};
pub use requirement::Requirement;
pub use scenario::{Scenario, WindOverrides};
pub use story::{
    Directive, EnvironmentConfig, Fixture, Mission, Obstacle, ObstacleShape, ObstacleSpec,
    TestStory, WindConfig,
};
pub use test_model::{ExecRequirement, ParamValue, Params, StateMachine, TestModel, Transition};
pub(crate) use test_model::escape;
pub use trace::{
    EventKind, TestTrace, TraceBody, TraceError, TraceEvent, TraceFormatError, TraceRecord,
    TraceWarning,
};
pub use units::{Unit, MPH_IN_MPS};
