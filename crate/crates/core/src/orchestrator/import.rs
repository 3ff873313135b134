use thiserror::Error;

use crate::ids;
use crate::model::{
    Ident, Lof, StateMachine, TestTrace, TraceBody, TraceError, TraceFormatError, TraceWarning,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImportError {
    #[error(transparent)]
    Format(#[from] TraceFormatError),
    #[error(transparent)]
    Invalid(#[from] TraceError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImportedTrace {
    pub trace: TestTrace,
    pub warnings: Vec<TraceWarning>,
}

/// Reads an externally recorded trace (HITL rig, field log) in the shared
/// JSON-lines encoding and tags it with its story and level of fidelity.
/// With `machine`, states it does not declare are reported as warnings;
/// conformance will then fail during analysis.
pub fn import_trace(
    text: &str,
    story_id: &Ident,
    lof: Lof,
    machine: Option<&StateMachine>,
) -> Result<ImportedTrace, ImportError> {
    let body = TraceBody::parse_jsonl(text)?;
    body.validate()?;
    let warnings = body.warnings(machine);
    let mut trace = TestTrace {
        id: Ident::new("pending").expect("static id"),
        story_id: story_id.clone(),
        lof,
        records: body.records,
        events: body.events,
    };
    trace.id = ids::trace_id(&trace);
    Ok(ImportedTrace { trace, warnings })
}
