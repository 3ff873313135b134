//! The test workflow: match a test's execution requirements against a
//! backend, materialize a story and fixture, gate execution by level of
//! fidelity, run or import, analyze, and record.

mod import;
mod ledger;
mod matching;
mod materialize;
mod protocol;
mod run;

pub use import::{import_trace, ImportError, ImportedTrace};
pub use ledger::{GateViolation, LedgerEntry, LedgerError, LofLedger, RunRecord};
pub use matching::{match_capabilities, MatchResult, Missing};
pub use materialize::{materialize_story, MaterializeError};
pub use protocol::{generate_field_protocol, FieldProtocol, ProtocolError};
pub use run::{gate_and_run, record_trace, Registry, RunError, RunOutcome};
