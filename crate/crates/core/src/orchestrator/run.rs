use thiserror::Error;

use super::ledger::{GateViolation, LedgerEntry, RunRecord};
use crate::model::{Ident, LinkType, Lof, TestModel, TestReport, TestStory, TestTrace, TraceLink, VVProperty};
use crate::sim::{builtin_backends, Backend, BackendDescriptor, DeskSim, SimError};
use crate::store::{analyze, ProjectStore, ReportError, StoreError};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Gate(#[from] GateViolation),
    #[error("story {story_id} runs on {backend} at {lof}, which has no driver here; record it externally and import the trace")]
    AwaitingImport { story_id: Ident, backend: Ident, lof: Lof },
    #[error("unknown backend {0}")]
    UnknownBackend(Ident),
    #[error("story {story} is for test {expected}, not {found}")]
    WrongTest { story: Ident, expected: Ident, found: Ident },
    #[error("trace is tagged {trace_lof} but story {story} is {story_lof}")]
    LofMismatch { story: Ident, story_lof: Lof, trace_lof: Lof },
    #[error("backend failed: {0}")]
    Backend(#[from] SimError),
    #[error(transparent)]
    Analysis(#[from] ReportError),
    #[error(transparent)]
    Store(StoreError),
}

impl From<StoreError> for RunError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Ledger(crate::orchestrator::LedgerError::Gate(g)) => RunError::Gate(g),
            other => RunError::Store(other),
        }
    }
}

/// Known backends: descriptors for matching, drivers for the executable
/// ones.
pub struct Registry {
    descriptors: Vec<BackendDescriptor>,
    drivers: Vec<Box<dyn Backend>>,
}

impl Default for Registry {
    fn default() -> Self {
        Self {
            descriptors: builtin_backends(),
            drivers: vec![Box::new(DeskSim::default())],
        }
    }
}

impl Registry {
    pub fn builtin() -> Self {
        Self::default()
    }

    /// Adds or replaces a driver (and its descriptor).
    pub fn register(&mut self, driver: Box<dyn Backend>) {
        let id = driver.descriptor().id.clone();
        self.descriptors.retain(|d| d.id != id);
        self.descriptors.push(driver.descriptor().clone());
        self.drivers.retain(|d| d.descriptor().id != id);
        self.drivers.push(driver);
    }

    pub fn descriptor(&self, id: &str) -> Option<&BackendDescriptor> {
        self.descriptors.iter().find(|d| d.id == id)
    }

    pub fn descriptors(&self) -> &[BackendDescriptor] {
        &self.descriptors
    }

    pub fn driver(&self, id: &str) -> Option<&dyn Backend> {
        self.drivers
            .iter()
            .find(|d| d.descriptor().id == id && d.descriptor().executable)
            .map(|d| d.as_ref())
    }
}

/// Result of one analyzed run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub trace: TestTrace,
    pub report: TestReport,
    pub ledger_entry: LedgerEntry,
    /// materializes, produced, analyzed.
    pub links: [TraceLink; 3],
}

/// Checks the fidelity gate, executes the story on its backend and records
/// the analyzed result. Stories for backends without a driver fail with
/// [`RunError::AwaitingImport`]; their traces enter through
/// [`record_trace`] instead.
pub fn gate_and_run(
    store: &mut ProjectStore,
    registry: &Registry,
    story: &TestStory,
    test: &TestModel,
    properties: &[VVProperty],
) -> Result<RunOutcome, RunError> {
    check_test(story, test)?;
    store.ledger().check_gate(&test.id, story.lof)?;
    let driver = match registry.driver(story.backend_id.as_str()) {
        Some(d) => d,
        None if registry.descriptor(story.backend_id.as_str()).is_some() => {
            return Err(RunError::AwaitingImport {
                story_id: story.id.clone(),
                backend: story.backend_id.clone(),
                lof: story.lof,
            })
        }
        None => return Err(RunError::UnknownBackend(story.backend_id.clone())),
    };
    let trace = driver.execute(story, test)?;
    record_trace(store, trace, story, test, properties)
}

fn check_test(story: &TestStory, test: &TestModel) -> Result<(), RunError> {
    if story.test_id != test.id {
        return Err(RunError::WrongTest {
            story: story.id.clone(),
            expected: story.test_id.clone(),
            found: test.id.clone(),
        });
    }
    Ok(())
}

/// The analysis path shared by executed and imported traces: gate check,
/// monitors and conformance, then the trace, report, three links and
/// ledger entry. Nothing is linked or recorded if any step before the
/// link write fails.
pub fn record_trace(
    store: &mut ProjectStore,
    trace: TestTrace,
    story: &TestStory,
    test: &TestModel,
    properties: &[VVProperty],
) -> Result<RunOutcome, RunError> {
    check_test(story, test)?;
    if trace.lof != story.lof {
        return Err(RunError::LofMismatch {
            story: story.id.clone(),
            story_lof: story.lof,
            trace_lof: trace.lof,
        });
    }
    store.ledger().check_gate(&test.id, story.lof)?;
    let report = analyze(&trace, story, test, properties)?;

    store.put_test(test)?;
    for p in properties {
        store.put_property(p)?;
    }
    store.put_story(story, None)?;
    store.put_trace(&trace)?;
    store.put_report(&report)?;
    let links = [
        TraceLink::typed(LinkType::Materializes, test.id.clone(), story.id.clone()),
        TraceLink::typed(LinkType::Produced, story.id.clone(), trace.id.clone()),
        TraceLink::typed(LinkType::Analyzed, trace.id.clone(), report.id.clone()),
    ];
    store.append_links(&links)?;
    let ledger_entry = store.record_run(RunRecord {
        test_id: test.id.clone(),
        lof: story.lof,
        story_id: story.id.clone(),
        trace_id: trace.id.clone(),
        report_id: report.id.clone(),
        verdict: report.overall,
    })?;
    Ok(RunOutcome {
        trace,
        report,
        ledger_entry,
        links,
    })
}
