//! Test reports: verdicts, conformance and summary statistics for one trace.

use thiserror::Error;

use crate::ids;
use crate::model::{
    Conformance, EventKind, Ident, PropertyKind, PropertyResult, ReportStats, TestModel,
    TestReport, TestStory, TestTrace, VVProperty, Verdict,
};
use crate::monitor::{
    check_conformance, derive_signals, environment_constants, eval_with_environment,
    MonitorError, Signal, SignalTable,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error("verdict for property {0}, which the story does not monitor")]
    UnknownProperty(Ident),
    #[error("trace {trace} belongs to story {found}, not {expected}")]
    WrongStory {
        trace: Ident,
        expected: Ident,
        found: Ident,
    },
    #[error("story is for test {story_test}, not {test}")]
    WrongTest { story_test: Ident, test: Ident },
    #[error(transparent)]
    Monitor(#[from] MonitorError),
}

/// Assembles a report from already computed verdicts. Stats come from the
/// derived signal table.
pub fn build_report(
    trace: &TestTrace,
    story: &TestStory,
    test: &TestModel,
    per_property: Vec<PropertyResult>,
    conformance: Conformance,
    table: &SignalTable,
) -> Result<TestReport, ReportError> {
    check_ids(trace, story, test)?;
    if let Some(p) = per_property.iter().find(|p| !story.monitor_ids.contains(&p.property_id)) {
        return Err(ReportError::UnknownProperty(p.property_id.clone()));
    }
    let assumption_warnings = per_property
        .iter()
        .filter(|p| p.kind == PropertyKind::Env && p.verdict == Verdict::Inapplicable)
        .map(|p| {
            let readings: Vec<String> = p
                .witness
                .iter()
                .map(|(s, r)| {
                    let unit = s.info().unit;
                    if unit.is_empty() {
                        format!("{} = {}", s.name(), r.0)
                    } else {
                        format!("{} = {} {unit}", s.name(), r.0)
                    }
                })
                .collect();
            let limits: Vec<&str> = p.thresholds.iter().map(|t| t.original.as_str()).collect();
            format!(
                "{}: environment assumption not met ({}; limit {})",
                p.property_id,
                readings.join(", "),
                limits.join(", ")
            )
        })
        .collect();
    let overall = TestReport::compute_overall(&per_property, &conformance);
    let battery = table.column(Signal::BatteryPct).unwrap_or_default();
    let stats = ReportStats {
        deviation_pct_max: table
            .column(Signal::DeviationPct)
            .unwrap_or_default()
            .iter()
            .copied()
            .fold(0.0, f64::max),
        col_count: trace.events_of(EventKind::Collision).count() as u32,
        mission_success: table.last(Signal::MissSuccess) == Some(1.0),
        duration_s: trace.duration(),
        battery_used_pct: match (battery.first(), battery.last()) {
            (Some(a), Some(b)) => a - b,
            _ => 0.0,
        },
    };
    let mut report = TestReport {
        id: Ident::new("pending").expect("static id"),
        test_id: test.id.clone(),
        trace_id: trace.id.clone(),
        story_id: story.id.clone(),
        lof: trace.lof,
        per_property,
        conformance,
        overall,
        assumption_warnings,
        stats,
    };
    report.id = ids::report_id(&report);
    Ok(report)
}

fn check_ids(trace: &TestTrace, story: &TestStory, test: &TestModel) -> Result<(), ReportError> {
    if trace.story_id != story.id {
        return Err(ReportError::WrongStory {
            trace: trace.id.clone(),
            expected: story.id.clone(),
            found: trace.story_id.clone(),
        });
    }
    if story.test_id != test.id {
        return Err(ReportError::WrongTest {
            story_test: story.test_id.clone(),
            test: test.id.clone(),
        });
    }
    Ok(())
}

/// Monitors, conformance and report for a trace, whatever produced it.
/// `properties` must include every property the story monitors.
pub fn analyze(
    trace: &TestTrace,
    story: &TestStory,
    test: &TestModel,
    properties: &[VVProperty],
) -> Result<TestReport, ReportError> {
    check_ids(trace, story, test)?;
    let table = derive_signals(trace, &story.mission, &story.environment, &test.machine)?;
    let constants = environment_constants(&story.environment);
    let results = story
        .monitor_ids
        .iter()
        .map(|id| {
            let prop = properties
                .iter()
                .find(|p| &p.id == id)
                .ok_or_else(|| ReportError::UnknownProperty(id.clone()))?;
            Ok(eval_with_environment(prop, &table, &constants)?)
        })
        .collect::<Result<Vec<_>, ReportError>>()?;
    let conformance = check_conformance(trace, &test.machine);
    build_report(trace, story, test, results, conformance, &table)
}
