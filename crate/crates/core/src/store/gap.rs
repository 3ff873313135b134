//! How far two executions of the same story drift apart, typically a
//! simulated run against an imported field or HITL log.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::report::{analyze, ReportError};
use crate::model::{Ident, Lof, TestModel, TestStory, TestTrace, VVProperty};
use crate::monitor::{deviation_pct, MonitorError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GapError {
    #[error("traces belong to different stories ({a} vs {b})")]
    DifferentStories { a: Ident, b: Ident },
    #[error("trace {0} needs at least two records")]
    TooShort(Ident),
    #[error("time windows do not overlap: [{a_start}, {a_end}] vs [{b_start}, {b_end}]")]
    Disjoint {
        a_start: f64,
        a_end: f64,
        b_start: f64,
        b_end: f64,
    },
    #[error(transparent)]
    Monitor(#[from] MonitorError),
    #[error(transparent)]
    Report(#[from] ReportError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSide {
    pub id: Ident,
    pub lof: Lof,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalGap {
    pub rmse: f64,
    pub max_abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub story_id: Ident,
    pub trace_a: TraceSide,
    pub trace_b: TraceSide,
    /// Resampling step: the coarser of the two mean record spacings.
    pub dt: f64,
    pub samples: usize,
    /// `pos` pools all three axes: the RMS over every axis and sample.
    pub signals: BTreeMap<String, SignalGap>,
    /// Fraction of monitored properties with the same verdict on both.
    pub verdict_agreement: f64,
    /// Duration of `b` over duration of `a`.
    pub duration_ratio: f64,
}

struct Series {
    t: Vec<f64>,
    columns: Vec<(&'static str, Vec<f64>)>,
}

fn series(trace: &TestTrace, story: &TestStory) -> Result<Series, GapError> {
    let r = &trace.records;
    Ok(Series {
        t: r.iter().map(|x| x.t).collect(),
        columns: vec![
            ("pos.x", r.iter().map(|x| x.pos.x).collect()),
            ("pos.y", r.iter().map(|x| x.pos.y).collect()),
            ("pos.z", r.iter().map(|x| x.pos.z).collect()),
            ("battery_pct", r.iter().map(|x| x.battery_pct).collect()),
            ("deviation_pct", deviation_pct(trace, &story.mission)?),
        ],
    })
}

/// Linear interpolation of `(t, v)` at `at`, clamped at the ends.
fn interp(t: &[f64], v: &[f64], at: f64) -> f64 {
    let i = t.partition_point(|x| *x <= at);
    if i == 0 {
        return v[0];
    }
    if i == t.len() {
        return v[t.len() - 1];
    }
    let (t0, t1) = (t[i - 1], t[i]);
    let w = (at - t0) / (t1 - t0);
    v[i - 1] + (v[i] - v[i - 1]) * w
}

fn mean_dt(trace: &TestTrace) -> f64 {
    let r = &trace.records;
    (r[r.len() - 1].t - r[0].t) / (r.len() - 1) as f64
}

pub fn compare_traces(
    a: &TestTrace,
    b: &TestTrace,
    story: &TestStory,
    test: &TestModel,
    properties: &[VVProperty],
) -> Result<GapReport, GapError> {
    if a.story_id != b.story_id {
        return Err(GapError::DifferentStories {
            a: a.story_id.clone(),
            b: b.story_id.clone(),
        });
    }
    for t in [a, b] {
        if t.records.len() < 2 {
            return Err(GapError::TooShort(t.id.clone()));
        }
    }
    let span = |t: &TestTrace| (t.records[0].t, t.records[t.records.len() - 1].t);
    let ((a0, a1), (b0, b1)) = (span(a), span(b));
    let (start, end) = (a0.max(b0), a1.min(b1));
    if start > end {
        return Err(GapError::Disjoint {
            a_start: a0,
            a_end: a1,
            b_start: b0,
            b_end: b1,
        });
    }
    let dt = mean_dt(a).max(mean_dt(b));
    let samples = ((end - start) / dt + 1e-9).floor() as usize + 1;
    let times: Vec<f64> = (0..samples).map(|k| start + k as f64 * dt).collect();

    let (sa, sb) = (series(a, story)?, series(b, story)?);
    let mut signals = BTreeMap::new();
    let mut pos_sq = 0.0;
    let mut pos_max = 0.0f64;
    for ((name, va), (_, vb)) in sa.columns.iter().zip(&sb.columns) {
        let mut sq = 0.0;
        let mut max = 0.0f64;
        for &t in &times {
            let d = interp(&sa.t, va, t) - interp(&sb.t, vb, t);
            sq += d * d;
            max = max.max(d.abs());
        }
        if name.starts_with("pos.") {
            pos_sq += sq;
            pos_max = pos_max.max(max);
        }
        signals.insert(
            name.to_string(),
            SignalGap {
                rmse: (sq / samples as f64).sqrt(),
                max_abs_diff: max,
            },
        );
    }
    signals.insert(
        "pos".to_string(),
        SignalGap {
            rmse: (pos_sq / (3 * samples) as f64).sqrt(),
            max_abs_diff: pos_max,
        },
    );

    let ra = analyze(a, story, test, properties)?;
    let rb = analyze(b, story, test, properties)?;
    let total = ra.per_property.len();
    let agree = ra
        .per_property
        .iter()
        .zip(&rb.per_property)
        .filter(|(x, y)| x.verdict == y.verdict)
        .count();
    let verdict_agreement = if total == 0 { 1.0 } else { agree as f64 / total as f64 };
    let duration_ratio = if a.duration() > 0.0 {
        b.duration() / a.duration()
    } else {
        1.0
    };

    Ok(GapReport {
        story_id: a.story_id.clone(),
        trace_a: TraceSide {
            id: a.id.clone(),
            lof: a.lof,
        },
        trace_b: TraceSide {
            id: b.id.clone(),
            lof: b.lof,
        },
        dt,
        samples,
        signals,
        verdict_agreement,
        duration_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_clamps_and_blends() {
        let t = [0.0, 1.0, 2.0];
        let v = [0.0, 10.0, 30.0];
        assert_eq!(interp(&t, &v, -1.0), 0.0);
        assert_eq!(interp(&t, &v, 0.5), 5.0);
        assert_eq!(interp(&t, &v, 1.0), 10.0);
        assert_eq!(interp(&t, &v, 1.5), 20.0);
        assert_eq!(interp(&t, &v, 9.0), 30.0);
    }
}
