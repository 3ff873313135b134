//! Execution traces and their JSON-lines encoding.
//!
//! One `TraceRecord` object per line, followed by a final line holding
//! `{"events": [...]}`. Simulated runs and imported field or HITL logs use
//! the same encoding, so the same analysis applies to both.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::{Ident, Lof, StateMachine};
use crate::Vec3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceRecord {
    /// s
    pub t: f64,
    pub pos: Vec3,
    /// Ground velocity, m/s.
    pub vel: Vec3,
    /// Commanded air-relative velocity, m/s.
    pub cmd_vel: Vec3,
    pub wind: Vec3,
    pub sut_state: String,
    pub battery_pct: f64,
    /// Distance to the nearest obstacle surface; infinite without obstacles
    /// (encoded as `null`).
    #[serde(with = "inf_as_null")]
    pub obs_min_dist: f64,
}

mod inf_as_null {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_none()
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    WaypointReached,
    Collision,
    Landed,
    BatteryDepleted,
    Abort,
    /// SuT state machine transition; `detail` holds the machine's event text.
    Transition,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("enum serializes");
        f.write_str(s.as_str().unwrap_or_default())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceEvent {
    pub t: f64,
    pub kind: EventKind,
    #[serde(default)]
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestTrace {
    pub id: Ident,
    pub story_id: Ident,
    pub lof: Lof,
    pub records: Vec<TraceRecord>,
    pub events: Vec<TraceEvent>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventsLine {
    events: Vec<TraceEvent>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceFormatError {
    #[error("no records")]
    NoRecords,
    #[error("line {line}: malformed record: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: events object must be the last line")]
    EventsNotLast { line: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("no records")]
    NoRecords,
    #[error("record {index}: first record must be at t=0, got {t}")]
    NonZeroStart { index: usize, t: f64 },
    #[error("line {line}: non-monotonic timestamp {t} after {prev}")]
    NonMonotonic { line: usize, t: f64, prev: f64 },
    #[error("record {index}: non-finite value in {field}")]
    NonFinite { index: usize, field: &'static str },
    #[error("event {index} ({kind}) at t={t} outside [0, {end}]")]
    EventOutOfRange {
        index: usize,
        kind: EventKind,
        t: f64,
        end: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceWarning {
    BatteryIncrease { line: usize, from: f64, to: f64 },
    UnknownState { line: usize, state: String },
}

impl fmt::Display for TraceWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceWarning::BatteryIncrease { line, from, to } => {
                write!(f, "line {line}: battery_pct increases from {from} to {to}")
            }
            TraceWarning::UnknownState { line, state } => {
                write!(f, "line {line}: unknown sut_state {state:?}; conformance will fail")
            }
        }
    }
}

/// Records and events decoded from JSON-lines, not yet validated.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceBody {
    pub records: Vec<TraceRecord>,
    pub events: Vec<TraceEvent>,
}

impl TraceBody {
    pub fn to_jsonl(&self) -> String {
        encode_jsonl(&self.records, &self.events)
    }

    /// Decodes the shared trace encoding. Blank lines are ignored; the events
    /// line is optional but must come last when present.
    pub fn parse_jsonl(text: &str) -> Result<Self, TraceFormatError> {
        let mut records = Vec::new();
        let mut events: Option<Vec<TraceEvent>> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            if events.is_some() {
                return Err(TraceFormatError::EventsNotLast { line: line - 1 });
            }
            let value: serde_json::Value =
                serde_json::from_str(raw).map_err(|e| TraceFormatError::Malformed {
                    line,
                    message: e.to_string(),
                })?;
            let is_events = value.as_object().is_some_and(|o| o.contains_key("events"));
            if is_events {
                let ev: EventsLine =
                    serde_json::from_value(value).map_err(|e| TraceFormatError::Malformed {
                        line,
                        message: e.to_string(),
                    })?;
                events = Some(ev.events);
            } else {
                let rec: TraceRecord =
                    serde_json::from_value(value).map_err(|e| TraceFormatError::Malformed {
                        line,
                        message: e.to_string(),
                    })?;
                records.push(rec);
            }
        }
        if records.is_empty() {
            return Err(TraceFormatError::NoRecords);
        }
        Ok(Self {
            records,
            events: events.unwrap_or_default(),
        })
    }

    /// Structural checks. Records are numbered from 1, matching their line
    /// in the JSON-lines encoding.
    pub fn validate(&self) -> Result<(), TraceError> {
        let first = self.records.first().ok_or(TraceError::NoRecords)?;
        if first.t != 0.0 {
            return Err(TraceError::NonZeroStart { index: 1, t: first.t });
        }
        for (i, r) in self.records.iter().enumerate() {
            let check = |ok: bool, field| {
                if ok {
                    Ok(())
                } else {
                    Err(TraceError::NonFinite { index: i + 1, field })
                }
            };
            check(r.t.is_finite(), "t")?;
            check(r.pos.is_finite(), "pos")?;
            check(r.vel.is_finite(), "vel")?;
            check(r.cmd_vel.is_finite(), "cmd_vel")?;
            check(r.wind.is_finite(), "wind")?;
            check(r.battery_pct.is_finite(), "battery_pct")?;
            check(!r.obs_min_dist.is_nan(), "obs_min_dist")?;
        }
        for (i, w) in self.records.windows(2).enumerate() {
            if w[1].t <= w[0].t {
                return Err(TraceError::NonMonotonic {
                    line: i + 2,
                    t: w[1].t,
                    prev: w[0].t,
                });
            }
        }
        let end = self.records.last().map_or(0.0, |r| r.t);
        for (i, e) in self.events.iter().enumerate() {
            if !(e.t >= 0.0 && e.t <= end) {
                return Err(TraceError::EventOutOfRange {
                    index: i,
                    kind: e.kind,
                    t: e.t,
                    end,
                });
            }
        }
        Ok(())
    }

    /// Non-fatal findings: battery recharges and, when a machine is given,
    /// states it does not declare.
    pub fn warnings(&self, machine: Option<&StateMachine>) -> Vec<TraceWarning> {
        let mut out = Vec::new();
        for (i, w) in self.records.windows(2).enumerate() {
            if w[1].battery_pct > w[0].battery_pct {
                out.push(TraceWarning::BatteryIncrease {
                    line: i + 2,
                    from: w[0].battery_pct,
                    to: w[1].battery_pct,
                });
            }
        }
        if let Some(m) = machine {
            let mut reported: Vec<&str> = Vec::new();
            for (i, r) in self.records.iter().enumerate() {
                if !m.has_state(&r.sut_state) && !reported.contains(&r.sut_state.as_str()) {
                    reported.push(&r.sut_state);
                    out.push(TraceWarning::UnknownState {
                        line: i + 1,
                        state: r.sut_state.clone(),
                    });
                }
            }
        }
        out
    }
}

pub(crate) fn encode_jsonl(records: &[TraceRecord], events: &[TraceEvent]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    let ev = EventsLine {
        events: events.to_vec(),
    };
    out.push_str(&serde_json::to_string(&ev).expect("events serialize"));
    out.push('\n');
    out
}

impl TestTrace {
    pub fn body(&self) -> TraceBody {
        TraceBody {
            records: self.records.clone(),
            events: self.events.clone(),
        }
    }

    pub fn to_jsonl(&self) -> String {
        encode_jsonl(&self.records, &self.events)
    }

    pub fn duration(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.t)
    }

    pub fn events_of(&self, kind: EventKind) -> impl Iterator<Item = &TraceEvent> {
        self.events.iter().filter(move |e| e.kind == kind)
    }
}
