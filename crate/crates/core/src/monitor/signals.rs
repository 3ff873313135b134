//! Per-timestep signal table derived from a trace.

use std::collections::BTreeMap;

use super::{MonitorError, Signal};
use crate::geom::cross_track;
use crate::model::{EnvironmentConfig, EventKind, Mission, StateMachine, TestTrace};
use crate::Vec3;

/// Column-oriented samples, one row per trace record.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SignalTable {
    pub t: Vec<f64>,
    pub columns: BTreeMap<Signal, Vec<f64>>,
}

impl SignalTable {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn column(&self, s: Signal) -> Option<&[f64]> {
        self.columns.get(&s).map(Vec::as_slice)
    }

    pub fn value(&self, s: Signal, row: usize) -> Option<f64> {
        self.columns.get(&s).and_then(|c| c.get(row).copied())
    }

    pub fn last(&self, s: Signal) -> Option<f64> {
        self.columns.get(&s).and_then(|c| c.last().copied())
    }

    /// Builds a table from explicit columns; every column must match `t`.
    pub fn from_columns(t: Vec<f64>, columns: BTreeMap<Signal, Vec<f64>>) -> Self {
        debug_assert!(columns.values().all(|c| c.len() == t.len()));
        Self { t, columns }
    }
}

/// Distance to the segment, or to the point when the segment is degenerate.
fn segment_distance(p: Vec3, a: Vec3, b: Vec3) -> f64 {
    cross_track(p, a, b).unwrap_or_else(|_| p.distance(a))
}

/// Running-maximum cross-track error as a percentage of planned path
/// length. At time `s` the active segment is the one after the last
/// waypoint reached by `s`.
pub fn deviation_pct(trace: &TestTrace, mission: &Mission) -> Result<Vec<f64>, MonitorError> {
    let route = mission.route();
    let length = mission.path_length();
    if !(length > 0.0) {
        return Err(MonitorError::ZeroPathLength);
    }
    let nseg = route.len() - 1;
    let mut reached: Vec<f64> = trace
        .events_of(EventKind::WaypointReached)
        .map(|e| e.t)
        .collect();
    reached.sort_by(f64::total_cmp);
    let mut worst = 0.0_f64;
    let mut k = 0usize;
    Ok(trace
        .records
        .iter()
        .map(|r| {
            while k < reached.len() && reached[k] <= r.t {
                k += 1;
            }
            let seg = k.min(nseg - 1);
            worst = worst.max(segment_distance(r.pos, route[seg], route[seg + 1]));
            100.0 * worst / length
        })
        .collect())
}

/// Computes every catalog signal the trace supports. `gps_sats` is
/// reserved and never present.
pub fn derive_signals(
    trace: &TestTrace,
    mission: &Mission,
    env: &EnvironmentConfig,
    machine: &StateMachine,
) -> Result<SignalTable, MonitorError> {
    if trace.records.is_empty() {
        return Err(MonitorError::EmptyTrace);
    }
    let recs = &trace.records;
    let n = recs.len();
    let t: Vec<f64> = recs.iter().map(|r| r.t).collect();
    let mut cols = BTreeMap::new();
    cols.insert(Signal::TimeS, t.clone());
    cols.insert(Signal::WindSpeed, recs.iter().map(|r| r.wind.norm()).collect());
    cols.insert(Signal::BatteryPct, recs.iter().map(|r| r.battery_pct).collect());
    cols.insert(Signal::Altitude, recs.iter().map(|r| r.pos.z).collect());
    cols.insert(Signal::ObsMinDist, recs.iter().map(|r| r.obs_min_dist).collect());
    cols.insert(Signal::DeviationPct, deviation_pct(trace, mission)?);

    let mut collisions: Vec<f64> = trace.events_of(EventKind::Collision).map(|e| e.t).collect();
    collisions.sort_by(f64::total_cmp);
    let mut k = 0usize;
    cols.insert(
        Signal::ColCount,
        t.iter()
            .map(|ti| {
                while k < collisions.len() && collisions[k] <= *ti {
                    k += 1;
                }
                k as f64
            })
            .collect(),
    );

    let landed = trace.events_of(EventKind::Landed).next().is_some();
    let final_ok = recs.last().is_some_and(|r| r.sut_state == machine.final_state.as_str());
    let success = if landed && final_ok { 1.0 } else { 0.0 };
    cols.insert(Signal::MissSuccess, vec![success; n]);
    cols.insert(Signal::ObsDensity, vec![env.obstacle_density(); n]);

    Ok(SignalTable::from_columns(t, cols))
}

/// Environment constants an `env` property is checked against before the
/// run: the largest wind speed the configuration can produce and the
/// obstacle density.
pub fn environment_constants(env: &EnvironmentConfig) -> BTreeMap<Signal, f64> {
    BTreeMap::from([
        (Signal::WindSpeed, env.wind.max_speed()),
        (Signal::ObsDensity, env.obstacle_density()),
    ])
}
