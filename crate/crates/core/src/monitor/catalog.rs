//! The fixed catalog of signals that properties may reference.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Where a signal's value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignalSource {
    /// Read directly from a trace record.
    Recorded,
    /// Computed from records and the planned mission.
    Derived,
    /// Cumulative count over trace events.
    Event,
    /// Single value known once the trace is complete, broadcast to every step.
    EndOfTrace,
    /// Constant taken from the story's environment configuration.
    Environment,
    /// Name is reserved; no backend produces it yet.
    Reserved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Signal {
    TimeS,
    WindSpeed,
    DeviationPct,
    BatteryPct,
    Altitude,
    ObsMinDist,
    ColCount,
    MissSuccess,
    ObsDensity,
    GpsSats,
}

/// Catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignalInfo {
    pub signal: Signal,
    pub name: &'static str,
    pub unit: &'static str,
    pub source: SignalSource,
    /// May appear in `env` properties.
    pub environment: bool,
    /// Human wording used in field protocols.
    pub field_label: &'static str,
}

const CATALOG: [SignalInfo; 10] = [
    SignalInfo {
        signal: Signal::TimeS,
        name: "time_s",
        unit: "s",
        source: SignalSource::Recorded,
        environment: false,
        field_label: "elapsed time",
    },
    SignalInfo {
        signal: Signal::WindSpeed,
        name: "wind_speed",
        unit: "m/s",
        source: SignalSource::Recorded,
        environment: true,
        field_label: "wind gusts",
    },
    SignalInfo {
        signal: Signal::DeviationPct,
        name: "deviation_pct",
        unit: "pct",
        source: SignalSource::Derived,
        environment: false,
        field_label: "flight path deviation",
    },
    SignalInfo {
        signal: Signal::BatteryPct,
        name: "battery_pct",
        unit: "pct",
        source: SignalSource::Recorded,
        environment: false,
        field_label: "battery charge",
    },
    SignalInfo {
        signal: Signal::Altitude,
        name: "altitude",
        unit: "m",
        source: SignalSource::Recorded,
        environment: false,
        field_label: "altitude",
    },
    SignalInfo {
        signal: Signal::ObsMinDist,
        name: "obs_min_dist",
        unit: "m",
        source: SignalSource::Recorded,
        environment: false,
        field_label: "proximity to obstacles",
    },
    SignalInfo {
        signal: Signal::ColCount,
        name: "col_count",
        unit: "count",
        source: SignalSource::Event,
        environment: false,
        field_label: "collision count",
    },
    SignalInfo {
        signal: Signal::MissSuccess,
        name: "miss_success",
        unit: "bool",
        source: SignalSource::EndOfTrace,
        environment: false,
        field_label: "mission success",
    },
    SignalInfo {
        signal: Signal::ObsDensity,
        name: "obs_density",
        unit: "fraction",
        source: SignalSource::Environment,
        environment: true,
        field_label: "obstacle density",
    },
    SignalInfo {
        signal: Signal::GpsSats,
        name: "gps_sats",
        unit: "count",
        source: SignalSource::Reserved,
        environment: true,
        field_label: "GPS satellites in view",
    },
];

impl Signal {
    pub const ALL: [Signal; 10] = [
        Signal::TimeS,
        Signal::WindSpeed,
        Signal::DeviationPct,
        Signal::BatteryPct,
        Signal::Altitude,
        Signal::ObsMinDist,
        Signal::ColCount,
        Signal::MissSuccess,
        Signal::ObsDensity,
        Signal::GpsSats,
    ];

    pub fn info(self) -> &'static SignalInfo {
        CATALOG
            .iter()
            .find(|i| i.signal == self)
            .expect("every signal has a catalog entry")
    }

    pub fn name(self) -> &'static str {
        self.info().name
    }

    pub fn is_environment(self) -> bool {
        self.info().environment
    }

    /// Looks up a signal by catalog name. Dotted spellings (`miss.success`,
    /// `col.count`) resolve to their underscore form.
    pub fn lookup(name: &str) -> Option<Signal> {
        let canonical = name.replace('.', "_");
        CATALOG.iter().find(|i| i.name == canonical).map(|i| i.signal)
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The full catalog in declaration order.
pub fn catalog() -> &'static [SignalInfo] {
    &CATALOG
}
