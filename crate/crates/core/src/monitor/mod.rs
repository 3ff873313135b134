//! Post-hoc monitors: derived signals, quantified property verdicts and
//! state-machine conformance. Simulated and imported traces take the same
//! path through here.

mod catalog;
mod conformance;
mod eval;
mod signals;

use thiserror::Error;

pub use catalog::{catalog, Signal, SignalInfo, SignalSource};
pub use conformance::{change_points, check_conformance, check_states};
pub use eval::{environment_applicable, eval_property, eval_with_environment, quantify, thresholds};
pub use signals::{derive_signals, deviation_pct, environment_constants, SignalTable};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonitorError {
    #[error("property {property} needs signal {signal}, which this trace does not provide")]
    MissingSignal { property: String, signal: Signal },
    #[error("planned path has zero length")]
    ZeroPathLength,
    #[error("trace has no records")]
    EmptyTrace,
}
