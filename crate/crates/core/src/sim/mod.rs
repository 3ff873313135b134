//! The desk-scale simulator backend (LoF-1) and the backend contract.
//!
//! The vehicle is a point mass whose air-relative velocity follows the
//! command through a first-order lag; wind adds directly to ground
//! velocity. Every random draw comes from splitmix64 streams derived from
//! the story seed, so a run is a pure function of (story, test, config).

mod backend;
mod config;
mod obstacles;
pub mod rng;
mod run;
mod wind;

use thiserror::Error;

pub use backend::{
    builtin_backends, desk_sim, field, hitl_import, lookup_backend, Backend, BackendDescriptor,
    DeskSim, DESK_SIM, FIELD, HITL_IMPORT,
};
pub use config::SimConfig;
pub use obstacles::{
    avoidance_offset, exempt_cells, min_distance, occupied_cells, place_obstacles, Grid, CELL,
    MIN_HEIGHT,
};
pub use run::run_story;
pub use wind::{gust_envelope, wind_at};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("story rejected: {0}")]
    Story(String),
}
