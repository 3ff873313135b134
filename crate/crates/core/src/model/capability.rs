//! Capability vocabulary shared by test execution requirements and backend
//! descriptors.

use serde::{Deserialize, Serialize};

/// A named capability with the parameters a requirement may set on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capability {
    pub name: String,
    pub params: Vec<String>,
}

impl Capability {
    pub fn new(name: &str, params: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            params: params.iter().map(|p| p.to_string()).collect(),
        }
    }

    pub fn accepts(&self, param: &str) -> bool {
        self.params.iter().any(|p| p == param)
    }
}

pub const WIND_MODEL: &str = "wind-model";
pub const OBSTACLES: &str = "obstacles";
pub const GEOSPATIAL: &str = "geospatial";
pub const AVOIDANCE: &str = "avoidance";

/// Every capability name the tooling knows, with its parameter schema.
/// `gps-model` and `radio-model` are reserved: no bundled backend offers them.
pub fn vocabulary() -> Vec<Capability> {
    vec![
        Capability::new(
            WIND_MODEL,
            &["vel", "dir", "coord", "gust_peak", "gust_duration", "gust_interval"],
        ),
        Capability::new(OBSTACLES, &["type", "location", "size", "density"]),
        Capability::new(GEOSPATIAL, &["tag"]),
        Capability::new(AVOIDANCE, &[]),
        Capability::new("gps-model", &["sats", "noise"]),
        Capability::new("radio-model", &["loss", "latency"]),
    ]
}

pub fn lookup(name: &str) -> Option<Capability> {
    vocabulary().into_iter().find(|c| c.name == name)
}
