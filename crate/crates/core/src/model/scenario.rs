use serde::{Deserialize, Serialize};

use super::{Ident, Mission, ObstacleSpec};
use crate::{Aabb, Vec3};

/// Optional wind settings that take precedence over the test's
/// `wind-model` requirement parameters.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gust_peak: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gust_duration: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gust_interval: Option<f64>,
}

/// Scenario parameters a test story is materialized from: where the test
/// flies, the mission, and how to reach the SuT.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub id: Ident,
    pub test: Ident,
    pub area: Aabb,
    pub mission: Mission,
    #[serde(default)]
    pub connection: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wind: Option<WindOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstacles: Option<ObstacleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geospatial_ref: Option<String>,
}
