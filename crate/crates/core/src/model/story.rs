//! Test stories: a concrete, executable scenario for one backend at one
//! level of fidelity, plus the fixture that prepares the backend for it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Ident, Lof, Params};
use crate::{Aabb, Vec3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindConfig {
    /// Steady wind velocity, m/s.
    pub base: Vec3,
    /// Peak gust speed, m/s; zero disables gusts.
    #[serde(default)]
    pub gust_peak: f64,
    /// Duration of one gust, s.
    #[serde(default = "default_gust_duration")]
    pub gust_duration: f64,
    /// Spacing between gust onsets, s.
    #[serde(default = "default_gust_interval")]
    pub gust_interval: f64,
}

fn default_gust_duration() -> f64 {
    4.0
}

fn default_gust_interval() -> f64 {
    15.0
}

impl Default for WindConfig {
    fn default() -> Self {
        Self {
            base: Vec3::zero(),
            gust_peak: 0.0,
            gust_duration: default_gust_duration(),
            gust_interval: default_gust_interval(),
        }
    }
}

impl WindConfig {
    /// Upper bound on the wind speed this configuration can produce.
    pub fn max_speed(&self) -> f64 {
        self.base.norm() + self.gust_peak
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObstacleShape {
    Box,
    /// Vertical cylinder; `size` is (diameter, diameter, height).
    Cylinder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Obstacle {
    #[serde(rename = "type")]
    pub shape: ObstacleShape,
    pub center: Vec3,
    pub size: Vec3,
}

impl Obstacle {
    pub fn boxed(center: Vec3, size: Vec3) -> Self {
        Self {
            shape: ObstacleShape::Box,
            center,
            size,
        }
    }

    pub fn bounds(&self) -> Aabb {
        Aabb::from_center_size(self.center, self.size)
    }

    /// Point of the solid nearest to `p`.
    pub fn closest_point(&self, p: Vec3) -> Vec3 {
        match self.shape {
            ObstacleShape::Box => self.bounds().closest_point(p),
            ObstacleShape::Cylinder => {
                let b = self.bounds();
                let radius = 0.5 * self.size.x.min(self.size.y);
                let mut radial = (p - self.center).horizontal();
                let r = radial.norm();
                if r > radius {
                    radial = radial * (radius / r);
                }
                let z = p.z.clamp(b.min.z, b.max.z);
                Vec3::new(self.center.x + radial.x, self.center.y + radial.y, z)
            }
        }
    }

    /// Distance from `p` to the solid; zero inside.
    pub fn distance(&self, p: Vec3) -> f64 {
        p.distance(self.closest_point(p))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObstacleSpec {
    /// Explicit obstacle list.
    List(Vec<Obstacle>),
    /// Fraction of the horizontal area to fill, placed from the story seed.
    Density(f64),
}

impl Default for ObstacleSpec {
    fn default() -> Self {
        ObstacleSpec::List(Vec::new())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentConfig {
    pub area: Aabb,
    #[serde(default)]
    pub wind: WindConfig,
    #[serde(default)]
    pub obstacles: ObstacleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geospatial_ref: Option<String>,
}

impl EnvironmentConfig {
    /// Obstacle density as a fraction of the horizontal area: the requested
    /// density for procedural maps, occupied footprint for explicit lists.
    pub fn obstacle_density(&self) -> f64 {
        match &self.obstacles {
            ObstacleSpec::Density(d) => *d,
            ObstacleSpec::List(list) => {
                let s = self.area.size();
                let total = s.x * s.y;
                if total <= 0.0 {
                    return 0.0;
                }
                let covered: f64 = list.iter().map(|o| o.size.x * o.size.y).sum();
                (covered / total).min(1.0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mission {
    pub home: Vec3,
    pub waypoints: Vec<Vec3>,
    pub land: Vec3,
    /// m/s
    pub cruise_speed: f64,
}

impl Mission {
    /// Planned route: home, each waypoint, then the landing point.
    pub fn route(&self) -> Vec<Vec3> {
        let mut pts = Vec::with_capacity(self.waypoints.len() + 2);
        pts.push(self.home);
        pts.extend(self.waypoints.iter().copied());
        pts.push(self.land);
        pts
    }

    pub fn path_length(&self) -> f64 {
        self.route().windows(2).map(|w| w[0].distance(w[1])).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestStory {
    pub id: Ident,
    pub test_id: Ident,
    pub lof: Lof,
    pub backend_id: Ident,
    pub seed: u64,
    pub environment: EnvironmentConfig,
    pub mission: Mission,
    pub monitor_ids: Vec<Ident>,
    /// Passed through to the backend untouched.
    #[serde(default)]
    pub connection: String,
    /// Simulator parameter overrides (see `SimConfig`).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub config: BTreeMap<String, f64>,
}

impl TestStory {
    /// Every mission point that lies outside the environment area.
    pub fn points_outside_area(&self) -> Vec<(String, Vec3)> {
        let area = &self.environment.area;
        let m = &self.mission;
        let mut out = Vec::new();
        if !area.contains(m.home) {
            out.push(("mission.home".to_string(), m.home));
        }
        for (i, w) in m.waypoints.iter().enumerate() {
            if !area.contains(*w) {
                out.push((format!("mission.waypoints[{i}]"), *w));
            }
        }
        if !area.contains(m.land) {
            out.push(("mission.land".to_string(), m.land));
        }
        out
    }
}

/// One setup step for a backend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Directive {
    pub name: String,
    #[serde(default)]
    pub params: Params,
}

impl Directive {
    /// Backend capability a directive relies on; `None` for directives every
    /// backend must support.
    pub fn capability(&self) -> Option<&'static str> {
        match self.name.as_str() {
            "load-geospatial" => Some("geospatial"),
            "place-obstacles" => Some("obstacles"),
            "set-wind" => Some("wind-model"),
            "enable-avoidance" => Some("avoidance"),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub story_id: Ident,
    pub directives: Vec<Directive>,
}

impl Fixture {
    pub fn directive_names(&self) -> Vec<&str> {
        self.directives.iter().map(|d| d.name.as_str()).collect()
    }
}
