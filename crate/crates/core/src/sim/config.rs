use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SimError;

/// Simulator parameters. Every field can be overridden per story through
/// the story's `config` map, keyed by field name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Integration step, s.
    pub dt: f64,
    /// Maximum commanded airspeed, m/s.
    pub v_max: f64,
    /// First-order lag of the velocity command, s.
    pub tau: f64,
    /// m
    pub drone_radius: f64,
    /// Distance at which a waypoint counts as reached, m.
    pub wp_tolerance: f64,
    /// Height above the landing point at which touchdown is declared, m;
    /// the vehicle must also be within `wp_tolerance` horizontally.
    pub land_tolerance: f64,
    /// Idle drain, %/s.
    pub battery_a: f64,
    /// Speed-dependent drain, %·s/m², multiplied by |cmd_vel|².
    pub battery_b: f64,
    /// s
    pub max_duration: f64,
    /// Peak repulsive speed of obstacle avoidance, m/s.
    pub avoid_gain: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 0.1,
            v_max: 18.0,
            tau: 0.5,
            drone_radius: 0.5,
            wp_tolerance: 2.0,
            land_tolerance: 0.5,
            battery_a: 0.02,
            battery_b: 0.003,
            max_duration: 600.0,
            avoid_gain: 6.0,
        }
    }
}

impl SimConfig {
    pub const KEYS: [&'static str; 10] = [
        "dt",
        "v_max",
        "tau",
        "drone_radius",
        "wp_tolerance",
        "land_tolerance",
        "battery_a",
        "battery_b",
        "max_duration",
        "avoid_gain",
    ];

    fn field(&mut self, key: &str) -> Option<&mut f64> {
        Some(match key {
            "dt" => &mut self.dt,
            "v_max" => &mut self.v_max,
            "tau" => &mut self.tau,
            "drone_radius" => &mut self.drone_radius,
            "wp_tolerance" => &mut self.wp_tolerance,
            "land_tolerance" => &mut self.land_tolerance,
            "battery_a" => &mut self.battery_a,
            "battery_b" => &mut self.battery_b,
            "max_duration" => &mut self.max_duration,
            "avoid_gain" => &mut self.avoid_gain,
            _ => return None,
        })
    }

    /// Defaults with `overrides` applied, then validated.
    pub fn with_overrides(overrides: &BTreeMap<String, f64>) -> Result<Self, SimError> {
        let mut c = Self::default();
        for (k, v) in overrides {
            let slot = c
                .field(k)
                .ok_or_else(|| SimError::Config(format!("unknown simulator parameter {k:?}")))?;
            *slot = *v;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |what: &str| Err(SimError::Config(what.to_string()));
        let all = [
            self.dt,
            self.v_max,
            self.tau,
            self.drone_radius,
            self.wp_tolerance,
            self.land_tolerance,
            self.battery_a,
            self.battery_b,
            self.max_duration,
            self.avoid_gain,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return bad("simulator parameters must be finite");
        }
        if self.dt <= 0.0 {
            return bad("dt must be > 0");
        }
        if self.v_max <= 0.0 {
            return bad("v_max must be > 0");
        }
        if self.tau < self.dt {
            return bad("tau must be >= dt");
        }
        if self.drone_radius < 0.0 || self.wp_tolerance <= 0.0 || self.land_tolerance <= 0.0 {
            return bad("radius and tolerances must be positive");
        }
        if self.battery_a < 0.0 || self.battery_b < 0.0 {
            return bad("battery coefficients must be >= 0");
        }
        if self.max_duration <= 0.0 {
            return bad("max_duration must be > 0");
        }
        if self.avoid_gain < 0.0 {
            return bad("avoid_gain must be >= 0");
        }
        Ok(())
    }

    /// Range inside which obstacles repel the drone.
    pub fn avoid_range(&self) -> f64 {
        3.0 * self.drone_radius + 5.0
    }
}
