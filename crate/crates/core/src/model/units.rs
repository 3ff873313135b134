use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Metres per second in one statute mile per hour (exact by definition).
pub const MPH_IN_MPS: f64 = 0.44704;

/// Unit suffixes accepted on numeric literals. Values are normalized to SI
/// (m, s, m/s) at parse time; `pct` is dimensionless percent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Mph,
    Mps,
    M,
    S,
    Pct,
}

impl Unit {
    pub const ALL: [Unit; 5] = [Unit::Mph, Unit::Mps, Unit::M, Unit::S, Unit::Pct];

    /// Multiplier taking a value in this unit to its SI value.
    pub fn si_factor(self) -> f64 {
        match self {
            Unit::Mph => MPH_IN_MPS,
            Unit::Mps | Unit::M | Unit::S | Unit::Pct => 1.0,
        }
    }

    pub fn to_si(self, value: f64) -> f64 {
        value * self.si_factor()
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Unit::Mph => "mph",
            Unit::Mps => "mps",
            Unit::M => "m",
            Unit::S => "s",
            Unit::Pct => "pct",
        }
    }
}

impl Unit {
    /// Symbol of the SI unit this unit normalizes to.
    pub fn si_symbol(self) -> &'static str {
        match self {
            Unit::Mph | Unit::Mps => "m/s",
            Unit::M => "m",
            Unit::S => "s",
            Unit::Pct => "pct",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Unit {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        Unit::ALL.into_iter().find(|u| u.symbol() == s).ok_or(())
    }
}
