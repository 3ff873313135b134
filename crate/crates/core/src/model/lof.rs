use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("level of fidelity must be 0..=3, got {0}")]
pub struct InvalidLof(pub i64);

/// Level of fidelity, totally ordered from component testing (0) through
/// simulation (1) and hardware-in-the-loop (2) to field execution (3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lof(u8);

impl Lof {
    pub const COMPONENT: Lof = Lof(0);
    pub const SIMULATION: Lof = Lof(1);
    pub const HITL: Lof = Lof(2);
    pub const FIELD: Lof = Lof(3);

    pub fn new(level: i64) -> Result<Self, InvalidLof> {
        if (0..=3).contains(&level) {
            Ok(Lof(level as u8))
        } else {
            Err(InvalidLof(level))
        }
    }

    pub fn level(self) -> u8 {
        self.0
    }

    /// The level directly below, if any.
    pub fn below(self) -> Option<Lof> {
        self.0.checked_sub(1).map(Lof)
    }
}

impl fmt::Display for Lof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(&format!("LoF-{}", self.0))
    }
}

impl Serialize for Lof {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.0)
    }
}

impl<'de> Deserialize<'de> for Lof {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(deserializer)?;
        Lof::new(v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_bounds() {
        assert!(Lof::COMPONENT < Lof::SIMULATION);
        assert!(Lof::SIMULATION < Lof::HITL && Lof::HITL < Lof::FIELD);
        assert_eq!(Lof::new(4), Err(InvalidLof(4)));
        assert_eq!(Lof::FIELD.below(), Some(Lof::HITL));
        assert_eq!(Lof::COMPONENT.below(), None);
    }
}
