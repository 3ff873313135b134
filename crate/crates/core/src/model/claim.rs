use serde::{Deserialize, Serialize};

use super::{Ident, Lof};

/// A safety-assurance claim. Leaf claims are supported by evidence reports;
/// composite claims by their subclaims.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SafetyClaim {
    pub id: Ident,
    pub text: String,
    #[serde(default)]
    pub subclaims: Vec<Ident>,
    #[serde(default = "default_required_lof")]
    pub required_lof: Lof,
    /// Requirements whose test reports count as evidence for this claim.
    #[serde(default)]
    pub covers: Vec<Ident>,
}

fn default_required_lof() -> Lof {
    Lof::SIMULATION
}

impl SafetyClaim {
    pub fn is_leaf(&self) -> bool {
        self.subclaims.is_empty()
    }
}
