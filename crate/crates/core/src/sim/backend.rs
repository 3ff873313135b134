//! The capability contract every execution backend declares, and the
//! backends this crate ships.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{run_story, SimConfig, SimError};
use crate::model::capability::{self, Capability};
use crate::model::{Ident, Lof, TestModel, TestStory, TestTrace};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendDescriptor {
    pub id: Ident,
    pub supported_lof: BTreeSet<Lof>,
    pub capabilities: Vec<Capability>,
    /// False for backends whose traces arrive by import (HITL rigs, field
    /// campaigns); stories for them wait for `import`.
    pub executable: bool,
}

impl BackendDescriptor {
    pub fn capability(&self, name: &str) -> Option<&Capability> {
        self.capabilities.iter().find(|c| c.name == name)
    }

    pub fn supports(&self, lof: Lof) -> bool {
        self.supported_lof.contains(&lof)
    }

    /// Descriptor problems: duplicate capability names, no supported level.
    pub fn issues(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.supported_lof.is_empty() {
            out.push(format!("backend {} supports no level of fidelity", self.id));
        }
        let mut seen = BTreeSet::new();
        for c in &self.capabilities {
            if !seen.insert(c.name.as_str()) {
                out.push(format!("backend {} declares capability {} twice", self.id, c.name));
            }
        }
        out
    }
}

/// An execution backend.
pub trait Backend {
    fn descriptor(&self) -> &BackendDescriptor;
    fn execute(&self, story: &TestStory, test: &TestModel) -> Result<TestTrace, SimError>;
}

fn id(s: &str) -> Ident {
    Ident::new(s).expect("static backend id")
}

fn full_vocabulary_except(reserved: &[&str]) -> Vec<Capability> {
    capability::vocabulary()
        .into_iter()
        .filter(|c| !reserved.contains(&c.name.as_str()))
        .collect()
}

pub const DESK_SIM: &str = "desk-sim";
pub const HITL_IMPORT: &str = "hitl-import";
pub const FIELD: &str = "field";

/// The point-mass simulator: LoF-1, wind, obstacles, geospatial tags and
/// avoidance.
pub fn desk_sim() -> BackendDescriptor {
    BackendDescriptor {
        id: id(DESK_SIM),
        supported_lof: BTreeSet::from([Lof::SIMULATION]),
        capabilities: vec![
            capability::lookup(capability::WIND_MODEL).expect("known"),
            capability::lookup(capability::OBSTACLES).expect("known"),
            capability::lookup(capability::GEOSPATIAL).expect("known"),
            capability::lookup(capability::AVOIDANCE).expect("known"),
        ],
        executable: true,
    }
}

/// Hardware-in-the-loop rig; traces are recorded externally and imported.
pub fn hitl_import() -> BackendDescriptor {
    BackendDescriptor {
        id: id(HITL_IMPORT),
        supported_lof: BTreeSet::from([Lof::HITL]),
        capabilities: full_vocabulary_except(&[]),
        executable: false,
    }
}

/// Real-world flights run from a generated field protocol.
pub fn field() -> BackendDescriptor {
    BackendDescriptor {
        id: id(FIELD),
        supported_lof: BTreeSet::from([Lof::FIELD]),
        capabilities: full_vocabulary_except(&[]),
        executable: false,
    }
}

pub fn builtin_backends() -> Vec<BackendDescriptor> {
    vec![desk_sim(), hitl_import(), field()]
}

pub fn lookup_backend(id: &str) -> Option<BackendDescriptor> {
    builtin_backends().into_iter().find(|b| b.id == id)
}

#[derive(Debug, Clone)]
pub struct DeskSim {
    descriptor: BackendDescriptor,
}

impl Default for DeskSim {
    fn default() -> Self {
        Self { descriptor: desk_sim() }
    }
}

impl Backend for DeskSim {
    fn descriptor(&self) -> &BackendDescriptor {
        &self.descriptor
    }

    fn execute(&self, story: &TestStory, test: &TestModel) -> Result<TestTrace, SimError> {
        let config = SimConfig::with_overrides(&story.config)?;
        run_story(story, test, &config)
    }
}
