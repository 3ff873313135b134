use serde::{Deserialize, Serialize};

use super::Ident;

/// A requirement on the system under test, written as structured natural
/// language, with links to the properties that validate it and the tests
/// that verify it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Requirement {
    pub id: Ident,
    pub text: String,
    #[serde(default)]
    pub linked_properties: Vec<Ident>,
    #[serde(default)]
    pub linked_tests: Vec<Ident>,
}
