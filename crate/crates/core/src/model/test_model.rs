//! Test models: a state machine describing expected SuT behavior, the
//! execution-environment capabilities the test needs, and the fidelity level
//! it must ultimately reach.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Ident, Lof};

/// Scalar or string parameter value. Numbers are stored in SI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Text(String),
}

impl ParamValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            ParamValue::Number(v) => Some(*v),
            ParamValue::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            ParamValue::Text(s) => Some(s),
            ParamValue::Number(_) => None,
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Number(v) => write!(f, "{v}"),
            ParamValue::Text(s) if Ident::is_valid(s) => f.write_str(s),
            ParamValue::Text(s) => write!(f, "\"{}\"", escape(s)),
        }
    }
}

pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

pub type Params = BTreeMap<String, ParamValue>;

/// A capability the execution environment must provide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecRequirement {
    pub capability: String,
    #[serde(default)]
    pub params: Params,
}

impl ExecRequirement {
    pub fn new(capability: impl Into<String>) -> Self {
        Self {
            capability: capability.into(),
            params: Params::new(),
        }
    }

    pub fn with(mut self, key: &str, value: ParamValue) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    /// Capability names are lowercase tokens joined by single hyphens.
    pub fn is_valid_capability_name(name: &str) -> bool {
        !name.is_empty()
            && name.split('-').all(|part| {
                !part.is_empty()
                    && part.chars().next().is_some_and(|c| c.is_ascii_lowercase())
                    && part.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
            })
    }
}

impl fmt::Display for ExecRequirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.capability)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub from: Ident,
    pub event: String,
    pub to: Ident,
}

/// Behavior specification. The initial state is the first declared state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateMachine {
    /// States in order of first mention; the first is the initial state.
    pub states: Vec<Ident>,
    pub transitions: Vec<Transition>,
    pub final_state: Ident,
}

impl StateMachine {
    pub fn initial_state(&self) -> Option<&Ident> {
        self.states.first()
    }

    pub fn has_state(&self, s: &str) -> bool {
        self.states.iter().any(|x| x == s)
    }

    pub fn has_transition(&self, from: &str, to: &str) -> bool {
        self.transitions.iter().any(|t| t.from == from && t.to == to)
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> BTreeSet<&Ident> {
        let mut seen = BTreeSet::new();
        let Some(init) = self.initial_state() else {
            return seen;
        };
        let mut queue = VecDeque::from([init]);
        seen.insert(init);
        while let Some(s) = queue.pop_front() {
            for t in self.transitions.iter().filter(|t| &t.from == s) {
                if seen.insert(&t.to) {
                    queue.push_back(&t.to);
                }
            }
        }
        seen
    }

    /// Shortest transition path from the initial state to the final state.
    /// Ties break by declaration order of transitions.
    pub fn path_to_final(&self) -> Option<Vec<&Transition>> {
        let init = self.initial_state()?;
        if *init == self.final_state {
            return Some(Vec::new());
        }
        let mut parent: BTreeMap<&Ident, &Transition> = BTreeMap::new();
        let mut queue = VecDeque::from([init]);
        let mut seen = BTreeSet::from([init]);
        while let Some(s) = queue.pop_front() {
            for t in self.transitions.iter().filter(|t| &t.from == s) {
                if seen.insert(&t.to) {
                    parent.insert(&t.to, t);
                    if t.to == self.final_state {
                        let mut path = vec![t];
                        let mut cur = &t.from;
                        while let Some(p) = parent.get(cur) {
                            path.push(p);
                            cur = &p.from;
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(&t.to);
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestModel {
    pub id: Ident,
    #[serde(default)]
    pub requirement_ids: Vec<Ident>,
    pub machine: StateMachine,
    pub target_lof: Lof,
    #[serde(default)]
    pub exec_requirements: Vec<ExecRequirement>,
    #[serde(default)]
    pub property_ids: Vec<Ident>,
}

impl TestModel {
    pub fn requires(&self, capability: &str) -> Option<&ExecRequirement> {
        self.exec_requirements.iter().find(|r| r.capability == capability)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> Ident {
        Ident::new(s).unwrap()
    }

    fn machine(edges: &[(&str, &str)], fin: &str) -> StateMachine {
        let mut states: Vec<Ident> = Vec::new();
        for (a, b) in edges {
            for s in [a, b] {
                if !states.iter().any(|x| x == *s) {
                    states.push(id(s));
                }
            }
        }
        StateMachine {
            states,
            transitions: edges
                .iter()
                .map(|(a, b)| Transition {
                    from: id(a),
                    event: format!("{a}->{b}"),
                    to: id(b),
                })
                .collect(),
            final_state: id(fin),
        }
    }

    #[test]
    fn shortest_path_prefers_fewer_hops() {
        let m = machine(&[("a", "b"), ("b", "c"), ("c", "d"), ("a", "c")], "d");
        let path: Vec<_> = m.path_to_final().unwrap().iter().map(|t| t.to.to_string()).collect();
        assert_eq!(path, ["c", "d"]);
    }

    #[test]
    fn unreachable_final() {
        let m = machine(&[("a", "b"), ("c", "d")], "d");
        assert!(m.path_to_final().is_none());
        assert_eq!(m.reachable().len(), 2);
    }

    #[test]
    fn capability_names() {
        assert!(ExecRequirement::is_valid_capability_name("wind-model"));
        assert!(ExecRequirement::is_valid_capability_name("obstacles"));
        assert!(!ExecRequirement::is_valid_capability_name("Wind-model"));
        assert!(!ExecRequirement::is_valid_capability_name("wind--model"));
        assert!(!ExecRequirement::is_valid_capability_name("-wind"));
    }
}
