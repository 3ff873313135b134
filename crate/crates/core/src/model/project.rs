//! A loaded project and whole-project validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    capability, ArtifactKind, EnvironmentConfig, ExecRequirement, Ident, Lof, Mission,
    ObstacleSpec, PropertyKind, Requirement, SafetyClaim, Scenario, TestModel, TestStory,
    VVProperty,
};

/// Where an artifact was read from.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Source {
    pub file: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Located<T> {
    pub item: T,
    pub source: Source,
}

impl<T> Located<T> {
    pub fn new(item: T, source: Source) -> Self {
        Self { item, source }
    }

    pub fn unlocated(item: T) -> Self {
        Self {
            item,
            source: Source::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Project {
    pub requirements: Vec<Located<Requirement>>,
    pub properties: Vec<Located<VVProperty>>,
    pub tests: Vec<Located<TestModel>>,
    pub scenarios: Vec<Located<Scenario>>,
    pub claims: Vec<Located<SafetyClaim>>,
}

impl Project {
    pub fn requirement(&self, id: &str) -> Option<&Requirement> {
        self.requirements.iter().map(|l| &l.item).find(|r| r.id == id)
    }

    pub fn property(&self, id: &str) -> Option<&VVProperty> {
        self.properties.iter().map(|l| &l.item).find(|p| p.id == id)
    }

    pub fn test(&self, id: &str) -> Option<&TestModel> {
        self.tests.iter().map(|l| &l.item).find(|t| t.id == id)
    }

    pub fn scenario(&self, id: &str) -> Option<&Scenario> {
        self.scenarios.iter().map(|l| &l.item).find(|s| s.id == id)
    }

    pub fn scenarios_for(&self, test: &str) -> Vec<&Scenario> {
        self.scenarios
            .iter()
            .map(|l| &l.item)
            .filter(|s| s.test == test)
            .collect()
    }

    pub fn claim(&self, id: &str) -> Option<&SafetyClaim> {
        self.claims.iter().map(|l| &l.item).find(|c| c.id == id)
    }

    /// Properties monitored by a test, in the test's order. Unknown ids are
    /// skipped (validation reports them).
    pub fn properties_of(&self, test: &TestModel) -> Vec<VVProperty> {
        test.property_ids
            .iter()
            .filter_map(|id| self.property(id.as_str()).cloned())
            .collect()
    }

    /// Fills empty `requirement_ids` / `property_ids` of each test from the
    /// requirements that list it under `tests:`.
    pub fn derive_test_links(&mut self) {
        for t in &mut self.tests {
            let reqs: Vec<&Requirement> = self
                .requirements
                .iter()
                .map(|l| &l.item)
                .filter(|r| r.linked_tests.contains(&t.item.id))
                .collect();
            if t.item.requirement_ids.is_empty() {
                t.item.requirement_ids = reqs.iter().map(|r| r.id.clone()).collect();
            }
            if t.item.property_ids.is_empty() {
                let mut seen = BTreeSet::new();
                for r in &reqs {
                    for p in &r.linked_properties {
                        if seen.insert(p.clone()) {
                            t.item.property_ids.push(p.clone());
                        }
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Diagnostic {
    pub source: Source,
    pub kind: ArtifactKind,
    pub artifact: String,
    pub reason: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.source.file.is_empty() {
            write!(f, "{} {}: {}", self.kind, self.artifact, self.reason)
        } else {
            write!(
                f,
                "{}:{}: {} {}: {}",
                self.source.file, self.source.line, self.kind, self.artifact, self.reason
            )
        }
    }
}

struct Sink(Vec<Diagnostic>);

impl Sink {
    fn push(&mut self, source: &Source, kind: ArtifactKind, artifact: &str, reason: impl Into<String>) {
        self.0.push(Diagnostic {
            source: source.clone(),
            kind,
            artifact: artifact.to_string(),
            reason: reason.into(),
        });
    }
}

/// Checks every structural invariant and cross-reference. The result is
/// sorted, so it does not depend on artifact or file order.
pub fn validate_project(project: &Project) -> Vec<Diagnostic> {
    let mut d = Sink(Vec::new());

    duplicates(&mut d, ArtifactKind::Requirement, project.requirements.iter().map(|l| (&l.item.id, &l.source)));
    duplicates(&mut d, ArtifactKind::Property, project.properties.iter().map(|l| (&l.item.id, &l.source)));
    duplicates(&mut d, ArtifactKind::Test, project.tests.iter().map(|l| (&l.item.id, &l.source)));
    duplicates(&mut d, ArtifactKind::Story, project.scenarios.iter().map(|l| (&l.item.id, &l.source)));
    duplicates(&mut d, ArtifactKind::Claim, project.claims.iter().map(|l| (&l.item.id, &l.source)));

    for Located { item: r, source } in &project.requirements {
        let k = ArtifactKind::Requirement;
        if r.text.trim().is_empty() {
            d.push(source, k, r.id.as_str(), "empty requirement text");
        }
        for p in &r.linked_properties {
            if project.property(p.as_str()).is_none() {
                d.push(source, k, r.id.as_str(), format!("unresolved property {p}"));
            }
        }
        for t in &r.linked_tests {
            if project.test(t.as_str()).is_none() {
                d.push(source, k, r.id.as_str(), format!("unresolved test {t}"));
            }
        }
    }

    for Located { item: p, source } in &project.properties {
        if p.kind == PropertyKind::Env {
            for s in p.non_environment_signals() {
                d.push(
                    source,
                    ArtifactKind::Property,
                    p.id.as_str(),
                    format!("env property references non-environment signal {s}"),
                );
            }
        }
    }

    for Located { item: t, source } in &project.tests {
        for reason in test_model_issues(t) {
            d.push(source, ArtifactKind::Test, t.id.as_str(), reason);
        }
        for p in &t.property_ids {
            if project.property(p.as_str()).is_none() {
                d.push(source, ArtifactKind::Test, t.id.as_str(), format!("unresolved property {p}"));
            }
        }
        for r in &t.requirement_ids {
            if project.requirement(r.as_str()).is_none() {
                d.push(source, ArtifactKind::Test, t.id.as_str(), format!("unresolved requirement {r}"));
            }
        }
    }

    for Located { item: s, source } in &project.scenarios {
        let k = ArtifactKind::Story;
        if project.test(s.test.as_str()).is_none() {
            d.push(source, k, s.id.as_str(), format!("unresolved test {}", s.test));
        }
        let env = EnvironmentConfig {
            area: s.area,
            wind: Default::default(),
            obstacles: s.obstacles.clone().unwrap_or_default(),
            geospatial_ref: None,
        };
        for reason in environment_issues(&env).into_iter().chain(mission_issues(&s.mission, &env)) {
            d.push(source, k, s.id.as_str(), reason);
        }
        if let Some(w) = &s.wind {
            if w.gust_peak.is_some_and(|v| !(v >= 0.0)) {
                d.push(source, k, s.id.as_str(), "wind.gust_peak must be >= 0");
            }
            if w.gust_duration.is_some_and(|v| !(v > 0.0)) {
                d.push(source, k, s.id.as_str(), "wind.gust_duration must be > 0");
            }
            if w.gust_interval.is_some_and(|v| !(v > 0.0)) {
                d.push(source, k, s.id.as_str(), "wind.gust_interval must be > 0");
            }
        }
    }

    for Located { item: c, source } in &project.claims {
        let k = ArtifactKind::Claim;
        for s in &c.subclaims {
            if project.claim(s.as_str()).is_none() {
                d.push(source, k, c.id.as_str(), format!("unresolved subclaim {s}"));
            }
        }
        for r in &c.covers {
            if project.requirement(r.as_str()).is_none() {
                d.push(source, k, c.id.as_str(), format!("unresolved requirement {r}"));
            }
        }
    }
    let claims: Vec<&SafetyClaim> = project.claims.iter().map(|l| &l.item).collect();
    if let Some(cycle) = find_claim_cycle(&claims) {
        let at = project
            .claims
            .iter()
            .find(|l| l.item.id == cycle[0])
            .map(|l| l.source.clone())
            .unwrap_or_default();
        let path: Vec<String> = cycle.iter().map(|i| i.to_string()).collect();
        d.push(&at, ArtifactKind::Claim, cycle[0].as_str(), format!("claim cycle {}", path.join(" -> ")));
    }

    let mut out = d.0;
    out.sort();
    out.dedup();
    out
}

fn duplicates<'a>(
    d: &mut Sink,
    kind: ArtifactKind,
    items: impl Iterator<Item = (&'a Ident, &'a Source)>,
) {
    let mut seen: BTreeMap<&Ident, Vec<&Source>> = BTreeMap::new();
    for (id, src) in items {
        seen.entry(id).or_default().push(src);
    }
    for (id, mut srcs) in seen {
        if srcs.len() > 1 {
            srcs.sort();
            for s in &srcs[1..] {
                d.push(s, kind, id.as_str(), format!("duplicate {kind} id {id}"));
            }
        }
    }
}

/// Structural problems with a test model on its own.
pub fn test_model_issues(t: &TestModel) -> Vec<String> {
    let mut out = Vec::new();
    let m = &t.machine;
    if m.states.is_empty() {
        out.push("no initial state".to_string());
    }
    if !m.has_state(m.final_state.as_str()) {
        out.push(format!("final state {} is not a declared state", m.final_state));
    }
    for tr in &m.transitions {
        for s in [&tr.from, &tr.to] {
            if !m.has_state(s.as_str()) {
                out.push(format!("transition endpoint {s} is not a declared state"));
            }
        }
    }
    let mut keys = BTreeSet::new();
    for tr in &m.transitions {
        if !keys.insert((&tr.from, &tr.event)) {
            out.push(format!("duplicate transition from {} on {:?}", tr.from, tr.event));
        }
    }
    let reachable = m.reachable();
    for s in &m.states {
        if !reachable.contains(s) {
            out.push(format!("state {s} unreachable from initial state"));
        }
    }
    if t.target_lof < Lof::SIMULATION {
        out.push(format!("target LoF must be at least 1, got {}", t.target_lof.level()));
    }
    for r in &t.exec_requirements {
        out.extend(exec_requirement_issues(r));
    }
    out
}

pub fn exec_requirement_issues(r: &ExecRequirement) -> Vec<String> {
    if !ExecRequirement::is_valid_capability_name(&r.capability) {
        return vec![format!("malformed capability name {:?}", r.capability)];
    }
    let Some(cap) = capability::lookup(&r.capability) else {
        return vec![format!("unknown capability {}", r.capability)];
    };
    r.params
        .keys()
        .filter(|k| !cap.accepts(k))
        .map(|k| format!("capability {} has no parameter {k}", r.capability))
        .collect()
}

pub fn environment_issues(env: &EnvironmentConfig) -> Vec<String> {
    let mut out = Vec::new();
    if !env.area.is_valid() {
        out.push("area min must not exceed max".to_string());
    }
    let w = &env.wind;
    if !w.base.is_finite() {
        out.push("wind.base must be finite".to_string());
    }
    if !(w.gust_peak >= 0.0) {
        out.push("wind.gust_peak must be >= 0".to_string());
    }
    if !(w.gust_duration > 0.0) {
        out.push("wind.gust_duration must be > 0".to_string());
    }
    if !(w.gust_interval > 0.0) {
        out.push("wind.gust_interval must be > 0".to_string());
    }
    match &env.obstacles {
        ObstacleSpec::Density(dens) => {
            if !(0.0..=1.0).contains(dens) {
                out.push(format!("obstacle density {dens} outside [0, 1]"));
            }
        }
        ObstacleSpec::List(list) => {
            for (i, o) in list.iter().enumerate() {
                let b = o.bounds();
                if !b.is_valid() || !env.area.contains_box(&b) {
                    out.push(format!("obstacle {i} not within area"));
                }
            }
        }
    }
    out
}

pub fn mission_issues(m: &Mission, env: &EnvironmentConfig) -> Vec<String> {
    let mut out = Vec::new();
    if m.waypoints.is_empty() {
        out.push("mission needs at least one waypoint".to_string());
    }
    if !(m.cruise_speed > 0.0) {
        out.push("cruise_speed must be > 0".to_string());
    }
    let area = &env.area;
    if !area.contains(m.home) {
        out.push("home outside area".to_string());
    }
    for (i, w) in m.waypoints.iter().enumerate() {
        if !area.contains(*w) {
            out.push(format!("waypoint {i} outside area"));
        }
    }
    if !area.contains(m.land) {
        out.push("land outside area".to_string());
    }
    out
}

/// Problems with a story, optionally checked against its test model.
pub fn story_issues(story: &TestStory, test: Option<&TestModel>) -> Vec<String> {
    let mut out = environment_issues(&story.environment);
    out.extend(mission_issues(&story.mission, &story.environment));
    if let Some(t) = test {
        if story.test_id != t.id {
            out.push(format!("story is for test {}, not {}", story.test_id, t.id));
        }
        if story.lof > t.target_lof {
            out.push(format!(
                "lof exceeds target: {} > {}",
                story.lof.level(),
                t.target_lof.level()
            ));
        }
        for m in &story.monitor_ids {
            if !t.property_ids.contains(m) {
                out.push(format!("monitor {m} is not a property of test {}", t.id));
            }
        }
    }
    out
}

/// First cycle found in the subclaim graph, as a closed id path.
pub fn find_claim_cycle(claims: &[&SafetyClaim]) -> Option<Vec<Ident>> {
    let by_id: BTreeMap<&Ident, &SafetyClaim> = claims.iter().map(|c| (&c.id, *c)).collect();
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    fn visit<'a>(
        id: &'a Ident,
        by_id: &BTreeMap<&'a Ident, &'a SafetyClaim>,
        marks: &mut BTreeMap<&'a Ident, Mark>,
        stack: &mut Vec<&'a Ident>,
    ) -> Option<Vec<Ident>> {
        match marks.get(id) {
            Some(Mark::Done) => return None,
            Some(Mark::Active) => {
                let start = stack.iter().position(|s| *s == id).unwrap_or(0);
                let mut cyc: Vec<Ident> = stack[start..].iter().map(|s| (*s).clone()).collect();
                cyc.push(id.clone());
                return Some(cyc);
            }
            None => {}
        }
        marks.insert(id, Mark::Active);
        stack.push(id);
        if let Some(c) = by_id.get(id) {
            for s in &c.subclaims {
                if let Some(found) = visit(s, by_id, marks, stack) {
                    return Some(found);
                }
            }
        }
        stack.pop();
        marks.insert(id, Mark::Done);
        None
    }
    let mut marks = BTreeMap::new();
    for id in by_id.keys() {
        let mut stack = Vec::new();
        if let Some(c) = visit(id, &by_id, &mut marks, &mut stack) {
            return Some(c);
        }
    }
    None
}
