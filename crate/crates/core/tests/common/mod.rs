//! Seeded generators for valid artifacts of every textual format, a text
//! mutator for malformed inputs, and the demo project.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};

use skyharness::lang::load_project;
use skyharness::model::{
    ArithOp, BoolExpr, EnvironmentConfig, EventKind, ExecRequirement, Ident, Literal, Lof, Mission,
    Obstacle, ObstacleShape, ObstacleSpec, ParamValue, Project, PropertyKind, Quantifier, RelOp,
    Requirement, SafetyClaim, Scenario, StateMachine, Term, TestModel, TestStory, TraceBody,
    TraceEvent, TraceRecord, Transition, Unit, VVProperty, WindConfig, WindOverrides,
};
use skyharness::monitor::Signal;
use skyharness::{Aabb, Vec3};

pub struct Gen {
    pub rng: StdRng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: StdRng::seed_from_u64(seed),
        }
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    /// A number with a short decimal form or, sometimes, full precision.
    pub fn number(&mut self, lo: f64, hi: f64) -> f64 {
        let v = self.range(lo, hi);
        match self.below(3) {
            0 => v.round(),
            1 => (v * 100.0).round() / 100.0,
            _ => v,
        }
    }

    /// Identifiers always carry a digit so they never collide with keywords.
    pub fn ident(&mut self, prefix: &str) -> Ident {
        let mut s = format!("{prefix}{}", self.below(1000));
        if self.chance(0.3) {
            let tails = ["-a", "_b", "-test", "x", "-2c", "_end"];
            s.push_str(tails.choose(&mut self.rng).unwrap());
        }
        Ident::new(s).unwrap()
    }

    pub fn unique_idents(&mut self, prefix: &str, n: usize) -> Vec<Ident> {
        let mut out: Vec<Ident> = Vec::new();
        while out.len() < n {
            let id = self.ident(prefix);
            if !out.contains(&id) {
                out.push(id);
            }
        }
        out
    }

    /// Free text including quotes, escapes and non-ASCII characters.
    pub fn text(&mut self) -> String {
        let words = [
            "shall", "complete", "flight", "wind", "gusts", "23 mph", "\"quoted\"", "back\\slash",
            "tab\there", "line\nbreak", "ümlaut", "≤", "#hash", "x", "(", ")", ":", ",",
        ];
        let n = 1 + self.below(8);
        (0..n)
            .map(|_| *words.choose(&mut self.rng).unwrap())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn vec3(&mut self, lo: f64, hi: f64) -> Vec3 {
        Vec3::new(self.number(lo, hi), self.number(lo, hi), self.number(lo, hi))
    }

    fn point_in(&mut self, area: &Aabb) -> Vec3 {
        let mut p = Vec3::new(
            self.number(area.min.x, area.max.x),
            self.number(area.min.y, area.max.y),
            self.number(area.min.z, area.max.z),
        );
        // rounding may push a coordinate just outside
        p.x = p.x.clamp(area.min.x, area.max.x);
        p.y = p.y.clamp(area.min.y, area.max.y);
        p.z = p.z.clamp(area.min.z, area.max.z);
        p
    }

    pub fn requirements(&mut self) -> Vec<Requirement> {
        let n = self.below(5);
        let ids = self.unique_idents("R", n);
        ids.into_iter()
            .map(|id| {
                let np = self.below(4);
                let nt = self.below(3);
                Requirement {
                    id,
                    text: self.text(),
                    linked_properties: self.unique_idents("P", np),
                    linked_tests: self.unique_idents("T", nt),
                }
            })
            .collect()
    }

    fn literal(&mut self) -> Literal {
        let v = self.number(-50.0, 100.0);
        let unit = if self.chance(0.4) {
            Some(*Unit::ALL.choose(&mut self.rng).unwrap())
        } else {
            None
        };
        Literal::new(v, unit)
    }

    pub fn term(&mut self, signals: &[Signal], depth: usize) -> Term {
        if depth == 0 || self.chance(0.5) {
            if self.chance(0.6) {
                Term::Signal(*signals.choose(&mut self.rng).unwrap())
            } else {
                Term::Literal(self.literal())
            }
        } else {
            let op = *[ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div]
                .choose(&mut self.rng)
                .unwrap();
            Term::arith(op, self.term(signals, depth - 1), self.term(signals, depth - 1))
        }
    }

    pub fn bool_expr(&mut self, signals: &[Signal], depth: usize) -> BoolExpr {
        if depth == 0 || self.chance(0.5) {
            let op = *RelOp::ALL.choose(&mut self.rng).unwrap();
            BoolExpr::cmp(op, self.term(signals, 2), self.term(signals, 2))
        } else if self.chance(0.5) {
            BoolExpr::and(self.bool_expr(signals, depth - 1), self.bool_expr(signals, depth - 1))
        } else {
            BoolExpr::or(self.bool_expr(signals, depth - 1), self.bool_expr(signals, depth - 1))
        }
    }

    pub fn property(&mut self, id: Ident) -> VVProperty {
        let env = self.chance(0.3);
        let signals: &[Signal] = if env {
            &[Signal::WindSpeed, Signal::ObsDensity]
        } else {
            &Signal::ALL
        };
        VVProperty {
            id,
            kind: if env { PropertyKind::Env } else { PropertyKind::Test },
            quantifier: *Quantifier::ALL.choose(&mut self.rng).unwrap(),
            expr: self.bool_expr(signals, 3),
        }
    }

    pub fn properties(&mut self) -> Vec<VVProperty> {
        let n = self.below(6);
        self.unique_idents("P", n)
            .into_iter()
            .map(|id| self.property(id))
            .collect()
    }

    fn param(&mut self) -> ParamValue {
        match self.below(3) {
            0 => ParamValue::Number(self.number(-400.0, 400.0)),
            1 => ParamValue::Text(self.ident("v").to_string()),
            _ => ParamValue::Text(self.text()),
        }
    }

    pub fn test_model(&mut self) -> TestModel {
        let n_states = 2 + self.below(5);
        let states = self.unique_idents("s", n_states);
        let mut transitions = Vec::new();
        for w in states.windows(2) {
            transitions.push(Transition {
                from: w[0].clone(),
                event: self.text(),
                to: w[1].clone(),
            });
        }
        // extra edges with distinct events
        for i in 0..self.below(3) {
            let from = states.choose(&mut self.rng).unwrap().clone();
            let to = states.choose(&mut self.rng).unwrap().clone();
            transitions.push(Transition {
                from,
                event: format!("extra {i}"),
                to,
            });
        }
        let mut exec = Vec::new();
        let caps = ["wind-model", "obstacles", "geospatial", "avoidance", "gps-model", "radio-model"];
        for _ in 0..self.below(4) {
            let mut r = ExecRequirement::new(*caps.choose(&mut self.rng).unwrap());
            for _ in 0..self.below(4) {
                let key = format!("k{}", self.below(20));
                let v = self.param();
                r.params.insert(key, v);
            }
            exec.push(r);
        }
        let n_req = self.below(3);
        let n_prop = self.below(4);
        TestModel {
            id: self.ident("T"),
            requirement_ids: self.unique_idents("R", n_req),
            machine: StateMachine {
                final_state: states.last().unwrap().clone(),
                states,
                transitions,
            },
            target_lof: Lof::new(1 + self.below(3) as i64).unwrap(),
            exec_requirements: exec,
            property_ids: self.unique_idents("P", n_prop),
        }
    }

    pub fn area(&mut self) -> Aabb {
        let min = Vec3::new(self.number(-200.0, 0.0), self.number(-200.0, 0.0), 0.0);
        let size = Vec3::new(self.number(50.0, 400.0), self.number(50.0, 400.0), self.number(20.0, 120.0));
        Aabb::new(min, min + size)
    }

    pub fn mission(&mut self, area: &Aabb) -> Mission {
        let n = 1 + self.below(5);
        Mission {
            home: self.point_in(area),
            waypoints: (0..n).map(|_| self.point_in(area)).collect(),
            land: self.point_in(area),
            cruise_speed: self.number(1.0, 15.0).max(0.5),
        }
    }

    pub fn obstacles(&mut self, area: &Aabb) -> ObstacleSpec {
        if self.chance(0.5) {
            return ObstacleSpec::Density(self.range(0.0, 1.0));
        }
        let n = self.below(4);
        ObstacleSpec::List(
            (0..n)
                .map(|_| {
                    let size = Vec3::new(self.number(1.0, 10.0), self.number(1.0, 10.0), self.number(1.0, 15.0));
                    let lo = area.min + size * 0.5;
                    let hi = area.max - size * 0.5;
                    let center = Vec3::new(
                        self.range(lo.x, hi.x),
                        self.range(lo.y, hi.y),
                        self.range(lo.z, hi.z),
                    );
                    Obstacle {
                        shape: if self.chance(0.5) { ObstacleShape::Box } else { ObstacleShape::Cylinder },
                        center,
                        size,
                    }
                })
                .filter(|o| area.contains_box(&o.bounds()))
                .collect(),
        )
    }

    pub fn wind(&mut self) -> WindConfig {
        WindConfig {
            base: self.vec3(-8.0, 8.0),
            gust_peak: self.number(0.0, 20.0).max(0.0),
            gust_duration: self.number(0.5, 10.0).max(0.5),
            gust_interval: self.number(5.0, 30.0),
        }
    }

    pub fn story(&mut self) -> TestStory {
        let area = self.area();
        let n_mon = self.below(4);
        let mut config = BTreeMap::new();
        if self.chance(0.3) {
            config.insert("tau".to_string(), self.number(0.1, 1.0));
        }
        TestStory {
            id: self.ident("st"),
            test_id: self.ident("T"),
            lof: Lof::new(self.below(4) as i64).unwrap(),
            backend_id: self.ident("b"),
            seed: self.rng.random(),
            environment: EnvironmentConfig {
                wind: self.wind(),
                obstacles: self.obstacles(&area),
                geospatial_ref: self.chance(0.3).then(|| self.text()),
                area,
            },
            mission: self.mission(&area),
            monitor_ids: self.unique_idents("P", n_mon),
            connection: if self.chance(0.5) { self.text() } else { String::new() },
            config,
        }
    }

    pub fn scenario(&mut self) -> Scenario {
        let area = self.area();
        Scenario {
            id: self.ident("S"),
            test: self.ident("T"),
            mission: self.mission(&area),
            connection: if self.chance(0.5) { self.text() } else { String::new() },
            wind: self.chance(0.5).then(|| WindOverrides {
                base: self.chance(0.5).then(|| self.vec3(-5.0, 5.0)),
                gust_peak: self.chance(0.5).then(|| self.number(0.0, 30.0)),
                gust_duration: self.chance(0.5).then(|| self.number(1.0, 8.0)),
                gust_interval: None,
            }),
            obstacles: self.chance(0.5).then(|| self.obstacles(&area)),
            geospatial_ref: self.chance(0.3).then(|| self.text()),
            area,
        }
    }

    pub fn claims(&mut self) -> Vec<SafetyClaim> {
        let n = self.below(5);
        let ids = self.unique_idents("C", n);
        ids.iter()
            .enumerate()
            .map(|(i, id)| {
                // only later claims as children, so the graph stays acyclic
                let subclaims: Vec<Ident> = ids[i + 1..].iter().filter(|_| self.chance(0.4)).cloned().collect();
                let n_cov = if subclaims.is_empty() { 1 + self.below(2) } else { 0 };
                SafetyClaim {
                    id: id.clone(),
                    text: self.text(),
                    subclaims,
                    required_lof: Lof::new(self.below(4) as i64).unwrap(),
                    covers: self.unique_idents("R", n_cov),
                }
            })
            .collect()
    }

    pub fn trace_body(&mut self) -> TraceBody {
        let n = 1 + self.below(40);
        let mut t = 0.0;
        let mut battery = 100.0;
        let states = ["active", "ready-for-takeoff", "request-takeoff", "mission_finished"];
        let records: Vec<TraceRecord> = (0..n)
            .map(|i| {
                if i > 0 {
                    t += self.range(0.01, 1.0);
                }
                battery -= self.range(0.0, 0.5);
                TraceRecord {
                    t,
                    pos: self.vec3(-100.0, 100.0),
                    vel: self.vec3(-10.0, 10.0),
                    cmd_vel: self.vec3(-10.0, 10.0),
                    wind: self.vec3(-15.0, 15.0),
                    sut_state: states[(i * states.len() / n).min(states.len() - 1)].to_string(),
                    battery_pct: battery,
                    obs_min_dist: if self.chance(0.3) { f64::INFINITY } else { self.range(0.0, 50.0) },
                }
            })
            .collect();
        let kinds = [
            EventKind::WaypointReached,
            EventKind::Collision,
            EventKind::Landed,
            EventKind::BatteryDepleted,
            EventKind::Abort,
            EventKind::Transition,
        ];
        let events = (0..self.below(5))
            .map(|_| TraceEvent {
                t: self.range(0.0, 1.0) * t,
                kind: *kinds.choose(&mut self.rng).unwrap(),
                detail: if self.chance(0.5) { self.text() } else { String::new() },
            })
            .collect();
        TraceBody { records, events }
    }

    /// Applies 1 to 4 random character-level edits.
    pub fn mutate(&mut self, text: &str) -> String {
        let mut chars: Vec<char> = text.chars().collect();
        let junk = ['"', '(', ')', ':', ',', '=', '-', '#', '{', '}', '[', ']', '\n', 'é', '9', '.', 'x', '\\', '&', '|', '<'];
        for _ in 0..1 + self.below(4) {
            match self.below(4) {
                0 if !chars.is_empty() => {
                    let i = self.below(chars.len());
                    chars.remove(i);
                }
                1 => {
                    let i = self.below(chars.len() + 1);
                    chars.insert(i, *junk.choose(&mut self.rng).unwrap());
                }
                2 if !chars.is_empty() => {
                    let i = self.below(chars.len());
                    chars.truncate(i);
                }
                _ if chars.len() >= 2 => {
                    let i = self.below(chars.len() - 1);
                    chars.swap(i, i + 1);
                }
                _ => {}
            }
        }
        chars.into_iter().collect()
    }
}

/// The waypoint-mission demo shipped in `demo/waypoints`.
pub fn demo_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../demo/waypoints")
}

pub fn demo_project() -> Project {
    let loaded = load_project(&demo_dir()).unwrap();
    assert!(loaded.errors.is_empty(), "{:?}", loaded.errors);
    loaded.project
}

/// Every textual artifact format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Requirements,
    Properties,
    TestModel,
    Story,
    Scenario,
    Claims,
    Trace,
}

impl Format {
    pub const ALL: [Format; 7] = [
        Format::Requirements,
        Format::Properties,
        Format::TestModel,
        Format::Story,
        Format::Scenario,
        Format::Claims,
        Format::Trace,
    ];
}

fn same<T: PartialEq + std::fmt::Debug, E: std::fmt::Display>(
    first: &T,
    text: &str,
    parse: impl Fn(&str) -> Result<T, E>,
) -> Result<(), String> {
    match parse(text) {
        Ok(again) if &again == first => Ok(()),
        Ok(again) => Err(format!("round trip changed the artifact:\n{first:?}\nvs\n{again:?}\ntext:\n{text}")),
        Err(e) => Err(format!("serialized form does not parse: {e}\ntext:\n{text}")),
    }
}

/// Generates a valid artifact, then checks parse(serialize(x)) == x and
/// serialize(parse(serialize(x))) == serialize(x).
pub fn round_trip(format: Format, g: &mut Gen) -> Result<(), String> {
    use skyharness::lang::*;
    match format {
        Format::Requirements => {
            let v = g.requirements();
            same(&v, &serialize_requirements(&v), parse_requirements)
        }
        Format::Properties => {
            let v = g.properties();
            same(&v, &serialize_vv(&v), parse_vv)
        }
        Format::TestModel => {
            let v = g.test_model();
            same(&v, &serialize_test_model(&v), parse_test_model)
        }
        Format::Story => {
            let v = g.story();
            same(&v, &serialize_story(&v), parse_story)
        }
        Format::Scenario => {
            let v = g.scenario();
            same(&v, &serialize_scenario(&v), parse_scenario)
        }
        Format::Claims => {
            let v = g.claims();
            same(&v, &serialize_claims(&v), parse_claims)
        }
        Format::Trace => {
            let v = g.trace_body();
            same(&v, &v.to_jsonl(), TraceBody::parse_jsonl)
        }
    }
}

/// A valid document of `format` in its serialized form.
pub fn valid_text(format: Format, g: &mut Gen) -> String {
    use skyharness::lang::*;
    match format {
        Format::Requirements => serialize_requirements(&g.requirements()),
        Format::Properties => serialize_vv(&g.properties()),
        Format::TestModel => serialize_test_model(&g.test_model()),
        Format::Story => serialize_story(&g.story()),
        Format::Scenario => serialize_scenario(&g.scenario()),
        Format::Claims => serialize_claims(&g.claims()),
        Format::Trace => g.trace_body().to_jsonl(),
    }
}

/// Parses possibly malformed `text`. Ok when it parses, or fails with a
/// diagnostic that points inside the text; Err on a missing or stray
/// location or a panic.
pub fn diagnose(format: Format, text: &str) -> Result<(), String> {
    use skyharness::lang::*;
    use skyharness::model::TraceFormatError;
    let text_owned = text.to_string();
    let outcome = std::panic::catch_unwind(move || -> Result<(), String> {
        let text = text_owned.as_str();
        let spanned = |r: Result<(), ParseError>| match r {
            Ok(()) => Ok(()),
            Err(e) if e.span.is_within(text) && !e.message.is_empty() => Ok(()),
            Err(e) => Err(format!("diagnostic outside the input: {e} ({:?})", e.span)),
        };
        match format {
            Format::Requirements => spanned(parse_requirements(text).map(drop)),
            Format::Properties => spanned(parse_vv(text).map(drop)),
            Format::TestModel => spanned(parse_test_model(text).map(drop)),
            Format::Story => spanned(parse_story(text).map(drop)),
            Format::Scenario => spanned(parse_scenario(text).map(drop)),
            Format::Claims => spanned(parse_claims(text).map(drop)),
            Format::Trace => {
                let lines = text.lines().count();
                match TraceBody::parse_jsonl(text) {
                    Ok(_) => Ok(()),
                    Err(TraceFormatError::Malformed { line, .. } | TraceFormatError::EventsNotLast { line })
                        if (1..=lines).contains(&line) =>
                    {
                        Ok(())
                    }
                    Err(TraceFormatError::NoRecords) if text.lines().all(|l| {
                        let l = l.trim();
                        l.is_empty() || l.contains("\"events\"")
                    }) =>
                    {
                        Ok(())
                    }
                    Err(e) => Err(format!("trace diagnostic does not locate the problem: {e}")),
                }
            }
        }
    });
    match outcome {
        Ok(r) => r,
        Err(_) => Err(format!("parser panicked on {text:?}")),
    }
}

/// Random printable garbage, sometimes shaped like the format's tokens.
pub fn garbage(g: &mut Gen) -> String {
    let alphabet: Vec<char> = "abcXYZ019 _-.:,;=()[]{}\"'\\#&|<>!*/+\n\téλ≤"
        .chars()
        .collect();
    let n = g.below(80);
    (0..n).map(|_| *alphabet.choose(&mut g.rng).unwrap()).collect()
}

use skyharness::model::{Fixture, TestTrace};
use skyharness::orchestrator::{
    gate_and_run, import_trace, materialize_story, record_trace, Registry, RunError, RunOutcome,
};
use skyharness::store::ProjectStore;

/// Materializes `scenario` for its test on `backend`.
pub fn plan(project: &Project, scenario: &str, backend: &str, lof: Lof, seed: u64) -> (TestStory, Fixture) {
    let sc = project.scenario(scenario).unwrap_or_else(|| panic!("no scenario {scenario}"));
    let test = project.test(sc.test.as_str()).unwrap();
    let registry = Registry::builtin();
    let desc = registry.descriptor(backend).unwrap();
    materialize_story(test, desc, lof, seed, sc, &BTreeMap::new()).unwrap()
}

/// Stores `story` and runs it through the gate on the built-in backends.
pub fn run(store: &mut ProjectStore, project: &Project, story: &TestStory) -> Result<RunOutcome, RunError> {
    store.put_story(story, None)?;
    let test = project.test(story.test_id.as_str()).unwrap();
    let props = store.monitored_properties(story)?;
    gate_and_run(store, &Registry::builtin(), story, test, &props)
}

/// Imports `trace`'s JSON-lines export as a trace of `story`.
pub fn import(
    store: &mut ProjectStore,
    project: &Project,
    story: &TestStory,
    trace: &TestTrace,
) -> Result<RunOutcome, RunError> {
    store.put_story(story, None)?;
    let test = project.test(story.test_id.as_str()).unwrap();
    let props = store.monitored_properties(story)?;
    let imported = import_trace(&trace.to_jsonl(), &story.id, story.lof, Some(&test.machine)).unwrap();
    record_trace(store, imported.trace, story, test, &props)
}

/// A store holding the demo project and evidence at several levels:
/// R1 passes at LoF 1, 2 and 3 and fails once at LoF 1 (strong gusts);
/// R2 passes at LoF 1 and 2.
pub fn populated(store: &mut ProjectStore, project: &Project) -> Vec<RunOutcome> {
    store.sync_project(project).unwrap();
    let (r1, _) = plan(project, "R1-gusts", "desk-sim", Lof::SIMULATION, 7);
    let sim1 = run(store, project, &r1).unwrap();
    let (strong, _) = plan(project, "R1-strong-gusts", "desk-sim", Lof::SIMULATION, 7);
    let strong = run(store, project, &strong).unwrap();
    let (hitl, _) = plan(project, "R1-gusts", "hitl-import", Lof::HITL, 7);
    let hitl = import(store, project, &hitl, &sim1.trace).unwrap();
    let (field, _) = plan(project, "R1-gusts", "field", Lof::FIELD, 7);
    let field = import(store, project, &field, &sim1.trace).unwrap();
    let (r2, _) = plan(project, "R2-dense", "desk-sim", Lof::SIMULATION, 7);
    let sim2 = run(store, project, &r2).unwrap();
    let (hitl2, _) = plan(project, "R2-dense", "hitl-import", Lof::HITL, 7);
    let hitl2 = import(store, project, &hitl2, &sim2.trace).unwrap();
    vec![sim1, strong, hitl, field, sim2, hitl2]
}

use skyharness::model::Verdict;
use skyharness::monitor::SignalTable;

/// A 50-row table over every catalog signal. Values come from a small
/// integer pool half the time so equality comparisons are exercised.
pub fn random_table(g: &mut Gen, rows: usize) -> (Vec<f64>, BTreeMap<Signal, Vec<f64>>) {
    let mut t = Vec::with_capacity(rows);
    let mut now = 0.0;
    for i in 0..rows {
        if i > 0 {
            now += g.range(0.05, 1.0);
        }
        t.push(now);
    }
    let cols = Signal::ALL
        .iter()
        .map(|s| {
            let col = (0..rows)
                .map(|_| {
                    if g.chance(0.5) {
                        g.below(6) as f64
                    } else {
                        g.number(-50.0, 100.0)
                    }
                })
                .collect();
            (*s, col)
        })
        .collect();
    (t, cols)
}

fn oracle_term(term: &Term, row: usize, cols: &BTreeMap<Signal, Vec<f64>>) -> f64 {
    match term {
        Term::Literal(l) => l.si(),
        Term::Signal(s) => cols[s][row],
        Term::Arith(op, a, b) => {
            let (x, y) = (oracle_term(a, row, cols), oracle_term(b, row, cols));
            match op {
                ArithOp::Add => x + y,
                ArithOp::Sub => x - y,
                ArithOp::Mul => x * y,
                ArithOp::Div => x / y,
            }
        }
    }
}

fn oracle_bool(e: &BoolExpr, row: usize, cols: &BTreeMap<Signal, Vec<f64>>) -> bool {
    match e {
        BoolExpr::Cmp(c) => {
            let (x, y) = (oracle_term(&c.lhs, row, cols), oracle_term(&c.rhs, row, cols));
            let eq = x == y || (x - y).abs() <= 1e-9;
            match c.op {
                RelOp::Lt => x < y,
                RelOp::Le => x <= y,
                RelOp::Gt => x > y,
                RelOp::Ge => x >= y,
                RelOp::Eq => eq,
                RelOp::Ne => !eq,
            }
        }
        BoolExpr::And(a, b) => oracle_bool(a, row, cols) && oracle_bool(b, row, cols),
        BoolExpr::Or(a, b) => oracle_bool(a, row, cols) || oracle_bool(b, row, cols),
    }
}

/// Verdict and violation time by plain enumeration of every step.
pub fn oracle(prop: &VVProperty, t: &[f64], cols: &BTreeMap<Signal, Vec<f64>>) -> (Verdict, Option<f64>) {
    let n = t.len();
    let mut first_true = None;
    let mut first_false = None;
    for row in 0..n {
        let v = oracle_bool(&prop.expr, row, cols);
        if v && first_true.is_none() {
            first_true = Some(row);
        }
        if !v && first_false.is_none() {
            first_false = Some(row);
        }
    }
    let last_true = oracle_bool(&prop.expr, n - 1, cols);
    let fail_at = match prop.quantifier {
        Quantifier::Always => first_false,
        Quantifier::Never => first_true,
        Quantifier::Eventually => first_true.is_none().then_some(n - 1),
        Quantifier::AtEnd => (!last_true).then_some(n - 1),
    };
    match fail_at {
        Some(row) => (Verdict::Fail, Some(t[row])),
        None => (Verdict::Pass, None),
    }
}

/// Compares `eval_property` with the oracle on one random table and
/// property drawn from `g`.
pub fn monitor_agrees(g: &mut Gen) -> Result<(), String> {
    let (t, cols) = random_table(g, 50);
    let id = g.ident("P");
    let prop = g.property(id);
    let table = SignalTable::from_columns(t.clone(), cols.clone());
    let got = skyharness::monitor::eval_property(&prop, &table).map_err(|e| e.to_string())?;
    let want = oracle(&prop, &t, &cols);
    if (got.verdict, got.first_violation_t) == want {
        Ok(())
    } else {
        Err(format!("{prop}: monitor {:?} at {:?}, oracle {:?}", got.verdict, got.first_violation_t, want))
    }
}

/// Every sequence obtained from `seq` by deleting one state or swapping
/// two distinct states.
pub fn state_mutations(seq: &[&str]) -> Vec<Vec<String>> {
    let base: Vec<String> = seq.iter().map(|s| s.to_string()).collect();
    let mut out = Vec::new();
    for i in 0..base.len() {
        let mut m = base.clone();
        m.remove(i);
        out.push(m);
    }
    for i in 0..base.len() {
        for j in i + 1..base.len() {
            if base[i] != base[j] {
                let mut m = base.clone();
                m.swap(i, j);
                out.push(m);
            }
        }
    }
    out
}

/// Repeats each state 1 to 5 times, as a sampled state channel would.
pub fn dwell(g: &mut Gen, seq: &[String]) -> Vec<String> {
    seq.iter()
        .flat_map(|s| std::iter::repeat_n(s.clone(), 1 + g.below(5)))
        .collect()
}
