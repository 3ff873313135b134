//! Artifact persistence, traceability queries, claim evaluation and the
//! simulation-to-reality gap metric.
//!
//! On disk a store is a directory:
//!
//! ```text
//! models/{requirement,property,test,claim}/<id>.json
//! stories/<id>.json        fixtures/<story id>.json
//! traces/<id>.jsonl        traces/<id>.meta.json
//! reports/<id>.json
//! links.jsonl              ledger.jsonl (append-only)
//! .lock                    held while a writer has the store open
//! ```
//!
//! Stories, traces and reports are content-addressed and never rewritten.

mod claims;
mod gap;
mod query;
mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use claims::{evaluate_claim, evidence_links, sync_evidence, ClaimError, ClaimStatus};
pub use gap::{compare_traces, GapError, GapReport, SignalGap, TraceSide};
pub use query::{trace_query, Direction, QueryError};
pub use report::{analyze, build_report, ReportError};

use crate::model::{
    ArtifactKind, ArtifactRef, Fixture, Ident, LinkType, Lof, Project, Requirement, SafetyClaim,
    TestModel, TestReport, TestStory, TestTrace, TraceBody, TraceLink, VVProperty,
};
use crate::orchestrator::{LedgerEntry, LedgerError, LofLedger, RunRecord};

/// Environment variable that overrides the store location.
pub const STORE_ENV: &str = "SKYHARNESS_STORE";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {message}")]
    Corrupt { path: PathBuf, message: String },
    #[error("store {0} is locked by another process (remove .lock if it is stale)")]
    Locked(PathBuf),
    #[error("unknown artifact {0}")]
    Unknown(ArtifactRef),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Removes the lock file when the store is dropped.
#[derive(Debug)]
struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

#[derive(Serialize, Deserialize)]
struct TraceMeta {
    id: Ident,
    story_id: Ident,
    lof: Lof,
}

#[derive(Debug, Default)]
pub struct ProjectStore {
    root: Option<PathBuf>,
    _lock: Option<LockGuard>,
    requirements: BTreeMap<Ident, Requirement>,
    properties: BTreeMap<Ident, VVProperty>,
    tests: BTreeMap<Ident, TestModel>,
    claims: BTreeMap<Ident, SafetyClaim>,
    stories: BTreeMap<Ident, TestStory>,
    fixtures: BTreeMap<Ident, Fixture>,
    traces: BTreeMap<Ident, TestTrace>,
    reports: BTreeMap<Ident, TestReport>,
    links: Vec<TraceLink>,
    link_set: BTreeSet<TraceLink>,
    ledger: LofLedger,
}

impl ProjectStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens (creating if needed) the store at `root` and takes its lock.
    pub fn open(root: &Path) -> Result<Self, StoreError> {
        fs::create_dir_all(root).map_err(io_err(root))?;
        let lock_path = root.join(".lock");
        match OpenOptions::new().write(true).create_new(true).open(&lock_path) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
            }
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                return Err(StoreError::Locked(root.to_path_buf()))
            }
            Err(e) => return Err(io_err(&lock_path)(e)),
        }
        let mut s = Self {
            root: Some(root.to_path_buf()),
            _lock: Some(LockGuard(lock_path)),
            ..Self::default()
        };
        s.load()?;
        Ok(s)
    }

    pub fn root(&self) -> Option<&Path> {
        self.root.as_deref()
    }

    fn load(&mut self) -> Result<(), StoreError> {
        let root = self.root.clone().expect("disk store");
        self.requirements = load_dir(&root.join("models/requirement"), "json", |id, r: &Requirement| &r.id == id)?;
        self.properties = load_dir(&root.join("models/property"), "json", |id, p: &VVProperty| &p.id == id)?;
        self.tests = load_dir(&root.join("models/test"), "json", |id, t: &TestModel| &t.id == id)?;
        self.claims = load_dir(&root.join("models/claim"), "json", |id, c: &SafetyClaim| &c.id == id)?;
        self.stories = load_dir(&root.join("stories"), "json", |id, s: &TestStory| {
            &s.id == id && crate::ids::story_id(s) == *id
        })?;
        self.fixtures = load_dir(&root.join("fixtures"), "json", |id, f: &Fixture| &f.story_id == id)?;
        self.reports = load_dir(&root.join("reports"), "json", |id, r: &TestReport| {
            &r.id == id && crate::ids::report_id(r) == *id
        })?;
        let metas: BTreeMap<Ident, TraceMeta> =
            load_dir(&root.join("traces"), "meta.json", |id, m: &TraceMeta| &m.id == id)?;
        for (id, meta) in metas {
            let path = root.join("traces").join(format!("{id}.jsonl"));
            let text = fs::read_to_string(&path).map_err(io_err(&path))?;
            let body = TraceBody::parse_jsonl(&text).map_err(|e| StoreError::Corrupt {
                path: path.clone(),
                message: e.to_string(),
            })?;
            let trace = TestTrace {
                id: meta.id,
                story_id: meta.story_id,
                lof: meta.lof,
                records: body.records,
                events: body.events,
            };
            if crate::ids::trace_id(&trace) != id {
                return Err(StoreError::Corrupt {
                    path,
                    message: "content does not match its id".into(),
                });
            }
            self.traces.insert(id, trace);
        }
        for link in read_jsonl::<TraceLink>(&root.join("links.jsonl"))? {
            if self.link_set.insert(link.clone()) {
                self.links.push(link);
            }
        }
        self.ledger = LofLedger::from_entries(read_jsonl(&root.join("ledger.jsonl"))?)?;
        Ok(())
    }

    fn write_file(&self, rel: &str, text: &str) -> Result<(), StoreError> {
        let Some(root) = &self.root else {
            return Ok(());
        };
        let path = root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(io_err(parent))?;
        }
        // Write to a temporary name first so a crash never leaves a torn
        // artifact under its final name.
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text).map_err(io_err(&tmp))?;
        fs::rename(&tmp, &path).map_err(io_err(&path))
    }

    fn append_lines(&self, rel: &str, lines: &[String]) -> Result<(), StoreError> {
        let Some(root) = &self.root else {
            return Ok(());
        };
        if lines.is_empty() {
            return Ok(());
        }
        let path = root.join(rel);
        let mut buf = String::new();
        for l in lines {
            buf.push_str(l);
            buf.push('\n');
        }
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io_err(&path))?;
        f.write_all(buf.as_bytes()).map_err(io_err(&path))?;
        f.sync_data().map_err(io_err(&path))
    }

    /// Stores the authored models and their validates/verifies links.
    /// Models are replaced by their current version; existing links stay.
    pub fn sync_project(&mut self, project: &Project) -> Result<(), StoreError> {
        for r in &project.requirements {
            self.write_file(&format!("models/requirement/{}.json", r.item.id), &json(&r.item))?;
            self.requirements.insert(r.item.id.clone(), r.item.clone());
        }
        for p in &project.properties {
            self.write_file(&format!("models/property/{}.json", p.item.id), &json(&p.item))?;
            self.properties.insert(p.item.id.clone(), p.item.clone());
        }
        for t in &project.tests {
            self.write_file(&format!("models/test/{}.json", t.item.id), &json(&t.item))?;
            self.tests.insert(t.item.id.clone(), t.item.clone());
        }
        for c in &project.claims {
            self.write_file(&format!("models/claim/{}.json", c.item.id), &json(&c.item))?;
            self.claims.insert(c.item.id.clone(), c.item.clone());
        }
        let mut links = Vec::new();
        for r in project.requirements.iter().map(|l| &l.item) {
            for p in r.linked_properties.iter().filter(|p| self.properties.contains_key(*p)) {
                links.push(TraceLink::typed(LinkType::Validates, r.id.clone(), p.clone()));
            }
            for t in r.linked_tests.iter().filter(|t| self.tests.contains_key(*t)) {
                links.push(TraceLink::typed(LinkType::Verifies, r.id.clone(), t.clone()));
            }
        }
        self.append_links(&links)?;
        Ok(())
    }

    pub fn put_test(&mut self, test: &TestModel) -> Result<(), StoreError> {
        if self.tests.get(&test.id) != Some(test) {
            self.write_file(&format!("models/test/{}.json", test.id), &json(test))?;
            self.tests.insert(test.id.clone(), test.clone());
        }
        Ok(())
    }

    pub fn put_property(&mut self, prop: &VVProperty) -> Result<(), StoreError> {
        if self.properties.get(&prop.id) != Some(prop) {
            self.write_file(&format!("models/property/{}.json", prop.id), &json(prop))?;
            self.properties.insert(prop.id.clone(), prop.clone());
        }
        Ok(())
    }

    pub fn put_claim(&mut self, claim: &SafetyClaim) -> Result<(), StoreError> {
        if self.claims.get(&claim.id) != Some(claim) {
            self.write_file(&format!("models/claim/{}.json", claim.id), &json(claim))?;
            self.claims.insert(claim.id.clone(), claim.clone());
        }
        Ok(())
    }

    /// Returns false when the story was already stored.
    pub fn put_story(&mut self, story: &TestStory, fixture: Option<&Fixture>) -> Result<bool, StoreError> {
        if let Some(f) = fixture {
            if !self.fixtures.contains_key(&f.story_id) {
                self.write_file(&format!("fixtures/{}.json", f.story_id), &json(f))?;
                self.fixtures.insert(f.story_id.clone(), f.clone());
            }
        }
        if self.stories.contains_key(&story.id) {
            return Ok(false);
        }
        self.write_file(&format!("stories/{}.json", story.id), &json(story))?;
        self.stories.insert(story.id.clone(), story.clone());
        Ok(true)
    }

    pub fn put_trace(&mut self, trace: &TestTrace) -> Result<bool, StoreError> {
        if self.traces.contains_key(&trace.id) {
            return Ok(false);
        }
        self.write_file(&format!("traces/{}.jsonl", trace.id), &trace.to_jsonl())?;
        let meta = TraceMeta {
            id: trace.id.clone(),
            story_id: trace.story_id.clone(),
            lof: trace.lof,
        };
        self.write_file(&format!("traces/{}.meta.json", trace.id), &json(&meta))?;
        self.traces.insert(trace.id.clone(), trace.clone());
        Ok(true)
    }

    pub fn put_report(&mut self, report: &TestReport) -> Result<bool, StoreError> {
        if self.reports.contains_key(&report.id) {
            return Ok(false);
        }
        self.write_file(&format!("reports/{}.json", report.id), &json(report))?;
        self.reports.insert(report.id.clone(), report.clone());
        Ok(true)
    }

    pub fn contains(&self, r: &ArtifactRef) -> bool {
        let id = &r.id;
        match r.kind {
            ArtifactKind::Requirement => self.requirements.contains_key(id),
            ArtifactKind::Property => self.properties.contains_key(id),
            ArtifactKind::Test => self.tests.contains_key(id),
            ArtifactKind::Story => self.stories.contains_key(id),
            ArtifactKind::Trace => self.traces.contains_key(id),
            ArtifactKind::Report => self.reports.contains_key(id),
            ArtifactKind::Claim => self.claims.contains_key(id),
        }
    }

    /// Appends every link not already present, in one write. Fails without
    /// writing anything when an endpoint is not stored.
    pub fn append_links(&mut self, links: &[TraceLink]) -> Result<usize, StoreError> {
        for l in links {
            for end in [l.from(), l.to()] {
                if !self.contains(end) {
                    return Err(StoreError::Unknown(end.clone()));
                }
            }
        }
        let mut fresh = Vec::new();
        for l in links {
            if !self.link_set.contains(l) && !fresh.contains(l) {
                fresh.push(l.clone());
            }
        }
        let lines: Vec<String> = fresh
            .iter()
            .map(|l| serde_json::to_string(l).expect("links serialize"))
            .collect();
        self.append_lines("links.jsonl", &lines)?;
        for l in &fresh {
            self.link_set.insert(l.clone());
            self.links.push(l.clone());
        }
        Ok(fresh.len())
    }

    /// Removes links matching `pred`, rewriting `links.jsonl`. Only used to
    /// retract derived `evidences` links when a claim's coverage changes.
    pub fn retract_links(&mut self, pred: impl Fn(&TraceLink) -> bool) -> Result<usize, StoreError> {
        let before = self.links.len();
        self.links.retain(|l| !pred(l));
        let removed = before - self.links.len();
        if removed > 0 {
            self.link_set = self.links.iter().cloned().collect();
            let text: String = self
                .links
                .iter()
                .map(|l| serde_json::to_string(l).expect("links serialize") + "\n")
                .collect();
            self.write_file("links.jsonl", &text)?;
        }
        Ok(removed)
    }

    /// Records a run in the ledger and persists it; the gate is enforced.
    pub fn record_run(&mut self, run: RunRecord) -> Result<LedgerEntry, StoreError> {
        let entry = self.ledger.record(run).map_err(LedgerError::Gate)?.clone();
        self.append_lines("ledger.jsonl", &[serde_json::to_string(&entry).expect("entry serializes")])?;
        Ok(entry)
    }

    pub fn attest_component(&mut self, test: Ident, note: &str) -> Result<LedgerEntry, StoreError> {
        let entry = self.ledger.attest_component(test, note).clone();
        self.append_lines("ledger.jsonl", &[serde_json::to_string(&entry).expect("entry serializes")])?;
        Ok(entry)
    }

    pub fn ledger(&self) -> &LofLedger {
        &self.ledger
    }

    pub fn links(&self) -> &[TraceLink] {
        &self.links
    }

    pub fn test(&self, id: &str) -> Option<&TestModel> {
        self.tests.values().find(|t| t.id == id)
    }

    pub fn property(&self, id: &str) -> Option<&VVProperty> {
        self.properties.values().find(|p| p.id == id)
    }

    pub fn properties(&self) -> impl Iterator<Item = &VVProperty> {
        self.properties.values()
    }

    pub fn requirement(&self, id: &str) -> Option<&Requirement> {
        self.requirements.values().find(|r| r.id == id)
    }

    pub fn claim(&self, id: &str) -> Option<&SafetyClaim> {
        self.claims.values().find(|c| c.id == id)
    }

    pub fn claims(&self) -> impl Iterator<Item = &SafetyClaim> {
        self.claims.values()
    }

    pub fn story(&self, id: &str) -> Option<&TestStory> {
        self.stories.values().find(|s| s.id == id)
    }

    pub fn stories(&self) -> impl Iterator<Item = &TestStory> {
        self.stories.values()
    }

    pub fn fixture(&self, story_id: &str) -> Option<&Fixture> {
        self.fixtures.values().find(|f| f.story_id == story_id)
    }

    pub fn trace(&self, id: &str) -> Option<&TestTrace> {
        self.traces.values().find(|t| t.id == id)
    }

    pub fn traces(&self) -> impl Iterator<Item = &TestTrace> {
        self.traces.values()
    }

    pub fn report(&self, id: &str) -> Option<&TestReport> {
        self.reports.values().find(|r| r.id == id)
    }

    pub fn reports(&self) -> impl Iterator<Item = &TestReport> {
        self.reports.values()
    }

    /// The properties a story monitors, in its order.
    pub fn monitored_properties(&self, story: &TestStory) -> Result<Vec<VVProperty>, StoreError> {
        story
            .monitor_ids
            .iter()
            .map(|id| {
                self.properties
                    .get(id)
                    .cloned()
                    .ok_or_else(|| StoreError::Unknown(ArtifactRef::new(ArtifactKind::Property, id.clone())))
            })
            .collect()
    }
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("domain types serialize");
    s.push('\n');
    s
}

/// Every `<id>.<ext>` file in `dir`, checked with `ok(id, value)`.
fn load_dir<T: DeserializeOwned>(
    dir: &Path,
    ext: &str,
    ok: impl Fn(&Ident, &T) -> bool,
) -> Result<BTreeMap<Ident, T>, StoreError> {
    let mut out = BTreeMap::new();
    if !dir.is_dir() {
        return Ok(out);
    }
    let suffix = format!(".{ext}");
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        let Some(stem) = name.strip_suffix(&suffix) else {
            continue;
        };
        // "x.meta.json" also ends in ".json"; only take plain "<id>.json".
        if ext == "json" && stem.contains('.') {
            continue;
        }
        let corrupt = |message: String| StoreError::Corrupt {
            path: path.clone(),
            message,
        };
        let id = Ident::new(stem).map_err(|e| corrupt(e.to_string()))?;
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        let value: T = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
        if !ok(&id, &value) {
            return Err(corrupt("content does not match its file name".into()));
        }
        out.insert(id, value);
    }
    Ok(out)
}

fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, StoreError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(io_err(path)(e)),
    };
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| StoreError::Corrupt {
                path: path.to_path_buf(),
                message: format!("line {}: {e}", i + 1),
            })
        })
        .collect()
}

