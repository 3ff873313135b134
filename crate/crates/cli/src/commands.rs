use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};

use skyharness::lang::load_project;
use skyharness::model::{
    validate_project, ArtifactRef, Ident, LinkType, Lof, Project, TestModel,
    TestStory, VVProperty,
};
use skyharness::orchestrator::{
    gate_and_run, generate_field_protocol, import_trace, materialize_story, record_trace,
    LedgerError, Registry, RunError,
};
use skyharness::store::{
    analyze, compare_traces, evaluate_claim, sync_evidence, trace_query, Direction,
    ProjectStore, StoreError, STORE_ENV,
};

use crate::render;
use crate::{Cli, Command, Global, EXIT_FAIL, EXIT_GATE, EXIT_OK, EXIT_USAGE};

/// Gate violations map to 3; every other error to 2.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    for cause in e.chain() {
        let gate = matches!(cause.downcast_ref::<RunError>(), Some(RunError::Gate(_)))
            || cause.downcast_ref::<skyharness::orchestrator::GateViolation>().is_some()
            || matches!(
                cause.downcast_ref::<StoreError>(),
                Some(StoreError::Ledger(LedgerError::Gate(_)))
            );
        if gate {
            return EXIT_GATE;
        }
    }
    EXIT_USAGE
}

pub fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    match &cli.command {
        Command::Validate => validate(g, out),
        Command::Plan {
            test,
            backend,
            lof,
            seed,
            scenario,
            config,
        } => plan(g, out, test, backend, *lof, *seed, scenario.as_deref(), config),
        Command::Run { story } => run(g, out, story),
        Command::Report { id, csv } => report(g, out, id, *csv),
        Command::Trace {
            start,
            path,
            backward,
        } => trace(g, out, start, path, *backward),
        Command::Claim { claim } => claim_cmd(g, out, claim),
        Command::Gap { a, b } => gap(g, out, a, b),
        Command::Protocol { story } => protocol(g, out, err, story),
        Command::Import { file, story, lof } => import(g, out, err, file, story, *lof),
        Command::Attest { test, note } => attest(g, out, test, note),
        Command::Ledger => ledger(g, out),
    }
}

fn ident(s: &str) -> Result<Ident> {
    Ident::new(s).map_err(|e| anyhow!("{e}"))
}

fn store_path(g: &Global) -> PathBuf {
    g.store
        .clone()
        .or_else(|| std::env::var_os(STORE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| g.project.join("store"))
}

/// Loads the project, refusing to proceed on any parse error or
/// diagnostic, and opens the store with the current models synced in.
fn open(g: &Global) -> Result<(Project, ProjectStore)> {
    let loaded = load_project(&g.project)?;
    let diags = validate_project(&loaded.project);
    if !loaded.errors.is_empty() || !diags.is_empty() {
        bail!(
            "project has {} issue(s); run `skyharness validate`",
            loaded.errors.len() + diags.len()
        );
    }
    let mut store = ProjectStore::open(&store_path(g))?;
    store.sync_project(&loaded.project)?;
    Ok((loaded.project, store))
}

fn test_of<'a>(project: &'a Project, story: &TestStory) -> Result<(&'a TestModel, Vec<VVProperty>)> {
    let test = project
        .test(story.test_id.as_str())
        .ok_or_else(|| anyhow!("story {} is for unknown test {}", story.id, story.test_id))?;
    let props = story
        .monitor_ids
        .iter()
        .map(|id| {
            project
                .property(id.as_str())
                .cloned()
                .ok_or_else(|| anyhow!("story {} monitors unknown property {id}", story.id))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((test, props))
}

fn story_of(store: &ProjectStore, id: &str) -> Result<TestStory> {
    store
        .story(id)
        .cloned()
        .ok_or_else(|| anyhow!("unknown story {id}; create one with `skyharness plan`"))
}

fn json_line(out: &mut dyn Write, v: &impl serde::Serialize) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn validate(g: &Global, out: &mut dyn Write) -> Result<i32> {
    let loaded = load_project(&g.project)?;
    let diags = validate_project(&loaded.project);
    let n = loaded.errors.len() + diags.len();
    if g.json {
        json_line(
            out,
            &serde_json::json!({ "parse_errors": loaded.errors, "diagnostics": diags, "issues": n }),
        )?;
    } else {
        for e in &loaded.errors {
            writeln!(out, "{e}")?;
        }
        for d in &diags {
            writeln!(out, "{d}")?;
        }
        writeln!(out, "{n} issue{}", if n == 1 { "" } else { "s" })?;
    }
    Ok(if n == 0 { EXIT_OK } else { EXIT_USAGE })
}

#[allow(clippy::too_many_arguments)]
fn plan(
    g: &Global,
    out: &mut dyn Write,
    test_id: &str,
    backend: &str,
    lof: i64,
    seed: u64,
    scenario: Option<&str>,
    config: &[String],
) -> Result<i32> {
    let (project, mut store) = open(g)?;
    let test = project
        .test(test_id)
        .ok_or_else(|| anyhow!("unknown test {test_id}"))?;
    let registry = Registry::builtin();
    let descriptor = registry
        .descriptor(backend)
        .ok_or_else(|| anyhow!("unknown backend {backend}"))?;
    let lof = Lof::new(lof)?;
    let sc = match scenario {
        Some(id) => project
            .scenario(id)
            .ok_or_else(|| anyhow!("unknown scenario {id}"))?,
        None => match project.scenarios_for(test_id).as_slice() {
            [one] => *one,
            [] => bail!("test {test_id} has no scenario under stories/"),
            many => bail!(
                "test {test_id} has {} scenarios; pick one with --scenario ({})",
                many.len(),
                many.iter().map(|s| s.id.as_str()).collect::<Vec<_>>().join(", ")
            ),
        },
    };
    let mut overrides = BTreeMap::new();
    for kv in config {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| anyhow!("--config expects KEY=VALUE, got {kv:?}"))?;
        let v: f64 = v
            .trim()
            .parse()
            .with_context(|| format!("--config {k}: not a number"))?;
        overrides.insert(k.trim().to_string(), v);
    }
    let (story, fixture) = materialize_story(test, descriptor, lof, seed, sc, &overrides)?;
    store.put_story(&story, Some(&fixture))?;
    if g.json {
        json_line(out, &serde_json::json!({ "story": story, "fixture": fixture }))?;
    } else {
        writeln!(out, "{}", story.id)?;
    }
    Ok(EXIT_OK)
}

fn verdict_code(passed: bool) -> i32 {
    if passed {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn run(g: &Global, out: &mut dyn Write, story_id: &str) -> Result<i32> {
    let (project, mut store) = open(g)?;
    let story = story_of(&store, story_id)?;
    let (test, props) = test_of(&project, &story)?;
    let outcome = gate_and_run(&mut store, &Registry::builtin(), &story, test, &props)?;
    if g.json {
        json_line(out, &outcome.report)?;
    } else {
        render::report(out, &outcome.report, Some(&story))?;
    }
    Ok(verdict_code(outcome.report.passed()))
}

fn report(g: &Global, out: &mut dyn Write, id: &str, csv: bool) -> Result<i32> {
    let (project, mut store) = open(g)?;
    let report = if let Some(r) = store.report(id) {
        r.clone()
    } else {
        let trace = store
            .trace(id)
            .cloned()
            .ok_or_else(|| anyhow!("no trace or report with id {id}"))?;
        let linked = store
            .links()
            .iter()
            .find(|l| l.link_type() == LinkType::Analyzed && l.from().id == trace.id)
            .and_then(|l| store.report(l.to().id.as_str()))
            .cloned();
        match linked {
            Some(r) => r,
            None => {
                let story = story_of(&store, trace.story_id.as_str())?;
                let (test, props) = test_of(&project, &story)?;
                let r = analyze(&trace, &story, test, &props)?;
                store.put_report(&r)?;
                store.append_links(&[skyharness::model::TraceLink::typed(
                    LinkType::Analyzed,
                    trace.id.clone(),
                    r.id.clone(),
                )])?;
                r
            }
        }
    };
    if csv {
        let trace = store
            .trace(report.trace_id.as_str())
            .ok_or_else(|| anyhow!("trace {} missing from store", report.trace_id))?;
        let story = story_of(&store, trace.story_id.as_str())?;
        render::trace_csv(out, trace, &story)?;
    } else if g.json {
        json_line(out, &report)?;
    } else {
        render::report(out, &report, store.story(report.story_id.as_str()))?;
    }
    Ok(verdict_code(report.passed()))
}

fn trace(g: &Global, out: &mut dyn Write, start: &ArtifactRef, path: &[String], backward: bool) -> Result<i32> {
    let (_, store) = open(g)?;
    let path = path
        .iter()
        .map(|s| s.trim().parse::<LinkType>().map_err(|e| anyhow!(e)))
        .collect::<Result<Vec<_>>>()?;
    let dir = if backward {
        Direction::Backward
    } else {
        Direction::Forward
    };
    let found = trace_query(&store, start, &path, dir)?;
    if g.json {
        json_line(out, &found)?;
    } else {
        for a in &found {
            writeln!(out, "{a}")?;
        }
    }
    Ok(EXIT_OK)
}

fn claim_cmd(g: &Global, out: &mut dyn Write, claim: &str) -> Result<i32> {
    let (_, mut store) = open(g)?;
    sync_evidence(&mut store)?;
    let status = evaluate_claim(&ident(claim)?, &store)?;
    if g.json {
        json_line(out, &status)?;
    } else {
        render::claim(out, &status, 0)?;
    }
    Ok(verdict_code(status.supported))
}

fn gap(g: &Global, out: &mut dyn Write, a: &str, b: &str) -> Result<i32> {
    let (project, store) = open(g)?;
    let ta = store.trace(a).ok_or_else(|| anyhow!("unknown trace {a}"))?;
    let tb = store.trace(b).ok_or_else(|| anyhow!("unknown trace {b}"))?;
    let story = story_of(&store, ta.story_id.as_str())?;
    let (test, props) = test_of(&project, &story)?;
    let gap = compare_traces(ta, tb, &story, test, &props)?;
    if g.json {
        json_line(out, &gap)?;
    } else {
        render::gap(out, &gap)?;
    }
    Ok(EXIT_OK)
}

fn protocol(g: &Global, out: &mut dyn Write, err: &mut dyn Write, story_id: &str) -> Result<i32> {
    let (project, store) = open(g)?;
    let story = story_of(&store, story_id)?;
    let (test, props) = test_of(&project, &story)?;
    let p = generate_field_protocol(&story, test, &props)?;
    for w in &p.warnings {
        writeln!(err, "warning: {w}")?;
    }
    if g.json {
        json_line(out, &p)?;
    } else {
        write!(out, "{}", p.to_markdown())?;
    }
    Ok(EXIT_OK)
}

fn import(
    g: &Global,
    out: &mut dyn Write,
    err: &mut dyn Write,
    file: &PathBuf,
    story_id: &str,
    lof: Option<i64>,
) -> Result<i32> {
    let (project, mut store) = open(g)?;
    let story = story_of(&store, story_id)?;
    let (test, props) = test_of(&project, &story)?;
    let lof = match lof {
        Some(l) => Lof::new(l)?,
        None => story.lof,
    };
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let imported = import_trace(&text, &story.id, lof, Some(&test.machine))
        .with_context(|| format!("importing {}", file.display()))?;
    for w in &imported.warnings {
        writeln!(err, "warning: {w}")?;
    }
    let outcome = record_trace(&mut store, imported.trace, &story, test, &props)?;
    if g.json {
        json_line(out, &outcome.report)?;
    } else {
        render::report(out, &outcome.report, Some(&story))?;
    }
    Ok(verdict_code(outcome.report.passed()))
}

fn attest(g: &Global, out: &mut dyn Write, test: &str, note: &str) -> Result<i32> {
    let (project, mut store) = open(g)?;
    if project.test(test).is_none() {
        bail!("unknown test {test}");
    }
    let entry = store.attest_component(ident(test)?, note)?;
    if g.json {
        json_line(out, &entry)?;
    } else {
        writeln!(out, "#{} {} {}: {}", entry.seq, entry.test_id, entry.lof, note)?;
    }
    Ok(EXIT_OK)
}

fn ledger(g: &Global, out: &mut dyn Write) -> Result<i32> {
    let (_, store) = open(g)?;
    let entries = store.ledger().entries();
    if g.json {
        json_line(out, &entries)?;
    } else {
        render::ledger(out, entries)?;
    }
    Ok(EXIT_OK)
}
