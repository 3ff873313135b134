use std::io::{self, Write};

use skyharness::model::{TestReport, TestStory, TestTrace};
use skyharness::monitor::deviation_pct;
use skyharness::orchestrator::LedgerEntry;
use skyharness::store::{ClaimStatus, GapReport};

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.3}")
    } else {
        "inf".into()
    }
}

pub fn report(out: &mut dyn Write, r: &TestReport, story: Option<&TestStory>) -> io::Result<()> {
    writeln!(out, "report {}  trace {}  story {}", r.id, r.trace_id, r.story_id)?;
    writeln!(out, "test {} at {}", r.test_id, r.lof)?;
    if let Some(s) = story {
        writeln!(out, "backend {} seed {}", s.backend_id, s.seed)?;
    }
    writeln!(out)?;
    writeln!(out, "{:<14} {:<12} {:<13} {:>10}", "property", "kind", "verdict", "violated t")?;
    for p in &r.per_property {
        let kind = serde_json::to_value(p.kind)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        let t = p.first_violation_t.map(num).unwrap_or_else(|| "-".into());
        writeln!(out, "{:<14} {:<12} {:<13} {:>10}", p.property_id, kind, p.verdict, t)?;
        if !p.witness.is_empty() {
            let w: Vec<String> = p.witness.iter().map(|(s, v)| format!("{s}={}", num(v.0))).collect();
            writeln!(out, "  witness: {}", w.join(" "))?;
        }
        for th in &p.thresholds {
            if th.si_unit.is_empty() {
                writeln!(out, "  threshold: {}", th.original)?;
            } else {
                writeln!(out, "  threshold: {} ({} {})", th.original, num(th.si), th.si_unit)?;
            }
        }
    }
    match &r.conformance.violation {
        None => writeln!(out, "\nconformance: ok")?,
        Some(v) => writeln!(out, "\nconformance: {v}")?,
    }
    for w in &r.assumption_warnings {
        writeln!(out, "warning: {w}")?;
    }
    let s = &r.stats;
    writeln!(
        out,
        "duration {} s, max deviation {} %, collisions {}, mission success {}, battery used {} %",
        num(s.duration_s),
        num(s.deviation_pct_max),
        s.col_count,
        s.mission_success,
        num(s.battery_used_pct)
    )?;
    writeln!(out, "overall: {}", r.overall)
}

/// One row per record. Non-finite distances are left empty.
pub fn trace_csv(out: &mut dyn Write, trace: &TestTrace, story: &TestStory) -> io::Result<()> {
    let dev = deviation_pct(trace, &story.mission).unwrap_or_default();
    writeln!(
        out,
        "t,pos_x,pos_y,pos_z,vel_x,vel_y,vel_z,cmd_x,cmd_y,cmd_z,wind_x,wind_y,wind_z,sut_state,battery_pct,obs_min_dist,deviation_pct"
    )?;
    for (i, r) in trace.records.iter().enumerate() {
        let obs = if r.obs_min_dist.is_finite() {
            r.obs_min_dist.to_string()
        } else {
            String::new()
        };
        let d = dev.get(i).map(f64::to_string).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.t,
            r.pos.x,
            r.pos.y,
            r.pos.z,
            r.vel.x,
            r.vel.y,
            r.vel.z,
            r.cmd_vel.x,
            r.cmd_vel.y,
            r.cmd_vel.z,
            r.wind.x,
            r.wind.y,
            r.wind.z,
            r.sut_state,
            r.battery_pct,
            obs,
            d
        )?;
    }
    Ok(())
}

pub fn claim(out: &mut dyn Write, c: &ClaimStatus, depth: usize) -> io::Result<()> {
    let pad = "  ".repeat(depth);
    let mark = if c.supported { "supported" } else { "unsupported" };
    writeln!(out, "{pad}{} {mark} (requires {})", c.claim_id, c.required_lof)?;
    if !c.evidence.is_empty() {
        let ids: Vec<&str> = c.evidence.iter().map(|i| i.as_str()).collect();
        writeln!(out, "{pad}  evidence: {}", ids.join(", "))?;
    }
    if c.subclaims.is_empty() {
        for r in &c.reasons {
            writeln!(out, "{pad}  - {r}")?;
        }
    }
    for s in &c.subclaims {
        claim(out, s, depth + 1)?;
    }
    Ok(())
}

pub fn gap(out: &mut dyn Write, g: &GapReport) -> io::Result<()> {
    writeln!(
        out,
        "story {}: {} ({}) vs {} ({})",
        g.story_id, g.trace_a.id, g.trace_a.lof, g.trace_b.id, g.trace_b.lof
    )?;
    writeln!(out, "dt {} s over {} samples", num(g.dt), g.samples)?;
    writeln!(out, "{:<14} {:>10} {:>10}", "signal", "rmse", "max |d|")?;
    for (name, s) in &g.signals {
        writeln!(out, "{name:<14} {:>10} {:>10}", num(s.rmse), num(s.max_abs_diff))?;
    }
    writeln!(out, "verdict agreement {}", num(g.verdict_agreement))?;
    writeln!(out, "duration ratio {}", num(g.duration_ratio))
}

pub fn ledger(out: &mut dyn Write, entries: &[LedgerEntry]) -> io::Result<()> {
    for e in entries {
        let what = match (&e.attestation, &e.report_id) {
            (Some(a), _) => format!("attested: {a}"),
            (None, Some(r)) => format!("report {r}"),
            (None, None) => String::new(),
        };
        writeln!(out, "#{:<4} {:<8} {:<6} {:<5} {}", e.seq, e.test_id, e.lof, e.verdict, what)?;
    }
    Ok(())
}
