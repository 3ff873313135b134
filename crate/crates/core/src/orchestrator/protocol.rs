//! Field-test protocols for LoF-3 stories: the checklist a field crew
//! follows so the flight log can be imported and monitored like any other
//! trace.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    BoolExpr, Ident, Lof, ObstacleSpec, PropertyKind, Quantifier, TestModel, TestStory, Term,
    VVProperty, MPH_IN_MPS,
};
use crate::monitor::Signal;
use crate::sim::SimConfig;
use crate::Vec3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("field protocols are for LoF-3 stories; story {story} is {lof}")]
    NotField { story: Ident, lof: Lof },
    #[error("story monitors unknown property {0}")]
    UnknownProperty(Ident),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldProtocol {
    pub story_id: Ident,
    pub test_id: Ident,
    /// Environment assumptions, in field units.
    pub site_requirements: Vec<String>,
    pub setup_steps: Vec<String>,
    pub mission_card: Vec<String>,
    pub data_collection: Vec<String>,
    pub abort_criteria: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

pub fn generate_field_protocol(
    story: &TestStory,
    test: &TestModel,
    properties: &[VVProperty],
) -> Result<FieldProtocol, ProtocolError> {
    if story.lof != Lof::FIELD {
        return Err(ProtocolError::NotField {
            story: story.id.clone(),
            lof: story.lof,
        });
    }
    let monitored: Vec<&VVProperty> = story
        .monitor_ids
        .iter()
        .map(|id| {
            properties
                .iter()
                .find(|p| &p.id == id)
                .ok_or_else(|| ProtocolError::UnknownProperty(id.clone()))
        })
        .collect::<Result<_, _>>()?;

    let mut warnings = Vec::new();
    let site_requirements: Vec<String> = monitored
        .iter()
        .filter(|p| p.kind == PropertyKind::Env)
        .map(|p| format!("{}: {}", p.id, field_condition(p)))
        .collect();
    if site_requirements.is_empty() {
        warnings.push("no environment properties: the site is unconstrained".to_string());
    }

    let env = &story.environment;
    let mut setup_steps = Vec::new();
    if let Some(tag) = &env.geospatial_ref {
        setup_steps.push(format!("Select a site matching geospatial profile \"{tag}\"."));
    }
    setup_steps.push(format!(
        "Mark the flight area: {} to {} (m, local east/north/up from home).",
        fmt_vec(env.area.min),
        fmt_vec(env.area.max)
    ));
    match &env.obstacles {
        ObstacleSpec::Density(d) if *d > 0.0 => setup_steps.push(format!(
            "Lay out obstacles covering {:.0}% of the ground area on a 10 m grid, keeping waypoints clear.",
            d * 100.0
        )),
        ObstacleSpec::List(list) => {
            for o in list {
                setup_steps.push(format!(
                    "Place a {:?} obstacle of size {} centred at {}.",
                    o.shape,
                    fmt_vec(o.size),
                    fmt_vec(o.center)
                ));
            }
        }
        ObstacleSpec::Density(_) => {}
    }
    if env.wind.max_speed() > 0.0 {
        setup_steps.push("Set up an anemometer at the site and log wind speed throughout.".to_string());
    }
    if test.requires("avoidance").is_some() {
        setup_steps.push("Enable the SuT's obstacle avoidance.".to_string());
    }
    if !story.connection.is_empty() {
        setup_steps.push(format!("Connect the ground station to {}.", story.connection));
    }
    if let Some(init) = test.machine.initial_state() {
        setup_steps.push(format!("Confirm the SuT reports state {init} before arming."));
    }

    let m = &story.mission;
    let mut mission_card = vec![format!("Home: {}", fmt_vec(m.home))];
    for (i, w) in m.waypoints.iter().enumerate() {
        mission_card.push(format!("Waypoint {}: {}", i + 1, fmt_vec(*w)));
    }
    mission_card.push(format!("Land: {}", fmt_vec(m.land)));
    mission_card.push(format!(
        "Cruise speed: {} m/s ({:.1} mph)",
        m.cruise_speed,
        m.cruise_speed / MPH_IN_MPS
    ));

    let rate = 1.0 / SimConfig::default().dt;
    let mut data_collection = vec![format!(
        "Log t, pos, vel, cmd_vel, wind, sut_state and battery_pct at {rate} Hz in the JSON-lines trace format."
    )];
    let signals: BTreeSet<Signal> = monitored.iter().flat_map(|p| p.expr.signals()).collect();
    for s in &signals {
        let info = s.info();
        let line = match s {
            Signal::DeviationPct => "flight path deviation (deviation_pct): derived from logged positions".to_string(),
            Signal::ColCount => "collision count (col_count): record every contact as a collision event".to_string(),
            Signal::MissSuccess => "mission success (miss_success): record the touchdown as a landed event".to_string(),
            Signal::ObsDensity => "obstacle density (obs_density): measured once during setup".to_string(),
            _ => format!("{} ({}, {})", info.field_label, info.name, info.unit),
        };
        data_collection.push(line);
    }
    if signals.contains(&Signal::ColCount) || !matches!(&env.obstacles, ObstacleSpec::List(l) if l.is_empty()) {
        data_collection.push("proximity to obstacles (obs_min_dist, m) with every record".to_string());
    }
    if signals.contains(&Signal::MissSuccess) {
        data_collection.push("landing location: final pos at touchdown".to_string());
    }

    let mut abort_criteria: Vec<String> = monitored
        .iter()
        .filter(|p| p.kind == PropertyKind::Env)
        .map(|p| format!("Site conditions violate {}: {}", p.id, field_condition(p)))
        .collect();
    abort_criteria.push("The vehicle leaves the marked flight area.".to_string());
    abort_criteria.push("Battery charge falls below 20%.".to_string());
    abort_criteria.push("Link to the ground station is lost.".to_string());
    abort_criteria.push("Any contact with an obstacle or the ground outside landing.".to_string());

    Ok(FieldProtocol {
        story_id: story.id.clone(),
        test_id: test.id.clone(),
        site_requirements,
        setup_steps,
        mission_card,
        data_collection,
        abort_criteria,
        warnings,
    })
}

fn fmt_vec(v: Vec3) -> String {
    format!("({}, {}, {})", v.x, v.y, v.z)
}

/// "wind gusts ≤ 23 mph throughout the flight"
fn field_condition(p: &VVProperty) -> String {
    let cond = field_expr(&p.expr);
    match p.quantifier {
        Quantifier::Always => format!("{cond} throughout the flight"),
        Quantifier::Eventually => format!("{cond} at some point during the flight"),
        Quantifier::Never => format!("never {cond}"),
        Quantifier::AtEnd => format!("{cond} at the end of the flight"),
    }
}

fn field_expr(e: &BoolExpr) -> String {
    match e {
        BoolExpr::Cmp(c) => format!("{} {} {}", field_term(&c.lhs), c.op.pretty(), field_term(&c.rhs)),
        BoolExpr::And(a, b) => format!("{} and {}", field_expr(a), field_expr(b)),
        BoolExpr::Or(a, b) => format!("({} or {})", field_expr(a), field_expr(b)),
    }
}

fn field_term(t: &Term) -> String {
    match t {
        Term::Literal(l) => l.to_string(),
        Term::Signal(s) => s.info().field_label.to_string(),
        Term::Arith(..) => t.to_string(),
    }
}

impl FieldProtocol {
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# Field test protocol: {} (story {})\n", self.test_id, self.story_id);
        for w in &self.warnings {
            let _ = writeln!(out, "> warning: {w}\n");
        }
        let sections: [(&str, &[String]); 5] = [
            ("Site requirements", &self.site_requirements),
            ("Setup", &self.setup_steps),
            ("Mission card", &self.mission_card),
            ("Data collection", &self.data_collection),
            ("Abort criteria", &self.abort_criteria),
        ];
        for (title, items) in sections {
            let _ = writeln!(out, "## {title}\n");
            if items.is_empty() {
                out.push_str("(none)\n");
            }
            for i in items {
                let _ = writeln!(out, "- [ ] {i}");
            }
            out.push('\n');
        }
        out
    }
}
