//! Turning an abstract test plus a scenario into a concrete story and the
//! fixture that prepares a backend for it.

use std::collections::BTreeMap;

use thiserror::Error;

use super::matching::{match_capabilities, MatchResult, Missing};
use crate::ids;
use crate::model::capability::{AVOIDANCE, GEOSPATIAL, OBSTACLES, WIND_MODEL};
use crate::model::{
    story_issues, Directive, EnvironmentConfig, ExecRequirement, Fixture, Ident, Lof, Obstacle,
    ObstacleShape, ObstacleSpec, ParamValue, Params, Scenario, TestModel, TestStory, WindConfig,
};
use crate::sim::{BackendDescriptor, SimConfig};
use crate::Vec3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MaterializeError {
    #[error("backend {backend} lacks {}", list(.missing))]
    CapabilityMismatch { backend: Ident, missing: Vec<Missing> },
    #[error("backend {backend} does not support {lof}")]
    UnsupportedLof { backend: Ident, lof: Lof },
    #[error("{lof} exceeds the target {target} of test {test}")]
    AboveTarget { test: Ident, lof: Lof, target: Lof },
    #[error("scenario {scenario} is for test {expected}, not {test}")]
    WrongTest { scenario: Ident, expected: Ident, test: Ident },
    #[error("{capability}.{param}: {message}")]
    BadParam {
        capability: String,
        param: String,
        message: String,
    },
    #[error("invalid story: {0}")]
    InvalidStory(String),
}

fn list(m: &[Missing]) -> String {
    m.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Builds the story for `test` on `backend` at `lof`. The story id is the
/// content hash, so identical inputs give identical ids.
pub fn materialize_story(
    test: &TestModel,
    backend: &BackendDescriptor,
    lof: Lof,
    seed: u64,
    scenario: &Scenario,
    config: &BTreeMap<String, f64>,
) -> Result<(TestStory, Fixture), MaterializeError> {
    if let MatchResult::Missing(missing) = match_capabilities(&test.exec_requirements, backend) {
        return Err(MaterializeError::CapabilityMismatch {
            backend: backend.id.clone(),
            missing,
        });
    }
    if !backend.supports(lof) {
        return Err(MaterializeError::UnsupportedLof {
            backend: backend.id.clone(),
            lof,
        });
    }
    if lof > test.target_lof {
        return Err(MaterializeError::AboveTarget {
            test: test.id.clone(),
            lof,
            target: test.target_lof,
        });
    }
    if scenario.test != test.id {
        return Err(MaterializeError::WrongTest {
            scenario: scenario.id.clone(),
            expected: scenario.test.clone(),
            test: test.id.clone(),
        });
    }
    SimConfig::with_overrides(config).map_err(|e| MaterializeError::InvalidStory(e.to_string()))?;

    let mut directives = Vec::new();
    let geospatial_ref = match test.requires(GEOSPATIAL) {
        Some(r) => {
            let tag = match (&scenario.geospatial_ref, r.params.get("tag")) {
                (Some(s), _) => Some(s.clone()),
                (None, Some(v)) => Some(text(r, "tag", v)?.to_string()),
                (None, None) => None,
            };
            let mut params = Params::new();
            if let Some(t) = &tag {
                params.insert("tag".into(), ParamValue::Text(t.clone()));
            }
            directives.push(directive("load-geospatial", params));
            tag
        }
        None => scenario.geospatial_ref.clone(),
    };

    let obstacles = match (&scenario.obstacles, test.requires(OBSTACLES)) {
        (Some(spec), _) => spec.clone(),
        (None, Some(r)) => obstacle_spec(r)?,
        (None, None) => ObstacleSpec::default(),
    };
    if test.requires(OBSTACLES).is_some() || scenario.obstacles.is_some() {
        directives.push(directive("place-obstacles", obstacle_params(&obstacles)));
    }

    let mut wind = match test.requires(WIND_MODEL) {
        Some(r) => wind_config(r)?,
        None => WindConfig::default(),
    };
    if let Some(o) = &scenario.wind {
        wind.base = o.base.unwrap_or(wind.base);
        wind.gust_peak = o.gust_peak.unwrap_or(wind.gust_peak);
        wind.gust_duration = o.gust_duration.unwrap_or(wind.gust_duration);
        wind.gust_interval = o.gust_interval.unwrap_or(wind.gust_interval);
    }
    if test.requires(WIND_MODEL).is_some() || scenario.wind.is_some() {
        directives.push(directive("set-wind", wind_params(&wind)));
    }

    if test.requires(AVOIDANCE).is_some() {
        directives.push(directive("enable-avoidance", Params::new()));
    }
    directives.push(directive(
        "connect-sut",
        Params::from([(
            "connection".to_string(),
            ParamValue::Text(scenario.connection.clone()),
        )]),
    ));

    let mut story = TestStory {
        id: Ident::new("pending").expect("static id"),
        test_id: test.id.clone(),
        lof,
        backend_id: backend.id.clone(),
        seed,
        environment: EnvironmentConfig {
            area: scenario.area,
            wind,
            obstacles,
            geospatial_ref,
        },
        mission: scenario.mission.clone(),
        monitor_ids: test.property_ids.clone(),
        connection: scenario.connection.clone(),
        config: config.clone(),
    };
    if let Some(reason) = story_issues(&story, Some(test)).into_iter().next() {
        return Err(MaterializeError::InvalidStory(reason));
    }
    story.id = ids::story_id(&story);
    let fixture = Fixture {
        story_id: story.id.clone(),
        directives,
    };
    Ok((story, fixture))
}

fn directive(name: &str, params: Params) -> Directive {
    Directive {
        name: name.to_string(),
        params,
    }
}

fn bad(r: &ExecRequirement, param: &str, message: impl Into<String>) -> MaterializeError {
    MaterializeError::BadParam {
        capability: r.capability.clone(),
        param: param.to_string(),
        message: message.into(),
    }
}

fn number(r: &ExecRequirement, key: &str) -> Result<Option<f64>, MaterializeError> {
    match r.params.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_f64()
            .map(Some)
            .ok_or_else(|| bad(r, key, format!("expected a number, got {v}"))),
    }
}

fn text<'a>(r: &ExecRequirement, key: &str, v: &'a ParamValue) -> Result<&'a str, MaterializeError> {
    v.as_text()
        .ok_or_else(|| bad(r, key, format!("expected text, got {v}")))
}

/// `vel` (m/s) blowing from `dir` (degrees, meteorological: 0 = from the
/// north, 90 = from the east); x points east and y north.
fn wind_config(r: &ExecRequirement) -> Result<WindConfig, MaterializeError> {
    if let Some(v) = r.params.get("coord") {
        let c = text(r, "coord", v)?;
        if c != "uniform" {
            return Err(bad(r, "coord", format!("only uniform wind fields are modeled, got {c}")));
        }
    }
    let vel = number(r, "vel")?.unwrap_or(0.0);
    let dir = number(r, "dir")?.unwrap_or(0.0).to_radians();
    let mut w = WindConfig {
        base: Vec3::new(-vel * dir.sin(), -vel * dir.cos(), 0.0),
        ..WindConfig::default()
    };
    if let Some(p) = number(r, "gust_peak")? {
        w.gust_peak = p;
    }
    if let Some(d) = number(r, "gust_duration")? {
        w.gust_duration = d;
    }
    if let Some(i) = number(r, "gust_interval")? {
        w.gust_interval = i;
    }
    Ok(w)
}

fn wind_params(w: &WindConfig) -> Params {
    let n = ParamValue::Number;
    Params::from([
        ("base_x".into(), n(w.base.x)),
        ("base_y".into(), n(w.base.y)),
        ("base_z".into(), n(w.base.z)),
        ("coord".into(), ParamValue::Text("uniform".into())),
        ("gust_peak".into(), n(w.gust_peak)),
        ("gust_duration".into(), n(w.gust_duration)),
        ("gust_interval".into(), n(w.gust_interval)),
    ])
}

/// `density` selects a procedural map; otherwise `location` and `size`
/// ("x,y,z" strings) describe one obstacle of `type` (default box).
fn obstacle_spec(r: &ExecRequirement) -> Result<ObstacleSpec, MaterializeError> {
    if let Some(d) = number(r, "density")? {
        return Ok(ObstacleSpec::Density(d));
    }
    let shape = match r.params.get("type") {
        None => ObstacleShape::Box,
        Some(v) => match text(r, "type", v)? {
            "box" => ObstacleShape::Box,
            "cylinder" => ObstacleShape::Cylinder,
            other => return Err(bad(r, "type", format!("unknown obstacle type {other}"))),
        },
    };
    match (r.params.get("location"), r.params.get("size")) {
        (None, None) => Ok(ObstacleSpec::default()),
        (Some(l), Some(s)) => Ok(ObstacleSpec::List(vec![Obstacle {
            shape,
            center: triple(r, "location", text(r, "location", l)?)?,
            size: triple(r, "size", text(r, "size", s)?)?,
        }])),
        _ => Err(bad(r, "location", "location and size must be given together")),
    }
}

fn triple(r: &ExecRequirement, key: &str, s: &str) -> Result<Vec3, MaterializeError> {
    let parts: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
    match parts.as_deref() {
        Ok([x, y, z]) => Ok(Vec3::new(*x, *y, *z)),
        _ => Err(bad(r, key, format!("expected \"x,y,z\", got {s:?}"))),
    }
}

fn obstacle_params(spec: &ObstacleSpec) -> Params {
    match spec {
        ObstacleSpec::Density(d) => Params::from([("density".into(), ParamValue::Number(*d))]),
        ObstacleSpec::List(list) => Params::from([(
            "count".into(),
            ParamValue::Number(list.len() as f64),
        )]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_test_model;
    use crate::model::{Mission, WindOverrides};
    use crate::sim::{desk_sim, field, hitl_import};
    use crate::Aabb;

    const T1: &str = "TestModel T1\nTargetLoF: 3\nMonitor: P1 P2\n\
        Require geospatial(tag=open-field)\n\
        Require wind-model(vel=5, dir=270, coord=uniform, gust_peak=23 mph)\n\
        FinalState: done\nState idle \"go\" GoToState done";

    fn scenario() -> Scenario {
        Scenario {
            id: Ident::new("S").unwrap(),
            test: Ident::new("T1").unwrap(),
            area: Aabb::new(Vec3::new(-50.0, -50.0, 0.0), Vec3::new(250.0, 200.0, 60.0)),
            mission: Mission {
                home: Vec3::zero(),
                waypoints: vec![Vec3::new(0.0, 0.0, 20.0), Vec3::new(150.0, 0.0, 20.0)],
                land: Vec3::new(150.0, 0.0, 0.0),
                cruise_speed: 8.0,
            },
            connection: "udp://127.0.0.1:14550".into(),
            wind: None,
            obstacles: None,
            geospatial_ref: None,
        }
    }

    #[test]
    fn r1_story_and_fixture() {
        let t = parse_test_model(T1).unwrap();
        let (s, f) = materialize_story(&t, &desk_sim(), Lof::SIMULATION, 7, &scenario(), &BTreeMap::new()).unwrap();
        assert_eq!(f.directive_names(), ["load-geospatial", "set-wind", "connect-sut"]);
        // From the west, so blowing toward +x.
        assert!((s.environment.wind.base.x - 5.0).abs() < 1e-12);
        assert!(s.environment.wind.base.y.abs() < 1e-12);
        assert!((s.environment.wind.gust_peak - 23.0 * 0.44704).abs() < 1e-12);
        assert_eq!(s.environment.geospatial_ref.as_deref(), Some("open-field"));
        assert_eq!(s.monitor_ids, t.property_ids);
        assert_eq!(s.id, ids::story_id(&s));
        assert!(s.id.as_str().starts_with("st-"));
        assert_eq!(f.story_id, s.id);
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let t = parse_test_model(T1).unwrap();
        let cfg = BTreeMap::new();
        let a = materialize_story(&t, &desk_sim(), Lof::SIMULATION, 7, &scenario(), &cfg).unwrap();
        let b = materialize_story(&t, &desk_sim(), Lof::SIMULATION, 7, &scenario(), &cfg).unwrap();
        assert_eq!(a, b);
        let c = materialize_story(&t, &desk_sim(), Lof::SIMULATION, 8, &scenario(), &cfg).unwrap();
        assert_ne!(a.0.id, c.0.id);
    }

    #[test]
    fn scenario_overrides_and_errors() {
        let t = parse_test_model(T1).unwrap();
        let mut sc = scenario();
        sc.wind = Some(WindOverrides {
            gust_peak: Some(36.0),
            ..Default::default()
        });
        let (s, _) = materialize_story(&t, &desk_sim(), Lof::SIMULATION, 7, &sc, &BTreeMap::new()).unwrap();
        assert_eq!(s.environment.wind.gust_peak, 36.0);

        let mut no_wind = desk_sim();
        no_wind.capabilities.retain(|c| c.name != WIND_MODEL);
        let e = materialize_story(&t, &no_wind, Lof::SIMULATION, 7, &sc, &BTreeMap::new()).unwrap_err();
        assert!(e.to_string().contains("wind-model"), "{e}");
        let e = materialize_story(&t, &desk_sim(), Lof::HITL, 7, &sc, &BTreeMap::new()).unwrap_err();
        assert!(matches!(e, MaterializeError::UnsupportedLof { .. }));
        assert!(materialize_story(&t, &hitl_import(), Lof::HITL, 7, &sc, &BTreeMap::new()).is_ok());
        assert!(materialize_story(&t, &field(), Lof::FIELD, 7, &sc, &BTreeMap::new()).is_ok());
        let bad_cfg = BTreeMap::from([("warp".to_string(), 1.0)]);
        assert!(materialize_story(&t, &desk_sim(), Lof::SIMULATION, 7, &sc, &bad_cfg).is_err());
    }

    #[test]
    fn obstacle_params() {
        let t = parse_test_model(
            "TestModel T1\nRequire obstacles(type=box, location=\"75,0,10\", size=\"10,10,20\")\n\
             Require avoidance()\nFinalState: b\nState a \"x\" GoToState b",
        )
        .unwrap();
        let (s, f) = materialize_story(&t, &desk_sim(), Lof::SIMULATION, 1, &scenario(), &BTreeMap::new()).unwrap();
        assert_eq!(f.directive_names(), ["place-obstacles", "enable-avoidance", "connect-sut"]);
        let ObstacleSpec::List(list) = &s.environment.obstacles else {
            panic!("expected list");
        };
        assert_eq!(list[0].center, Vec3::new(75.0, 0.0, 10.0));
    }
}
