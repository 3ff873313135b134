//! JSON documents: test stories, scenarios and safety claims.
//!
//! Schema errors name the JSON path of the offending value (for example
//! `mission.waypoints[1]`) and point at the line/column serde_json stopped at.

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::model::{mission_issues, story_issues, SafetyClaim, Scenario, TestModel, TestStory};

/// Parses a story and checks its structural invariants (area containment,
/// density range, positive speeds).
pub fn parse_story(text: &str) -> Result<TestStory, ParseError> {
    parse_story_for(text, None)
}

/// Like [`parse_story`], additionally checking the story against its test
/// model (`lof` within target, monitors drawn from the test's properties).
pub fn parse_story_for(text: &str, test: Option<&TestModel>) -> Result<TestStory, ParseError> {
    let story: TestStory = parse_json(text)?;
    if let Some(reason) = story_issues(&story, test).into_iter().next() {
        let key = issue_key(&reason);
        return Err(ParseError::new(ParseErrorKind::Invalid, key_span(text, key), reason));
    }
    Ok(story)
}

pub fn serialize_story(story: &TestStory) -> String {
    to_json(story)
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let s: Scenario = parse_json(text)?;
    let env = crate::model::EnvironmentConfig {
        area: s.area,
        wind: Default::default(),
        obstacles: s.obstacles.clone().unwrap_or_default(),
        geospatial_ref: None,
    };
    if let Some(reason) = mission_issues(&s.mission, &env).into_iter().next() {
        let key = issue_key(&reason);
        return Err(ParseError::new(ParseErrorKind::Invalid, key_span(text, key), reason));
    }
    Ok(s)
}

pub fn serialize_scenario(s: &Scenario) -> String {
    to_json(s)
}

pub fn parse_claims(text: &str) -> Result<Vec<SafetyClaim>, ParseError> {
    parse_json(text)
}

pub fn serialize_claims(claims: &[SafetyClaim]) -> String {
    to_json(&claims)
}

fn to_json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("domain types always serialize");
    s.push('\n');
    s
}

/// Deserializes `text`, mapping failures to a spanned schema or syntax error.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, ParseError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        json_error(text, &path, e.into_inner())
    })?;
    de.end().map_err(|e| json_error(text, "", e))?;
    Ok(value)
}

fn json_error(text: &str, path: &str, inner: serde_json::Error) -> ParseError {
    let kind = if inner.is_syntax() || inner.is_eof() {
        ParseErrorKind::Syntax
    } else {
        ParseErrorKind::Schema
    };
    let span = clamp_span(text, inner.line(), inner.column());
    let msg = strip_position(&inner.to_string());
    let message = if path == "." || path.is_empty() {
        msg
    } else {
        format!("at {path}: {msg}")
    };
    ParseError::new(kind, span, message)
}

/// serde_json appends " at line L column C"; the span already says that.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

fn clamp_span(text: &str, line: usize, col: usize) -> SourceSpan {
    let lines: Vec<&str> = text.split('\n').collect();
    let line = line.clamp(1, lines.len());
    let width = lines[line - 1].chars().count();
    let col = col.clamp(1, width + 1);
    SourceSpan::new(line, col, col)
}

/// Which top-level key a validation reason is about, for locating it.
fn issue_key(reason: &str) -> &'static str {
    if reason.starts_with("lof") {
        "lof"
    } else if reason.starts_with("monitor") {
        "monitor_ids"
    } else if reason.starts_with("story is for test") {
        "test_id"
    } else if reason.contains("waypoint") {
        "waypoints"
    } else if reason.starts_with("home") {
        "home"
    } else if reason.starts_with("land") {
        "land"
    } else if reason.contains("cruise_speed") {
        "cruise_speed"
    } else if reason.starts_with("wind") {
        "wind"
    } else if reason.starts_with("area") {
        "area"
    } else {
        "obstacles"
    }
}

/// Span of the first `"key"` in `text`, or the document start.
fn key_span(text: &str, key: &str) -> SourceSpan {
    let needle = format!("\"{key}\"");
    let Some(at) = text.find(&needle) else {
        return SourceSpan::start();
    };
    let before = &text[..at];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    SourceSpan::new(line, col, col + needle.chars().count() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_test_model;
    use crate::model::{Lof, ObstacleSpec};

    fn story_json(waypoints: &str, lof: u8) -> String {
        format!(
            r#"{{
  "id": "S1", "test_id": "T1", "lof": {lof}, "backend_id": "desk-sim", "seed": 7,
  "environment": {{ "area": {{ "min": [-100, -100, 0], "max": [100, 100, 50] }} }},
  "mission": {{ "home": [0, 0, 0], "waypoints": {waypoints}, "land": [100, 0, 0], "cruise_speed": 8 }},
  "monitor_ids": ["P1"]
}}"#
        )
    }

    #[test]
    fn contained_mission_accepted() {
        let s = parse_story(&story_json("[[0,0,10],[100,0,10]]", 1)).unwrap();
        assert_eq!(s.mission.waypoints.len(), 2);
        assert_eq!(parse_story(&serialize_story(&s)).unwrap(), s);
    }

    #[test]
    fn waypoint_outside_area() {
        let text = story_json("[[0,0,10],[300,0,10]]", 1);
        let e = parse_story(&text).unwrap_err();
        assert!(e.message.contains("waypoint 1 outside area"), "{e}");
        assert!(e.span.is_within(&text));
        assert_eq!(e.span.line, 4);
    }

    #[test]
    fn lof_exceeds_target() {
        let t = parse_test_model("TestModel T1\nTargetLoF: 1\nMonitor: P1\nFinalState: b\nState a \"x\" GoToState b").unwrap();
        let text = story_json("[[0,0,10]]", 3);
        let e = parse_story_for(&text, Some(&t)).unwrap_err();
        assert!(e.message.contains("lof exceeds target"), "{e}");
        assert!(parse_story_for(&story_json("[[0,0,10]]", 1), Some(&t)).is_ok());
    }

    #[test]
    fn schema_errors_carry_path() {
        let text = story_json("[[0,0,\"x\"]]", 1);
        let e = parse_story(&text).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Schema);
        assert!(e.message.contains("mission.waypoints[0][2]"), "{e}");
        assert!(e.span.is_within(&text));

        let e = parse_story(&story_json("[[0,0,10]]", 9)).unwrap_err();
        assert!(e.message.contains("lof"), "{e}");

        let e = parse_story("{\"id\": \"S1\"").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert!(e.span.is_within("{\"id\": \"S1\""));
        assert!(parse_story("").unwrap_err().span.is_within(""));
    }

    #[test]
    fn r2_story_fields() {
        let text = r#"{
  "id": "S2", "test_id": "T2", "lof": 1, "backend_id": "desk-sim", "seed": 11,
  "environment": {
    "area": { "min": [0, 0, 0], "max": [200, 200, 40] },
    "obstacles": { "density": 0.4 }
  },
  "mission": { "home": [5, 5, 0], "waypoints": [[195, 5, 5]], "land": [195, 195, 0], "cruise_speed": 5 },
  "monitor_ids": ["R2-test"],
  "connection": "tcp://127.0.0.1:4560"
}"#;
        let s = parse_story(text).unwrap();
        assert_eq!(s.environment.obstacles, ObstacleSpec::Density(0.4));
        assert_eq!(s.monitor_ids[0], "R2-test");
        assert_eq!(s.connection, "tcp://127.0.0.1:4560");
        assert_eq!(s.lof, Lof::SIMULATION);
    }

    #[test]
    fn claims_round_trip() {
        let text = r#"[{"id": "C1", "text": "no collision", "subclaims": ["SC1"]},
                       {"id": "SC1", "text": "x", "covers": ["R1"], "required_lof": 2}]"#;
        let c = parse_claims(text).unwrap();
        assert_eq!(c[0].required_lof, Lof::SIMULATION);
        assert_eq!(c[1].required_lof, Lof::HITL);
        assert_eq!(parse_claims(&serialize_claims(&c)).unwrap(), c);
    }
}
