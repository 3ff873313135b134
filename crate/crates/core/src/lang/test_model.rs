//! `.tm` test-model notation.
//!
//! ```text
//! TestModel T1
//! Verifies: R1                 # optional; otherwise derived from requirements
//! Monitor: P1, P2              # optional; otherwise derived from requirements
//! TargetLoF: 3
//! FinalState: mission_finished
//! Require wind-model(vel=0, dir=270, coord=uniform)
//! State active "prearm-checks successful" GoToState ready-for-takeoff
//! ```
//!
//! Statements are keyword-led, so line breaks inside a statement are allowed
//! (`GoToState` may sit on the next line). States are inferred from the
//! `State` / `GoToState` mentions; the first `State` line names the initial
//! state.

use std::collections::BTreeSet;

use super::lexer::{end_of, lex, Cursor, LexOptions, Tok, Token};
use super::requirements::{join, to_ident};
use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::model::{
    escape, ExecRequirement, Ident, Located, Lof, ParamValue, Params, Source, StateMachine,
    TestModel, Transition, Unit,
};

const OPTS: LexOptions = LexOptions {
    hyphen_idents: true,
    dotted_idents: false,
};

pub fn parse_test_model(text: &str) -> Result<TestModel, ParseError> {
    parse_test_model_located(text, "").map(|l| l.item)
}

pub fn parse_test_model_located(text: &str, file: &str) -> Result<Located<TestModel>, ParseError> {
    let toks = lex(text, 1, 1, OPTS)?;
    let mut cur = Cursor::new(&toks, end_of(text));

    let mut id: Option<(Ident, SourceSpan)> = None;
    let mut target: Option<Lof> = None;
    let mut final_state: Option<(Ident, SourceSpan)> = None;
    let mut verifies: Option<Vec<Ident>> = None;
    let mut monitors: Option<Vec<Ident>> = None;
    let mut reqs: Vec<ExecRequirement> = Vec::new();
    let mut transitions: Vec<Transition> = Vec::new();
    let mut transition_keys: BTreeSet<(Ident, String)> = BTreeSet::new();

    while let Some(tok) = cur.peek() {
        let span = tok.span.clone();
        let Tok::Ident(kw) = &tok.tok else {
            return Err(cur.error_here("statement keyword"));
        };
        let once = |present: bool, what: &str| {
            if present {
                Err(ParseError::syntax(span.clone(), format!("{what} given twice")))
            } else {
                Ok(())
            }
        };
        match kw.as_str() {
            "TestModel" => {
                once(id.is_some(), "TestModel")?;
                cur.pos += 1;
                let (name, s) = cur.expect_ident("test model id")?;
                id = Some((to_ident(name, &s)?, span));
            }
            "TargetLoF" => {
                once(target.is_some(), "TargetLoF")?;
                cur.pos += 1;
                cur.expect(&Tok::Colon, "`:`")?;
                let here = cur.here();
                match cur.next().map(|t| &t.tok) {
                    Some(Tok::Number(v)) if v.fract() == 0.0 && (0.0..=3.0).contains(v) => {
                        target = Some(Lof::new(*v as i64).expect("range checked"));
                    }
                    _ => return Err(ParseError::syntax(here, "expected LoF level 0..3")),
                }
            }
            "FinalState" => {
                once(final_state.is_some(), "FinalState")?;
                cur.pos += 1;
                cur.expect(&Tok::Colon, "`:`")?;
                let (name, s) = cur.expect_ident("final state")?;
                final_state = Some((to_ident(name, &s)?, s));
            }
            "Verifies" | "Monitor" => {
                let slot = if kw == "Verifies" { &mut verifies } else { &mut monitors };
                once(slot.is_some(), kw)?;
                cur.pos += 1;
                cur.expect(&Tok::Colon, "`:`")?;
                *slot = Some(parse_id_list(&mut cur)?);
            }
            "Require" => {
                cur.pos += 1;
                reqs.push(parse_require(&mut cur)?);
            }
            "State" => {
                cur.pos += 1;
                let (from, fs) = cur.expect_ident("state name")?;
                let from = to_ident(from, &fs)?;
                let event = match cur.peek() {
                    Some(Token { tok: Tok::Str(s), .. }) => {
                        cur.pos += 1;
                        s.clone()
                    }
                    _ => return Err(cur.error_here("quoted event text")),
                };
                cur.expect_keyword("GoToState")?;
                let (to, ts) = cur.expect_ident("target state")?;
                let to = to_ident(to, &ts)?;
                if !transition_keys.insert((from.clone(), event.clone())) {
                    return Err(ParseError::new(
                        ParseErrorKind::Invalid,
                        span,
                        format!("duplicate transition from {from} on {event:?}"),
                    ));
                }
                transitions.push(Transition { from, event, to });
            }
            other => {
                return Err(ParseError::syntax(span, format!("unknown statement {other:?}")));
            }
        }
    }

    let start = SourceSpan::start();
    let (id, id_span) = id.ok_or_else(|| ParseError::syntax(start.clone(), "missing `TestModel <id>` header"))?;
    let (final_state, final_span) = final_state
        .ok_or_else(|| ParseError::new(ParseErrorKind::Invalid, id_span.clone(), "missing FinalState"))?;
    if transitions.is_empty() {
        return Err(ParseError::new(ParseErrorKind::Invalid, final_span, "no initial state: no State lines"));
    }
    let mut states: Vec<Ident> = Vec::new();
    for t in &transitions {
        for s in [&t.from, &t.to] {
            if !states.contains(s) {
                states.push(s.clone());
            }
        }
    }
    if !states.contains(&final_state) {
        return Err(ParseError::new(
            ParseErrorKind::Invalid,
            final_span,
            format!("final state {final_state} is never mentioned by a State or GoToState"),
        ));
    }
    Ok(Located::new(
        TestModel {
            id,
            requirement_ids: verifies.unwrap_or_default(),
            machine: StateMachine {
                states,
                transitions,
                final_state,
            },
            target_lof: target.unwrap_or(Lof::SIMULATION),
            exec_requirements: reqs,
            property_ids: monitors.unwrap_or_default(),
        },
        Source {
            file: file.to_string(),
            line: id_span.line,
        },
    ))
}

const KEYWORDS: [&str; 7] = ["TestModel", "TargetLoF", "FinalState", "Verifies", "Monitor", "Require", "State"];

fn parse_id_list(cur: &mut Cursor<'_>) -> Result<Vec<Ident>, ParseError> {
    let mut out = Vec::new();
    while let Some(Token {
        tok: Tok::Ident(s),
        span,
    }) = cur.peek()
    {
        if KEYWORDS.contains(&s.as_str()) {
            break;
        }
        out.push(to_ident(s, span)?);
        cur.pos += 1;
        cur.eat(&Tok::Comma);
    }
    Ok(out)
}

fn parse_require(cur: &mut Cursor<'_>) -> Result<ExecRequirement, ParseError> {
    let (cap, cap_span) = cur.expect_ident("capability name")?;
    if !ExecRequirement::is_valid_capability_name(cap) {
        return Err(ParseError::syntax(
            cap_span,
            format!("capability names are lowercase-hyphen tokens, got {cap:?}"),
        ));
    }
    let mut params = Params::new();
    cur.expect(&Tok::LParen, "`(`")?;
    if !cur.eat(&Tok::RParen) {
        loop {
            let (key, key_span) = cur.expect_ident("parameter name")?;
            cur.expect(&Tok::Assign, "`=`")?;
            let value = parse_value(cur)?;
            if params.insert(key.to_string(), value).is_some() {
                return Err(ParseError::new(
                    ParseErrorKind::DuplicateId,
                    key_span,
                    format!("parameter {key} given twice"),
                ));
            }
            if cur.eat(&Tok::RParen) {
                break;
            }
            cur.expect(&Tok::Comma, "`,` or `)`")?;
        }
    }
    Ok(ExecRequirement {
        capability: cap.to_string(),
        params,
    })
}

fn parse_value(cur: &mut Cursor<'_>) -> Result<ParamValue, ParseError> {
    let negative = cur.eat(&Tok::Minus);
    let here = cur.here();
    match cur.peek().map(|t| &t.tok) {
        Some(Tok::Number(v)) => {
            let v = if negative { -*v } else { *v };
            cur.pos += 1;
            let unit = match cur.peek() {
                Some(Token {
                    tok: Tok::Ident(u),
                    span,
                }) if !matches!(cur.peek_at(1).map(|t| &t.tok), Some(Tok::Assign)) => {
                    let unit = u.parse::<Unit>().map_err(|_| {
                        ParseError::new(ParseErrorKind::UnknownUnit, span.clone(), format!("unknown unit {u:?}"))
                    })?;
                    cur.pos += 1;
                    Some(unit)
                }
                _ => None,
            };
            Ok(ParamValue::Number(unit.map_or(v, |u| u.to_si(v))))
        }
        _ if negative => Err(ParseError::syntax(here, "expected number after `-`")),
        Some(Tok::Ident(s)) => {
            let s = s.clone();
            cur.pos += 1;
            Ok(ParamValue::Text(s))
        }
        Some(Tok::Str(s)) => {
            let s = s.clone();
            cur.pos += 1;
            Ok(ParamValue::Text(s))
        }
        _ => Err(cur.error_here("parameter value")),
    }
}

pub fn serialize_test_model(t: &TestModel) -> String {
    let mut out = format!("TestModel {}\n", t.id);
    if !t.requirement_ids.is_empty() {
        out.push_str(&format!("Verifies: {}\n", join(&t.requirement_ids)));
    }
    if !t.property_ids.is_empty() {
        out.push_str(&format!("Monitor: {}\n", join(&t.property_ids)));
    }
    out.push_str(&format!("TargetLoF: {}\n", t.target_lof.level()));
    out.push_str(&format!("FinalState: {}\n", t.machine.final_state));
    for r in &t.exec_requirements {
        out.push_str(&format!("Require {r}\n"));
    }
    for tr in &t.machine.transitions {
        out.push_str(&format!(
            "State {} \"{}\" GoToState {}\n",
            tr.from,
            escape(&tr.event),
            tr.to
        ));
    }
    out
}
