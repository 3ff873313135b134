//! `.req` files: one block per requirement.
//!
//! ```text
//! # comment
//! req R1 "An sUAS shall complete a flight with multiple waypoints in wind gusts"
//!     props: P1, P2 tests: T1
//! ```
//!
//! `props:` and `tests:` are optional, in either order; list items may be
//! separated by whitespace or commas.

use std::collections::BTreeMap;

use super::lexer::{end_of, lex, Cursor, LexOptions, Tok, Token};
use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::model::{escape, Ident, Located, Requirement, Source};

const OPTS: LexOptions = LexOptions {
    hyphen_idents: true,
    dotted_idents: false,
};

pub fn parse_requirements(text: &str) -> Result<Vec<Requirement>, ParseError> {
    Ok(parse_requirements_located(text, "")?
        .into_iter()
        .map(|l| l.item)
        .collect())
}

pub fn parse_requirements_located(text: &str, file: &str) -> Result<Vec<Located<Requirement>>, ParseError> {
    let toks = lex(text, 1, 1, OPTS)?;
    let mut cur = Cursor::new(&toks, end_of(text));
    let mut out: Vec<Located<Requirement>> = Vec::new();
    let mut seen: BTreeMap<String, SourceSpan> = BTreeMap::new();
    while !cur.at_end() {
        let kw = cur.expect_keyword("req")?;
        let (id, id_span) = cur.expect_ident("requirement id")?;
        let id = to_ident(id, &id_span)?;
        if let Some(first) = seen.get(id.as_str()) {
            return Err(ParseError::new(
                ParseErrorKind::DuplicateId,
                id_span,
                format!("duplicate requirement id {id} (first defined at line {})", first.line),
            ));
        }
        seen.insert(id.to_string(), id_span.clone());
        let text = match cur.peek() {
            Some(Token { tok: Tok::Str(s), .. }) => {
                cur.pos += 1;
                s.clone()
            }
            _ => return Err(cur.error_here("quoted requirement text")),
        };
        let mut props = None;
        let mut tests = None;
        loop {
            let slot = if list_keyword(&cur, "props") {
                &mut props
            } else if list_keyword(&cur, "tests") {
                &mut tests
            } else {
                break;
            };
            let span = cur.here();
            if slot.is_some() {
                return Err(ParseError::syntax(span, "list given twice"));
            }
            cur.pos += 2;
            *slot = Some(parse_list(&mut cur)?);
        }
        out.push(Located::new(
            Requirement {
                id,
                text,
                linked_properties: props.unwrap_or_default(),
                linked_tests: tests.unwrap_or_default(),
            },
            Source {
                file: file.to_string(),
                line: kw.line,
            },
        ));
    }
    Ok(out)
}

fn list_keyword(cur: &Cursor<'_>, kw: &str) -> bool {
    cur.is_keyword(kw) && matches!(cur.peek_at(1), Some(Token { tok: Tok::Colon, .. }))
}

fn parse_list(cur: &mut Cursor<'_>) -> Result<Vec<Ident>, ParseError> {
    let mut out = Vec::new();
    loop {
        if cur.is_keyword("req") || list_keyword(cur, "props") || list_keyword(cur, "tests") {
            break;
        }
        match cur.peek() {
            Some(Token {
                tok: Tok::Ident(s),
                span,
            }) => {
                out.push(to_ident(s, span)?);
                cur.pos += 1;
                cur.eat(&Tok::Comma);
            }
            _ => break,
        }
    }
    Ok(out)
}

pub(crate) fn to_ident(s: &str, span: &SourceSpan) -> Result<Ident, ParseError> {
    Ident::new(s).map_err(|e| ParseError::syntax(span.clone(), e.to_string()))
}

pub fn serialize_requirements(reqs: &[Requirement]) -> String {
    let mut out = String::new();
    for r in reqs {
        out.push_str(&format!("req {} \"{}\"", r.id, escape(&r.text)));
        if !r.linked_properties.is_empty() {
            out.push_str(" props: ");
            out.push_str(&join(&r.linked_properties));
        }
        if !r.linked_tests.is_empty() {
            out.push_str(" tests: ");
            out.push_str(&join(&r.linked_tests));
        }
        out.push('\n');
    }
    out
}

pub(crate) fn join(ids: &[Ident]) -> String {
    ids.iter().map(Ident::as_str).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gust_requirement() {
        let reqs = parse_requirements(
            "req R1 \"An sUAS shall complete a flight with multiple waypoints in wind gusts\" props: P1 tests: T1",
        )
        .unwrap();
        assert_eq!(reqs.len(), 1);
        assert_eq!(reqs[0].id, "R1");
        assert_eq!(reqs[0].text, "An sUAS shall complete a flight with multiple waypoints in wind gusts");
        assert_eq!(reqs[0].linked_properties, [Ident::new("P1").unwrap()]);
        assert_eq!(reqs[0].linked_tests, [Ident::new("T1").unwrap()]);
    }

    #[test]
    fn empty_file() {
        assert!(parse_requirements("").unwrap().is_empty());
        assert!(parse_requirements("# only a comment\n\n").unwrap().is_empty());
    }

    #[test]
    fn duplicate_id() {
        let e = parse_requirements("req R1 \"a\"\nreq R1 \"b\"").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateId);
        assert_eq!(e.span.line, 2);
    }

    #[test]
    fn multi_line_blocks_and_commas() {
        let text = "req R2 \"x\"\n  tests: T1, T2\n  props: P3\nreq R3 \"y\"";
        let reqs = parse_requirements(text).unwrap();
        assert_eq!(reqs.len(), 2);
        assert_eq!(reqs[0].linked_tests.len(), 2);
        assert_eq!(reqs[0].linked_properties.len(), 1);
        assert_eq!(parse_requirements(&serialize_requirements(&reqs)).unwrap(), reqs);
    }

    #[test]
    fn missing_text_is_spanned() {
        let text = "req R1 props: P1";
        let e = parse_requirements(text).unwrap_err();
        assert!(e.span.is_within(text), "{e}");
        let e = parse_requirements("req").unwrap_err();
        assert!(e.span.is_within("req"), "{e}");
    }
}
