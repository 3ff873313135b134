//! `.vvm` property files, one property per line:
//!
//! ```text
//! property := "prop" IDENT kind ":" quant expr
//! kind     := "env" | "test"
//! quant    := "always" | "eventually" | "never" | "at_end"
//! expr     := conj ("|" conj)*
//! conj     := atom ("&" atom)*
//! atom     := cmp | "(" expr ")"
//! cmp      := sum relop sum
//! sum      := prod (("+" | "-") prod)*
//! prod     := factor (("*" | "/") factor)*
//! factor   := ["-"] NUMBER [unit] | SIGNAL | "(" sum ")"
//! unit     := "mph" | "mps" | "m" | "s" | "pct"
//! ```
//!
//! All binary operators associate to the left.

use std::collections::BTreeMap;

use super::lexer::{end_of, lex, Cursor, LexOptions, Tok, Token};
use super::requirements::to_ident;
use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::model::{
    ArithOp, BoolExpr, Literal, Located, PropertyKind, Quantifier, RelOp, Source, Term, Unit,
    VVProperty,
};
use crate::monitor::Signal;

pub fn parse_vv(text: &str) -> Result<Vec<VVProperty>, ParseError> {
    Ok(parse_vv_located(text, "")?.into_iter().map(|l| l.item).collect())
}

pub fn parse_vv_located(text: &str, file: &str) -> Result<Vec<Located<VVProperty>>, ParseError> {
    let mut out: Vec<Located<VVProperty>> = Vec::new();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (i, line) in text.split('\n').enumerate() {
        let lineno = i + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        let prop = parse_line(line, lineno)?;
        if let Some((p, id_span)) = prop {
            if let Some(first) = seen.get(p.id.as_str()) {
                return Err(ParseError::new(
                    ParseErrorKind::DuplicateId,
                    id_span,
                    format!("duplicate property id {} (first defined at line {first})", p.id),
                ));
            }
            seen.insert(p.id.to_string(), lineno);
            out.push(Located::new(
                p,
                Source {
                    file: file.to_string(),
                    line: lineno,
                },
            ));
        }
    }
    Ok(out)
}

/// Parses a single property from `text` (a one-line document).
pub fn parse_property(text: &str) -> Result<VVProperty, ParseError> {
    let mut props = parse_vv(text)?;
    match props.len() {
        1 => Ok(props.remove(0)),
        _ => Err(ParseError::syntax(SourceSpan::start(), "expected exactly one property")),
    }
}

fn parse_line(line: &str, lineno: usize) -> Result<Option<(VVProperty, SourceSpan)>, ParseError> {
    let content = line.split('#').next().unwrap_or_default();
    let trimmed = content.trim_start();
    if trimmed.trim().is_empty() {
        return Ok(None);
    }
    let end = {
        let e = end_of(line);
        SourceSpan::new(lineno, e.col_start, e.col_end)
    };
    let lead = content.chars().count() - trimmed.chars().count();

    // `prop` keyword and the property id may contain hyphens; the expression
    // part may not, so `a-b` reads as subtraction.
    let (head, rest, rest_col) = split_head(trimmed, lead + 1);
    let head_toks = lex(head, lineno, lead + 1, LexOptions {
        hyphen_idents: true,
        dotted_idents: false,
    })?;
    let mut hc = Cursor::new(&head_toks, end.clone());
    hc.expect_keyword("prop")?;
    let (id, id_span) = hc.expect_ident("property id")?;
    let id = to_ident(id, &id_span)?;
    if !hc.at_end() {
        return Err(hc.error_here("property kind"));
    }

    let toks = lex(rest, lineno, rest_col, LexOptions {
        hyphen_idents: false,
        dotted_idents: true,
    })?;
    let mut cur = Cursor::new(&toks, end);
    let (kind_word, kind_span) = cur.expect_ident("`env` or `test`")?;
    let kind = match kind_word {
        "env" => PropertyKind::Env,
        "test" => PropertyKind::Test,
        other => {
            return Err(ParseError::syntax(kind_span, format!("expected `env` or `test`, found {other:?}")));
        }
    };
    cur.expect(&Tok::Colon, "`:`")?;
    let (q_word, q_span) = cur.expect_ident("quantifier")?;
    let quantifier = Quantifier::ALL
        .into_iter()
        .find(|q| q.keyword() == q_word)
        .ok_or_else(|| ParseError::syntax(q_span, format!("unknown quantifier {q_word:?}")))?;
    let mut p = ExprParser { cur, kind };
    let expr = p.or_expr()?;
    if !p.cur.at_end() {
        return Err(p.cur.error_here("`&`, `|` or end of line"));
    }
    Ok(Some((
        VVProperty {
            id,
            kind,
            quantifier,
            expr,
        },
        id_span,
    )))
}

/// Splits `prop ID` from the remainder of the line. Returns the head, the
/// remainder and the 1-based column where the remainder starts.
fn split_head(s: &str, col: usize) -> (&str, &str, usize) {
    let mut words = 0;
    let mut in_word = false;
    for (ci, (bi, c)) in s.char_indices().enumerate() {
        let boundary = c.is_whitespace() || c == ':';
        if !boundary && !in_word {
            in_word = true;
            words += 1;
            if words == 3 {
                return (&s[..bi], &s[bi..], col + ci);
            }
        } else if boundary {
            in_word = false;
            if c == ':' && words >= 2 {
                return (&s[..bi], &s[bi..], col + ci);
            }
        }
    }
    (s, "", col + s.chars().count())
}

struct ExprParser<'a> {
    cur: Cursor<'a>,
    kind: PropertyKind,
}

fn further(a: ParseError, b: ParseError) -> ParseError {
    let ka = (a.span.line, a.span.col_start);
    let kb = (b.span.line, b.span.col_start);
    if kb > ka {
        b
    } else {
        a
    }
}

impl<'a> ExprParser<'a> {
    fn or_expr(&mut self) -> Result<BoolExpr, ParseError> {
        let mut lhs = self.and_expr()?;
        while self.cur.eat(&Tok::Pipe) {
            let rhs = self.and_expr()?;
            lhs = BoolExpr::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<BoolExpr, ParseError> {
        let mut lhs = self.atom()?;
        while self.cur.eat(&Tok::Amp) {
            let rhs = self.atom()?;
            lhs = BoolExpr::and(lhs, rhs);
        }
        Ok(lhs)
    }

    /// A comparison, or a parenthesized boolean expression. A leading `(`
    /// may open either, so both readings are tried.
    fn atom(&mut self) -> Result<BoolExpr, ParseError> {
        let start = self.cur.pos;
        let as_cmp = self.comparison();
        let cmp_err = match as_cmp {
            Ok(e) => return Ok(e),
            Err(e) => e,
        };
        if cmp_err.kind != ParseErrorKind::Syntax {
            return Err(cmp_err);
        }
        self.cur.pos = start;
        if !self.cur.eat(&Tok::LParen) {
            return Err(cmp_err);
        }
        let grouped = self.or_expr().and_then(|e| {
            self.cur.expect(&Tok::RParen, "`)`")?;
            Ok(e)
        });
        grouped.map_err(|e| further(cmp_err, e))
    }

    fn comparison(&mut self) -> Result<BoolExpr, ParseError> {
        let lhs = self.sum()?;
        let op = match self.cur.peek().map(|t| &t.tok) {
            Some(Tok::Lt) => RelOp::Lt,
            Some(Tok::Le) => RelOp::Le,
            Some(Tok::Gt) => RelOp::Gt,
            Some(Tok::Ge) => RelOp::Ge,
            Some(Tok::EqEq) => RelOp::Eq,
            Some(Tok::Ne) => RelOp::Ne,
            _ => return Err(self.cur.error_here("comparison operator")),
        };
        self.cur.pos += 1;
        let rhs = self.sum()?;
        Ok(BoolExpr::cmp(op, lhs, rhs))
    }

    fn sum(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.cur.peek().map(|t| &t.tok) {
                Some(Tok::Plus) => ArithOp::Add,
                Some(Tok::Minus) => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.cur.pos += 1;
            let rhs = self.product()?;
            lhs = Term::arith(op, lhs, rhs);
        }
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.cur.peek().map(|t| &t.tok) {
                Some(Tok::Star) => ArithOp::Mul,
                Some(Tok::Slash) => ArithOp::Div,
                _ => return Ok(lhs),
            };
            self.cur.pos += 1;
            let rhs = self.factor()?;
            lhs = Term::arith(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Term, ParseError> {
        let tok = self.cur.peek();
        match tok.map(|t| &t.tok) {
            Some(Tok::Minus) => {
                self.cur.pos += 1;
                match self.cur.peek() {
                    Some(Token {
                        tok: Tok::Number(v), ..
                    }) => {
                        self.cur.pos += 1;
                        let unit = self.unit()?;
                        Ok(Term::Literal(Literal::new(-v, unit)))
                    }
                    _ => Err(self.cur.error_here("number after unary `-`")),
                }
            }
            Some(Tok::Number(v)) => {
                let v = *v;
                self.cur.pos += 1;
                let unit = self.unit()?;
                Ok(Term::Literal(Literal::new(v, unit)))
            }
            Some(Tok::Ident(name)) => {
                let span = tok.map(|t| t.span.clone()).unwrap_or_default();
                let signal = Signal::lookup(name).ok_or_else(|| {
                    ParseError::new(ParseErrorKind::UnknownSignal, span.clone(), format!("unknown signal {name:?}"))
                })?;
                if self.kind == PropertyKind::Env && !signal.is_environment() {
                    return Err(ParseError::new(
                        ParseErrorKind::EnvSignal,
                        span,
                        format!("env property may only reference environment signals, found {signal}"),
                    ));
                }
                self.cur.pos += 1;
                Ok(Term::Signal(signal))
            }
            Some(Tok::LParen) => {
                self.cur.pos += 1;
                let inner = self.sum()?;
                self.cur.expect(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.cur.error_here("number, signal or `(`")),
        }
    }

    /// An identifier directly after a number is its unit.
    fn unit(&mut self) -> Result<Option<Unit>, ParseError> {
        match self.cur.peek() {
            Some(Token {
                tok: Tok::Ident(name),
                span,
            }) => {
                let u = name.parse::<Unit>().map_err(|_| {
                    ParseError::new(ParseErrorKind::UnknownUnit, span.clone(), format!("unknown unit {name:?}"))
                })?;
                self.cur.pos += 1;
                Ok(Some(u))
            }
            _ => Ok(None),
        }
    }
}

pub fn serialize_vv(props: &[VVProperty]) -> String {
    props.iter().map(|p| format!("{p}\n")).collect()
}
