//! Tokenizer shared by the line-oriented artifact formats.

use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(f64),
    Str(String),
    Colon,
    Comma,
    LParen,
    RParen,
    Assign,
    Amp,
    Pipe,
    Plus,
    Minus,
    Star,
    Slash,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Ne,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Number(v) => format!("number {v}"),
            Tok::Str(s) => format!("string {s:?}"),
            other => format!("{:?}", symbol(other)),
        }
    }
}

fn symbol(t: &Tok) -> &'static str {
    match t {
        Tok::Colon => ":",
        Tok::Comma => ",",
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::Assign => "=",
        Tok::Amp => "&",
        Tok::Pipe => "|",
        Tok::Plus => "+",
        Tok::Minus => "-",
        Tok::Star => "*",
        Tok::Slash => "/",
        Tok::Lt => "<",
        Tok::Le => "<=",
        Tok::Gt => ">",
        Tok::Ge => ">=",
        Tok::EqEq => "==",
        Tok::Ne => "!=",
        _ => "?",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LexOptions {
    /// Allow `-` inside identifiers (`ready-for-takeoff`).
    pub hyphen_idents: bool,
    /// Allow `.` inside identifiers (`miss.success`).
    pub dotted_idents: bool,
}

/// Tokenizes `text`, whose first character sits at (`line`, `col`).
/// `#` starts a comment running to the end of the line.
pub fn lex(text: &str, line: usize, col: usize, opts: LexOptions) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = line;
    let mut col = col;
    while i < chars.len() {
        let c = chars[i];
        let start_col = col;
        let span = |end: usize| SourceSpan::new(line, start_col, end);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
                col += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut j = i + 1;
            while j < chars.len() {
                let d = chars[j];
                let next_alnum = chars.get(j + 1).is_some_and(|n| n.is_ascii_alphanumeric());
                let ok = d.is_ascii_alphanumeric()
                    || d == '_'
                    || (d == '-' && opts.hyphen_idents)
                    || (d == '.' && opts.dotted_idents && next_alnum);
                if !ok {
                    break;
                }
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            col += j - i;
            out.push(Token {
                tok: Tok::Ident(s),
                span: span(col - 1),
            });
            i = j;
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j + 1 < chars.len() && chars[j] == '.' && chars[j + 1].is_ascii_digit() {
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
            }
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                let mut k = j + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    j = k;
                }
            }
            let s: String = chars[i..j].iter().collect();
            col += j - i;
            let v: f64 = s
                .parse()
                .map_err(|_| ParseError::syntax(span(col - 1), format!("bad number {s:?}")))?;
            if !v.is_finite() {
                return Err(ParseError::syntax(span(col - 1), format!("number {s} out of range")));
            }
            out.push(Token {
                tok: Tok::Number(v),
                span: span(col - 1),
            });
            i = j;
            continue;
        }
        if c == '"' {
            let mut j = i + 1;
            let mut s = String::new();
            let mut closed = false;
            while j < chars.len() {
                match chars[j] {
                    '"' => {
                        closed = true;
                        j += 1;
                        break;
                    }
                    '\n' => break,
                    '\\' => {
                        let esc = chars.get(j + 1).copied();
                        let r = match esc {
                            Some('"') => '"',
                            Some('\\') => '\\',
                            Some('n') => '\n',
                            Some('t') => '\t',
                            _ => {
                                let at = start_col + (j - i);
                                return Err(ParseError::syntax(
                                    SourceSpan::new(line, at, at + 1),
                                    "invalid escape in string",
                                ));
                            }
                        };
                        s.push(r);
                        j += 2;
                    }
                    other => {
                        s.push(other);
                        j += 1;
                    }
                }
            }
            if !closed {
                return Err(ParseError::syntax(span(start_col + (j - i).max(1) - 1), "unterminated string"));
            }
            col += j - i;
            out.push(Token {
                tok: Tok::Str(s),
                span: span(col - 1),
            });
            i = j;
            continue;
        }
        let two: Option<Tok> = match (c, chars.get(i + 1)) {
            ('<', Some('=')) => Some(Tok::Le),
            ('>', Some('=')) => Some(Tok::Ge),
            ('=', Some('=')) => Some(Tok::EqEq),
            ('!', Some('=')) => Some(Tok::Ne),
            _ => None,
        };
        if let Some(t) = two {
            col += 2;
            out.push(Token {
                tok: t,
                span: span(col - 1),
            });
            i += 2;
            continue;
        }
        let one = match c {
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '=' => Tok::Assign,
            '&' => Tok::Amp,
            '|' => Tok::Pipe,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '<' => Tok::Lt,
            '>' => Tok::Gt,
            other => {
                return Err(ParseError::syntax(span(start_col), format!("unexpected character {other:?}")));
            }
        };
        col += 1;
        out.push(Token {
            tok: one,
            span: span(start_col),
        });
        i += 1;
    }
    Ok(out)
}

/// Cursor over a token slice with helpers for the common expectations.
pub struct Cursor<'a> {
    toks: &'a [Token],
    pub pos: usize,
    /// Span used for "unexpected end of input" errors.
    end: SourceSpan,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token], end: SourceSpan) -> Self {
        Self { toks, pos: 0, end }
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    pub fn peek_at(&self, k: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + k)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// Span of the next token, or the end-of-input span.
    pub fn here(&self) -> SourceSpan {
        self.peek().map_or_else(|| self.end.clone(), |t| t.span.clone())
    }

    pub fn error_here(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::syntax(
                t.span.clone(),
                format!("expected {expected}, found {}", t.tok.describe()),
            ),
            None => ParseError::syntax(self.end.clone(), format!("expected {expected}, found end of input")),
        }
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().is_some_and(|t| &t.tok == tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok, what: &str) -> Result<&'a Token, ParseError> {
        match self.peek() {
            Some(t) if &t.tok == tok => {
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.error_here(what)),
        }
    }

    pub fn expect_ident(&mut self, what: &str) -> Result<(&'a str, SourceSpan), ParseError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s),
                span,
            }) => {
                self.pos += 1;
                Ok((s.as_str(), span.clone()))
            }
            _ => Err(self.error_here(what)),
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<SourceSpan, ParseError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s),
                span,
            }) if s == kw => {
                self.pos += 1;
                Ok(span.clone())
            }
            _ => Err(self.error_here(&format!("`{kw}`"))),
        }
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Ident(s), .. }) if s == kw)
    }
}

/// Span one column past the last character of `text`.
pub fn end_of(text: &str) -> SourceSpan {
    let mut line = 1;
    let mut col = 1;
    for c in text.chars() {
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    SourceSpan::new(line, col, col)
}
