//! V&V properties: a quantifier over a boolean expression of catalog signals.
//!
//! The `Display` impls produce the canonical `.vvm` text that the property
//! parser reads back into an identical tree.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Ident, Unit};
use crate::monitor::Signal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropertyKind {
    /// Environment assumption.
    Env,
    /// Obligation on the system under test.
    Test,
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PropertyKind::Env => "env",
            PropertyKind::Test => "test",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantifier {
    Always,
    Eventually,
    Never,
    AtEnd,
}

impl Quantifier {
    pub const ALL: [Quantifier; 4] = [
        Quantifier::Always,
        Quantifier::Eventually,
        Quantifier::Never,
        Quantifier::AtEnd,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Always => "always",
            Quantifier::Eventually => "eventually",
            Quantifier::Never => "never",
            Quantifier::AtEnd => "at_end",
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

/// Absolute tolerance applied to `==` and `!=`.
pub const EQ_TOLERANCE: f64 = 1e-9;

impl RelOp {
    pub const ALL: [RelOp; 6] = [RelOp::Lt, RelOp::Le, RelOp::Gt, RelOp::Ge, RelOp::Eq, RelOp::Ne];

    pub fn symbol(self) -> &'static str {
        match self {
            RelOp::Lt => "<",
            RelOp::Le => "<=",
            RelOp::Gt => ">",
            RelOp::Ge => ">=",
            RelOp::Eq => "==",
            RelOp::Ne => "!=",
        }
    }

    pub fn pretty(self) -> &'static str {
        match self {
            RelOp::Lt => "<",
            RelOp::Le => "≤",
            RelOp::Gt => ">",
            RelOp::Ge => "≥",
            RelOp::Eq => "=",
            RelOp::Ne => "≠",
        }
    }

    pub fn apply(self, lhs: f64, rhs: f64) -> bool {
        match self {
            RelOp::Lt => lhs < rhs,
            RelOp::Le => lhs <= rhs,
            RelOp::Gt => lhs > rhs,
            RelOp::Ge => lhs >= rhs,
            RelOp::Eq => lhs == rhs || (lhs - rhs).abs() <= EQ_TOLERANCE,
            RelOp::Ne => !(lhs == rhs || (lhs - rhs).abs() <= EQ_TOLERANCE),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    pub const ALL: [ArithOp; 4] = [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div];

    pub fn symbol(self) -> char {
        match self {
            ArithOp::Add => '+',
            ArithOp::Sub => '-',
            ArithOp::Mul => '*',
            ArithOp::Div => '/',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            ArithOp::Add | ArithOp::Sub => 1,
            ArithOp::Mul | ArithOp::Div => 2,
        }
    }

    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            ArithOp::Add => a + b,
            ArithOp::Sub => a - b,
            ArithOp::Mul => a * b,
            ArithOp::Div => a / b,
        }
    }
}

/// Numeric literal as written plus its SI value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Literal {
    value: f64,
    unit: Option<Unit>,
    si: f64,
}

impl Literal {
    pub fn new(value: f64, unit: Option<Unit>) -> Self {
        let si = unit.map_or(value, |u| u.to_si(value));
        Self { value, unit, si }
    }

    pub fn plain(value: f64) -> Self {
        Self::new(value, None)
    }

    /// Value as written in the source.
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn unit(&self) -> Option<Unit> {
        self.unit
    }

    /// Value in SI units.
    pub fn si(&self) -> f64 {
        self.si
    }

    /// The same quantity expressed directly in SI, without a suffix.
    pub fn normalized(&self) -> Self {
        Self::plain(self.si)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)?;
        if let Some(u) = self.unit {
            write!(f, " {u}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Literal(Literal),
    Signal(Signal),
    Arith(ArithOp, Box<Term>, Box<Term>),
}

impl Term {
    pub fn arith(op: ArithOp, lhs: Term, rhs: Term) -> Self {
        Term::Arith(op, Box::new(lhs), Box::new(rhs))
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Arith(op, ..) => op.precedence(),
            _ => 3,
        }
    }

    fn collect_signals(&self, out: &mut BTreeSet<Signal>) {
        match self {
            Term::Literal(_) => {}
            Term::Signal(s) => {
                out.insert(*s);
            }
            Term::Arith(_, a, b) => {
                a.collect_signals(out);
                b.collect_signals(out);
            }
        }
    }

    /// Rewrites every literal into its unit-free SI form.
    pub fn normalized(&self) -> Term {
        match self {
            Term::Literal(l) => Term::Literal(l.normalized()),
            Term::Signal(s) => Term::Signal(*s),
            Term::Arith(op, a, b) => Term::arith(*op, a.normalized(), b.normalized()),
        }
    }

    /// Evaluates with `lookup` supplying signal values; `None` when a
    /// referenced signal is unavailable.
    pub fn eval(&self, lookup: &mut impl FnMut(Signal) -> Option<f64>) -> Option<f64> {
        Some(match self {
            Term::Literal(l) => l.si(),
            Term::Signal(s) => lookup(*s)?,
            Term::Arith(op, a, b) => op.apply(a.eval(lookup)?, b.eval(lookup)?),
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Literal(l) => write!(f, "{l}"),
            Term::Signal(s) => write!(f, "{s}"),
            Term::Arith(op, a, b) => {
                let p = op.precedence();
                write_child(f, a, a.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                write_child(f, b, b.precedence() <= p)
            }
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &impl fmt::Display, paren: bool) -> fmt::Result {
    if paren {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub op: RelOp,
    pub lhs: Term,
    pub rhs: Term,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op.symbol(), self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoolExpr {
    Cmp(Comparison),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn cmp(op: RelOp, lhs: Term, rhs: Term) -> Self {
        BoolExpr::Cmp(Comparison { op, lhs, rhs })
    }

    pub fn and(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::Or(Box::new(a), Box::new(b))
    }

    fn precedence(&self) -> u8 {
        match self {
            BoolExpr::Or(..) => 1,
            BoolExpr::And(..) => 2,
            BoolExpr::Cmp(_) => 3,
        }
    }

    pub fn signals(&self) -> BTreeSet<Signal> {
        let mut out = BTreeSet::new();
        self.collect_signals(&mut out);
        out
    }

    fn collect_signals(&self, out: &mut BTreeSet<Signal>) {
        match self {
            BoolExpr::Cmp(c) => {
                c.lhs.collect_signals(out);
                c.rhs.collect_signals(out);
            }
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
                a.collect_signals(out);
                b.collect_signals(out);
            }
        }
    }

    /// Comparisons in left-to-right order.
    pub fn comparisons(&self) -> Vec<&Comparison> {
        let mut out = Vec::new();
        fn walk<'a>(e: &'a BoolExpr, out: &mut Vec<&'a Comparison>) {
            match e {
                BoolExpr::Cmp(c) => out.push(c),
                BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn normalized(&self) -> BoolExpr {
        match self {
            BoolExpr::Cmp(c) => BoolExpr::cmp(c.op, c.lhs.normalized(), c.rhs.normalized()),
            BoolExpr::And(a, b) => BoolExpr::and(a.normalized(), b.normalized()),
            BoolExpr::Or(a, b) => BoolExpr::or(a.normalized(), b.normalized()),
        }
    }

    /// Evaluates the expression; `None` when a referenced signal is missing.
    pub fn eval(&self, lookup: &mut impl FnMut(Signal) -> Option<f64>) -> Option<bool> {
        Some(match self {
            BoolExpr::Cmp(c) => {
                let l = c.lhs.eval(lookup)?;
                let r = c.rhs.eval(lookup)?;
                c.op.apply(l, r)
            }
            // Both sides are evaluated so a missing signal is always reported.
            BoolExpr::And(a, b) => {
                let x = a.eval(lookup)?;
                let y = b.eval(lookup)?;
                x && y
            }
            BoolExpr::Or(a, b) => {
                let x = a.eval(lookup)?;
                let y = b.eval(lookup)?;
                x || y
            }
        })
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolExpr::Cmp(c) => write!(f, "{c}"),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
                let p = self.precedence();
                let sym = if matches!(self, BoolExpr::And(..)) { "&" } else { "|" };
                write_child(f, a, a.precedence() < p)?;
                write!(f, " {sym} ")?;
                write_child(f, b, b.precedence() <= p)
            }
        }
    }
}

/// A formalized V&V property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VVProperty {
    pub id: Ident,
    pub kind: PropertyKind,
    pub quantifier: Quantifier,
    pub expr: BoolExpr,
}

impl VVProperty {
    /// Signals in the expression that an `env` property may not reference.
    pub fn non_environment_signals(&self) -> Vec<Signal> {
        self.expr
            .signals()
            .into_iter()
            .filter(|s| !s.is_environment())
            .collect()
    }
}

impl fmt::Display for VVProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "prop {} {}: {} {}", self.id, self.kind, self.quantifier, self.expr)
    }
}
