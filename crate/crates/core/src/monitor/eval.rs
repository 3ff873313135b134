//! Quantified property evaluation over a signal table.

use std::collections::BTreeMap;

use super::{MonitorError, Signal, SignalTable};
use crate::model::{
    BoolExpr, PropertyKind, PropertyResult, Quantifier, Reading, Term, Threshold, VVProperty,
    Verdict,
};

/// Truth value of `expr` at every row.
fn truth(prop: &VVProperty, table: &SignalTable) -> Result<Vec<bool>, MonitorError> {
    let missing = prop.expr.signals().into_iter().find(|s| table.column(*s).is_none());
    if let Some(signal) = missing {
        return Err(MonitorError::MissingSignal {
            property: prop.id.to_string(),
            signal,
        });
    }
    Ok((0..table.len())
        .map(|row| {
            prop.expr
                .eval(&mut |s| table.value(s, row))
                .expect("columns checked above")
        })
        .collect())
}

/// Verdict and the row it is attributed to, before witnesses are attached.
pub fn quantify(q: Quantifier, truth: &[bool]) -> (bool, Option<usize>) {
    let last = truth.len().checked_sub(1);
    match q {
        Quantifier::Always => match truth.iter().position(|v| !v) {
            Some(i) => (false, Some(i)),
            None => (true, None),
        },
        Quantifier::Never => match truth.iter().position(|v| *v) {
            Some(i) => (false, Some(i)),
            None => (true, None),
        },
        Quantifier::Eventually => {
            if truth.iter().any(|v| *v) {
                (true, None)
            } else {
                (false, last)
            }
        }
        Quantifier::AtEnd => match last {
            Some(i) if truth[i] => (true, None),
            _ => (false, last),
        },
    }
}

fn literals(t: &Term, out: &mut Vec<Threshold>) {
    match t {
        Term::Literal(l) => out.push(Threshold {
            si: l.si(),
            si_unit: l.unit().map_or("", |u| u.si_symbol()).to_string(),
            original: l.to_string(),
        }),
        Term::Signal(_) => {}
        Term::Arith(_, a, b) => {
            literals(a, out);
            literals(b, out);
        }
    }
}

/// Every literal in `expr`, in SI and as written.
pub fn thresholds(expr: &BoolExpr) -> Vec<Threshold> {
    let mut out = Vec::new();
    for c in expr.comparisons() {
        literals(&c.lhs, &mut out);
        literals(&c.rhs, &mut out);
    }
    out
}

fn witness(prop: &VVProperty, table: &SignalTable, row: usize) -> BTreeMap<Signal, Reading> {
    let mut w: BTreeMap<Signal, Reading> = prop
        .expr
        .signals()
        .into_iter()
        .filter_map(|s| table.value(s, row).map(|v| (s, Reading(v))))
        .collect();
    w.insert(Signal::TimeS, Reading(table.t[row]));
    w
}

/// Evaluates `prop` over `table`. A failing result carries the time it is
/// attributed to: the first offending step for `always`/`never`, the final
/// step for `eventually`/`at_end`.
pub fn eval_property(prop: &VVProperty, table: &SignalTable) -> Result<PropertyResult, MonitorError> {
    if table.is_empty() {
        return Err(MonitorError::EmptyTrace);
    }
    let truth = truth(prop, table)?;
    let (pass, row) = quantify(prop.quantifier, &truth);
    let mut result = PropertyResult {
        property_id: prop.id.clone(),
        kind: prop.kind,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        first_violation_t: None,
        witness: BTreeMap::new(),
        thresholds: Vec::new(),
    };
    if let (false, Some(row)) = (pass, row) {
        result.first_violation_t = Some(table.t[row]);
        result.witness = witness(prop, table, row);
        result.thresholds = thresholds(&prop.expr);
    }
    Ok(result)
}

/// Whether an environment property's assumption can hold under the story's
/// configuration constants. `None` when it references a signal the
/// configuration does not determine.
pub fn environment_applicable(prop: &VVProperty, constants: &BTreeMap<Signal, f64>) -> Option<bool> {
    if prop.kind != PropertyKind::Env {
        return Some(true);
    }
    let holds = prop.expr.eval(&mut |s| constants.get(&s).copied())?;
    let (pass, _) = quantify(prop.quantifier, &[holds]);
    Some(pass)
}

/// [`eval_property`] plus the environment pre-check: an `env` property
/// whose assumption the configuration violates is inapplicable.
pub fn eval_with_environment(
    prop: &VVProperty,
    table: &SignalTable,
    constants: &BTreeMap<Signal, f64>,
) -> Result<PropertyResult, MonitorError> {
    if environment_applicable(prop, constants) == Some(false) {
        let witness = constants
            .iter()
            .filter(|(s, _)| prop.expr.signals().contains(s))
            .map(|(s, v)| (*s, Reading(*v)))
            .collect();
        return Ok(PropertyResult {
            property_id: prop.id.clone(),
            kind: prop.kind,
            verdict: Verdict::Inapplicable,
            first_violation_t: None,
            witness,
            thresholds: thresholds(&prop.expr),
        });
    }
    eval_property(prop, table)
}
