//! State-machine conformance of a trace's `sut_state` channel.

use crate::model::{Conformance, ConformanceViolation, StateMachine};

/// Collapses consecutive repeats: `[a, a, b, b, a]` → `[a, b, a]`.
pub fn change_points<'a>(states: impl IntoIterator<Item = &'a str>) -> Vec<&'a str> {
    let mut out: Vec<&str> = Vec::new();
    for s in states {
        if out.last() != Some(&s) {
            out.push(s);
        }
    }
    out
}

/// Conformant iff the compressed state sequence starts at the initial
/// state, each change follows a declared transition, and it ends in the
/// final state.
pub fn check_states<'a>(states: impl IntoIterator<Item = &'a str>, machine: &StateMachine) -> Conformance {
    let seq = change_points(states);
    let Some(first) = seq.first() else {
        return Conformance::violated(ConformanceViolation::EmptyTrace);
    };
    let initial = machine.initial_state().map(|s| s.as_str()).unwrap_or_default();
    if *first != initial {
        return Conformance::violated(ConformanceViolation::WrongInitial {
            expected: initial.to_string(),
            observed: first.to_string(),
        });
    }
    for w in seq.windows(2) {
        if !machine.has_transition(w[0], w[1]) {
            return Conformance::violated(ConformanceViolation::UndeclaredTransition {
                from: w[0].to_string(),
                to: w[1].to_string(),
            });
        }
    }
    let last = seq[seq.len() - 1];
    if last != machine.final_state.as_str() {
        return Conformance::violated(ConformanceViolation::NotFinal {
            expected: machine.final_state.to_string(),
            observed: last.to_string(),
        });
    }
    Conformance::ok()
}

pub fn check_conformance(trace: &crate::model::TestTrace, machine: &StateMachine) -> Conformance {
    check_states(trace.records.iter().map(|r| r.sut_state.as_str()), machine)
}
