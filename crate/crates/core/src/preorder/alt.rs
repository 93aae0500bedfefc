use std::collections::{BTreeSet, HashSet, VecDeque};
use std::hash::Hash;

use serde::Serialize;

use super::{co_ready_tokens, AcceptanceSet, PreorderError, Trace};
use crate::labels::{Action, LabelAbstraction, Token};
use crate::semantics::{det_step, divergence, tau_closure, DetState, Graph, SemanticsError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FailureReason {
    /// `p ⇓ s` but not `q ⇓ s`.
    ConvergenceFailure,
    /// Some stable `q'` after `s` has abstract co-ready set `offending`, and
    /// no stable `p'` after `s` has a subset of it.
    AcceptanceFailure { offending: BTreeSet<Token> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AltWitness {
    pub trace: Trace,
    pub reason: FailureReason,
    /// `⟦p⟧(s)` and `⟦q⟧(s)`, present for acceptance failures.
    pub left: Option<AcceptanceSet>,
    pub right: Option<AcceptanceSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<AltWitness>,
    /// False when some trace was cut short by the mail capacity; a positive
    /// verdict then covers only the traces that stay within it.
    pub exhaustive: bool,
    /// Number of determinized pairs visited.
    pub pairs: usize,
}

/// Decides `p ⊑_A q` on two explored graphs by a breadth-first walk over
/// the reachable pairs of their determinizations. Traces are expanded in
/// order of length, then by the text of their actions, so the witness is
/// the least failing trace in that order.
pub fn alt_leq<S: Clone + Eq + Hash, T: Clone + Eq + Hash>(
    gp: &Graph<S>,
    gq: &Graph<T>,
    abs: &LabelAbstraction,
    max_pairs: usize,
) -> Result<Verdict, PreorderError> {
    let div_p = divergence(gp)?;
    let div_q = divergence(gq)?;
    let start = (tau_closure(gp, [gp.root()]), tau_closure(gq, [gq.root()]));
    let mut seen: HashSet<(DetState, DetState)> = HashSet::from([start.clone()]);
    let mut queue: VecDeque<(DetState, DetState, Trace)> = VecDeque::from([(start.0, start.1, Vec::new())]);
    let mut exhaustive = true;
    while let Some((xp, xq, trace)) = queue.pop_front() {
        if xp.iter().any(|s| div_p[s]) || xq.is_empty() {
            continue;
        }
        if xq.iter().any(|s| div_q[s]) {
            let witness = AltWitness { trace, reason: FailureReason::ConvergenceFailure, left: None, right: None };
            return Ok(Verdict { holds: false, witness: Some(witness), exhaustive, pairs: seen.len() });
        }
        let left = stable_sets(gp, &xp, abs)?;
        let right = stable_sets(gq, &xq, abs)?;
        if let Some(r) = right.iter().find(|r| !left.iter().any(|l| l.is_subset(r))) {
            let reason = FailureReason::AcceptanceFailure { offending: r.clone() };
            let witness = AltWitness { trace, reason, left: Some(left), right: Some(right) };
            return Ok(Verdict { holds: false, witness: Some(witness), exhaustive, pairs: seen.len() });
        }
        let mut actions: Vec<&Action> = xp.iter().flat_map(|s| gp.visible_actions(s)).collect();
        actions.extend(xq.iter().flat_map(|s| gq.visible_actions(s)));
        let mut actions: Vec<(String, Action)> = actions.into_iter().map(|a| (a.to_string(), a.clone())).collect();
        actions.sort();
        actions.dedup();
        for (_, a) in actions {
            let (yp, lossy_p) = det_step(gp, &xp, &a);
            let (yq, lossy_q) = det_step(gq, &xq, &a);
            if lossy_p || lossy_q {
                exhaustive = false;
                continue;
            }
            if yp.is_empty() && yq.is_empty() {
                continue;
            }
            let key = (yp, yq);
            if seen.contains(&key) {
                continue;
            }
            if seen.len() >= max_pairs {
                return Err(SemanticsError::Incomplete { bound: max_pairs }.into());
            }
            seen.insert(key.clone());
            let mut next = trace.clone();
            next.push(a);
            queue.push_back((key.0, key.1, next));
        }
    }
    Ok(Verdict { holds: true, witness: None, exhaustive, pairs: seen.len() })
}

/// The abstract co-ready sets of the stable members.
fn stable_sets<S: Clone + Eq + Hash>(g: &Graph<S>, x: &DetState, abs: &LabelAbstraction) -> Result<AcceptanceSet, PreorderError> {
    let mut out = AcceptanceSet::new();
    for s in x.iter().filter(|&s| g.is_stable(s)) {
        out.insert(co_ready_tokens(g, s, abs)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::{preset_abstraction, Calculus, ValueDomain};
    use crate::semantics::{fw_graph, mail_capacity, mail_universe, FwLts, FwState};
    use crate::syntax::{parse, Process};

    fn pair(calc: Calculus, p: &str, q: &str) -> (Graph<FwState>, Graph<FwState>) {
        let vals = ValueDomain::binary();
        let h = calc.nonblocking();
        let p: Process = parse(p, calc, &vals).unwrap();
        let q: Process = parse(q, calc, &vals).unwrap();
        let lts = FwLts::new(vals.clone(), h.clone(), mail_universe(&h, [&p, &q], &vals), mail_capacity(3, [&p, &q]));
        (fw_graph(&lts, &p, 100_000).unwrap(), fw_graph(&lts, &q, 100_000).unwrap())
    }

    fn leq(calc: Calculus, p: &str, q: &str) -> Verdict {
        let (gp, gq) = pair(calc, p, q);
        alt_leq(&gp, &gq, &preset_abstraction(calc), 100_000).unwrap()
    }

    #[test]
    fn copy_cat_is_equivalent_to_nil_asynchronously() {
        assert!(leq(Calculus::Vaccs, "a?(x).a!x", "0").holds);
        assert!(leq(Calculus::Vaccs, "0", "a?(x).a!x").holds);
        assert!(leq(Calculus::Vaccs, "a?(x).a!1", "0").holds);
    }

    #[test]
    fn copy_cat_differs_from_nil_synchronously() {
        let v = leq(Calculus::Vccs, "a?(x).a!x.0", "0");
        assert!(!v.holds);
        assert!(!leq(Calculus::Vccs, "0", "a?(x).a!x.0").holds);
        let w = v.witness.unwrap();
        assert!(w.trace.is_empty());
    }

    #[test]
    fn reflexive_and_divergence_aware() {
        assert!(leq(Calculus::Vccs, "a?(x).(b!x.0 + tau.0)", "a?(x).(b!x.0 + tau.0)").holds);
        let v = leq(Calculus::Ccs, "a.0", "a.rec X.X");
        assert_eq!(v.witness.unwrap().reason, FailureReason::ConvergenceFailure);
        assert!(leq(Calculus::Ccs, "rec X.X", "a.0").holds);
    }
}
