//! Must-testing and its alternative characterisation by acceptance sets.

mod alt;
mod must;

use std::collections::BTreeSet;
use std::hash::Hash;

use crate::labels::{co_ready_abstract, dual, Action, LabelAbstraction, LabelError, NonBlockingSet, Token};
use crate::semantics::{divergence, det_step, tau_closure, waiting_states, Graph, SemanticsError, StateId};

pub use alt::{alt_leq, AltWitness, FailureReason, Verdict};
pub use must::{must, must_leq_sample, MustOutcome, SampleVerdict};

pub type Trace = Vec<Action>;

/// A set of abstracted co-ready sets.
pub type AcceptanceSet = BTreeSet<BTreeSet<Token>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PreorderError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Label(#[from] LabelError),
}

/// Dot-separated actions, `ε` for the empty trace.
pub fn trace_string(s: &[Action]) -> String {
    if s.is_empty() {
        return "ε".into();
    }
    s.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(".")
}

/// `coR(p)`: the blocking actions `b` such that `p` can perform `co(b)`.
pub fn co_ready<S: Clone + Eq + Hash>(g: &Graph<S>, s: StateId, h: &NonBlockingSet) -> BTreeSet<Action> {
    g.visible_actions(s).map(dual).filter(|b| !h.contains(b)).collect()
}

/// `coR(p)` pushed through the abstraction.
pub fn co_ready_tokens<S: Clone + Eq + Hash>(
    g: &Graph<S>,
    s: StateId,
    abs: &LabelAbstraction,
) -> Result<BTreeSet<Token>, LabelError> {
    co_ready_abstract(&co_ready(g, s, &abs.nonblocking), abs)
}

/// `A ≪ B`: every set in `B` contains some set of `A`.
pub fn acc_leq(a: &AcceptanceSet, b: &AcceptanceSet) -> bool {
    b.iter().all(|x| a.iter().any(|y| y.is_subset(x)))
}

/// `p ⇓ s` from the root of `g`.
pub fn converges_along<S: Clone + Eq + Hash>(g: &Graph<S>, s: &[Action]) -> Result<bool, SemanticsError> {
    converges_from(g, g.root(), s)
}

pub fn converges_from<S: Clone + Eq + Hash>(g: &Graph<S>, start: StateId, s: &[Action]) -> Result<bool, SemanticsError> {
    let div = divergence(g)?;
    let mut x = tau_closure(g, [start]);
    for (i, a) in s.iter().enumerate() {
        if x.iter().any(|q| div[q]) {
            return Ok(false);
        }
        let (next, lossy) = det_step(g, &x, a);
        if lossy {
            return Err(SemanticsError::Saturated(trace_string(&s[..i])));
        }
        x = next;
    }
    let diverges = x.iter().any(|q| div[q]);
    Ok(!diverges)
}

/// `⟦p⟧(s)` at the root; `None` when `p` diverges along `s`.
pub fn interp<S: Clone + Eq + Hash>(
    g: &Graph<S>,
    s: &[Action],
    abs: &LabelAbstraction,
) -> Result<Option<AcceptanceSet>, PreorderError> {
    interp_from(g, g.root(), s, abs)
}

pub fn interp_from<S: Clone + Eq + Hash>(
    g: &Graph<S>,
    start: StateId,
    s: &[Action],
    abs: &LabelAbstraction,
) -> Result<Option<AcceptanceSet>, PreorderError> {
    if !converges_from(g, start, s)? {
        return Ok(None);
    }
    let ws = match waiting_states_from(g, start, s) {
        Ok(ws) => ws,
        Err(SemanticsError::Divergent(_)) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut out = AcceptanceSet::new();
    for q in ws {
        out.insert(co_ready_tokens(g, q, abs)?);
    }
    Ok(Some(out))
}

fn waiting_states_from<S: Clone + Eq + Hash>(g: &Graph<S>, start: StateId, s: &[Action]) -> Result<Vec<StateId>, SemanticsError> {
    if start == g.root() {
        return waiting_states(g, s);
    }
    let mut x = tau_closure(g, [start]);
    for a in s {
        x = det_step(g, &x, a).0;
    }
    Ok(x.iter().filter(|&q| g.is_stable(q)).collect())
}

/// `⟦Y⟧_set(s)`: the union of the member interpretations; `None` when some
/// member diverges along `s`.
pub fn interp_set<S: Clone + Eq + Hash>(
    g: &Graph<S>,
    members: &[StateId],
    s: &[Action],
    abs: &LabelAbstraction,
) -> Result<Option<AcceptanceSet>, PreorderError> {
    let mut out = AcceptanceSet::new();
    for &p in members {
        match interp_from(g, p, s, abs)? {
            Some(a) => out.extend(a),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::{preset_abstraction, Calculus, ValueDomain};
    use crate::semantics::{explore, fw_graph, mail_capacity, mail_universe, term_graph, DetState, FwLts, FwState, ToSetLts};
    use crate::syntax::parse;

    fn act(s: &str) -> Action {
        s.parse().unwrap()
    }

    fn toks(sets: &[&[&str]]) -> AcceptanceSet {
        sets.iter().map(|s| s.iter().map(|t| Token::new(*t)).collect()).collect()
    }

    fn vaccs_fw(src: &str) -> Graph<FwState> {
        let vals = ValueDomain::binary();
        let h = Calculus::Vaccs.nonblocking();
        let p = parse(src, Calculus::Vaccs, &vals).unwrap();
        let lts = FwLts::new(vals.clone(), h.clone(), mail_universe(&h, [&p], &vals), mail_capacity(3, [&p]));
        fw_graph(&lts, &p, 10_000).unwrap()
    }

    #[test]
    fn smyth_order() {
        let any = toks(&[&["a?"], &["b?", "c?"]]);
        assert!(acc_leq(&toks(&[&[]]), &any));
        assert!(!acc_leq(&toks(&[&["a?0"]]), &toks(&[&["a?1"]])));
        assert!(acc_leq(&any, &any));
    }

    #[test]
    fn identity_abstraction_separates_constant_from_copy_cat() {
        let id_abs = LabelAbstraction::identity(Calculus::Vaccs.nonblocking());
        let s = [act("a?1")];
        assert_eq!(interp(&vaccs_fw("a?(x).a!x"), &s, &id_abs).unwrap(), Some(toks(&[&["a?1"]])));
        assert_eq!(interp(&vaccs_fw("a?(x).a!0"), &s, &id_abs).unwrap(), Some(toks(&[&["a?0"]])));
        let preset = preset_abstraction(Calculus::Vaccs);
        assert_eq!(interp(&vaccs_fw("a?(x).a!0"), &s, &preset).unwrap(), Some(toks(&[&["a?"]])));
    }

    #[test]
    fn divergence_makes_interpretation_undefined() {
        let vals = ValueDomain::unit();
        let abs = preset_abstraction(Calculus::Ccs);
        let g = term_graph(&parse("rec X.X", Calculus::Ccs, &vals).unwrap(), &vals, 10).unwrap();
        assert!(!converges_along(&g, &[]).unwrap());
        assert_eq!(interp(&g, &[], &abs).unwrap(), None);
        let nil = term_graph(&parse("0", Calculus::Ccs, &vals).unwrap(), &vals, 10).unwrap();
        assert!(converges_along(&nil, &[act("a?"), act("b!")]).unwrap());
        assert_eq!(interp(&nil, &[], &abs).unwrap(), Some(toks(&[&[]])));
    }

    #[test]
    fn set_interpretation_differs_from_subset_graph() {
        let vals = ValueDomain::unit();
        let abs = preset_abstraction(Calculus::Ccs);
        let g = term_graph(&parse("tau.'a.0 + tau.'b.0", Calculus::Ccs, &vals).unwrap(), &vals, 10).unwrap();
        let set = explore(&ToSetLts { base: &g }, DetState(vec![g.root()]), 100).unwrap();
        assert_eq!(interp(&set, &[], &abs).unwrap(), Some(toks(&[&["a?", "b?"]])));
        assert_eq!(interp_set(&g, &[g.root()], &[], &abs).unwrap(), Some(toks(&[&["a?"], &["b?"]])));
    }
}
