use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;

use serde::Serialize;

use super::graph::{Graph, Lts, StateId};
use super::scc::divergence;
use super::SemanticsError;
use crate::labels::{Action, Label};

/// A set of base-graph states, closed under τ when built by [`tau_closure`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DetState(pub Vec<StateId>);

impl DetState {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for DetState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// States reachable from `seeds` by τ-steps, seeds included.
pub fn tau_closure<S: Clone + Eq + Hash>(g: &Graph<S>, seeds: impl IntoIterator<Item = StateId>) -> DetState {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<StateId> = seeds.into_iter().collect();
    while let Some(s) = stack.pop() {
        if seen.insert(s) {
            stack.extend(g.tau_successors(s));
        }
    }
    DetState(seen.into_iter().collect())
}

/// The weak `a`-successor of a closed set. The flag is set when some member
/// is saturated and `a` is an input, so the result may be missing states.
pub fn det_step<S: Clone + Eq + Hash>(g: &Graph<S>, x: &DetState, a: &Action) -> (DetState, bool) {
    let label = Label::Visible(a.clone());
    let lossy = a.is_input() && x.iter().any(|s| g.is_saturated(s));
    let seeds: Vec<StateId> = x.iter().flat_map(|s| g.targets(s, &label)).collect();
    (tau_closure(g, seeds), lossy)
}

/// The weak trace successors `{p' | p =s=> p'}` of the root, restricted to
/// stable states. Fails when a state on the way diverges.
pub fn waiting_states<S: Clone + Eq + Hash>(g: &Graph<S>, trace: &[Action]) -> Result<Vec<StateId>, SemanticsError> {
    let div = divergence(g)?;
    let mut x = tau_closure(g, [g.root()]);
    let mut done: Vec<String> = Vec::new();
    let check = |x: &DetState, done: &[String]| {
        if x.iter().any(|s| div[s]) {
            Err(SemanticsError::Divergent(done.join(".")))
        } else {
            Ok(())
        }
    };
    check(&x, &done)?;
    for a in trace {
        let (next, lossy) = det_step(g, &x, a);
        if lossy {
            return Err(SemanticsError::Saturated(done.join(".")));
        }
        done.push(a.to_string());
        x = next;
        check(&x, &done)?;
    }
    Ok(x.iter().filter(|&s| g.is_stable(s)).collect())
}

/// Subset construction over an explored graph. Every visible action and
/// every τ-step of a member is a transition of the set; empty targets are
/// left out.
pub struct ToSetLts<'a, S> {
    pub base: &'a Graph<S>,
}

impl<S: Clone + Eq + Hash> Lts for ToSetLts<'_, S> {
    type State = DetState;

    fn step(&self, x: &DetState) -> Result<Vec<(Label, DetState)>, SemanticsError> {
        self.base.require_complete()?;
        let mut labels: BTreeSet<&Label> = BTreeSet::new();
        for s in x.iter() {
            labels.extend(self.base.successors(s).iter().map(|(l, _)| l));
        }
        let mut out = Vec::new();
        for l in labels {
            let targets: BTreeSet<StateId> = x.iter().flat_map(|s| self.base.targets(s, l)).collect();
            if !targets.is_empty() {
                out.push((l.clone(), DetState(targets.into_iter().collect())));
            }
        }
        Ok(out)
    }

    fn saturated(&self, x: &DetState) -> bool {
        x.iter().any(|s| self.base.is_saturated(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::{Calculus, ValueDomain};
    use crate::semantics::{explore, term_graph};
    use crate::syntax::{parse, Process};

    fn graph(src: &str) -> Graph<Process> {
        let vals = ValueDomain::unit();
        term_graph(&parse(src, Calculus::Ccs, &vals).unwrap(), &vals, 100).unwrap()
    }

    fn act(s: &str) -> Action {
        s.parse().unwrap()
    }

    #[test]
    fn closure_and_step() {
        let g = graph("tau.a.0 + tau.(a.1 + b.0)");
        let x = tau_closure(&g, [g.root()]);
        assert_eq!(x.0.len(), 3);
        let (y, lossy) = det_step(&g, &x, &act("a?"));
        assert!(!lossy);
        assert_eq!(y.0.len(), 2);
        let stable = waiting_states(&g, &[]).unwrap();
        assert_eq!(stable.len(), 2);
    }

    #[test]
    fn divergence_blocks_waiting_states() {
        let g = graph("a.rec X.X");
        assert!(waiting_states(&g, &[]).is_ok());
        assert_eq!(waiting_states(&g, &[act("a?")]), Err(SemanticsError::Divergent("a?".into())));
    }

    #[test]
    fn subset_graph_is_strong() {
        let g = graph("tau.'a.0 + tau.'b.0");
        let set = explore(&ToSetLts { base: &g }, DetState(vec![g.root()]), 100).unwrap();
        // {p} -tau-> {a!.0, b!.0} -a!-> {0}, -b!-> {0}
        assert_eq!(set.len(), 3);
        assert_eq!(set.successors(set.root()).len(), 1);
    }
}
