use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use serde::Serialize;

use crate::semantics::{compose_step, is_cyclic, tarjan, Graph, SemanticsError, StateId};
use crate::syntax::{good, Process};

/// Result of running a client against a server.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MustOutcome {
    pub holds: bool,
    /// When the test fails: a good-avoiding path from the initial pair that
    /// ends in a stuck pair or closes a loop.
    pub path: Vec<(StateId, StateId)>,
    /// For a loop: the index in `path` where the repeated part starts. The
    /// last pair of `path` steps back to `path[cycle_start]`.
    pub cycle_start: Option<usize>,
    /// Number of composed pairs explored.
    pub explored: usize,
}

/// `Must(p, t)`: every maximal computation of `p ∥ t` reaches a state whose
/// client side is good. Good pairs are not expanded; the test fails iff the
/// non-good part has a stuck pair or a cycle reachable from the start.
pub fn must<S: Clone + Eq + Hash>(
    server: &Graph<S>,
    client: &Graph<Process>,
    bound: usize,
) -> Result<MustOutcome, SemanticsError> {
    server.require_complete()?;
    client.require_complete()?;
    let start = (server.root(), client.root());
    if good(client.state(start.1)) {
        return Ok(MustOutcome { holds: true, path: Vec::new(), cycle_start: None, explored: 1 });
    }
    // BFS over non-good pairs; succ lists only non-good successors
    let mut ids: HashMap<(StateId, StateId), usize> = HashMap::from([(start, 0)]);
    let mut pairs = vec![start];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new()];
    let mut stuck: Vec<bool> = vec![false];
    let mut parent: Vec<usize> = vec![0];
    let mut queue = VecDeque::from([0]);
    let mut explored = 1;
    while let Some(i) = queue.pop_front() {
        let (s, t) = pairs[i];
        let next = compose_step(server, client, s, t);
        stuck[i] = next.is_empty();
        let mut out = Vec::new();
        for pair in next {
            if good(client.state(pair.1)) {
                continue;
            }
            let j = match ids.get(&pair) {
                Some(&j) => j,
                None => {
                    explored += 1;
                    if pairs.len() >= bound {
                        return Err(SemanticsError::Incomplete { bound });
                    }
                    let j = pairs.len();
                    ids.insert(pair, j);
                    pairs.push(pair);
                    parent.push(i);
                    succ.push(Vec::new());
                    stuck.push(false);
                    queue.push_back(j);
                    j
                }
            };
            out.push(j);
        }
        out.sort_unstable();
        out.dedup();
        succ[i] = out;
    }
    let n = pairs.len();
    let mut bad = stuck.clone();
    for comp in tarjan(n, |v| succ[v].clone()) {
        if is_cyclic(&comp, |v| succ[v].clone()) {
            for v in comp {
                bad[v] = true;
            }
        }
    }
    // BFS numbering is discovery order, so the least bad index is the
    // closest failure.
    let Some(target) = (0..n).find(|&v| bad[v]) else {
        return Ok(MustOutcome { holds: true, path: Vec::new(), cycle_start: None, explored });
    };
    let mut prefix = vec![target];
    let mut cur = target;
    while cur != 0 {
        cur = parent[cur];
        prefix.push(cur);
    }
    prefix.reverse();
    let mut cycle_start = None;
    if !stuck[target] {
        cycle_start = Some(prefix.len() - 1);
        prefix.extend(cycle_back(&succ, target));
    }
    Ok(MustOutcome {
        holds: false,
        path: prefix.into_iter().map(|v| pairs[v]).collect(),
        cycle_start,
        explored,
    })
}

/// Nodes strictly after `v` on a shortest path from `v` back to itself.
fn cycle_back(succ: &[Vec<usize>], v: usize) -> Vec<usize> {
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([v]);
    'search: while let Some(u) = queue.pop_front() {
        for &w in &succ[u] {
            if w == v {
                parent.insert(v, u);
                break 'search;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(w) {
                e.insert(u);
                queue.push_back(w);
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = parent[&v];
    while cur != v {
        out.push(cur);
        cur = parent[&cur];
    }
    out.reverse();
    out
}

/// `p ⊑_T q` over a finite set of tests.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleVerdict {
    pub holds: bool,
    /// Index of a test that `p` passes and `q` fails.
    pub counterexample: Option<usize>,
    pub tests: usize,
}

pub fn must_leq_sample<S: Clone + Eq + Hash, T: Clone + Eq + Hash>(
    p: &Graph<S>,
    q: &Graph<T>,
    tests: &[Graph<Process>],
    bound: usize,
) -> Result<SampleVerdict, SemanticsError> {
    for (i, t) in tests.iter().enumerate() {
        if must(p, t, bound)?.holds && !must(q, t, bound)?.holds {
            return Ok(SampleVerdict { holds: false, counterexample: Some(i), tests: tests.len() });
        }
    }
    Ok(SampleVerdict { holds: true, counterexample: None, tests: tests.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::{Calculus, ValueDomain};
    use crate::semantics::term_graph;
    use crate::syntax::parse;

    fn g(src: &str) -> Graph<Process> {
        let vals = ValueDomain::unit();
        term_graph(&parse(src, Calculus::Ccs, &vals).unwrap(), &vals, 1000).unwrap()
    }

    #[test]
    fn basic_verdicts() {
        assert!(must(&g("a!().0"), &g("a?(x).1"), 1000).unwrap().holds);
        let out = must(&g("b!().0"), &g("a?(x).1"), 1000).unwrap();
        assert!(!out.holds);
        assert_eq!(out.path.len(), 1);
        assert_eq!(out.cycle_start, None);
        assert!(must(&g("rec X.X"), &g("1"), 1000).unwrap().holds);
    }

    #[test]
    fn divergence_fails_with_a_lasso() {
        let out = must(&g("a!().0 | rec X.X"), &g("a?(x).1"), 1000).unwrap();
        assert!(!out.holds);
        let k = out.cycle_start.unwrap();
        assert_eq!(out.path.len(), k + 1);
        // the client can also be lucky, which does not help
        assert!(!must(&g("tau.a!().0 + tau.0"), &g("a?(x).1"), 1000).unwrap().holds);
    }

    #[test]
    fn sampled_preorder() {
        let tests = [g("a?(x).1")];
        let v = must_leq_sample(&g("a!().0"), &g("b!().0"), &tests, 1000).unwrap();
        assert_eq!(v.counterexample, Some(0));
        assert!(must_leq_sample(&g("a!().0"), &g("b!().0"), &[], 1000).unwrap().holds);
        assert!(must_leq_sample(&g("a!().0"), &g("a!().0"), &tests, 1000).unwrap().holds);
    }
}
