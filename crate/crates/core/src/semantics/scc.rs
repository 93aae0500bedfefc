use std::hash::Hash;

use super::graph::{Graph, StateId};
use super::SemanticsError;

/// Strongly connected components of the graph on `0..n`, in the order
/// Tarjan's algorithm completes them: every component comes after all
/// components reachable from it.
pub fn tarjan(n: usize, succ: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next = 0;
    for start in 0..n {
        if index[start] != UNSEEN {
            continue;
        }
        // frames: (node, successors, position of the next successor)
        let mut frames: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        index[start] = next;
        low[start] = next;
        next += 1;
        stack.push(start);
        on_stack[start] = true;
        frames.push((start, succ(start), 0));
        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, succ(w), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(parent) = frames.last() {
                let u = parent.0;
                low[u] = low[u].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out
}

/// Whether a component carries a cycle: more than one node, or a self-loop.
pub fn is_cyclic(comp: &[usize], succ: impl Fn(usize) -> Vec<usize>) -> bool {
    comp.len() > 1 || succ(comp[0]).contains(&comp[0])
}

/// For every state, whether an infinite τ-sequence starts there.
pub fn divergence<S: Clone + Eq + Hash>(g: &Graph<S>) -> Result<Vec<bool>, SemanticsError> {
    g.require_complete()?;
    let succ = |v: usize| g.tau_successors(v).collect::<Vec<_>>();
    let comps = tarjan(g.len(), succ);
    let mut div = vec![false; g.len()];
    for comp in &comps {
        let d = is_cyclic(comp, succ) || comp.iter().any(|&v| g.tau_successors(v).any(|w| div[w]));
        for &v in comp {
            div[v] = d;
        }
    }
    Ok(div)
}

/// Whether `s` can perform an infinite sequence of τ transitions.
pub fn diverges<S: Clone + Eq + Hash>(g: &Graph<S>, s: StateId) -> Result<bool, SemanticsError> {
    Ok(divergence(g)?[s])
}
