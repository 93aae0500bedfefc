use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use serde::Serialize;

use super::SemanticsError;
use crate::labels::{Action, Label};

pub type StateId = usize;

/// A labelled transition system given by its successor function.
pub trait Lts {
    type State: Clone + Eq + Hash + Ord + Debug;

    fn step(&self, s: &Self::State) -> Result<Vec<(Label, Self::State)>, SemanticsError>;

    /// True when the engine withholds some transitions of `s` (the forwarder
    /// at mail capacity).
    fn saturated(&self, _s: &Self::State) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Transition {
    pub source: StateId,
    pub label: Label,
    pub target: StateId,
}

impl Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -{}-> {}", self.source, self.label, self.target)
    }
}

/// An explored fragment of an LTS. Successor lists are sorted.
#[derive(Clone, Debug)]
pub struct Graph<S> {
    states: Vec<S>,
    index: HashMap<S, StateId>,
    edges: Vec<Vec<(Label, StateId)>>,
    saturated: Vec<bool>,
    root: StateId,
    complete: bool,
    bound: usize,
}

impl<S: Clone + Eq + Hash> Graph<S> {
    pub fn root(&self) -> StateId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn require_complete(&self) -> Result<(), SemanticsError> {
        if self.complete {
            Ok(())
        } else {
            Err(SemanticsError::Incomplete { bound: self.bound })
        }
    }

    pub fn state(&self, id: StateId) -> &S {
        &self.states[id]
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn id_of(&self, s: &S) -> Option<StateId> {
        self.index.get(s).copied()
    }

    pub fn successors(&self, id: StateId) -> &[(Label, StateId)] {
        &self.edges[id]
    }

    pub fn is_saturated(&self, id: StateId) -> bool {
        self.saturated[id]
    }

    pub fn ids(&self) -> std::ops::Range<StateId> {
        0..self.states.len()
    }

    pub fn has_edge(&self, source: StateId, label: &Label, target: StateId) -> bool {
        self.edges[source].binary_search_by(|(l, t)| (l, *t).cmp(&(label, target))).is_ok()
    }

    /// Targets of `label`-transitions from `id`.
    pub fn targets<'a>(&'a self, id: StateId, label: &'a Label) -> impl Iterator<Item = StateId> + 'a {
        let edges = &self.edges[id];
        let start = edges.partition_point(|(l, _)| l < label);
        edges[start..].iter().take_while(move |(l, _)| l == label).map(|(_, t)| *t)
    }

    pub fn tau_successors(&self, id: StateId) -> impl Iterator<Item = StateId> + '_ {
        self.edges[id].iter().filter(|(l, _)| l.is_tau()).map(|(_, t)| *t)
    }

    pub fn is_stable(&self, id: StateId) -> bool {
        !self.edges[id].iter().any(|(l, _)| l.is_tau())
    }

    pub fn visible_actions(&self, id: StateId) -> impl Iterator<Item = &Action> + '_ {
        self.edges[id].iter().filter_map(|(l, _)| l.action())
    }

    pub fn transitions(&self) -> impl Iterator<Item = Transition> + '_ {
        self.edges.iter().enumerate().flat_map(|(s, out)| {
            out.iter().map(move |(l, t)| Transition { source: s, label: l.clone(), target: *t })
        })
    }

    pub fn transition_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }
}

/// Breadth-first exploration from `root` up to `bound` distinct states.
/// Successors are visited in sorted order so identifiers are reproducible.
pub fn explore<L: Lts>(lts: &L, root: L::State, bound: usize) -> Result<Graph<L::State>, SemanticsError> {
    if bound == 0 {
        return Err(SemanticsError::ZeroBound);
    }
    let mut g = Graph {
        states: vec![root.clone()],
        index: HashMap::from([(root.clone(), 0)]),
        edges: vec![Vec::new()],
        saturated: vec![lts.saturated(&root)],
        root: 0,
        complete: true,
        bound,
    };
    let mut queue = VecDeque::from([0]);
    'bfs: while let Some(id) = queue.pop_front() {
        let mut succ = lts.step(&g.states[id])?;
        succ.sort();
        succ.dedup();
        let mut out = Vec::with_capacity(succ.len());
        for (label, s) in succ {
            let target = match g.index.get(&s) {
                Some(&t) => t,
                None => {
                    if g.states.len() >= bound {
                        g.complete = false;
                        out.sort();
                        g.edges[id] = out;
                        break 'bfs;
                    }
                    let t = g.states.len();
                    g.saturated.push(lts.saturated(&s));
                    g.index.insert(s.clone(), t);
                    g.states.push(s);
                    g.edges.push(Vec::new());
                    queue.push_back(t);
                    t
                }
            };
            out.push((label, target));
        }
        out.sort();
        out.dedup();
        g.edges[id] = out;
    }
    Ok(g)
}

/// A serializable dump: states by display text, transitions by index.
#[derive(Clone, Debug, Serialize)]
pub struct GraphDocument {
    pub states: Vec<String>,
    pub transitions: Vec<Transition>,
    pub root: StateId,
    pub complete: bool,
}

impl<S: Clone + Eq + Hash + Display> Graph<S> {
    pub fn document(&self) -> GraphDocument {
        GraphDocument {
            states: self.states.iter().map(|s| s.to_string()).collect(),
            transitions: self.transitions().collect(),
            root: self.root,
            complete: self.complete,
        }
    }
}

impl<S: Clone + Eq + Hash> Graph<S> {
    /// Renames states through `f`, keeping identifiers and edges.
    pub fn map_states<T: Clone + Eq + Hash>(&self, f: impl Fn(&S) -> T) -> Graph<T> {
        let states: Vec<T> = self.states.iter().map(f).collect();
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Graph {
            states,
            index,
            edges: self.edges.clone(),
            saturated: self.saturated.clone(),
            root: self.root,
            complete: self.complete,
            bound: self.bound,
        }
    }

    /// Structural equality of two explorations: same shape, same labels,
    /// with states related by `same`.
    pub fn same_shape<T: Clone + Eq + Hash>(&self, other: &Graph<T>, same: impl Fn(&S, &T) -> bool) -> bool {
        self.len() == other.len()
            && self.root == other.root
            && self.complete == other.complete
            && self.edges == other.edges
            && self.states.iter().zip(&other.states).all(|(a, b)| same(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counter modulo n, one tau step at a time.
    struct Ring(u32);

    impl Lts for Ring {
        type State = u32;
        fn step(&self, s: &u32) -> Result<Vec<(Label, u32)>, SemanticsError> {
            Ok(vec![(Label::Tau, (s + 1) % self.0)])
        }
    }

    #[test]
    fn explores_to_completion() {
        let g = explore(&Ring(4), 0, 10).unwrap();
        assert!(g.is_complete());
        assert_eq!(g.len(), 4);
        assert_eq!(g.transition_count(), 4);
        assert!(g.has_edge(3, &Label::Tau, 0));
    }

    #[test]
    fn truncation_is_reported() {
        let g = explore(&Ring(100), 0, 10).unwrap();
        assert!(!g.is_complete());
        assert_eq!(g.len(), 10);
        assert!(g.require_complete().is_err());
        assert!(matches!(explore(&Ring(1), 0, 0), Err(SemanticsError::ZeroBound)));
    }
}
