use std::hash::Hash;

use super::graph::{Graph, Lts, StateId};
use super::SemanticsError;
use crate::labels::{dual, Label};

/// Client/server composition over two explored graphs. Only internal
/// moves are produced: server steps, client steps and communications.
pub struct ComposedLts<'a, S, T> {
    pub server: &'a Graph<S>,
    pub client: &'a Graph<T>,
}

/// τ-successors of the pair `(s, t)`.
pub fn compose_step<S, T>(server: &Graph<S>, client: &Graph<T>, s: StateId, t: StateId) -> Vec<(StateId, StateId)>
where
    S: Clone + Eq + Hash,
    T: Clone + Eq + Hash,
{
    let mut out = Vec::new();
    out.extend(server.tau_successors(s).map(|s2| (s2, t)));
    out.extend(client.tau_successors(t).map(|t2| (s, t2)));
    for (l, s2) in server.successors(s) {
        let Some(a) = l.action() else { continue };
        let co = Label::Visible(dual(a));
        out.extend(client.targets(t, &co).map(|t2| (*s2, t2)));
    }
    out.sort();
    out.dedup();
    out
}

impl<S, T> Lts for ComposedLts<'_, S, T>
where
    S: Clone + Eq + Hash,
    T: Clone + Eq + Hash,
{
    type State = (StateId, StateId);

    fn step(&self, st: &(StateId, StateId)) -> Result<Vec<(Label, (StateId, StateId))>, SemanticsError> {
        self.server.require_complete()?;
        self.client.require_complete()?;
        Ok(compose_step(self.server, self.client, st.0, st.1).into_iter().map(|p| (Label::Tau, p)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::{Calculus, ValueDomain};
    use crate::semantics::term_graph;
    use crate::syntax::{parse, Process};

    fn graph(src: &str) -> Graph<Process> {
        let vals = ValueDomain::unit();
        term_graph(&parse(src, Calculus::Ccs, &vals).unwrap(), &vals, 100).unwrap()
    }

    #[test]
    fn communication_and_local_moves() {
        let (s, t) = (graph("a!().0"), graph("a?(x).1"));
        let succ = compose_step(&s, &t, s.root(), t.root());
        assert_eq!(succ.len(), 1);
        let (s2, t2) = succ[0];
        assert_eq!(*s.state(s2), Process::Nil);
        assert_eq!(*t.state(t2), Process::One);

        let (s, t) = (graph("b!().0"), graph("a?(x).1"));
        assert!(compose_step(&s, &t, s.root(), t.root()).is_empty());

        let (s, t) = (graph("tau.b!().0"), graph("a?(x).1"));
        assert_eq!(compose_step(&s, &t, s.root(), t.root()).len(), 1);
    }
}
