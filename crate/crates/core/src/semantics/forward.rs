use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::graph::{explore, Graph, Lts};
use super::multiset::{multiset_step, Multiset};
use super::term::term_step;
use super::SemanticsError;
use crate::labels::{dual, Action, Channel, Label, NonBlockingSet, ValueDomain};
use crate::syntax::{canonical, free_names, Process, ValueExpr};

/// A process paired with the messages in transit, `p ▷ M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FwState {
    pub proc: Process,
    pub mail: Multiset,
}

impl fmt::Display for FwState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ▷ {}", self.proc, self.mail)
    }
}

/// The forwarder lifting of the term LTS.
///
/// The mail is bounded: a mailbox input is only offered while the mail
/// holds fewer than `capacity` messages, and states at capacity report
/// themselves as saturated.
#[derive(Clone, Debug)]
pub struct FwLts {
    pub values: ValueDomain,
    pub nonblocking: NonBlockingSet,
    pub universe: Vec<Action>,
    pub capacity: usize,
}

impl FwLts {
    pub fn new(values: ValueDomain, nonblocking: NonBlockingSet, universe: Vec<Action>, capacity: usize) -> Self {
        FwLts { values, nonblocking, universe, capacity }
    }

    /// `p ▷ ∅`, normalized.
    pub fn lift(&self, p: &Process) -> FwState {
        self.normalize(canonical(p), Multiset::new())
    }

    /// Moves free top-level non-blocking output atoms of the process into
    /// the mail: `(q | c!v) ▷ M` and `q ▷ M + {c!v}` are the same state.
    fn normalize(&self, proc: Process, mut mail: Multiset) -> FwState {
        if self.nonblocking.is_empty() {
            return FwState { proc, mail };
        }
        let mut rest = Vec::new();
        let mut stack = vec![proc];
        while let Some(p) = stack.pop() {
            match p {
                Process::Par(l, r) => {
                    stack.push(*r);
                    stack.push(*l);
                }
                Process::Output(c, ValueExpr::Lit(v), body) if *body == Process::Nil => {
                    let a = Action::output(&c, v);
                    if self.nonblocking.contains(&a) {
                        mail.insert(a);
                    } else {
                        rest.push(Process::Output(c, ValueExpr::Lit(v), body));
                    }
                }
                other => rest.push(other),
            }
        }
        FwState { proc: Process::par_of(rest), mail }
    }
}

impl Lts for FwLts {
    type State = FwState;

    fn step(&self, s: &FwState) -> Result<Vec<(Label, FwState)>, SemanticsError> {
        let moves = term_step(&s.proc, &self.values)?;
        let mut out = Vec::new();
        // S-Left
        for (l, p2) in &moves {
            out.push((l.clone(), self.normalize(p2.clone(), s.mail.clone())));
        }
        // S-Right
        for (l, m2) in multiset_step(&s.mail, &self.universe, Some(self.capacity)) {
            out.push((l, FwState { proc: s.proc.clone(), mail: m2 }));
        }
        // S-Inter: the process consumes a message from the mail
        for (l, p2) in &moves {
            let Some(a) = l.action() else { continue };
            let eta = dual(a);
            if self.nonblocking.contains(&eta) {
                if let Some(rest) = s.mail.without(&eta) {
                    out.push((Label::Tau, self.normalize(p2.clone(), rest)));
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn saturated(&self, s: &FwState) -> bool {
        !self.universe.is_empty() && s.mail.len() >= self.capacity
    }
}

/// The non-blocking actions over the free channels of `terms`.
pub fn mail_universe<'a>(
    nonblocking: &NonBlockingSet,
    terms: impl IntoIterator<Item = &'a Process>,
    values: &ValueDomain,
) -> Vec<Action> {
    let channels: BTreeSet<Channel> = terms.into_iter().flat_map(free_names).collect();
    nonblocking.universe(&channels, values)
}

/// Mail capacity for a comparison of `terms`: the budget of messages
/// coming from the environment plus room for the outputs the terms
/// themselves can have pending at once.
pub fn mail_capacity<'a>(budget: usize, terms: impl IntoIterator<Item = &'a Process>) -> usize {
    let own = terms.into_iter().map(output_width).max().unwrap_or(0);
    budget + own
}

/// How many outputs of `p` can be pending at the same time: parallel
/// components add up, alternatives take the maximum. Exact for terms whose
/// recursion never passes through a parallel composition.
pub fn output_width(p: &Process) -> usize {
    match p {
        Process::Nil | Process::One | Process::Var(_) => 0,
        Process::Output(_, _, b) => 1 + output_width(b),
        Process::Input(_, _, b) | Process::Tau(b) | Process::Restrict(_, b) | Process::Rec(_, b) => output_width(b),
        Process::Sum(l, r) | Process::If(_, l, r) => output_width(l).max(output_width(r)),
        Process::Par(l, r) => output_width(l) + output_width(r),
    }
}

/// Explores `toFW(p)`.
pub fn fw_graph(lts: &FwLts, p: &Process, bound: usize) -> Result<Graph<FwState>, SemanticsError> {
    explore(lts, lts.lift(p), bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::Calculus;
    use crate::semantics::term_graph;
    use crate::syntax::parse;

    fn act(s: &str) -> Action {
        s.parse().unwrap()
    }

    fn vaccs_lts(p: &Process) -> FwLts {
        let vals = ValueDomain::binary();
        let h = Calculus::Vaccs.nonblocking();
        FwLts::new(vals.clone(), h.clone(), mail_universe(&h, [p], &vals), mail_capacity(3, [p]))
    }

    #[test]
    fn mailbox_input_grows_the_mail() {
        let p = parse("a!0", Calculus::Vaccs, &ValueDomain::binary()).unwrap();
        let lts = vaccs_lts(&p);
        let root = lts.lift(&p);
        assert_eq!(root.proc, Process::Nil);
        assert_eq!(root.mail.len(), 1);
        let succ = lts.step(&root).unwrap();
        assert!(succ.iter().any(|(l, s)| *l == Label::Visible(act("a?0")) && s.mail.len() == 2));
        assert!(succ.iter().any(|(l, s)| *l == Label::Visible(act("a!0")) && s.mail.is_empty()));
    }

    #[test]
    fn interaction_consumes_mail() {
        let p = parse("a?(x).0", Calculus::Vaccs, &ValueDomain::binary()).unwrap();
        let lts = vaccs_lts(&p);
        let s = FwState { proc: canonical(&p), mail: [act("a!0")].into_iter().collect() };
        let succ = lts.step(&s).unwrap();
        assert!(succ.contains(&(Label::Tau, FwState { proc: Process::Nil, mail: Multiset::new() })));
    }

    #[test]
    fn identity_without_nonblocking_actions() {
        let vals = ValueDomain::binary();
        let p = parse("a?(x).(a!x.0 + tau.b!1.0) | b?(y).1", Calculus::Vccs, &vals).unwrap();
        let lts = FwLts::new(vals.clone(), NonBlockingSet::Empty, Vec::new(), 0);
        let fw = fw_graph(&lts, &p, 1000).unwrap();
        let term = term_graph(&p, &vals, 1000).unwrap();
        assert!(fw.same_shape(&term, |s, q| s.proc == *q && s.mail.is_empty()));
    }

    #[test]
    fn saturation_is_flagged() {
        let p = Process::Nil;
        let vals = ValueDomain::unit();
        let h = Calculus::Accs.nonblocking();
        let a = Channel::new("a").unwrap();
        let lts = FwLts::new(vals.clone(), h.clone(), h.universe(&[a].into(), &vals), 2);
        let g = fw_graph(&lts, &p, 100).unwrap();
        assert!(g.is_complete());
        assert_eq!(g.len(), 3);
        assert_eq!(g.ids().filter(|&i| g.is_saturated(i)).count(), 1);
    }
}
