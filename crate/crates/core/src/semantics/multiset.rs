use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::graph::Lts;
use super::SemanticsError;
use crate::labels::{dual, Action, Label};

/// A finite multiset of non-blocking actions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiset(BTreeMap<Action, usize>);

impl Multiset {
    pub fn new() -> Self {
        Multiset(BTreeMap::new())
    }

    pub fn len(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, a: &Action) -> usize {
        self.0.get(a).copied().unwrap_or(0)
    }

    pub fn contains(&self, a: &Action) -> bool {
        self.0.contains_key(a)
    }

    pub fn insert(&mut self, a: Action) {
        *self.0.entry(a).or_insert(0) += 1;
    }

    pub fn with(&self, a: &Action) -> Multiset {
        let mut m = self.clone();
        m.insert(a.clone());
        m
    }

    /// `None` when `a` does not occur.
    pub fn without(&self, a: &Action) -> Option<Multiset> {
        let mut m = self.clone();
        let n = m.0.get_mut(a)?;
        *n -= 1;
        if *n == 0 {
            m.0.remove(a);
        }
        Some(m)
    }

    /// Distinct elements in order.
    pub fn support(&self) -> impl Iterator<Item = &Action> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Action> {
        self.0.iter().flat_map(|(a, n)| std::iter::repeat_n(a, *n))
    }
}

impl FromIterator<Action> for Multiset {
    fn from_iter<I: IntoIterator<Item = Action>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for a in iter {
            m.insert(a);
        }
        m
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for Multiset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|a| a.to_string()))
    }
}

/// The mailbox LTS: `M -co(eta)-> M + {eta}` and `M + {eta} -eta-> M`, for
/// every `eta` in a finite universe of non-blocking actions.
#[derive(Clone, Debug)]
pub struct MultisetLts {
    pub universe: Vec<Action>,
    /// Inputs are disabled once the multiset holds this many messages.
    pub capacity: Option<usize>,
}

impl MultisetLts {
    pub fn new(universe: Vec<Action>, capacity: Option<usize>) -> Self {
        MultisetLts { universe, capacity }
    }
}

/// The transitions of `m` over the given universe.
pub fn multiset_step(m: &Multiset, universe: &[Action], capacity: Option<usize>) -> Vec<(Label, Multiset)> {
    let mut out = Vec::new();
    if capacity.is_none_or(|c| m.len() < c) {
        for eta in universe {
            out.push((Label::Visible(dual(eta)), m.with(eta)));
        }
    }
    for eta in m.support() {
        if let Some(rest) = m.without(eta) {
            out.push((Label::Visible(eta.clone()), rest));
        }
    }
    out.sort();
    out
}

impl Lts for MultisetLts {
    type State = Multiset;

    fn step(&self, m: &Multiset) -> Result<Vec<(Label, Multiset)>, SemanticsError> {
        Ok(multiset_step(m, &self.universe, self.capacity))
    }

    fn saturated(&self, m: &Multiset) -> bool {
        self.capacity.is_some_and(|c| m.len() >= c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::explore;

    fn act(s: &str) -> Action {
        s.parse().unwrap()
    }

    #[test]
    fn rules() {
        let universe = vec![act("a!0")];
        let empty = Multiset::new();
        assert_eq!(multiset_step(&empty, &universe, None), [(Label::Visible(act("a?0")), [act("a!0")].into_iter().collect())]);
        let one: Multiset = [act("a!0")].into_iter().collect();
        assert!(multiset_step(&one, &universe, None).contains(&(Label::Visible(act("a!0")), Multiset::new())));
    }

    #[test]
    fn no_internal_moves() {
        let universe = vec![act("a!0"), act("b!1")];
        let g = explore(&MultisetLts::new(universe, Some(3)), Multiset::new(), 1000).unwrap();
        assert!(g.is_complete());
        assert!(g.transitions().all(|t| !t.label.is_tau()));
        // multisets of size at most 3 over two elements
        assert_eq!(g.len(), 1 + 2 + 3 + 4);
    }
}
