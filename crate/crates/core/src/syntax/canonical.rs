use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};

use serde::Serialize;

use super::ast::{free_names, rename_channel, Process, ValueExpr};
use crate::labels::Channel;

/// A term in structural normal form together with a stable fingerprint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    term: Process,
    fingerprint: u64,
}

impl CanonicalForm {
    pub fn new(p: &Process) -> Self {
        let term = canonical(p);
        let mut h = DefaultHasher::new();
        term.hash(&mut h);
        CanonicalForm { term, fingerprint: h.finish() }
    }

    pub fn term(&self) -> &Process {
        &self.term
    }

    pub fn into_term(self) -> Process {
        self.term
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.term.fmt(f)
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.term.to_string())
    }
}

/// Normal form modulo structural congruence: bound variables renamed by
/// binder depth, `+` and `|` flattened into sorted multisets without `0`,
/// closed conditionals evaluated, restrictions pushed to the smallest
/// enclosing group of components and sorted. `rec` is never unfolded.
pub fn canonical(p: &Process) -> Process {
    normalize(&alpha(p, 0, 0, &BTreeMap::new(), &BTreeMap::new()))
}

pub fn congruent(p: &Process, q: &Process) -> bool {
    canonical(p) == canonical(q)
}

fn alpha(
    p: &Process,
    vdepth: usize,
    pdepth: usize,
    venv: &BTreeMap<String, String>,
    penv: &BTreeMap<String, String>,
) -> Process {
    let ve = |e: &ValueExpr| match e {
        ValueExpr::Var(x) => ValueExpr::Var(venv.get(x).cloned().unwrap_or_else(|| x.clone())),
        lit => lit.clone(),
    };
    let go = |b: &Process| alpha(b, vdepth, pdepth, venv, penv);
    match p {
        Process::Nil | Process::One => p.clone(),
        Process::Var(x) => Process::Var(penv.get(x).cloned().unwrap_or_else(|| x.clone())),
        Process::Input(c, x, b) => {
            let fresh = format!("x{vdepth}");
            let mut env = venv.clone();
            env.insert(x.clone(), fresh.clone());
            Process::Input(c.clone(), fresh, Box::new(alpha(b, vdepth + 1, pdepth, &env, penv)))
        }
        Process::Output(c, e, b) => Process::Output(c.clone(), ve(e), Box::new(go(b))),
        Process::Tau(b) => Process::tau(go(b)),
        Process::Sum(l, r) => Process::sum(go(l), go(r)),
        Process::Par(l, r) => Process::par(go(l), go(r)),
        Process::Restrict(c, b) => Process::restrict(c, go(b)),
        Process::If(be, l, r) => Process::if_then_else(
            super::ast::BoolExpr::eq(ve(&be.lhs), ve(&be.rhs)),
            go(l),
            go(r),
        ),
        Process::Rec(x, b) => {
            let fresh = format!("X{pdepth}");
            let mut env = penv.clone();
            env.insert(x.clone(), fresh.clone());
            Process::Rec(fresh, Box::new(alpha(b, vdepth, pdepth + 1, venv, &env)))
        }
    }
}

fn normalize(p: &Process) -> Process {
    match p {
        Process::Nil | Process::One | Process::Var(_) => p.clone(),
        Process::Input(c, x, b) => Process::Input(c.clone(), x.clone(), Box::new(normalize(b))),
        Process::Output(c, e, b) => Process::Output(c.clone(), e.clone(), Box::new(normalize(b))),
        Process::Tau(b) => Process::tau(normalize(b)),
        Process::Rec(x, b) => Process::rec(x, normalize(b)),
        Process::If(be, l, r) => match be.eval() {
            Some(true) => normalize(l),
            Some(false) => normalize(r),
            None => Process::if_then_else(be.clone(), normalize(l), normalize(r)),
        },
        Process::Sum(..) => {
            let mut items = Vec::new();
            flatten_sum(p, &mut items);
            let mut items: Vec<Process> = items
                .into_iter()
                .map(normalize)
                .flat_map(|q| {
                    let mut v = Vec::new();
                    flatten_sum(&q, &mut v);
                    v.into_iter().cloned().collect::<Vec<_>>()
                })
                .filter(|q| *q != Process::Nil)
                .collect();
            items.sort();
            Process::sum_of(items)
        }
        Process::Par(..) | Process::Restrict(..) => {
            let mut items = Vec::new();
            flatten_par(p, &mut items);
            let items: Vec<Process> = items
                .into_iter()
                .map(|it| match it {
                    Process::Restrict(c, b) => Process::restrict(c, normalize(b)),
                    other => normalize(other),
                })
                .collect();
            par_block(items)
        }
    }
}

fn flatten_sum<'a>(p: &'a Process, out: &mut Vec<&'a Process>) {
    match p {
        Process::Sum(l, r) => {
            flatten_sum(l, out);
            flatten_sum(r, out);
        }
        _ => out.push(p),
    }
}

fn flatten_par<'a>(p: &'a Process, out: &mut Vec<&'a Process>) {
    match p {
        Process::Par(l, r) => {
            flatten_par(l, out);
            flatten_par(r, out);
        }
        _ => out.push(p),
    }
}

fn fresh_channel(base: &Channel, taken: &BTreeSet<Channel>) -> Channel {
    (0..)
        .map(|i| Channel::new(format!("{base}_{i}")).expect("derived from a valid name"))
        .find(|c| !taken.contains(c))
        .expect("unbounded supply of names")
}

/// Builds `(nu names)(components)` for already normalized parallel items,
/// giving each restricted name the smallest scope that covers its users.
fn par_block(items: Vec<Process>) -> Process {
    let mut items = items;
    items.sort();
    let mut taken: BTreeSet<Channel> = BTreeSet::new();
    for it in &items {
        taken.extend(free_names(it));
    }
    let mut binders: Vec<Channel> = Vec::new();
    let mut comps: Vec<Process> = Vec::new();
    let mut stack: Vec<Process> = items.into_iter().rev().collect();
    while let Some(it) = stack.pop() {
        match it {
            Process::Nil => {}
            Process::Par(l, r) => {
                stack.push(*r);
                stack.push(*l);
            }
            Process::Restrict(c, body) => {
                let (name, body) = if taken.contains(&c) {
                    let mut avoid = taken.clone();
                    avoid.extend(body.all_names());
                    let fresh = fresh_channel(&c, &avoid);
                    let renamed = rename_channel(&body, &c, &fresh);
                    (fresh, renamed)
                } else {
                    (c, *body)
                };
                taken.insert(name.clone());
                binders.push(name);
                stack.push(body);
            }
            other => comps.push(other),
        }
    }

    // union-find over components sharing a restricted name
    let n = comps.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut j = i;
        while parent[j] != r {
            let next = parent[j];
            parent[j] = r;
            j = next;
        }
        r
    }
    let fns: Vec<BTreeSet<Channel>> = comps.iter().map(free_names).collect();
    let mut owner: BTreeMap<&Channel, usize> = BTreeMap::new();
    for (i, names) in fns.iter().enumerate() {
        for b in &binders {
            if names.contains(b) {
                match owner.get(b) {
                    Some(&j) => {
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                        parent[ri] = rj;
                    }
                    None => {
                        owner.insert(b, i);
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, (BTreeSet<Channel>, Vec<Process>)> = BTreeMap::new();
    let mut free: Vec<Process> = Vec::new();
    for (i, comp) in comps.into_iter().enumerate() {
        let used: BTreeSet<Channel> = binders.iter().filter(|b| fns[i].contains(*b)).cloned().collect();
        if used.is_empty() {
            free.push(comp);
        } else {
            let root = find(&mut parent, i);
            let entry = groups.entry(root).or_default();
            entry.0.extend(used);
            entry.1.push(comp);
        }
    }
    for (_, (names, mut members)) in groups {
        members.sort();
        let mut body = Process::par_of(members);
        for name in names.iter().rev() {
            body = Process::restrict(name, body);
        }
        free.push(body);
    }
    free.sort();
    Process::par_of(free)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::{Value, ValueDomain};
    use crate::syntax::{parse, BoolExpr};
    use crate::labels::Calculus;

    fn p(src: &str) -> Process {
        parse(src, Calculus::Vccs, &ValueDomain::binary()).unwrap()
    }

    #[test]
    fn zero_laws() {
        assert_eq!(canonical(&p("0 | a!0.0")), canonical(&p("a!0.0")));
        assert_eq!(canonical(&p("a!0.0 + 0")), canonical(&p("a!0.0")));
        assert_eq!(canonical(&p("new a.0")), Process::Nil);
    }

    #[test]
    fn conditionals_evaluate() {
        assert_eq!(canonical(&p("if 0 = 0 then b!1.0 else 1")), canonical(&p("b!1.0")));
        assert_eq!(canonical(&p("if 0 = 1 then b!1.0 else 1")), Process::One);
        let open = Process::if_then_else(
            BoolExpr::eq(ValueExpr::Var("y".into()), ValueExpr::Lit(Value::Int(0))),
            Process::One,
            Process::Nil,
        );
        assert!(matches!(canonical(&open), Process::If(..)));
    }

    #[test]
    fn commutativity_and_associativity() {
        assert_eq!(canonical(&p("a!0.0 | b!1.0")), canonical(&p("b!1.0 | a!0.0")));
        assert_eq!(canonical(&p("(a!0.0 | b!1.0) | 1")), canonical(&p("a!0.0 | (b!1.0 | 1)")));
        assert_eq!(canonical(&p("tau.0 + a?(x).0")), canonical(&p("a?(y).0 + tau.0")));
        assert_eq!(canonical(&p("(tau.0 + 1) + a!0.0")), canonical(&p("tau.0 + (1 + a!0.0)")));
    }

    #[test]
    fn sums_keep_multiplicity() {
        assert_ne!(canonical(&p("tau.0 + tau.0")), canonical(&p("tau.0")));
    }

    #[test]
    fn restriction_scope() {
        assert_eq!(canonical(&p("new a.(b!0.0 | a!1.0)")), canonical(&p("b!0.0 | new a.a!1.0")));
        assert_eq!(canonical(&p("new a.new b.(a!0.0 | b!0.0)")), canonical(&p("new b.new a.(b!0.0 | a!0.0)")));
        assert_eq!(canonical(&p("new a.b!0.0")), canonical(&p("b!0.0")));
        // a clash between two scopes of the same name is resolved by renaming
        let c = canonical(&p("new a.a!0.0 | new a.a?(x).0"));
        assert_eq!(canonical(&c), c);
    }

    #[test]
    fn alpha_equivalent_terms_coincide() {
        assert_eq!(canonical(&p("a?(x).a!x.0")), canonical(&p("a?(z).a!z.0")));
        assert_eq!(canonical(&p("rec X.tau.X")), canonical(&p("rec Y.tau.Y")));
    }

    #[test]
    fn idempotent() {
        for src in ["new a.(a!0.0 | b?(x).(1 | a?(y).0)) | tau.1", "rec X.(a?(x).X + tau.0)", "(1 + 0) + tau.(0 | 1)"] {
            let once = canonical(&p(src));
            assert_eq!(canonical(&once), once);
        }
    }

    #[test]
    fn fingerprints_are_stable() {
        let a = CanonicalForm::new(&p("a!0.0 | b!1.0"));
        let b = CanonicalForm::new(&p("b!1.0 | a!0.0"));
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_eq!(a, b);
    }
}
