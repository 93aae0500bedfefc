use std::collections::BTreeSet;

use mustcheck::axioms::{check_axiom, check_class, replay, Axiom, AxiomClass};
use mustcheck::labels::{preset_abstraction, Action, Calculus, Channel, Label};
use mustcheck::preorder::{acc_leq, alt_leq, converges_along, interp, must};
use mustcheck::random::{random_process, random_test, GenConfig};
use mustcheck::semantics::{explore, fw_graph, mail_capacity, mail_universe, term_graph, DetState, FwLts, Graph, StateId, ToSetLts};
use mustcheck::syntax::{canonical, parse, Process};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

const BOUND: usize = 5_000;

fn calculus() -> impl Strategy<Value = Calculus> {
    prop::sample::select(Calculus::ALL.to_vec())
}

fn term(calc: Calculus, seed: u64) -> Process {
    random_process(&mut StdRng::seed_from_u64(seed), &GenConfig::new(calc))
}

fn tau(p: Process) -> Process {
    Process::Tau(Box::new(p))
}

fn sum(p: Process, q: Process) -> Process {
    Process::Sum(Box::new(p), Box::new(q))
}

// Oracle: a state diverges when it can reach, by τ steps, a state that
// returns to itself by at least one τ step.
fn naive_diverges<S: Clone + Eq + std::hash::Hash>(g: &Graph<S>, s: StateId) -> bool {
    let reach = |from: Vec<StateId>| {
        let mut seen = BTreeSet::new();
        let mut todo = from;
        while let Some(x) = todo.pop() {
            if seen.insert(x) {
                todo.extend(g.tau_successors(x));
            }
        }
        seen
    };
    reach(vec![s]).into_iter().any(|x| reach(g.tau_successors(x).collect()).contains(&x))
}

fn naive_converges<S: Clone + Eq + std::hash::Hash>(g: &Graph<S>, trace: &[Action]) -> bool {
    let closure = |xs: BTreeSet<StateId>| {
        let mut seen = BTreeSet::new();
        let mut todo: Vec<_> = xs.into_iter().collect();
        while let Some(x) = todo.pop() {
            if seen.insert(x) {
                todo.extend(g.tau_successors(x));
            }
        }
        seen
    };
    let mut x = closure([g.root()].into());
    for a in trace {
        if x.iter().any(|&s| naive_diverges(g, s)) {
            return false;
        }
        let label = Label::Visible(a.clone());
        x = closure(x.iter().flat_map(|&s| g.targets(s, &label).collect::<Vec<_>>()).collect());
    }
    !x.iter().any(|&s| naive_diverges(g, s))
}

fn short_traces(calc: Calculus) -> Vec<Vec<Action>> {
    let vals = calc.default_values();
    let mut acts = Vec::new();
    for c in ["a", "b"] {
        let ch = Channel::new(c).unwrap();
        for v in vals.values() {
            acts.push(Action::input(&ch, *v));
            acts.push(Action::output(&ch, *v));
        }
    }
    let mut out = vec![vec![]];
    for a in &acts {
        out.push(vec![a.clone()]);
        for b in &acts {
            out.push(vec![a.clone(), b.clone()]);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_is_idempotent_and_printable(calc in calculus(), seed in any::<u64>()) {
        let p = term(calc, seed);
        let c = canonical(&p);
        prop_assert_eq!(canonical(&c), c.clone());
        let reparsed = parse(&p.to_string(), calc, &calc.default_values()).unwrap();
        prop_assert_eq!(canonical(&reparsed), c);
    }

    #[test]
    fn convergence_matches_naive_oracle(calc in calculus(), seed in any::<u64>()) {
        let g = term_graph(&term(calc, seed), &calc.default_values(), BOUND).unwrap();
        for s in short_traces(calc) {
            prop_assert_eq!(converges_along(&g, &s).unwrap(), naive_converges(&g, &s), "trace {:?}", s);
        }
    }

    #[test]
    fn alt_is_reflexive(calc in prop::sample::select(vec![Calculus::Ccs, Calculus::Vccs]), seed in any::<u64>()) {
        let g = term_graph(&term(calc, seed), &calc.default_values(), BOUND).unwrap();
        let v = alt_leq(&g, &g, &preset_abstraction(calc), BOUND).unwrap();
        prop_assert!(v.holds);
    }

    #[test]
    fn internal_choice_is_below_its_branches(calc in prop::sample::select(vec![Calculus::Ccs, Calculus::Vccs]), s1 in any::<u64>(), s2 in any::<u64>()) {
        let (p, q) = (term(calc, s1), term(calc, s2));
        let vals = calc.default_values();
        let gp = term_graph(&p, &vals, BOUND).unwrap();
        let choice = term_graph(&sum(tau(p), tau(q)), &vals, BOUND).unwrap();
        let v = alt_leq(&choice, &gp, &preset_abstraction(calc), BOUND).unwrap();
        prop_assert!(v.holds, "{:?}", v.witness);
    }

    #[test]
    fn interpretations_are_reflexive_in_smyth_order(calc in prop::sample::select(vec![Calculus::Ccs, Calculus::Vccs]), seed in any::<u64>()) {
        let g = term_graph(&term(calc, seed), &calc.default_values(), BOUND).unwrap();
        let abs = preset_abstraction(calc);
        for s in short_traces(calc) {
            if let Some(a) = interp(&g, &s, &abs).unwrap() {
                prop_assert!(acc_leq(&a, &a));
            }
        }
    }

    #[test]
    fn must_agrees_with_internal_choice(calc in calculus(), s1 in any::<u64>(), s2 in any::<u64>(), st in any::<u64>()) {
        let vals = calc.default_values();
        let (p, q) = (term(calc, s1), term(calc, s2));
        let t = random_test(&mut StdRng::seed_from_u64(st), &GenConfig::tests(calc));
        let client = term_graph(&t, &vals, BOUND).unwrap();
        let run = |x: &Process| must(&term_graph(x, &vals, BOUND).unwrap(), &client, BOUND).unwrap().holds;
        prop_assert_eq!(run(&sum(tau(p.clone()), tau(q.clone()))), run(&p) && run(&q));
    }

    #[test]
    fn axiom_classes_hold_and_witnesses_replay(seed in any::<u64>()) {
        let calc = Calculus::Vaccs;
        let vals = calc.default_values();
        let h = calc.nonblocking();
        let p = term(calc, seed);
        let fw = FwLts::new(vals.clone(), h.clone(), mail_universe(&h, [&p], &vals), mail_capacity(1, [&p]));
        let g = fw_graph(&fw, &p, BOUND).unwrap();
        for r in check_class(&g, &h, AxiomClass::LtsMultiset).unwrap() {
            prop_assert!(r.holds, "{} fails on toFW({})", r.axiom.name(), p);
        }
        let base = term_graph(&p, &vals, BOUND).unwrap();
        for r in check_class(&base, &h, AxiomClass::Agents).unwrap() {
            prop_assert!(r.holds, "{} fails on {}", r.axiom.name(), p);
        }
        let set = explore(&ToSetLts { base: &base }, DetState(vec![base.root()]), BOUND).unwrap();
        for axiom in Axiom::ALL {
            let report = check_axiom(&set, &h, axiom).unwrap();
            for w in &report.witnesses {
                prop_assert!(replay(&set, &h, axiom, w));
            }
        }
    }
}
