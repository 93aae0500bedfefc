//! Tests that witness a failure of the alternative preorder: `testconv`
//! detects divergence along a trace, `testacc` detects a missing co-ready
//! set after it.

use std::collections::BTreeSet;
use std::hash::Hash;

use serde::Serialize;

use crate::labels::{dual_trace, is_blocking, Action, Calculus, Channel, Label, LabelAbstraction, Token, Value, ValueDomain};
use crate::preorder::{alt_leq, must, FailureReason, PreorderError, Trace};
use crate::semantics::{term_graph, term_step, Graph, SemanticsError};
use crate::syntax::{canonical, good, BoolExpr, Process, ValueExpr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthesisError {
    #[error(transparent)]
    Preorder(#[from] PreorderError),
    #[error("token {0} is not the image of any action over the channels in use")]
    TokenNotExpressible(Token),
    #[error("synthesized test {test} does not separate the processes (must p = {must_p}, must q = {must_q})")]
    VerificationFailed { test: String, must_p: bool, must_q: bool },
}

impl From<SemanticsError> for SynthesisError {
    fn from(e: SemanticsError) -> Self {
        SynthesisError::Preorder(e.into())
    }
}

/// Everything needed to map abstract tokens back to concrete tests.
#[derive(Clone, Debug)]
pub struct Synth {
    pub calculus: Calculus,
    pub values: ValueDomain,
    pub abstraction: LabelAbstraction,
    pub channels: BTreeSet<Channel>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TestKind {
    Conv,
    Acc,
}

/// A description of a synthesized test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TestSpec {
    pub kind: TestKind,
    /// The trace the test performs, on the test side.
    pub trace: Trace,
    pub eset: BTreeSet<Token>,
    pub calculus: Calculus,
}

impl TestSpec {
    pub fn build(&self, synth: &Synth) -> Result<Process, SynthesisError> {
        match self.kind {
            TestKind::Conv => Ok(test_conv(&self.trace, self.calculus)),
            TestKind::Acc => test_acc(&self.trace, &self.eset, synth),
        }
    }
}

fn x() -> String {
    "x".into()
}

/// `g(s, t)`: perform `s`, then behave as `t`; every step may be abandoned
/// by a τ to success, and a wrong input value also leads to success.
fn wrap(s: &[Action], t: Process, calculus: Calculus) -> Process {
    let Some((a, rest)) = s.split_first() else { return t };
    let inner = wrap(rest, t, calculus);
    let bail = Process::tau(Process::One);
    if a.is_output() {
        if calculus.is_asynchronous() {
            Process::par(Process::atom(&a.channel, a.payload), inner)
        } else {
            Process::sum(Process::output(&a.channel, ValueExpr::Lit(a.payload), inner), bail)
        }
    } else {
        let body = match a.payload {
            Value::Unit => inner,
            v => Process::if_then_else(BoolExpr::eq(ValueExpr::Var(x()), ValueExpr::Lit(v)), inner, Process::One),
        };
        Process::sum(Process::input(&a.channel, &x(), body), bail)
    }
}

/// `testconv(s) = g(s, τ.1)`.
pub fn test_conv(s: &[Action], calculus: Calculus) -> Process {
    wrap(s, Process::tau(Process::One), calculus)
}

/// `testacc(s, E) = g(s, h(E))`.
pub fn test_acc(s: &[Action], eset: &BTreeSet<Token>, synth: &Synth) -> Result<Process, SynthesisError> {
    Ok(wrap(s, accept(eset, synth)?, synth.calculus))
}

/// `h(E)`: one summand per concrete action whose token lies in `E`. An
/// input channel whose values split across tokens is filtered by a
/// conditional that fails on the other values.
fn accept(eset: &BTreeSet<Token>, synth: &Synth) -> Result<Process, SynthesisError> {
    let abs = &synth.abstraction;
    let h = &abs.nonblocking;
    let mut summands = Vec::new();
    for y in eset {
        let mut found = false;
        for c in &synth.channels {
            let ins: Vec<Value> = synth
                .values
                .values()
                .iter()
                .copied()
                .filter(|v| {
                    let b = Action::input(c, *v);
                    is_blocking(&b, h) && abs.abstract_action(&b).is_ok_and(|t| t == *y)
                })
                .collect();
            if !ins.is_empty() {
                found = true;
                let body = if ins.len() == synth.values.len() {
                    Process::One
                } else {
                    ins.iter().rev().fold(Process::Nil, |acc, v| {
                        Process::if_then_else(BoolExpr::eq(ValueExpr::Var(x()), ValueExpr::Lit(*v)), Process::One, acc)
                    })
                };
                summands.push(Process::input(c, &x(), body));
            }
            for v in synth.values.values() {
                let b = Action::output(c, *v);
                if is_blocking(&b, h) && abs.abstract_action(&b).is_ok_and(|t| t == *y) {
                    if synth.calculus.is_asynchronous() {
                        return Err(SynthesisError::TokenNotExpressible(y.clone()));
                    }
                    found = true;
                    summands.push(Process::output(c, ValueExpr::Lit(*v), Process::One));
                }
            }
        }
        if !found {
            return Err(SynthesisError::TokenNotExpressible(y.clone()));
        }
    }
    Ok(Process::sum_of(summands))
}

/// A verified distinguishing test.
#[derive(Clone, Debug, Serialize)]
pub struct Distinction {
    pub spec: TestSpec,
    pub test: Process,
    /// The trace on the process side where the preorder fails.
    pub trace: Trace,
    pub must_p: bool,
    pub must_q: bool,
}

/// Builds a test that `p` passes and `q` fails from the failure of
/// `p ⊑_A q`, or `None` when the preorder holds on the explored traces.
///
/// `gp` and `gq` are the graphs the preorder is decided on (forwarders in
/// asynchronous calculi); `sp` and `sq` are the plain term graphs used to
/// run the test.
#[allow(clippy::too_many_arguments)]
pub fn distinguish<S: Clone + Eq + Hash, T: Clone + Eq + Hash>(
    gp: &Graph<S>,
    gq: &Graph<T>,
    sp: &Graph<Process>,
    sq: &Graph<Process>,
    synth: &Synth,
    max_pairs: usize,
    bound: usize,
) -> Result<Option<Distinction>, SynthesisError> {
    let verdict = alt_leq(gp, gq, &synth.abstraction, max_pairs)?;
    let Some(w) = verdict.witness else { return Ok(None) };
    let co = dual_trace(&w.trace);
    let spec = match &w.reason {
        FailureReason::ConvergenceFailure => {
            TestSpec { kind: TestKind::Conv, trace: co, eset: BTreeSet::new(), calculus: synth.calculus }
        }
        FailureReason::AcceptanceFailure { offending } => {
            let left = w.left.clone().unwrap_or_default();
            let eset = left.into_iter().flatten().filter(|y| !offending.contains(y)).collect();
            TestSpec { kind: TestKind::Acc, trace: co, eset, calculus: synth.calculus }
        }
    };
    let test = spec.build(synth)?;
    let tg = term_graph(&test, &synth.values, bound)?;
    let must_p = must(sp, &tg, bound)?.holds;
    let must_q = must(sq, &tg, bound)?.holds;
    if !must_p || must_q {
        return Err(SynthesisError::VerificationFailed { test: test.to_string(), must_p, must_q });
    }
    Ok(Some(Distinction { spec, test, trace: w.trace, must_p, must_q }))
}

/// One clause of the completeness conditions, checked over a batch of
/// synthesized tests.
#[derive(Clone, Debug, Serialize)]
pub struct ClauseReport {
    pub clause: &'static str,
    pub holds: bool,
    /// Instances evaluated.
    pub checked: usize,
    /// Descriptions of the violated instances.
    pub violations: Vec<String>,
}

/// All clause names in report order.
pub const CLAUSES: [&str; 14] =
    ["1", "2", "3", "4", "5", "6", "a1", "a2", "a3", "a4", "a5", "c1", "c2", "c3"];

type Family<'a> = Box<dyn Fn(&[Action]) -> Result<Process, SynthesisError> + 'a>;

/// Evaluates the completeness clauses on `testconv` and `testacc` for every
/// given trace and set.
pub fn axcmpl_check(
    synth: &Synth,
    traces: &[Trace],
    esets: &[BTreeSet<Token>],
) -> Result<Vec<ClauseReport>, SynthesisError> {
    let mut reports: Vec<ClauseReport> =
        CLAUSES.iter().map(|c| ClauseReport { clause: c, holds: true, checked: 0, violations: Vec::new() }).collect();
    let mut note = |clause: &str, ok: bool, what: String| {
        let r = reports.iter_mut().find(|r| r.clause == clause).expect("known clause");
        r.checked += 1;
        if !ok {
            r.holds = false;
            r.violations.push(what);
        }
    };
    let vals = &synth.values;
    let h = &synth.abstraction.nonblocking;
    let steps = |p: &Process| term_step(p, vals).map_err(SynthesisError::from);

    // the test families f = testconv and f = testacc(·, E)
    let mut families: Vec<(String, Family<'_>)> = Vec::new();
    families.push(("testconv".into(), Box::new(|s: &[Action]| Ok(test_conv(s, synth.calculus)))));
    for e in esets {
        let name = format!("testacc(·, {})", show_tokens(e));
        families.push((name, Box::new(move |s: &[Action]| test_acc(s, e, synth))));
    }

    for (name, f) in &families {
        for s in traces {
            let fs = f(s)?;
            let at = format!("{name} at {}", crate::preorder::trace_string(s));
            note("1", !good(&fs), at.clone());
            let Some((mu, rest)) = s.split_first() else { continue };
            let frest = canonical(&f(rest)?);
            let succ = steps(&fs)?;
            let mu_l = Label::Visible(mu.clone());
            note("2", succ.iter().any(|(l, t)| *l == mu_l && *t == frest), at.clone());
            if !is_blocking(mu, h) {
                continue;
            }
            note("3", succ.iter().any(|(l, _)| l.is_tau()), at.clone());
            note("4", succ.iter().filter(|(l, _)| l.is_tau()).all(|(_, t)| good(t)), at.clone());
            note("5", succ.iter().filter(|(l, _)| *l == mu_l).all(|(_, t)| *t == frest), at.clone());
            let others_good = succ.iter().filter(|(l, _)| !l.is_tau() && *l != mu_l).all(|(_, t)| good(t));
            note("6", others_good, at);
        }
    }

    for e in esets {
        let t = test_acc(&[], e, synth)?;
        let succ = steps(&t)?;
        let at = format!("testacc(ε, {})", show_tokens(e));
        note("a1", !succ.iter().any(|(l, _)| l.is_tau()), at.clone());
        note("a2", succ.iter().filter_map(|(l, _)| l.action()).all(|a| is_blocking(a, h)), at.clone());
        let blocking: Vec<(&Action, &Process)> =
            succ.iter().filter_map(|(l, t)| l.action().map(|a| (a, t))).filter(|(a, _)| is_blocking(a, h)).collect();
        let mapped =
            blocking.iter().all(|(b, _)| synth.abstraction.abstract_action(b).is_ok_and(|y| e.contains(&y)));
        note("a3", mapped, at.clone());
        let covered = e
            .iter()
            .all(|y| blocking.iter().any(|(b, _)| synth.abstraction.abstract_action(b).is_ok_and(|z| z == *y)));
        note("a4", covered, at.clone());
        note("a5", blocking.iter().all(|(_, t)| good(t)), at);
    }

    let t = test_conv(&[], synth.calculus);
    let succ = steps(&t)?;
    note("c1", succ.iter().all(|(l, _)| l.is_tau()), "testconv(ε)".into());
    note("c2", succ.iter().any(|(l, _)| l.is_tau()), "testconv(ε)".into());
    note("c3", succ.iter().filter(|(l, _)| l.is_tau()).all(|(_, t)| good(t)), "testconv(ε)".into());
    Ok(reports)
}

fn show_tokens(e: &BTreeSet<Token>) -> String {
    let parts: Vec<&str> = e.iter().map(|t| t.as_str()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Every abstract token of a blocking action over the given channels.
pub fn token_universe(synth: &Synth) -> Vec<Token> {
    let mut out = BTreeSet::new();
    for c in &synth.channels {
        for v in synth.values.values() {
            for b in [Action::input(c, *v), Action::output(c, *v)] {
                if is_blocking(&b, &synth.abstraction.nonblocking) {
                    if let Ok(y) = synth.abstraction.abstract_action(&b) {
                        out.insert(y);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// All traces up to length `n` over the actions of the given channels.
pub fn traces_up_to(channels: &BTreeSet<Channel>, values: &ValueDomain, n: usize) -> Vec<Trace> {
    let mut alphabet = Vec::new();
    for c in channels {
        for v in values.values() {
            alphabet.push(Action::input(c, *v));
            alphabet.push(Action::output(c, *v));
        }
    }
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for s in &layer {
            for a in &alphabet {
                let mut t: Trace = s.clone();
                t.push(a.clone());
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// All subsets of a token list.
pub fn subsets(tokens: &[Token]) -> Vec<BTreeSet<Token>> {
    (0..1usize << tokens.len())
        .map(|mask| tokens.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| t.clone()).collect())
        .collect()
}

/// A battery of clients: `testconv` for every trace up to `max_trace`,
/// `testacc` for every trace shorter than that and every set of tokens,
/// topped up with random clients to `total`.
pub fn test_battery<R: rand::Rng + ?Sized>(
    synth: &Synth,
    max_trace: usize,
    total: usize,
    rng: &mut R,
) -> Result<Vec<Process>, SynthesisError> {
    let mut out = Vec::new();
    for s in traces_up_to(&synth.channels, &synth.values, max_trace) {
        out.push(test_conv(&s, synth.calculus));
    }
    let esets = subsets(&token_universe(synth));
    for s in traces_up_to(&synth.channels, &synth.values, max_trace.saturating_sub(1)) {
        for e in &esets {
            out.push(test_acc(&s, e, synth)?);
        }
    }
    let mut cfg = crate::random::GenConfig::tests(synth.calculus);
    cfg.channels = synth.channels.iter().cloned().collect();
    cfg.values = synth.values.clone();
    cfg.depth = 3;
    while !cfg.channels.is_empty() && out.len() < total {
        out.push(crate::random::random_test(rng, &cfg));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::preset_abstraction;
    use crate::semantics::{fw_graph, mail_capacity, mail_universe, FwLts};
    use crate::syntax::parse;

    fn act(s: &str) -> Action {
        s.parse().unwrap()
    }

    fn synth(calculus: Calculus) -> Synth {
        Synth {
            calculus,
            values: calculus.default_values(),
            abstraction: preset_abstraction(calculus),
            channels: ["a", "b"].into_iter().map(|c| Channel::new(c).unwrap()).collect(),
        }
    }

    fn toks(ts: &[&str]) -> BTreeSet<Token> {
        ts.iter().map(|t| Token::new(*t)).collect()
    }

    #[test]
    fn conv_tests() {
        assert_eq!(test_conv(&[], Calculus::Vccs).to_string(), "tau.1");
        assert_eq!(canonical(&test_conv(&[act("a!0")], Calculus::Vccs)), canonical(&parse("a!0.tau.1 + tau.1", Calculus::Vccs, &ValueDomain::binary()).unwrap()));
        let expect = parse("a?(x).(if x = 1 then tau.1 else 1) + tau.1", Calculus::Vaccs, &ValueDomain::binary()).unwrap();
        assert_eq!(canonical(&test_conv(&[act("a?1")], Calculus::Vaccs)), canonical(&expect));
    }

    #[test]
    fn acc_tests() {
        let vals = ValueDomain::binary();
        let t = test_acc(&[], &toks(&["a?"]), &synth(Calculus::Vaccs)).unwrap();
        assert_eq!(canonical(&t), canonical(&parse("a?(x).1", Calculus::Vaccs, &vals).unwrap()));
        assert_eq!(test_acc(&[], &BTreeSet::new(), &synth(Calculus::Vccs)).unwrap(), Process::Nil);
        let t = test_acc(&[], &toks(&["a?", "b!"]), &synth(Calculus::Vccs)).unwrap();
        let expect = parse("a?(x).1 + b!0.1 + b!1.1", Calculus::Vccs, &vals).unwrap();
        assert_eq!(canonical(&t), canonical(&expect));
        assert!(matches!(test_acc(&[], &toks(&["c?"]), &synth(Calculus::Vccs)), Err(SynthesisError::TokenNotExpressible(_))));
    }

    #[test]
    fn completeness_clauses_hold_for_presets() {
        for calc in [Calculus::Vccs, Calculus::Vaccs] {
            let s = synth(calc);
            let traces = traces_up_to(&s.channels, &s.values, 1);
            let esets = subsets(&token_universe(&s));
            for r in axcmpl_check(&s, &traces, &esets).unwrap() {
                assert!(r.holds, "{calc} ({}): {:?}", r.clause, r.violations.first());
                assert!(r.checked > 0, "{calc} ({}) never checked", r.clause);
            }
        }
    }

    #[test]
    fn copy_cat_is_separated_from_nil_synchronously() {
        let calc = Calculus::Vccs;
        let vals = calc.default_values();
        let h = calc.nonblocking();
        let p = parse("a?(x).a!x.0", calc, &vals).unwrap();
        let q = Process::Nil;
        let lts = FwLts::new(vals.clone(), h.clone(), mail_universe(&h, [&p, &q], &vals), mail_capacity(3, [&p, &q]));
        let (gp, gq) = (fw_graph(&lts, &p, 10_000).unwrap(), fw_graph(&lts, &q, 10_000).unwrap());
        let (sp, sq) = (term_graph(&p, &vals, 10_000).unwrap(), term_graph(&q, &vals, 10_000).unwrap());
        let d = distinguish(&gp, &gq, &sp, &sq, &synth(calc), 10_000, 10_000).unwrap().unwrap();
        assert!(d.must_p && !d.must_q);
        assert!(distinguish(&gp, &gp, &sp, &sp, &synth(calc), 10_000, 10_000).unwrap().is_none());
    }
}
