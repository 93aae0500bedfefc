//! Seeded generators of closed finite-state terms.
//!
//! Recursion variables only occur in tail position and never under a
//! parallel composition, so every generated term has a finite state space.
//! In asynchronous calculi outputs are emitted as atoms only.

use rand::seq::IndexedRandom;
use rand::{Rng, RngExt};

use crate::labels::{Calculus, Channel, ValueDomain};
use crate::syntax::{BoolExpr, Process, ValueExpr};

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub calculus: Calculus,
    pub channels: Vec<Channel>,
    pub values: ValueDomain,
    /// Maximal prefix nesting.
    pub depth: usize,
    /// Probability that a leaf is `1` rather than `0`.
    pub success: f64,
    pub recursion: bool,
    pub parallel: bool,
}

impl GenConfig {
    /// Channels `a` and `b`, the calculus's default values, depth 4.
    pub fn new(calculus: Calculus) -> Self {
        GenConfig {
            calculus,
            channels: ["a", "b"].into_iter().map(|c| Channel::new(c).expect("valid channel")).collect(),
            values: calculus.default_values(),
            depth: 4,
            success: 0.0,
            recursion: true,
            parallel: true,
        }
    }

    /// Settings for clients: more successful leaves.
    pub fn tests(calculus: Calculus) -> Self {
        GenConfig { success: 0.5, ..GenConfig::new(calculus) }
    }
}

struct Scope {
    /// Recursion variable usable in tail position.
    rec: Option<String>,
    /// Value variables bound by enclosing inputs.
    vars: Vec<String>,
    fresh: usize,
}

pub fn random_process<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Process {
    let mut scope = Scope { rec: None, vars: Vec::new(), fresh: 0 };
    process(rng, cfg, cfg.depth, &mut scope)
}

/// A random client.
pub fn random_test<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Process {
    random_process(rng, &GenConfig { success: cfg.success.max(0.3), ..cfg.clone() })
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, scope: &Scope) -> Process {
    if let Some(x) = &scope.rec {
        if rng.random_bool(0.4) {
            return Process::Var(x.clone());
        }
    }
    if cfg.calculus.is_asynchronous() && rng.random_bool(0.3) {
        return atom(rng, cfg, scope);
    }
    if rng.random_bool(cfg.success) {
        Process::One
    } else {
        Process::Nil
    }
}

fn payload<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, scope: &Scope) -> ValueExpr {
    if !scope.vars.is_empty() && cfg.calculus.has_values() && rng.random_bool(0.5) {
        return ValueExpr::Var(scope.vars.choose(rng).expect("nonempty").clone());
    }
    ValueExpr::Lit(*cfg.values.values().choose(rng).expect("nonempty domain"))
}

fn channel<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Channel {
    cfg.channels.choose(rng).expect("channels").clone()
}

fn atom<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, scope: &Scope) -> Process {
    let c = channel(rng, cfg);
    Process::output(&c, payload(rng, cfg, scope), Process::Nil)
}

fn process<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, depth: usize, scope: &mut Scope) -> Process {
    if depth == 0 {
        return leaf(rng, cfg, scope);
    }
    match rng.random_range(0..10u32) {
        0 => leaf(rng, cfg, scope),
        1 if cfg.parallel => {
            // recursion variables of the enclosing loop are not available here
            let saved = scope.rec.take();
            let l = process(rng, cfg, depth - 1, scope);
            let r = process(rng, cfg, depth - 1, scope);
            scope.rec = saved;
            Process::par(l, r)
        }
        2 if cfg.recursion && scope.rec.is_none() => {
            let x = format!("X{}", scope.fresh);
            scope.fresh += 1;
            scope.rec = Some(x.clone());
            let body = process(rng, cfg, depth - 1, scope);
            scope.rec = None;
            Process::rec(&x, body)
        }
        3 if cfg.calculus.has_values() && !scope.vars.is_empty() => {
            let x = scope.vars.choose(rng).expect("nonempty").clone();
            let v = *cfg.values.values().choose(rng).expect("nonempty domain");
            let then = process(rng, cfg, depth - 1, scope);
            let other = process(rng, cfg, depth - 1, scope);
            Process::if_then_else(BoolExpr::eq(ValueExpr::Var(x), ValueExpr::Lit(v)), then, other)
        }
        4 if cfg.calculus.is_asynchronous() => {
            let a = atom(rng, cfg, scope);
            let saved = scope.rec.take();
            let rest = process(rng, cfg, depth - 1, scope);
            scope.rec = saved;
            Process::par(a, rest)
        }
        // a restriction under recursion would pile up a fresh scope per round
        5 if scope.rec.is_none() && rng.random_bool(0.3) => {
            let c = channel(rng, cfg);
            Process::restrict(&c, process(rng, cfg, depth - 1, scope))
        }
        _ => {
            let n = rng.random_range(1..=2usize);
            Process::sum_of((0..n).map(|_| guard(rng, cfg, depth, scope)).collect::<Vec<_>>())
        }
    }
}

fn guard<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, depth: usize, scope: &mut Scope) -> Process {
    let outputs = !cfg.calculus.is_asynchronous();
    match rng.random_range(0..if outputs { 5u32 } else { 4 }) {
        0 => Process::tau(process(rng, cfg, depth - 1, scope)),
        1 | 2 => {
            let c = channel(rng, cfg);
            let x = format!("x{}", scope.fresh);
            scope.fresh += 1;
            scope.vars.push(x.clone());
            let body = process(rng, cfg, depth - 1, scope);
            scope.vars.pop();
            Process::input(&c, &x, body)
        }
        3 | 4 if outputs => {
            let c = channel(rng, cfg);
            let v = payload(rng, cfg, scope);
            Process::output(&c, v, process(rng, cfg, depth - 1, scope))
        }
        _ => {
            let c = channel(rng, cfg);
            let x = format!("x{}", scope.fresh);
            scope.fresh += 1;
            Process::input(&c, &x, process(rng, cfg, depth - 1, scope))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::term_graph;
    use crate::syntax::parse;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_terms_parse_back_and_are_finite() {
        let mut rng = StdRng::seed_from_u64(7);
        for calc in Calculus::ALL {
            let cfg = GenConfig::new(calc);
            for _ in 0..60 {
                let p = random_process(&mut rng, &cfg);
                assert!(p.is_closed(), "{p}");
                let text = p.to_string();
                let back = parse(&text, calc, &cfg.values).unwrap_or_else(|e| panic!("{calc}: {text}: {e}"));
                assert_eq!(crate::syntax::canonical(&back), crate::syntax::canonical(&p), "{text}");
                let g = term_graph(&p, &cfg.values, 20_000).unwrap();
                assert!(g.is_complete(), "{calc}: {text}");
            }
        }
    }
}
