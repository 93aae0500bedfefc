//! Acceptance sets along a trace, under the preset abstraction and under
//! the identity.

use mustcheck::labels::{preset_abstraction, Action, Calculus, LabelAbstraction};
use mustcheck::preorder::{interp, trace_string, AcceptanceSet};
use mustcheck::cli::RunConfig;
use mustcheck::semantics::fw_graph;
use mustcheck::syntax::parse;

fn show(acc: &Option<AcceptanceSet>) -> String {
    let Some(acc) = acc else { return "undefined".into() };
    let sets: Vec<String> = acc
        .iter()
        .map(|x| format!("{{{}}}", x.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("{{{}}}", sets.join(", "))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let calc = Calculus::Vaccs;
    let cfg = RunConfig::new(calc);
    let identity = LabelAbstraction::identity(calc.nonblocking());
    let preset = preset_abstraction(calc);
    let s: Vec<Action> = vec!["a?1".parse()?];

    for src in ["a?(x).a!x", "a?(x).a!0", "tau.a?(x).0 + tau.b?(y).0"] {
        let p = parse(src, calc, &cfg.values)?;
        let g = fw_graph(&cfg.forwarder(&[&p]), &p, cfg.bound)?;
        for (name, abs) in [("identity", &identity), ("preset", &preset)] {
            let acc = interp(&g, &s, abs)?;
            println!("{src:<28} {name:<8} ⟦p⟧({}) = {}", trace_string(&s), show(&acc));
        }
    }
    Ok(())
}
