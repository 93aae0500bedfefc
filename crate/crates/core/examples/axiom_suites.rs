//! Checking axiom classes on a term graph, a forwarder and a subset
//! construction, with the witnesses of each violation.

use mustcheck::axioms::{check_axiom, check_class, Axiom, AxiomClass};
use mustcheck::cli::RunConfig;
use mustcheck::labels::Calculus;
use mustcheck::semantics::{explore, fw_graph, term_graph, DetState, ToSetLts};
use mustcheck::syntax::parse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let calc = Calculus::Accs;
    let cfg = RunConfig::new(calc);
    let h = calc.nonblocking();
    let p = parse("tau.(tau.a.'a.0 + tau.('a.0 | a.1))", calc, &cfg.values)?;

    let term = term_graph(&p, &cfg.values, cfg.bound)?;
    for r in check_class(&term, &h, AxiomClass::Agents)? {
        println!("term   {:<26} holds={} waived={}", r.axiom.name(), r.holds, r.waived);
    }

    let fw = fw_graph(&cfg.forwarder(&[&p]), &p, cfg.bound)?;
    let bad = check_class(&fw, &h, AxiomClass::LtsMultiset)?.into_iter().filter(|r| !r.holds).count();
    println!("toFW   {} states, {bad} ltsmultiset axioms violated", fw.len());

    let set = explore(&ToSetLts { base: &term }, DetState(vec![term.root()]), cfg.bound)?;
    let r = check_axiom(&set, &h, Axiom::NbDelay)?;
    println!("toSET  nb-delay holds={} with {} violations", r.holds, r.violations);
    for w in r.witnesses.iter().take(2) {
        for t in &w.transitions {
            println!("         {} -{}-> {}", set.state(t.source), t.label, set.state(t.target));
        }
    }
    Ok(())
}
