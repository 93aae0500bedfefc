//! The forwarder lifting adds a mailbox for non-blocking actions. Without
//! any, it is the term graph itself.

use mustcheck::cli::RunConfig;
use mustcheck::labels::Calculus;
use mustcheck::semantics::{fw_graph, term_graph};
use mustcheck::syntax::parse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (calc, src) in [(Calculus::Vccs, "a?(x).b!x.0 + tau.a!1.0"), (Calculus::Vaccs, "a?(x).b!x + tau.a!1")] {
        let cfg = RunConfig::new(calc);
        let p = parse(src, calc, &cfg.values)?;
        let term = term_graph(&p, &cfg.values, cfg.bound)?;
        let fw = fw_graph(&cfg.forwarder(&[&p]), &p, cfg.bound)?;
        let same = fw.same_shape(&term, |s, t| s.proc == *t && s.mail.is_empty());
        println!("{calc:<6} term {} states, toFW {} states, isomorphic: {same}", term.len(), fw.len());
    }
    Ok(())
}
