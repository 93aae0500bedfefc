//! An abstraction that forgets channels is unsound: the acceptance-set
//! check accepts a pair that a test separates.

use mustcheck::cli::{prepare, RunConfig};
use mustcheck::labels::Calculus;
use mustcheck::preorder::{alt_leq, must};
use mustcheck::semantics::term_graph;
use mustcheck::syntax::parse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = RunConfig::new(Calculus::Ccs);
    let p = parse("'a.0 + 'b.0", cfg.calculus, &cfg.values)?;
    let q = parse("'a.0", cfg.calculus, &cfg.values)?;
    let t = term_graph(&parse("b?(x).1", cfg.calculus, &cfg.values)?, &cfg.values, cfg.bound)?;

    for name in ["preset", "constant"] {
        cfg.set_abstraction(name)?;
        let prep = prepare(&p, &q, &cfg)?;
        let v = alt_leq(&prep.gp, &prep.gq, &cfg.abstraction, cfg.bound)?;
        println!("{name:<8} alt: p ⊑ q is {}", v.holds);
        let (mp, mq) = (must(&prep.sp, &t, cfg.bound)?.holds, must(&prep.sq, &t, cfg.bound)?.holds);
        println!("         must(p, b?(x).1) = {mp}, must(q, b?(x).1) = {mq}");
    }
    Ok(())
}
