//! Pending asynchronous messages can be hoisted out of an internal choice.

use mustcheck::cli::{cmd_leq, Method, RunConfig};
use mustcheck::labels::Calculus;
use mustcheck::syntax::parse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = RunConfig::new(Calculus::Vaccs);
    cfg.bound = 200_000;
    let (p, q, m) = ("a?(x).b!x", "b?(y).0", "a!1");
    let left = format!("tau.({p} | {m}) + tau.({q} | {m})");
    let right = format!("{m} | (tau.{p} + tau.{q})");
    for (l, r) in [(&left, &right), (&right, &left)] {
        let doc = cmd_leq(&parse(l, cfg.calculus, &cfg.values)?, &parse(r, cfg.calculus, &cfg.values)?, Method::Alt, 0, &cfg)?;
        println!("{l}\n  ⊑ {r}\n  {}{}\n", doc.holds, if doc.exhaustive { "" } else { " (within the mail capacity)" });
    }
    Ok(())
}
