//! The copy-cat `a?(x).a!x` against `0`, in both value-passing calculi.
//!
//! With asynchronous outputs nobody can wait for the echo, so the two are
//! equivalent. With synchronous outputs a test can.

use mustcheck::cli::{cmd_leq, Document, Format, Method, RunConfig};
use mustcheck::labels::Calculus;
use mustcheck::syntax::parse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (calc, id) in [(Calculus::Vaccs, "a?(x).a!x"), (Calculus::Vccs, "a?(x).a!x.0")] {
        let cfg = RunConfig::new(calc);
        let p = parse(id, calc, &cfg.values)?;
        let q = parse("0", calc, &cfg.values)?;
        println!("{calc}: {id} vs 0");
        print!("{}", cmd_leq(&p, &q, Method::Alt, 0, &cfg)?.render(Format::Human));
        print!("{}", cmd_leq(&q, &p, Method::Alt, 0, &cfg)?.render(Format::Human));
        println!();
    }
    Ok(())
}
