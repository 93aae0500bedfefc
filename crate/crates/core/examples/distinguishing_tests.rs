//! When the preorder fails, build a client that passes with one side and
//! fails with the other.

use mustcheck::cli::{cmd_distinguish, Document, Format, RunConfig};
use mustcheck::labels::Calculus;
use mustcheck::syntax::parse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pairs = [
        (Calculus::Ccs, "'a.0", "'a.0 + 'b.0"),
        (Calculus::Ccs, "rec X.tau.X", "0"),
        (Calculus::Vccs, "a?(x).a!x.0", "0"),
        (Calculus::Vaccs, "a!0", "a!1"),
        (Calculus::Vaccs, "a?(x).0", "a?(x).0"),
    ];
    for (calc, p, q) in pairs {
        let cfg = RunConfig::new(calc);
        let doc = cmd_distinguish(&parse(p, calc, &cfg.values)?, &parse(q, calc, &cfg.values)?, &cfg)?;
        println!("{calc}: {p}  vs  {q}");
        print!("{}", doc.render(Format::Human));
    }
    Ok(())
}
