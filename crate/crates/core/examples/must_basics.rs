//! Running a client against a server and reading the failing path.

use mustcheck::labels::{Calculus, ValueDomain};
use mustcheck::preorder::must;
use mustcheck::semantics::term_graph;
use mustcheck::syntax::parse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vals = ValueDomain::unit();
    let graph = |src: &str| term_graph(&parse(src, Calculus::Ccs, &vals).unwrap(), &vals, 10_000);
    let client = graph("a?(x).1")?;

    for server in ["a!().0", "b!().0", "tau.a!().0 + tau.0", "rec X.(tau.X + a!().0)"] {
        let out = must(&graph(server)?, &client, 10_000)?;
        println!("must({server}, a?(x).1) = {}", out.holds);
        if !out.holds {
            let path: Vec<String> = out.path.iter().map(|(s, t)| format!("({s},{t})")).collect();
            match out.cycle_start {
                Some(i) => println!("  loops from step {i}: {}", path.join(" ")),
                None => println!("  stuck after: {}", path.join(" ")),
            }
        }
    }
    Ok(())
}
