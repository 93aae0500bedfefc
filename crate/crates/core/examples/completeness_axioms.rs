//! Checks the clauses that make the synthesized tests complete, for every
//! trace of length at most two and every set of tokens.

use mustcheck::labels::{preset_abstraction, Calculus, Channel};
use mustcheck::synthesis::{axcmpl_check, subsets, token_universe, traces_up_to, Synth};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for calc in Calculus::ALL {
        let synth = Synth {
            calculus: calc,
            values: calc.default_values(),
            abstraction: preset_abstraction(calc),
            channels: ["a", "b"].into_iter().map(Channel::new).collect::<Result<_, _>>()?,
        };
        let traces = traces_up_to(&synth.channels, &synth.values, 2);
        let esets = subsets(&token_universe(&synth));
        println!("{calc}: {} traces, {} token sets", traces.len(), esets.len());
        for r in axcmpl_check(&synth, &traces, &esets)? {
            println!("  {:<3} {:>5} checked, {}", r.clause, r.checked, if r.holds { "ok" } else { "VIOLATED" });
        }
    }
    Ok(())
}
