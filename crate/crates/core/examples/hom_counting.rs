//! Hypergraph and incidence homomorphism counts between a few instances.

use shdepth::families::{example_g, example_h};
use shdepth::{count_hg_homs, count_ig_homs, Hypergraph};

fn main() -> shdepth::Result<()> {
    let sources = [("P_1", Hypergraph::path(1)?), ("P_2", Hypergraph::path(2)?), ("G", example_g())];
    let targets = [("G", example_g()), ("H", example_h())];
    println!("source\ttarget\thypergraph\tincidence");
    for (sn, s) in &sources {
        for (tn, t) in &targets {
            let hg = count_hg_homs(s, t)?;
            let ig = count_ig_homs(&s.to_incidence(), &t.to_incidence())?;
            println!("{sn}\t{tn}\t{hg}\t{ig}");
        }
    }
    Ok(())
}
