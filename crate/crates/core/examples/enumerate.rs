//! Counts of small hypergraphs up to isomorphism, split by depth.

use std::collections::BTreeMap;

use shdepth::families::{enumerate_hypergraphs, EnumerationBounds};
use shdepth::{hd_exact, shd_exact};

fn main() -> shdepth::Result<()> {
    let all = enumerate_hypergraphs(&EnumerationBounds::new(3, 5, true))?;
    let mut by_depth: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for h in &all {
        let i = h.to_incidence();
        *by_depth.entry((hd_exact(&i)?.depth, shd_exact(&i)?.depth)).or_default() += 1;
    }
    println!("{} connected hypergraphs with <= 3 hyperedges on <= 5 vertices", all.len());
    println!("hd\tshd\tcount");
    for ((hd, shd), n) in by_depth {
        println!("{hd}\t{shd}\t{n}");
    }
    Ok(())
}
