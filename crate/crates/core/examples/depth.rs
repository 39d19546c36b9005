//! Exact hd and shd of the small worked examples, with witness forests.

use shdepth::families::{example_g, example_h};
use shdepth::io::write_ef;
use shdepth::{hd_exact, shd_exact, Hypergraph};

fn main() -> shdepth::Result<()> {
    for (name, h) in [("G", example_g()), ("H", example_h()), ("P_7", Hypergraph::path(7)?), ("P_15", Hypergraph::path(15)?)] {
        let i = h.to_incidence();
        let (hd, shd) = (hd_exact(&i)?, shd_exact(&i)?);
        println!("{name}: hd {} shd {}", hd.depth, shd.depth);
        print!("{}", write_ef(&shd.forest));
    }
    Ok(())
}
