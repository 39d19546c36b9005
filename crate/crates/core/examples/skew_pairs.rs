//! The k = 1 pairs: equal over the strict class, told apart by the plain one.

use shdepth::families::{skew_pair, skew_pair_prime, EnumerationBounds};
use shdepth::homvec::{indistinguishable, ClassKind, ClassTruncation, Indistinguishability};
use shdepth::IncidenceGraph;

fn report(kind: ClassKind, a: &IncidenceGraph, b: &IncidenceGraph) -> shdepth::Result<()> {
    let ct = ClassTruncation::new(kind, 1, EnumerationBounds::new(3, 6, false));
    match indistinguishable(&ct, a, b)? {
        Indistinguishability::Equal { sources } => println!("  {ct}: equal on {sources} sources"),
        Indistinguishability::Distinguished { source, left, right, .. } => {
            println!("  {ct}: {left} vs {right} from {:?}", source.edge_list())
        }
    }
    Ok(())
}

fn main() -> shdepth::Result<()> {
    let (g, h) = skew_pair(1)?;
    println!("G_1 / H_1");
    report(ClassKind::Shd, &g.to_incidence(), &h.to_incidence())?;
    report(ClassKind::Hd, &g.to_incidence(), &h.to_incidence())?;
    let (g, h) = skew_pair_prime(1)?;
    println!("G'_1 / H'_1");
    report(ClassKind::Hd, &g.to_incidence(), &h.to_incidence())?;
    report(ClassKind::Ihd, &g.to_incidence(), &h.to_incidence())?;
    Ok(())
}
