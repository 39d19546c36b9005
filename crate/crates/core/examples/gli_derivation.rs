//! Builds a derivation from the balanced strict tree of P_7 and reads the
//! forest back off it.

use shdepth::derivation::{build_from_strict_ef, extract_forest};
use shdepth::families::{p7_letters, p7_tree};
use shdepth::io::write_ef;
use shdepth::{isomorphic, validate_strict_ef};

fn main() -> shdepth::Result<()> {
    let p7 = p7_letters().to_incidence();
    let d = build_from_strict_ef(&p7, &p7_tree(), 3)?;
    let result = d.result();
    println!("steps {}  cost {}  label-free {}", d.size(), d.cost(), result.is_label_free());
    println!("skeleton isomorphic to P_7: {}", isomorphic(result.skeleton(), &p7)?);
    let ef = extract_forest(&d).to_elimination_forest(result.skeleton())?;
    println!("extracted forest, height {}, strict {}", ef.height(), validate_strict_ef(result.skeleton(), &ef)?.is_ok());
    print!("{}", write_ef(&ef));
    Ok(())
}
