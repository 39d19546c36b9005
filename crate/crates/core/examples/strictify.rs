//! A non-strict forest for G made strict, at the cost of one level.

use shdepth::families::example_g;
use shdepth::io::{parse_ef, write_ef};
use shdepth::{strictify, validate_ef, validate_strict_ef};

fn main() -> shdepth::Result<()> {
    let g = example_g().to_incidence();
    let single = parse_ef("N t1 parent=- edge=l\n")?;
    println!("valid: {}  strict: {}", validate_ef(&g, &single)?.is_ok(), validate_strict_ef(&g, &single)?.is_ok());
    let strict = strictify(&g, &single)?;
    println!("after strictify, height {} -> {}", single.height(), strict.height());
    print!("{}", write_ef(&strict));
    assert!(validate_strict_ef(&g, &strict)?.is_ok());
    Ok(())
}
