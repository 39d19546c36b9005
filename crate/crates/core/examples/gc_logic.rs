//! The sentence describing G: parse, check, evaluate.

use shdepth::families::{example_g, example_h};
use shdepth::gc::{eval, is_rgc, parse, phi_g, wellformed_gck, Interpretation};

fn main() -> shdepth::Result<()> {
    let phi = phi_g();
    let text = phi.render();
    assert_eq!(parse(&text)?, phi);
    println!("{text}");
    println!("guard depth {}  size {}  violations {}", phi.guard_depth(), phi.size(), wellformed_gck(&phi, 1).len());
    println!("restricted: {}", is_rgc(&phi, 1).is_ok());
    for (name, h) in [("G", example_g()), ("H", example_h())] {
        println!("{name}: {}", eval(&phi, &Interpretation::new(&h.to_incidence()))?);
    }
    let psi = parse("existsge 2 (e1) [] . existsge 1 (v1) [v1@e1] . E(e1,v1)")?;
    println!("{psi} on G: {}", eval(&psi, &Interpretation::new(&example_g().to_incidence()))?);
    Ok(())
}
