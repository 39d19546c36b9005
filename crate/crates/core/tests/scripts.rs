use std::path::Path;

use shdepth::canon::canonical_form;
use shdepth::derivation::extract_forest;
use shdepth::families::p7_letters;
use shdepth::io::read_hg;
use shdepth::script::{parse_script, replay};
use shdepth::validate_strict_ef;

fn fixtures() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures"))
}

#[test]
fn p7_script_reaches_cost_three() {
    let dir = fixtures().join("p7");
    let text = std::fs::read_to_string(dir.join("p7.gli")).unwrap();
    let script = parse_script(&text).unwrap();
    let steps = replay(&script, None, |f| read_hg(&dir.join(f))).unwrap();
    let last = steps.last().unwrap();
    assert_eq!(last.name, "p7");
    assert_eq!(last.cost, 3);
    let result = last.derivation.result();
    assert!(result.is_label_free());
    let p7 = p7_letters().to_incidence();
    assert_eq!(canonical_form(result.skeleton()).unwrap(), canonical_form(&p7).unwrap());
    assert!(steps.iter().all(|s| s.cost <= 3));

    let forest = extract_forest(&last.derivation);
    assert!(forest.height().unwrap() <= 3);
    let ef = forest.to_elimination_forest(result.skeleton()).unwrap();
    assert!(validate_strict_ef(result.skeleton(), &ef).unwrap().is_ok());
}
