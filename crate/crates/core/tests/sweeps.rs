use std::collections::BTreeMap;

use shdepth::families::{enumerate_hypergraphs, EnumerationBounds};
use shdepth::homvec::{hom_vector_over, ClassKind, ClassTruncation, HomVector};

/// Groups targets by hom vector; returns the group index of every target.
fn partition(vectors: &[HomVector]) -> Vec<usize> {
    let mut ids: BTreeMap<Vec<String>, usize> = BTreeMap::new();
    vectors
        .iter()
        .map(|v| {
            let key = v.entries.iter().map(|(_, c)| c.to_string()).collect();
            let n = ids.len();
            *ids.entry(key).or_insert(n)
        })
        .collect()
}

/// Hypergraph counts from SHD_1 and incidence counts from ISHD_1 split the
/// same small targets the same way.
#[test]
fn strict_classes_agree_on_small_targets() {
    let targets = enumerate_hypergraphs(&EnumerationBounds::new(3, 5, false)).unwrap();
    let bounds = EnumerationBounds::new(3, 5, false);
    let mut parts = Vec::new();
    for kind in [ClassKind::Shd, ClassKind::Ishd] {
        let ct = ClassTruncation::new(kind, 1, bounds);
        let sources = ct.sources().unwrap();
        let vectors: Vec<HomVector> =
            targets.iter().map(|t| hom_vector_over(&sources, ct.kind.semantics(), &t.to_incidence()).unwrap()).collect();
        parts.push(partition(&vectors));
    }
    let pairs = |p: &[usize]| -> Vec<bool> {
        (0..p.len()).flat_map(|a| (a + 1..p.len()).map(move |b| (a, b))).map(|(a, b)| p[a] == p[b]).collect()
    };
    assert_eq!(pairs(&parts[0]), pairs(&parts[1]));
}
