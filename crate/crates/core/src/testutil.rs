//! Small helpers shared by the unit tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hypergraph::{Hypergraph, IncidenceGraph};

pub fn all_perms(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap(n, &mut cur, &mut out);
    out.into_iter()
}

fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k {
        heap(k - 1, a, out);
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
}

pub fn shuffled(n: usize, seed: u64) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    v
}

/// Tries every red and blue permutation.
pub fn brute_isomorphic(a: &IncidenceGraph, b: &IncidenceGraph) -> bool {
    if (a.num_reds(), a.num_blues(), a.num_edges()) != (b.num_reds(), b.num_blues(), b.num_edges()) {
        return false;
    }
    let target: Vec<Vec<usize>> = b.all_blue_nbrs().to_vec();
    for bp in all_perms(a.num_blues()) {
        for rp in all_perms(a.num_reds()) {
            if a.permuted(&rp, &bp).all_blue_nbrs() == target.as_slice() {
                return true;
            }
        }
    }
    false
}

/// Random hypergraph with at most `max_v` vertices and between 1 and `max_e` edges.
pub fn random_hypergraph(seed: u64, max_v: usize, max_e: usize) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(1..=max_e);
    let n = rng.gen_range(1..=max_v);
    let mut contents: Vec<Vec<usize>> = (0..m).map(|_| (0..n).filter(|_| rng.gen_bool(0.45)).collect()).collect();
    let used: std::collections::BTreeSet<usize> = contents.iter().flatten().copied().collect();
    let order: Vec<usize> = used.iter().copied().collect();
    for c in &mut contents {
        for v in c.iter_mut() {
            *v = order.binary_search(v).unwrap();
        }
    }
    Hypergraph::from_raw((0..order.len()).map(|v| format!("v{v}")).collect(), (0..m).map(|e| format!("e{e}")).collect(), contents).unwrap()
}

pub fn random_incidence(seed: u64, max_v: usize, max_e: usize) -> IncidenceGraph {
    random_hypergraph(seed, max_v, max_e).to_incidence()
}
