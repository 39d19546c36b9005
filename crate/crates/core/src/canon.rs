//! Canonical forms for small coloured incidence graphs.
//!
//! Vertices with identical neighbourhoods (and colours) are interchangeable,
//! so they are first collapsed into one class carrying a multiplicity. The
//! quotient is then labelled by individualisation and colour refinement; the
//! canonical form is the least certificate over all leaves of the search tree.

use std::collections::BTreeMap;
use std::fmt;

use crate::budget::Budget;
use crate::error::Result;
use crate::hypergraph::{Hypergraph, IncidenceGraph};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

struct Quotient {
    adj: Vec<Vec<usize>>,
    key: Vec<(u8, u64, u64)>,
}

fn quotient(i: &IncidenceGraph, red_colours: &[u64], blue_colours: &[u64]) -> Quotient {
    let red_nbrs = i.red_nbrs();
    let mut blue_class: BTreeMap<(u64, &[usize]), Vec<usize>> = BTreeMap::new();
    for (b, rs) in i.all_blue_nbrs().iter().enumerate() {
        blue_class.entry((blue_colours[b], rs.as_slice())).or_default().push(b);
    }
    let mut red_class: BTreeMap<(u64, &[usize]), Vec<usize>> = BTreeMap::new();
    for (r, nb) in red_nbrs.iter().enumerate() {
        red_class.entry((red_colours[r], nb.as_slice())).or_default().push(r);
    }
    let nb = blue_class.len();
    let mut red_of = vec![0; i.num_reds()];
    let mut key = Vec::with_capacity(nb + red_class.len());
    for ((c, _), members) in &blue_class {
        key.push((0u8, *c, members.len() as u64));
    }
    for (idx, ((c, _), members)) in red_class.iter().enumerate() {
        key.push((1u8, *c, members.len() as u64));
        for &r in members {
            red_of[r] = nb + idx;
        }
    }
    let mut adj = vec![Vec::new(); key.len()];
    for (bc, (_, members)) in blue_class.iter().enumerate() {
        let mut rs: Vec<usize> = i.blue_nbrs(members[0]).iter().map(|&r| red_of[r]).collect();
        rs.sort_unstable();
        rs.dedup();
        for &rc in &rs {
            adj[rc].push(bc);
        }
        adj[bc] = rs;
    }
    Quotient { adj, key }
}

fn rank<T: Ord + Clone>(items: &[T]) -> (Vec<u32>, usize) {
    let mut sorted: Vec<T> = items.to_vec();
    sorted.sort();
    sorted.dedup();
    let colours = items.iter().map(|x| sorted.binary_search(x).unwrap() as u32).collect();
    (colours, sorted.len())
}

fn refine(q: &Quotient, colours: &mut Vec<u32>) {
    let mut cells = {
        let mut c = colours.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..colours.len())
            .map(|v| {
                let mut ns: Vec<u32> = q.adj[v].iter().map(|&w| colours[w]).collect();
                ns.sort_unstable();
                (colours[v], ns)
            })
            .collect();
        let (next, n) = rank(&sigs);
        *colours = next;
        if n == cells {
            return;
        }
        cells = n;
    }
}

fn certificate(q: &Quotient, colours: &[u32]) -> Vec<u64> {
    let n = colours.len();
    let mut at = vec![0usize; n];
    for (v, &c) in colours.iter().enumerate() {
        at[c as usize] = v;
    }
    let mut cert = Vec::with_capacity(4 * n);
    for &v in &at {
        let (t, c, m) = q.key[v];
        cert.extend([t as u64, c, m]);
        let mut ns: Vec<u64> = q.adj[v].iter().map(|&w| colours[w] as u64).collect();
        ns.sort_unstable();
        cert.push(ns.len() as u64);
        cert.extend(ns);
    }
    cert
}

fn search(q: &Quotient, mut colours: Vec<u32>, best: &mut Option<Vec<u64>>, budget: &Budget) -> Result<()> {
    budget.tick("canonical form")?;
    refine(q, &mut colours);
    let n = colours.len();
    let mut size = vec![0usize; n];
    for &c in &colours {
        size[c as usize] += 1;
    }
    let target = match size.iter().position(|&s| s > 1) {
        None => {
            let cert = certificate(q, &colours);
            if best.as_ref().is_none_or(|b| cert < *b) {
                *best = Some(cert);
            }
            return Ok(());
        }
        Some(c) => c as u32,
    };
    for v in (0..n).filter(|&v| colours[v] == target) {
        let split: Vec<u32> = colours.iter().enumerate().map(|(w, &c)| 2 * c + u32::from(w != v)).collect();
        let (next, _) = rank(&split);
        search(q, next, best, budget)?;
    }
    Ok(())
}

/// Canonical form with an initial colouring; isomorphisms must preserve
/// colours as well as the red/blue sides.
pub fn canonical_form_coloured(i: &IncidenceGraph, red_colours: &[u64], blue_colours: &[u64], budget: &Budget) -> Result<CanonicalForm> {
    let q = quotient(i, red_colours, blue_colours);
    let (colours, _) = rank(&q.key);
    let mut best = None;
    if !q.key.is_empty() {
        search(&q, colours, &mut best, budget)?;
    }
    let mut bytes = Vec::new();
    bytes.extend((i.num_blues() as u32).to_be_bytes());
    bytes.extend((i.num_reds() as u32).to_be_bytes());
    for x in best.unwrap_or_default() {
        bytes.extend(x.to_be_bytes());
    }
    Ok(CanonicalForm(bytes))
}

pub fn canonical_form_with(i: &IncidenceGraph, budget: &Budget) -> Result<CanonicalForm> {
    canonical_form_coloured(i, &vec![0; i.num_reds()], &vec![0; i.num_blues()], budget)
}

pub fn canonical_form(i: &IncidenceGraph) -> Result<CanonicalForm> {
    canonical_form_with(i, &Budget::default())
}

pub fn canonical_form_hg(h: &Hypergraph) -> Result<CanonicalForm> {
    canonical_form(&h.to_incidence())
}

pub fn isomorphic(a: &IncidenceGraph, b: &IncidenceGraph) -> Result<bool> {
    if (a.num_reds(), a.num_blues(), a.num_edges()) != (b.num_reds(), b.num_blues(), b.num_edges()) {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::testutil::{all_perms, brute_isomorphic, random_incidence};
    use proptest::prelude::*;

    #[test]
    fn relabelled_copy_is_isomorphic() {
        let g = families::example_g().to_incidence();
        let p = g.permuted(&[2, 0, 1], &[3, 1, 0, 2]);
        let p = p.renamed(vec!["x".into(), "y".into(), "z".into()], vec!["p".into(), "q".into(), "r".into(), "s".into()]).unwrap();
        assert!(isomorphic(&g, &p).unwrap());
        assert!(!isomorphic(&g, &families::example_h().to_incidence()).unwrap());
    }

    #[test]
    fn agrees_with_permutation_search_on_three_edge_instances() {
        let bounds = families::EnumerationBounds { max_edges: 3, max_vertices: 3, connected_only: false };
        let all = families::enumerate_hypergraphs(&bounds).unwrap();
        let insts: Vec<IncidenceGraph> = all.iter().map(|h| h.to_incidence()).collect();
        for (x, a) in insts.iter().enumerate() {
            for b in &insts[x..] {
                let want = brute_isomorphic(a, b);
                assert_eq!(isomorphic(a, b).unwrap(), want);
            }
            // a shuffled copy must always land on the same form
            let rp: Vec<usize> = (0..a.num_reds()).rev().collect();
            let bp: Vec<usize> = (0..a.num_blues()).rev().collect();
            assert_eq!(canonical_form(a).unwrap(), canonical_form(&a.permuted(&rp, &bp)).unwrap());
        }
        assert!(all_perms(3).count() == 6);
    }

    #[test]
    fn budget_is_reported() {
        let many = Hypergraph::from_edges(&[("a", &["1", "2"]), ("b", &["3", "4"]), ("c", &["5", "6"]), ("d", &["7", "8"])]).unwrap();
        let err = canonical_form_with(&many.to_incidence(), &Budget::new(3)).unwrap_err();
        assert!(matches!(err, crate::Error::Budget(_)));
    }

    proptest! {
        #[test]
        fn invariant_under_relabelling(seed in any::<u64>(), rs in any::<u64>(), bs in any::<u64>()) {
            let i = random_incidence(seed, 5, 5);
            let rp = crate::testutil::shuffled(i.num_reds(), rs);
            let bp = crate::testutil::shuffled(i.num_blues(), bs);
            let j = i.permuted(&rp, &bp);
            prop_assert_eq!(canonical_form(&i).unwrap(), canonical_form(&j).unwrap());
            prop_assert!(brute_isomorphic(&i, &j));
        }

        #[test]
        fn equal_forms_iff_isomorphic(a in any::<u64>(), b in any::<u64>()) {
            let x = random_incidence(a, 4, 3);
            let y = random_incidence(b, 4, 3);
            prop_assert_eq!(isomorphic(&x, &y).unwrap(), brute_isomorphic(&x, &y));
        }
    }
}
