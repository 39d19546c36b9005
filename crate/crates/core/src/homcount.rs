//! Homomorphism counting under hypergraph (content equality) and incidence
//! graph (content inclusion) semantics.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, IncidenceGraph};
use crate::kli::KLabeledIncidenceGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semantics {
    /// `h_V(β(e)) = β(h_E(e))`
    Hypergraph,
    /// `h_V(β(e)) ⊆ β(h_E(e))`
    Incidence,
}

/// A homomorphism as index maps: `vertex[v]` is the image of source vertex
/// `v`, `edge[e]` the image of source hyperedge `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPair {
    pub vertex: Vec<usize>,
    pub edge: Vec<usize>,
}

struct Engine<'a> {
    src: &'a [Vec<usize>],
    n_src_reds: usize,
    tgt: Vec<u128>,
    exact: bool,
    order: Vec<usize>,
    blue_pin: Vec<Option<usize>>,
    red_init: Vec<u128>,
    /// for every source blue, the red whose assignment completes it (exact mode)
    red_order: Vec<usize>,
}

fn mask_of(rs: &[usize]) -> u128 {
    rs.iter().fold(0, |m, &r| m | 1 << r)
}

impl<'a> Engine<'a> {
    fn new(src: &'a IncidenceGraph, tgt: &IncidenceGraph, sem: Semantics) -> Result<Self> {
        if tgt.num_reds() > 128 {
            return Err(Error::SizeCap(format!("target has {} vertices (at most 128 supported)", tgt.num_reds())));
        }
        let nbrs = src.all_blue_nbrs();
        let full = if tgt.num_reds() == 128 { u128::MAX } else { (1u128 << tgt.num_reds()) - 1 };
        // connectivity-first blue order: large contents first, then neighbours
        let mut order: Vec<usize> = Vec::with_capacity(nbrs.len());
        let mut seen_reds = vec![false; src.num_reds()];
        let mut left: Vec<usize> = (0..nbrs.len()).collect();
        while !left.is_empty() {
            let (pos, _) = left
                .iter()
                .enumerate()
                .max_by_key(|(_, &b)| {
                    let shared = nbrs[b].iter().filter(|&&r| seen_reds[r]).count();
                    (shared, nbrs[b].len(), std::cmp::Reverse(b))
                })
                .unwrap();
            let b = left.remove(pos);
            for &r in &nbrs[b] {
                seen_reds[r] = true;
            }
            order.push(b);
        }
        let mut red_order = Vec::new();
        let mut placed = vec![false; src.num_reds()];
        for &b in &order {
            for &r in &nbrs[b] {
                if !placed[r] {
                    placed[r] = true;
                    red_order.push(r);
                }
            }
        }
        Ok(Engine {
            src: nbrs,
            n_src_reds: src.num_reds(),
            tgt: tgt.all_blue_nbrs().iter().map(|rs| mask_of(rs)).collect(),
            exact: sem == Semantics::Hypergraph,
            order,
            blue_pin: vec![None; nbrs.len()],
            red_init: vec![full; src.num_reds()],
            red_order,
        })
    }

    fn blue_choices(&self, b: usize) -> Vec<usize> {
        match self.blue_pin[b] {
            Some(g) => vec![g],
            None => (0..self.tgt.len()).collect(),
        }
    }

    fn admissible(&self, b: usize, g: usize, dom: &[u128]) -> bool {
        let t = self.tgt[g];
        let content = &self.src[b];
        if self.exact {
            if (t.count_ones() as usize) > content.len() {
                return false;
            }
            let reach = content.iter().fold(0, |m, &r| m | (dom[r] & t));
            if reach != t {
                return false;
            }
        }
        content.iter().all(|&r| dom[r] & t != 0)
    }

    fn blues(&self, pos: usize, edge: &mut Vec<usize>, dom: &mut Vec<u128>, leaf: &mut dyn FnMut(&[usize], &[u128]) -> bool) -> bool {
        if pos == self.order.len() {
            return leaf(edge, dom);
        }
        let b = self.order[pos];
        for g in self.blue_choices(b) {
            if !self.admissible(b, g, dom) {
                continue;
            }
            let saved: Vec<u128> = self.src[b].iter().map(|&r| dom[r]).collect();
            for &r in &self.src[b] {
                dom[r] &= self.tgt[g];
            }
            edge[b] = g;
            let go_on = self.blues(pos + 1, edge, dom, leaf);
            for (&r, s) in self.src[b].iter().zip(saved) {
                dom[r] = s;
            }
            if !go_on {
                return false;
            }
        }
        true
    }

    /// Enumerates red assignments within `dom`; in exact mode each blue's
    /// image is checked once its last red is placed.
    fn reds(
        &self,
        pos: usize,
        edge: &[usize],
        dom: &[u128],
        vertex: &mut Vec<usize>,
        closes: &[Vec<usize>],
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if pos == self.red_order.len() {
            return f(vertex);
        }
        let r = self.red_order[pos];
        let mut m = dom[r];
        while m != 0 {
            let x = m.trailing_zeros() as usize;
            m &= m - 1;
            vertex[r] = x;
            let ok = !self.exact
                || closes[pos].iter().all(|&b| mask_of(&self.src[b].iter().map(|&y| vertex[y]).collect::<Vec<_>>()) == self.tgt[edge[b]]);
            if ok && !self.reds(pos + 1, edge, dom, vertex, closes, f) {
                return false;
            }
        }
        true
    }

    fn closes(&self) -> Vec<Vec<usize>> {
        let mut at = vec![0usize; self.n_src_reds];
        for (p, &r) in self.red_order.iter().enumerate() {
            at[r] = p;
        }
        let mut out = vec![Vec::new(); self.red_order.len()];
        for (b, rs) in self.src.iter().enumerate() {
            if let Some(p) = rs.iter().map(|&r| at[r]).max() {
                out[p].push(b);
            }
        }
        out
    }

    fn count(&self) -> BigUint {
        let mut total = BigUint::from(0u32);
        let closes = self.closes();
        let mut edge = vec![0; self.src.len()];
        let mut dom = self.red_init.clone();
        if dom.contains(&0) {
            return total;
        }
        self.blues(0, &mut edge, &mut dom, &mut |edge, dom| {
            if self.exact {
                // empty source contents must land on empty target contents
                if self.src.iter().enumerate().any(|(b, rs)| rs.is_empty() && self.tgt[edge[b]] != 0) {
                    return true;
                }
                let mut n: u128 = 0;
                let mut vertex = vec![0; self.n_src_reds];
                self.reds(0, edge, dom, &mut vertex, &closes, &mut |_| {
                    n += 1;
                    true
                });
                total += BigUint::from(n);
            } else {
                let mut p = BigUint::from(1u32);
                for d in dom {
                    p *= d.count_ones();
                }
                total += p;
            }
            true
        });
        total
    }

    fn for_each(&self, f: &mut dyn FnMut(&HomPair) -> bool) {
        let closes = self.closes();
        let mut edge = vec![0; self.src.len()];
        let mut dom = self.red_init.clone();
        self.blues(0, &mut edge, &mut dom, &mut |edge, dom| {
            if self.exact && self.src.iter().enumerate().any(|(b, rs)| rs.is_empty() && self.tgt[edge[b]] != 0) {
                return true;
            }
            let mut vertex = vec![0; self.n_src_reds];
            self.reds(0, edge, dom, &mut vertex, &closes, &mut |vertex| f(&HomPair { vertex: vertex.to_vec(), edge: edge.to_vec() }))
        });
    }
}

pub fn count_homs(src: &IncidenceGraph, tgt: &IncidenceGraph, sem: Semantics) -> Result<BigUint> {
    Ok(Engine::new(src, tgt, sem)?.count())
}

/// Number of hypergraph homomorphisms `F -> G`.
pub fn count_hg_homs(f: &Hypergraph, g: &Hypergraph) -> Result<BigUint> {
    count_homs(&f.to_incidence(), &g.to_incidence(), Semantics::Hypergraph)
}

/// Number of incidence-graph homomorphisms `I -> J`.
pub fn count_ig_homs(i: &IncidenceGraph, j: &IncidenceGraph) -> Result<BigUint> {
    count_homs(i, j, Semantics::Incidence)
}

/// Visits homomorphisms until the callback returns `false`.
pub fn for_each_hom(src: &IncidenceGraph, tgt: &IncidenceGraph, sem: Semantics, f: &mut dyn FnMut(&HomPair) -> bool) -> Result<()> {
    Engine::new(src, tgt, sem)?.for_each(f);
    Ok(())
}

/// Incidence homomorphisms of the skeletons that send every label of `l`
/// to the vertex carrying the same label in `l2`.
pub fn count_labeled_homs(l: &KLabeledIncidenceGraph, l2: &KLabeledIncidenceGraph) -> Result<BigUint> {
    let mut e = Engine::new(l.skeleton(), l2.skeleton(), Semantics::Incidence)?;
    for (&i, &v) in l.red_labels() {
        let w = *l2.red_labels().get(&i).ok_or_else(|| Error::Label(format!("red label {i} missing in target")))?;
        e.red_init[v] &= 1 << w;
    }
    for (&j, &b) in l.blue_labels() {
        let c = *l2.blue_labels().get(&j).ok_or_else(|| Error::Label(format!("blue label {j} missing in target")))?;
        match e.blue_pin[b] {
            Some(prev) if prev != c => return Ok(BigUint::from(0u32)),
            _ => e.blue_pin[b] = Some(c),
        }
    }
    Ok(e.count())
}

/// Whether some hypergraph homomorphism into `P_n` is onto both vertices and hyperedges.
pub fn surjective_hom_exists(h: &Hypergraph, n: usize) -> Result<bool> {
    let p = Hypergraph::path(n)?.to_incidence();
    let mut found = false;
    for_each_hom(&h.to_incidence(), &p, Semantics::Hypergraph, &mut |hom| {
        let mut vs = vec![false; n + 1];
        let mut es = vec![false; n];
        hom.vertex.iter().for_each(|&v| vs[v] = true);
        hom.edge.iter().for_each(|&e| es[e] = true);
        found = vs.iter().all(|&x| x) && es.iter().all(|&x| x);
        !found
    })?;
    Ok(found)
}

/// Reference counts by trying every pair of maps.
pub mod naive {
    use super::*;

    fn odometer(len: usize, base: usize, mut f: impl FnMut(&[usize])) {
        if base == 0 {
            if len == 0 {
                f(&[]);
            }
            return;
        }
        let mut cur = vec![0; len];
        loop {
            f(&cur);
            let mut k = 0;
            while k < len && cur[k] == base - 1 {
                cur[k] = 0;
                k += 1;
            }
            if k == len {
                return;
            }
            cur[k] += 1;
        }
    }

    pub fn count(src: &IncidenceGraph, tgt: &IncidenceGraph, sem: Semantics) -> Result<BigUint> {
        let work = (tgt.num_blues() as f64).powi(src.num_blues() as i32) * (tgt.num_reds() as f64).powi(src.num_reds() as i32);
        if work > 5e7 {
            return Err(Error::SizeCap("naive enumeration above 5e7 map pairs".into()));
        }
        let mut total = 0u64;
        let tsets: Vec<Vec<usize>> = tgt.all_blue_nbrs().to_vec();
        odometer(src.num_blues(), tgt.num_blues(), |he| {
            odometer(src.num_reds(), tgt.num_reds(), |hv| {
                let ok = (0..src.num_blues()).all(|b| {
                    let mut img: Vec<usize> = src.blue_nbrs(b).iter().map(|&r| hv[r]).collect();
                    img.sort_unstable();
                    img.dedup();
                    match sem {
                        Semantics::Hypergraph => img == tsets[he[b]],
                        Semantics::Incidence => img.iter().all(|x| tsets[he[b]].contains(x)),
                    }
                });
                if ok {
                    total += 1;
                }
            });
        });
        Ok(BigUint::from(total))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::testutil::random_hypergraph;
    use proptest::prelude::*;

    fn edge_xy() -> Hypergraph {
        Hypergraph::from_edges(&[("e", &["x", "y"])]).unwrap()
    }

    #[test]
    fn single_edge_into_g() {
        let g = families::example_g();
        assert_eq!(count_hg_homs(&edge_xy(), &g).unwrap(), BigUint::from(6u32));
        assert_eq!(count_ig_homs(&edge_xy().to_incidence(), &g.to_incidence()).unwrap(), BigUint::from(21u32));
        assert_eq!(naive::count(&edge_xy().to_incidence(), &g.to_incidence(), Semantics::Hypergraph).unwrap(), BigUint::from(6u32));
        assert_eq!(naive::count(&edge_xy().to_incidence(), &g.to_incidence(), Semantics::Incidence).unwrap(), BigUint::from(21u32));
    }

    #[test]
    fn identity_exists() {
        let g = families::example_g();
        assert!(count_hg_homs(&g, &g).unwrap() >= BigUint::from(1u32));
        let i = g.to_incidence();
        assert!(count_ig_homs(&i, &i).unwrap() >= BigUint::from(1u32));
    }

    #[test]
    fn free_blue() {
        let lone = IncidenceGraph::new(vec![], vec!["e".into()], &[]).unwrap();
        let g = families::example_g().to_incidence();
        assert_eq!(count_ig_homs(&lone, &g).unwrap(), BigUint::from(4u32));
        assert_eq!(count_homs(&lone, &g, Semantics::Hypergraph).unwrap(), BigUint::from(0u32));
    }

    #[test]
    fn skew_distinguisher_separates_g1_h1() {
        let (g1, h1) = families::skew_pair(1).unwrap();
        let d = families::skew_distinguisher(1).unwrap();
        let a = count_hg_homs(&d, &g1).unwrap();
        let b = count_hg_homs(&d, &h1).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, naive::count(&d.to_incidence(), &g1.to_incidence(), Semantics::Hypergraph).unwrap());
        assert_eq!(b, naive::count(&d.to_incidence(), &h1.to_incidence(), Semantics::Hypergraph).unwrap());
    }

    #[test]
    fn surjections_onto_paths() {
        for n in 1..=5 {
            assert!(surjective_hom_exists(&Hypergraph::path(n).unwrap(), n).unwrap());
        }
        assert!(!surjective_hom_exists(&edge_xy(), 2).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_naive(a in any::<u64>(), b in any::<u64>()) {
            let f = random_hypergraph(a, 3, 3).to_incidence();
            let g = random_hypergraph(b, 4, 4).to_incidence();
            for sem in [Semantics::Hypergraph, Semantics::Incidence] {
                prop_assert_eq!(count_homs(&f, &g, sem).unwrap(), naive::count(&f, &g, sem).unwrap());
            }
        }

        #[test]
        fn equality_is_stricter(a in any::<u64>(), b in any::<u64>()) {
            let f = random_hypergraph(a, 4, 3);
            let g = random_hypergraph(b, 5, 4);
            prop_assert!(count_hg_homs(&f, &g).unwrap() <= count_ig_homs(&f.to_incidence(), &g.to_incidence()).unwrap());
        }

        #[test]
        fn multiplicative_over_disjoint_union(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
            let f1 = random_hypergraph(a, 3, 2);
            let f2 = random_hypergraph(b, 3, 2);
            let g = random_hypergraph(c, 4, 4);
            let u = f1.disjoint_union(&f2);
            prop_assert_eq!(count_hg_homs(&u, &g).unwrap(), count_hg_homs(&f1, &g).unwrap() * count_hg_homs(&f2, &g).unwrap());
            let (i1, i2, j) = (f1.to_incidence(), f2.to_incidence(), g.to_incidence());
            prop_assert_eq!(count_ig_homs(&u.to_incidence(), &j).unwrap(), count_ig_homs(&i1, &j).unwrap() * count_ig_homs(&i2, &j).unwrap());
        }

        #[test]
        fn images_of_connected_sources_are_connected(a in any::<u64>(), b in any::<u64>()) {
            let f = random_hypergraph(a, 4, 3);
            prop_assume!(f.is_connected());
            let g = random_hypergraph(b, 5, 5).to_incidence();
            let mut ok = true;
            for_each_hom(&f.to_incidence(), &g, Semantics::Hypergraph, &mut |h| {
                let mut img = h.edge.clone();
                img.sort_unstable();
                img.dedup();
                ok &= g.induced_by_blues(&img).is_connected();
                ok
            }).unwrap();
            prop_assert!(ok);
        }
    }
}
