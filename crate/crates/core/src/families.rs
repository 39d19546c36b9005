//! Named instances and exhaustive small-instance enumeration.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use crate::budget::Budget;
use crate::canon::canonical_form_hg;
use crate::elimination::EliminationForest;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, IncidenceGraph};

fn hg(edges: &[(&str, &[&str])]) -> Hypergraph {
    Hypergraph::from_edges(edges).expect("fixed instance is valid")
}

pub fn example_g() -> Hypergraph {
    hg(&[("i", &["a", "b"]), ("j", &["b", "c"]), ("k", &["a", "c"]), ("l", &["a", "b", "c"])])
}

pub fn example_h() -> Hypergraph {
    Hypergraph::new(
        Some(["u", "v", "w", "x", "y", "z", "t"].map(String::from).to_vec()),
        vec![
            ("e".into(), ["u", "v", "x"].map(String::from).to_vec()),
            ("f".into(), ["v", "w", "z"].map(String::from).to_vec()),
            ("g".into(), ["u", "w", "y"].map(String::from).to_vec()),
            ("h".into(), ["t", "x", "y", "z"].map(String::from).to_vec()),
        ],
    )
    .expect("fixed instance is valid")
}

/// `P_7` with letter names: vertices `s..z`, hyperedges `a..g`.
pub fn p7_letters() -> Hypergraph {
    hg(&[
        ("a", &["s", "t"]),
        ("b", &["t", "u"]),
        ("c", &["u", "v"]),
        ("d", &["v", "w"]),
        ("e", &["w", "x"]),
        ("f", &["x", "y"]),
        ("g", &["y", "z"]),
    ])
}

/// Balanced strict elimination tree of height 3 for [`p7_letters`].
pub fn p7_tree() -> EliminationForest {
    EliminationForest::from_triples(&[
        ("t1", None, "d"),
        ("t2", Some("t1"), "b"),
        ("t3", Some("t1"), "f"),
        ("t4", Some("t2"), "a"),
        ("t5", Some("t2"), "c"),
        ("t6", Some("t3"), "e"),
        ("t7", Some("t3"), "g"),
    ])
    .expect("fixed forest is valid")
}

/// Hand-drawn forests: a star for `H`, one node and a star for `G`, and a
/// balanced tree for `P_15`.
pub fn drawn_forests() -> BTreeMap<&'static str, EliminationForest> {
    let mut out = BTreeMap::new();
    out.insert(
        "h-star",
        EliminationForest::from_triples(&[("t1", None, "h"), ("t2", Some("t1"), "e"), ("t3", Some("t1"), "f"), ("t4", Some("t1"), "g")])
            .unwrap(),
    );
    out.insert("g-single", EliminationForest::from_triples(&[("t1", None, "l")]).unwrap());
    out.insert(
        "g-star",
        EliminationForest::from_triples(&[("t1", None, "l"), ("t2", Some("t1"), "j"), ("t3", Some("t1"), "i"), ("t4", Some("t1"), "k")])
            .unwrap(),
    );
    // P_15 uses e_i -> {i, i+1}; nodes are named after the lower endpoint
    let tree: [(usize, Option<usize>); 15] = [
        (8, None),
        (4, Some(8)),
        (12, Some(8)),
        (2, Some(4)),
        (6, Some(4)),
        (1, Some(2)),
        (3, Some(2)),
        (5, Some(6)),
        (7, Some(6)),
        (10, Some(12)),
        (14, Some(12)),
        (9, Some(10)),
        (11, Some(10)),
        (13, Some(14)),
        (15, Some(14)),
    ];
    let names: Vec<(String, Option<String>, String)> =
        tree.iter().map(|(n, p)| (format!("n{n}"), p.map(|p| format!("n{p}")), format!("e{n}"))).collect();
    let triples: Vec<(&str, Option<&str>, &str)> = names.iter().map(|(n, p, e)| (n.as_str(), p.as_deref(), e.as_str())).collect();
    out.insert("p15-balanced", EliminationForest::from_triples(&triples).unwrap());
    out
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > 6 {
        return Err(Error::SizeCap(format!("k = {k} (at most 6 supported)")));
    }
    Ok(())
}

/// A cycle `u1 .. u_n` closed by hyperedge `e`, plus extra hyperedges.
fn cycle_with(n_path_edges: usize, extra: &[(&str, Vec<String>)]) -> Hypergraph {
    let mut edges: Vec<(String, Vec<String>)> =
        (1..=n_path_edges).map(|i| (format!("p{i}"), vec![format!("u{i}"), format!("u{}", i + 1)])).collect();
    edges.push(("e".into(), vec![format!("u{}", n_path_edges + 1), "u1".into()]));
    edges.extend(extra.iter().map(|(e, c)| (e.to_string(), c.clone())));
    Hypergraph::new(None, edges).expect("cycle construction is valid")
}

fn square(extra: &[(&str, &[&str])]) -> Hypergraph {
    let mut edges: Vec<(&str, &[&str])> = vec![("ab", &["a", "b"]), ("bd", &["b", "d"]), ("dc", &["d", "c"]), ("ca", &["c", "a"])];
    edges.extend_from_slice(extra);
    hg(&edges)
}

/// `(G_k, H_k)`: cycles with two singleton hyperedges at different distances.
pub fn skew_pair(k: usize) -> Result<(Hypergraph, Hypergraph)> {
    check_k(k)?;
    if k == 1 {
        return Ok((square(&[("f", &["d"]), ("g", &["c"])]), square(&[("f", &["b"]), ("g", &["c"])])));
    }
    let n = (1 << (k + 1)) + 1;
    let u = |i: usize| vec![format!("u{i}")];
    let g = cycle_with(n, &[("f", u(1)), ("g", u((1 << k) + 1))]);
    let h = cycle_with(n, &[("f", u(1)), ("g", u((1 << k) + 2))]);
    Ok((g, h))
}

/// `(G'_k, H'_k)`: cycles with two pendant 2-vertex handles.
pub fn skew_pair_prime(k: usize) -> Result<(Hypergraph, Hypergraph)> {
    check_k(k)?;
    if k == 1 {
        return Ok((square(&[("f", &["d", "s"]), ("g", &["c", "s2"])]), square(&[("f", &["b", "s"]), ("g", &["c", "s2"])])));
    }
    let n = (1 << (k + 2)) + 1;
    let pair = |i: usize, x: &str| vec![format!("u{i}"), x.to_string()];
    let g = cycle_with(n, &[("f", pair(1, "v")), ("g", pair((1 << (k + 1)) - 2, "w"))]);
    let h = cycle_with(n, &[("f", pair(1, "v")), ("g", pair((1 << (k + 1)) - 1, "w"))]);
    Ok((g, h))
}

fn path_with_singletons(n_edges: usize, first: usize, second: usize) -> Result<Hypergraph> {
    let mut edges: Vec<(String, Vec<String>)> =
        (1..=n_edges).map(|i| (format!("p{i}"), vec![format!("v{i}"), format!("v{}", i + 1)])).collect();
    if second == 0 || second > n_edges + 1 {
        return Err(Error::InvalidArgument(format!("attachment index {second} outside 1..={}", n_edges + 1)));
    }
    edges.push(("f'".into(), vec![format!("v{first}")]));
    edges.push(("g'".into(), vec![format!("v{second}")]));
    Hypergraph::new(None, edges)
}

/// Member of `HD_k` telling `G_k` and `H_k` apart.
pub fn skew_distinguisher(k: usize) -> Result<Hypergraph> {
    check_k(k)?;
    if k == 1 {
        return Ok(hg(&[("p1", &["v1", "v2"]), ("f'", &["v1"]), ("g'", &["v2"])]));
    }
    path_with_singletons(1 << k, 1, (1 << k) + 1)
}

/// Incidence graph in `IHD_k` telling `I_{G'_k}` and `I_{H'_k}` apart.
/// `attach` overrides the vertex index of the second singleton; the default
/// for `k >= 2` is `2^k - 1`.
pub fn skew_prime_distinguisher(k: usize, attach: Option<usize>) -> Result<IncidenceGraph> {
    check_k(k)?;
    if k == 1 {
        let second = attach.unwrap_or(2);
        return Ok(path_with_singletons(1, 1, second)?.to_incidence());
    }
    let second = attach.unwrap_or((1 << k) - 1);
    Ok(path_with_singletons((1 << (k + 1)) - 3, 1, second)?.to_incidence())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    ExampleG,
    ExampleH,
    Path(usize),
    Skew(usize),
    SkewPrime(usize),
    SkewDistinguisher(usize),
    SkewPrimeDistinguisher { k: usize, attach: Option<usize> },
}

impl FamilySpec {
    /// The named hypergraphs; pairs yield two entries.
    pub fn build(&self) -> Result<Vec<Hypergraph>> {
        Ok(match self {
            FamilySpec::ExampleG => vec![example_g()],
            FamilySpec::ExampleH => vec![example_h()],
            FamilySpec::Path(n) => vec![Hypergraph::path(*n)?],
            FamilySpec::Skew(k) => {
                let (g, h) = skew_pair(*k)?;
                vec![g, h]
            }
            FamilySpec::SkewPrime(k) => {
                let (g, h) = skew_pair_prime(*k)?;
                vec![g, h]
            }
            FamilySpec::SkewDistinguisher(k) => vec![skew_distinguisher(*k)?],
            FamilySpec::SkewPrimeDistinguisher { k, attach } => vec![skew_prime_distinguisher(*k, *attach)?.to_hypergraph()],
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBounds {
    pub max_edges: usize,
    pub max_vertices: usize,
    pub connected_only: bool,
}

impl EnumerationBounds {
    pub fn new(max_edges: usize, max_vertices: usize, connected_only: bool) -> Self {
        EnumerationBounds { max_edges, max_vertices, connected_only }
    }
}

/// Every hypergraph with 1..=max_edges nonempty hyperedges on at most
/// max_vertices vertices, one per isomorphism class, in a fixed order.
pub fn enumerate_hypergraphs(b: &EnumerationBounds) -> Result<Vec<Hypergraph>> {
    enumerate_hypergraphs_with(b, &Budget::default())
}

pub fn enumerate_hypergraphs_with(b: &EnumerationBounds, budget: &Budget) -> Result<Vec<Hypergraph>> {
    if b.max_edges == 0 || b.max_vertices == 0 {
        return Err(Error::InvalidArgument("enumeration bounds must be positive".into()));
    }
    if b.max_vertices > 12 || b.max_edges > 8 {
        return Err(Error::SizeCap("enumeration handles at most 8 edges on 12 vertices".into()));
    }
    let mut raw: Vec<Vec<u32>> = Vec::new();
    let mut seq = Vec::new();
    let mut degree = vec![0usize; b.max_vertices];
    extend(b, 1, &mut seq, &mut degree, &mut raw, budget)?;
    let candidates: Vec<Hypergraph> = raw.iter().map(|s| from_masks(s)).filter(|h| !b.connected_only || h.is_connected()).collect();
    let forms = candidates.par_iter().map(canonical_form_hg).collect::<Result<Vec<_>>>()?;
    let mut seen = HashSet::new();
    Ok(candidates.into_iter().zip(forms).filter(|(_, f)| seen.insert(f.clone())).map(|(h, _)| h).collect())
}

/// Grows nondecreasing mask sequences. Only sequences whose vertex degrees
/// are nonincreasing are kept: every class has such a labelling, and it
/// forces the used vertices to form a prefix.
fn extend(
    b: &EnumerationBounds,
    min_mask: u32,
    seq: &mut Vec<u32>,
    degree: &mut [usize],
    out: &mut Vec<Vec<u32>>,
    budget: &Budget,
) -> Result<()> {
    if !seq.is_empty() && degree.windows(2).all(|w| w[0] >= w[1]) {
        out.push(seq.clone());
    }
    if seq.len() == b.max_edges {
        return Ok(());
    }
    for m in min_mask..(1u32 << b.max_vertices) {
        budget.tick("enumeration")?;
        for (v, d) in degree.iter_mut().enumerate() {
            if m & (1 << v) != 0 {
                *d += 1;
            }
        }
        seq.push(m);
        extend(b, m, seq, degree, out, budget)?;
        seq.pop();
        for (v, d) in degree.iter_mut().enumerate() {
            if m & (1 << v) != 0 {
                *d -= 1;
            }
        }
    }
    Ok(())
}

fn from_masks(seq: &[u32]) -> Hypergraph {
    let used = seq.iter().fold(0u32, |a, m| a | m);
    let n = 32 - used.leading_zeros() as usize;
    Hypergraph::from_raw(
        (1..=n).map(|v| format!("v{v}")).collect(),
        (1..=seq.len()).map(|e| format!("e{e}")).collect(),
        seq.iter().map(|m| (0..n).filter(|v| m & (1 << v) != 0).collect()).collect(),
    )
    .expect("masks over a vertex prefix form a valid hypergraph")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::{canonical_form, isomorphic};

    #[test]
    fn examples() {
        assert_eq!((example_g().num_vertices(), example_g().num_edges()), (3, 4));
        assert_eq!((example_h().num_vertices(), example_h().num_edges()), (7, 4));
        assert_eq!(example_g().to_incidence().num_edges(), 9);
        assert_eq!(example_h().to_incidence().num_edges(), 13);
    }

    #[test]
    fn skew_sizes_and_degrees() {
        let (g1, h1) = skew_pair(1).unwrap();
        assert_eq!((g1.num_edges(), h1.num_edges()), (6, 6));
        let (g2, _) = skew_pair(2).unwrap();
        assert_eq!(g2.num_edges(), 12);
        for k in 1..=3 {
            for (g, h) in [skew_pair(k).unwrap(), skew_pair_prime(k).unwrap()] {
                assert_eq!((g.num_vertices(), g.num_edges()), (h.num_vertices(), h.num_edges()));
                let degs = |x: &Hypergraph| {
                    let mut d: Vec<usize> = x.to_incidence().red_nbrs().iter().map(Vec::len).collect();
                    d.sort_unstable();
                    d
                };
                assert_eq!(degs(&g), degs(&h));
                assert!(!isomorphic(&g.to_incidence(), &h.to_incidence()).unwrap());
            }
        }
        let (g1p, _) = skew_pair_prime(1).unwrap();
        assert_eq!(g1p.num_edges(), 6);
        assert!(skew_pair(0).is_err());
    }

    #[test]
    fn one_edge_three_vertices() {
        let all = enumerate_hypergraphs(&EnumerationBounds::new(1, 3, false)).unwrap();
        let sizes: Vec<usize> = all.iter().map(|h| h.content(0).len()).collect();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn connected_filter_and_dedupe() {
        let all = enumerate_hypergraphs(&EnumerationBounds::new(3, 4, false)).unwrap();
        let conn = enumerate_hypergraphs(&EnumerationBounds::new(3, 4, true)).unwrap();
        assert!(conn.iter().all(|h| h.is_connected()));
        assert_eq!(conn.len(), all.iter().filter(|h| h.is_connected()).count());
        let forms: HashSet<_> = all.iter().map(|h| canonical_form(&h.to_incidence()).unwrap()).collect();
        assert_eq!(forms.len(), all.len());
    }

    /// Independent count: all multisets of nonempty subsets, deduplicated by
    /// trying every vertex permutation.
    fn brute_count(max_e: usize, max_v: usize) -> usize {
        let subsets: Vec<u32> = (1..(1u32 << max_v)).collect();
        let perms: Vec<Vec<usize>> = crate::testutil::all_perms(max_v).collect();
        let mut classes: HashSet<Vec<u32>> = HashSet::new();
        fn rec(start: usize, left: usize, subsets: &[u32], cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
            if !cur.is_empty() {
                f(cur);
            }
            if left == 0 {
                return;
            }
            for i in start..subsets.len() {
                cur.push(subsets[i]);
                rec(i, left - 1, subsets, cur, f);
                cur.pop();
            }
        }
        rec(0, max_e, &subsets, &mut Vec::new(), &mut |seq| {
            let best = perms
                .iter()
                .map(|p| {
                    let mut s: Vec<u32> =
                        seq.iter().map(|m| (0..max_v).filter(|v| m & (1 << v) != 0).fold(0, |a, v| a | 1 << p[v])).collect();
                    s.sort_unstable();
                    s
                })
                .min()
                .unwrap();
            classes.insert(best);
        });
        classes.len()
    }

    #[test]
    fn golden_counts() {
        for (e, v) in [(1, 3), (2, 3), (3, 3), (2, 4), (3, 4)] {
            let n = enumerate_hypergraphs(&EnumerationBounds::new(e, v, false)).unwrap().len();
            assert_eq!(n, brute_count(e, v), "bounds ({e},{v})");
        }
        assert_eq!(enumerate_hypergraphs(&EnumerationBounds::new(2, 3, false)).unwrap().len(), 12);
    }

    #[test]
    fn distinguishers() {
        let d = skew_distinguisher(1).unwrap();
        assert_eq!(d.num_edges(), 3);
        let p = skew_prime_distinguisher(2, None).unwrap();
        assert_eq!(p.num_blues(), 5 + 2);
        assert!(skew_prime_distinguisher(2, Some(99)).is_err());
    }

    #[test]
    fn pumping_leaves_hd_1() {
        let hd = |h: &Hypergraph| crate::elimination::hd_exact(&h.to_incidence()).unwrap().depth;
        let d = skew_distinguisher(1).unwrap();
        assert_eq!(hd(&d), 1);
        assert_eq!(hd(&d.pump("f'", "q").unwrap()), 2);
        // G_1 starts above 1 already
        let (g1, _) = skew_pair(1).unwrap();
        assert_eq!(hd(&g1), 2);
        assert_eq!(hd(&g1.pump("f", "q").unwrap()), 2);
    }
}
