use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shdepth::canon::canonical_form_coloured;
use shdepth::derivation::{derive_base, derive_glue, derive_remove_blue, derive_remove_red, derive_transition, extract_forest, Derivation};
use shdepth::gc::{eval, is_rgc, sentence_pool, wellformed_gck, Count, Formula, Interpretation, Vars};
use shdepth::homcount::{count_homs, count_labeled_homs, for_each_hom};
use shdepth::kli::{compatible, m_f};
use shdepth::*;

/// Hypergraph from an incidence matrix; empty rows get one vertex so every
/// hyperedge is nonempty.
fn from_matrix(n_v: usize, rows: &[Vec<bool>]) -> Hypergraph {
    let edges = rows
        .iter()
        .enumerate()
        .map(|(e, row)| {
            let mut c: Vec<String> = (0..n_v).filter(|&v| row[v]).map(|v| format!("v{v}")).collect();
            if c.is_empty() {
                c.push(format!("v{}", e % n_v));
            }
            (format!("e{e}"), c)
        })
        .collect();
    Hypergraph::new(None, edges).unwrap()
}

fn hypergraph(max_v: usize, max_e: usize) -> impl Strategy<Value = Hypergraph> {
    (1..=max_v, 1..=max_e)
        .prop_flat_map(|(n_v, n_e)| (Just(n_v), prop::collection::vec(prop::collection::vec(any::<bool>(), n_v), n_e)))
        .prop_map(|(n_v, rows)| from_matrix(n_v, &rows))
}

fn connected(max_v: usize, max_e: usize) -> impl Strategy<Value = Hypergraph> {
    hypergraph(max_v, max_e).prop_filter("connected", Hypergraph::is_connected)
}

/// Labels up to `k` blues and some of the reds next to them, with real guards.
fn labelled(h: &Hypergraph, seed: u64, k: usize, all: bool) -> KLabeledIncidenceGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let i = h.to_incidence();
    let mut blues: Vec<usize> = (0..i.num_blues()).collect();
    blues.shuffle(&mut rng);
    blues.truncate(if all { k } else { rng.gen_range(0..=k) });
    let blue: BTreeMap<usize, usize> = blues.iter().enumerate().map(|(j, &b)| (j + 1, b)).collect();
    let mut free: Vec<usize> = (1..=8).collect();
    free.shuffle(&mut rng);
    let (mut red, mut guard) = (BTreeMap::new(), BTreeMap::new());
    for r in 0..i.num_reds() {
        let near: Vec<usize> = blue.iter().filter(|(_, &b)| i.has_edge(b, r)).map(|(&j, _)| j).collect();
        if near.is_empty() || (!all && rng.gen_bool(0.4)) {
            continue;
        }
        let label = free.pop().unwrap();
        red.insert(label, r);
        guard.insert(label, *near.choose(&mut rng).unwrap());
    }
    KLabeledIncidenceGraph::new(i, k, red, blue, guard).unwrap()
}

/// Isomorphism key that respects labels and guards.
fn labelled_key(l: &KLabeledIncidenceGraph) -> (canon::CanonicalForm, BTreeMap<usize, usize>) {
    let s = l.skeleton();
    let mut rc = vec![0u64; s.num_reds()];
    for (&i, &v) in l.red_labels() {
        rc[v] = rc[v] * 64 + i as u64 + 1;
    }
    let mut bc = vec![0u64; s.num_blues()];
    for (&j, &b) in l.blue_labels() {
        bc[b] = bc[b] * 64 + j as u64 + 1;
    }
    (canonical_form_coloured(s, &rc, &bc, &Budget::default()).unwrap(), l.guards().clone())
}

fn covers_vertices(h: &Hypergraph) -> bool {
    (0..h.num_vertices()).all(|v| h.contents().iter().any(|c| c.contains(&v)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn incidence_round_trip(h in hypergraph(6, 5)) {
        prop_assert_eq!(h.to_incidence().to_hypergraph(), h);
    }

    #[test]
    fn mutations_keep_vertices_covered(h in hypergraph(6, 4), pick in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let e = rng.gen_range(0..h.num_edges());
        let pumped = h.pump(&h.edge_ids()[e], "fresh").unwrap();
        prop_assert!(covers_vertices(&pumped));
        let c = h.content(e);
        if c.len() >= 2 {
            let (u, v) = (&h.vertex_ids()[c[0]], &h.vertex_ids()[c[1]]);
            let merged = h.local_merge(&h.edge_ids()[e], u, v).unwrap();
            prop_assert!(covers_vertices(&merged));
            prop_assert_eq!(merged.num_vertices() + 1, h.num_vertices());
        }
    }

    #[test]
    fn components_partition(h in hypergraph(7, 5)) {
        let i = h.to_incidence();
        let parts = i.component_blues();
        let mut seen: Vec<usize> = parts.iter().flatten().copied().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..i.num_blues()).collect::<Vec<_>>());
        let pieces = i.connected_components();
        prop_assert_eq!(pieces.iter().map(|p| p.num_reds()).sum::<usize>(), i.num_reds());
        prop_assert!(pieces.iter().all(|p| p.is_connected()));
    }

    #[test]
    fn depth_sandwich_and_strictify(h in hypergraph(6, 5)) {
        let i = h.to_incidence();
        let (plain, strict) = (hd_exact(&i).unwrap(), shd_exact(&i).unwrap());
        prop_assert!(plain.depth <= strict.depth && strict.depth <= plain.depth + 1);
        prop_assert!(validate_strict_ef(&i, &strict.forest).unwrap().is_ok());
        prop_assert!(validate_ef(&i, &plain.forest).unwrap().is_ok());
        let s = strictify(&i, &plain.forest).unwrap();
        prop_assert!(validate_strict_ef(&i, &s).unwrap().is_ok());
        prop_assert!(s.height() <= plain.forest.height() + 1);
    }

    #[test]
    fn connected_witness_is_a_tree(h in connected(6, 5)) {
        let w = shd_exact(&h.to_incidence()).unwrap();
        prop_assert_eq!(w.forest.forest.roots().len(), 1);
    }

    #[test]
    fn shd_matches_brute_force(h in hypergraph(5, 4)) {
        let i = h.to_incidence();
        prop_assert_eq!(shd_exact(&i).unwrap().depth, elimination::shd_bruteforce(&i).unwrap());
    }

    #[test]
    fn hypergraph_homs_are_incidence_homs(f in hypergraph(4, 3), g in hypergraph(5, 4)) {
        let (fi, gi) = (f.to_incidence(), g.to_incidence());
        prop_assert!(count_hg_homs(&f, &g).unwrap() <= count_ig_homs(&fi, &gi).unwrap());
        let plain = KLabeledIncidenceGraph::label_free(fi.clone(), 1).unwrap();
        let target = KLabeledIncidenceGraph::label_free(gi.clone(), 1).unwrap();
        prop_assert_eq!(count_labeled_homs(&plain, &target).unwrap(), count_ig_homs(&fi, &gi).unwrap());
    }

    #[test]
    fn counts_multiply_over_disjoint_sources(a in hypergraph(3, 2), b in hypergraph(3, 2), g in hypergraph(4, 4)) {
        let (ai, bi, gi) = (a.to_incidence(), b.to_incidence(), g.to_incidence());
        let u = ai.disjoint_union(&bi);
        for sem in [homcount::Semantics::Hypergraph, homcount::Semantics::Incidence] {
            let whole = count_homs(&u, &gi, sem).unwrap();
            prop_assert_eq!(whole, count_homs(&ai, &gi, sem).unwrap() * count_homs(&bi, &gi, sem).unwrap());
        }
    }

    #[test]
    fn images_of_connected_sources_are_connected(f in connected(4, 3), g in hypergraph(5, 4)) {
        let (fi, gi) = (f.to_incidence(), g.to_incidence());
        let mut ok = true;
        for_each_hom(&fi, &gi, homcount::Semantics::Hypergraph, &mut |hom| {
            let mut img: Vec<usize> = hom.edge.clone();
            img.sort_unstable();
            img.dedup();
            ok = gi.induced_by_blues(&img).is_connected();
            ok
        }).unwrap();
        prop_assert!(ok);
    }

    #[test]
    fn glue_commutes_and_associates(
        a in hypergraph(4, 3), b in hypergraph(4, 3), c in hypergraph(4, 3), seeds in any::<[u64; 3]>()
    ) {
        let (la, lb, lc) = (labelled(&a, seeds[0], 3, false), labelled(&b, seeds[1], 3, false), labelled(&c, seeds[2], 3, false));
        prop_assume!(compatible(la.guards(), lb.guards()) && compatible(lb.guards(), lc.guards()) && compatible(la.guards(), lc.guards()));
        let ab = la.glue(&lb).unwrap().0;
        prop_assert_eq!(labelled_key(&ab), labelled_key(&lb.glue(&la).unwrap().0));
        let left = ab.glue(&lc).unwrap().0;
        let right = la.glue(&lb.glue(&lc).unwrap().0).unwrap().0;
        prop_assert_eq!(labelled_key(&left), labelled_key(&right));
    }

    #[test]
    fn merge_maps_are_homomorphisms(a in hypergraph(4, 3), b in hypergraph(4, 3), seeds in any::<[u64; 2]>()) {
        let (la, lb) = (labelled(&a, seeds[0], 3, false), labelled(&b, seeds[1], 3, false));
        let (g, maps) = la.glue(&lb).unwrap();
        for (side, l) in [&la, &lb].into_iter().enumerate() {
            for (x, rs) in l.skeleton().all_blue_nbrs().iter().enumerate() {
                for &r in rs {
                    prop_assert!(g.skeleton().has_edge(maps.blue[side][x], maps.red[side][r]));
                }
            }
        }
        if la.real_guards() && lb.real_guards() && compatible(la.guards(), lb.guards()) {
            prop_assert!(g.real_guards());
        }
    }

    #[test]
    fn transition_matches_its_definition(a in hypergraph(4, 3), seed in any::<u64>(), targets in prop::collection::vec(1usize..=3, 8)) {
        let l = labelled(&a, seed, 3, false);
        let pairs: Vec<(usize, usize)> = l.guards().keys().map(|&i| (i, targets[i - 1])).collect();
        let f = kli::TransitionFn::new(&pairs);
        prop_assume!(f.is_transition_for(l.guards()));
        let direct = l.apply_transition(&f).unwrap();
        let dropped = l.transition_drop(&f);
        let spelled = m_f(&f, 3).unwrap().glue(&l.remove_blue(&dropped).unwrap()).unwrap().0;
        prop_assert_eq!(&direct, &spelled);
        if l.real_guards() {
            prop_assert!(direct.real_guards());
        }
    }

    #[test]
    fn extracted_forests_fit_in_the_cost(bases in prop::collection::vec((hypergraph(4, 3), any::<u64>()), 1..4), ops in prop::collection::vec((0u8..4, any::<u64>()), 0..12)) {
        let mut pool: Vec<Arc<Derivation>> = Vec::new();
        for (h, seed) in &bases {
            if let Ok(d) = derive_base(labelled(h, *seed, 3, true)) {
                pool.push(Arc::new(d));
            }
        }
        prop_assume!(!pool.is_empty());
        for (op, seed) in ops {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = pool.choose(&mut rng).unwrap().clone();
            let l = d.result();
            let pick = |keys: Vec<usize>, rng: &mut ChaCha8Rng| -> BTreeSet<usize> { keys.into_iter().filter(|_| rng.gen_bool(0.5)).collect() };
            let next = match op {
                0 => derive_remove_red(d.clone(), pick(l.red_labels().keys().copied().collect(), &mut rng)),
                1 => derive_remove_blue(d.clone(), pick(l.blue_labels().keys().copied().collect(), &mut rng)),
                2 => derive_glue(d.clone(), pool.choose(&mut rng).unwrap().clone()),
                _ => {
                    let f: Vec<(usize, usize)> = l.guards().keys().map(|&i| (i, rng.gen_range(1..=3))).collect();
                    derive_transition(d.clone(), kli::TransitionFn::new(&f))
                }
            };
            if let Ok(n) = next {
                pool.push(Arc::new(n));
            }
        }
        for d in &pool {
            let forest = extract_forest(d);
            prop_assert!(forest.height().unwrap() <= d.cost());
            let l = d.result();
            if l.is_label_free() {
                let ef = forest.to_elimination_forest(l.skeleton()).unwrap();
                prop_assert!(validate_strict_ef(l.skeleton(), &ef).unwrap().is_ok());
            }
        }
    }
}

fn relabel(i: &IncidenceGraph, seed: u64) -> IncidenceGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reds: Vec<usize> = (0..i.num_reds()).collect();
    let mut blues: Vec<usize> = (0..i.num_blues()).collect();
    reds.shuffle(&mut rng);
    blues.shuffle(&mut rng);
    i.permuted(&reds, &blues)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn eval_is_isomorphism_invariant(h in hypergraph(5, 4), seed in any::<u64>(), pick in 0usize..80) {
        let pool = sentence_pool(2, 2, 20, 1, 80);
        let f = &pool[pick];
        let i = h.to_incidence();
        prop_assert_eq!(eval(f, &Interpretation::new(&i)).unwrap(), eval(f, &Interpretation::new(&relabel(&i, seed))).unwrap());
    }

    #[test]
    fn eval_with_assignments_is_invariant(h in hypergraph(5, 4), seed in any::<u64>(), pick in 0usize..60, at in any::<(usize, usize)>()) {
        let body = &sentence_pool(1, 1, 14, 5, 60)[pick];
        let f = Formula::exists(Count::AtLeast(1), Vars::Vertex(vec![1]), [(1, 1)].into(), Formula::and(Formula::Edge(1, 1), body.clone()));
        let i = h.to_incidence();
        let j = relabel(&i, seed);
        let e = &i.blue_ids()[at.0 % i.num_blues()];
        prop_assert_eq!(
            eval(&f, &Interpretation::with_ids(&i, &[], &[(1, e)]).unwrap()).unwrap(),
            eval(&f, &Interpretation::with_ids(&j, &[], &[(1, e)]).unwrap()).unwrap()
        );
    }

    #[test]
    fn desugaring_keeps_depth_and_free_variables(seed in any::<u64>(), k in 1usize..=2, d in 1usize..=3) {
        for f in sentence_pool(k, d, 30, seed, 20) {
            let g = f.desugar_eq();
            prop_assert_eq!(g.guard_depth(), f.guard_depth());
            prop_assert_eq!(g.free(), f.free());
        }
    }

    #[test]
    fn restricted_sentences_are_well_formed(seed in any::<u64>()) {
        for f in sentence_pool(2, 2, 30, seed, 40) {
            if is_rgc(&f, 2).is_ok() {
                prop_assert!(wellformed_gck(&f, 2).is_empty());
            }
        }
    }

    #[test]
    fn counting_quantifiers_are_monotone(h in hypergraph(5, 4), n in 1usize..4, pick in 0usize..40) {
        let body = sentence_pool(1, 1, 12, 9, 40)[pick].clone();
        let q = |m: usize| Formula::exists(
            Count::AtLeast(1), Vars::Edge(vec![1]), BTreeMap::new(),
            Formula::exists(Count::AtLeast(m), Vars::Vertex(vec![1]), [(1, 1)].into(), Formula::and(Formula::Edge(1, 1), body.clone())),
        );
        let i = h.to_incidence();
        let at = |m| eval(&q(m), &Interpretation::new(&i)).unwrap();
        prop_assert!(!at(n + 1) || at(n));
    }
}
