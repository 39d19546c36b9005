//! Derivation trees over k-labeled incidence graphs with their cost index,
//! the construction from a strict elimination forest, and the forest
//! extraction that goes the other way.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::budget::Budget;
use crate::canon::canonical_form_coloured;
use crate::elimination::{validate_strict_ef, EliminationForest};
use crate::error::{Error, Result};
use crate::forest::RootedForest;
use crate::hypergraph::IncidenceGraph;
use crate::kli::{compatible, KLabeledIncidenceGraph, MergeMaps, TransitionFn};

#[derive(Clone, Debug)]
pub enum Step {
    Base,
    Glue(Arc<Derivation>, Arc<Derivation>),
    Transition(Arc<Derivation>, TransitionFn),
    RemoveRed(Arc<Derivation>, BTreeSet<usize>),
    RemoveBlue(Arc<Derivation>, BTreeSet<usize>),
}

/// One node of a derivation with its result and cost cached.
#[derive(Clone, Debug)]
pub struct Derivation {
    step: Step,
    result: KLabeledIncidenceGraph,
    cost: usize,
    maps: Option<MergeMaps>,
}

impl Derivation {
    pub fn step(&self) -> &Step {
        &self.step
    }

    pub fn result(&self) -> &KLabeledIncidenceGraph {
        &self.result
    }

    pub fn cost(&self) -> usize {
        self.cost
    }

    /// Merge maps of a glue or transition node.
    pub fn merge_maps(&self) -> Option<&MergeMaps> {
        self.maps.as_ref()
    }

    /// Membership in the class with at most `i` serial blue-label removals.
    pub fn within(&self, i: usize) -> bool {
        self.cost <= i
    }

    /// Number of nodes in the derivation tree.
    pub fn size(&self) -> usize {
        1 + match &self.step {
            Step::Base => 0,
            Step::Glue(a, b) => a.size() + b.size(),
            Step::Transition(c, _) | Step::RemoveRed(c, _) | Step::RemoveBlue(c, _) => c.size(),
        }
    }
}

/// Every vertex labelled and every guard real.
pub fn derive_base(l: KLabeledIncidenceGraph) -> Result<Derivation> {
    let s = l.skeleton();
    let reds: BTreeSet<usize> = l.red_labels().values().copied().collect();
    let blues: BTreeSet<usize> = l.blue_labels().values().copied().collect();
    if reds.len() != s.num_reds() || blues.len() != s.num_blues() {
        return Err(Error::SideCondition("base graphs label every vertex".into()));
    }
    if !l.real_guards() {
        return Err(Error::SideCondition("base graph guards are not real".into()));
    }
    Ok(Derivation { step: Step::Base, result: l, cost: 0, maps: None })
}

pub fn derive_glue(a: Arc<Derivation>, b: Arc<Derivation>) -> Result<Derivation> {
    if !compatible(a.result.guards(), b.result.guards()) {
        return Err(Error::SideCondition("glue operands have incompatible guards".into()));
    }
    let (result, maps) = a.result.glue(&b.result)?;
    let cost = a.cost.max(b.cost);
    Ok(Derivation { step: Step::Glue(a, b), result, cost, maps: Some(maps) })
}

pub fn derive_transition(d: Arc<Derivation>, f: TransitionFn) -> Result<Derivation> {
    let (result, maps, dropped) = d.result.transition_parts(&f)?;
    let cost = d.cost + dropped.len();
    Ok(Derivation { step: Step::Transition(d, f), result, cost, maps: Some(maps) })
}

pub fn derive_remove_red(d: Arc<Derivation>, labels: BTreeSet<usize>) -> Result<Derivation> {
    let result = d.result.remove_red(&labels)?;
    let cost = d.cost;
    Ok(Derivation { step: Step::RemoveRed(d, labels), result, cost, maps: None })
}

/// Blue labels still used as guards cannot be removed.
pub fn derive_remove_blue(d: Arc<Derivation>, labels: BTreeSet<usize>) -> Result<Derivation> {
    if let Some(j) = d.result.guards().values().find(|j| labels.contains(j)) {
        return Err(Error::SideCondition(format!("blue label {j} is still a guard")));
    }
    let result = d.result.remove_blue(&labels)?;
    let cost = d.cost + labels.len();
    Ok(Derivation { step: Step::RemoveBlue(d, labels), result, cost, maps: None })
}

/// Builds a label-free derivation whose skeleton is isomorphic to `i`,
/// following the strict forest bottom-up. Trees of a forest are glued.
pub fn build_from_strict_ef(i: &IncidenceGraph, ef: &EliminationForest, k: usize) -> Result<Derivation> {
    let verdict = validate_strict_ef(i, ef)?;
    if !verdict.is_ok() {
        let msg: Vec<String> = verdict.violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::InvalidForest(msg.join("; ")));
    }
    if ef.height() > k {
        return Err(Error::InvalidArgument(format!("forest height {} exceeds k = {k}", ef.height())));
    }
    let b = Builder { i, forest: &ef.forest, gamma: ef.resolve(i)?, k };
    let mut out: Option<Arc<Derivation>> = None;
    for root in ef.forest.roots() {
        let top = b.node(root)?;
        let labels: BTreeSet<usize> = top.result.red_labels().keys().copied().collect();
        let d = derive_remove_blue(Arc::new(derive_remove_red(top, labels)?), [1].into())?;
        out = Some(Arc::new(match out {
            None => d,
            Some(acc) => derive_glue(acc, Arc::new(d))?,
        }));
    }
    match out {
        Some(d) => Ok(Arc::try_unwrap(d).unwrap_or_else(|d| (*d).clone())),
        None => derive_base(KLabeledIncidenceGraph::label_free(IncidenceGraph::default(), k)?),
    }
}

struct Builder<'a> {
    i: &'a IncidenceGraph,
    forest: &'a RootedForest,
    gamma: Vec<usize>,
    k: usize,
}

impl Builder<'_> {
    /// Red labels are global red indices plus one.
    fn labels(&self, nodes: &[usize]) -> BTreeSet<usize> {
        nodes.iter().flat_map(|&n| self.i.blue_nbrs(self.gamma[n]).iter().map(|r| r + 1)).collect()
    }

    fn node(&self, n: usize) -> Result<Arc<Derivation>> {
        let children = self.forest.children(n);
        if children.is_empty() {
            return Ok(Arc::new(derive_base(self.leaf(n)?)?));
        }
        let level = self.forest.level(n);
        let stem = self.labels(&self.forest.path(n));
        let mut acc: Option<Arc<Derivation>> = None;
        for c in children {
            let below = self.node(c)?;
            let drop: BTreeSet<usize> = self.labels(&[c]).difference(&stem).copied().collect();
            let trimmed = derive_remove_blue(Arc::new(derive_remove_red(below, drop)?), [level + 1].into())?;
            acc = Some(Arc::new(match acc {
                None => trimmed,
                Some(a) => derive_glue(a, Arc::new(trimmed))?,
            }));
        }
        Ok(acc.expect("inner node has children"))
    }

    /// The induced graph on the root path of a leaf, fully labelled, each
    /// red guarded by the topmost node containing it.
    fn leaf(&self, n: usize) -> Result<KLabeledIncidenceGraph> {
        let path = self.forest.path(n);
        let blues: Vec<usize> = path.iter().map(|&t| self.gamma[t]).collect();
        let sub = self.i.induced_by_blues(&blues);
        let mut red = BTreeMap::new();
        let mut guard = BTreeMap::new();
        for (x, id) in sub.red_ids().iter().enumerate() {
            let global = self.i.red_index(id).expect("induced red exists");
            red.insert(global + 1, x);
            let top = blues.iter().position(|&b| self.i.blue_nbrs(b).binary_search(&global).is_ok()).expect("red lies on the path");
            guard.insert(global + 1, top + 1);
        }
        let blue = (0..blues.len()).map(|j| (j + 1, sub.blue_index(&self.i.blue_ids()[blues[j]]).unwrap())).collect();
        KLabeledIncidenceGraph::new(sub, self.k, red, blue, guard)
    }
}

/// Checks an intermediate graph of the construction at node `n` against the
/// induced graph on the subtree with stem of `n`: blue labels are exactly
/// the stem levels, guards pick the topmost stem node, and the labelled
/// graphs are isomorphic.
pub fn check_intermediate(i: &IncidenceGraph, ef: &EliminationForest, n: usize, l: &KLabeledIncidenceGraph) -> Result<bool> {
    let f = &ef.forest;
    let gamma = ef.resolve(i)?;
    let path = f.path(n);
    let d = path.len();
    if !l.blue_labels().keys().copied().eq(1..=d) {
        return Ok(false);
    }
    let mut expect_guard = BTreeMap::new();
    for (j, &t) in path.iter().enumerate() {
        for &r in i.blue_nbrs(gamma[t]) {
            expect_guard.entry(r + 1).or_insert(j + 1);
        }
    }
    if l.guards() != &expect_guard {
        return Ok(false);
    }
    let nodes: Vec<usize> = f.subtree_with_stem(n).into_iter().collect();
    let blues: Vec<usize> = nodes.iter().map(|&t| gamma[t]).collect();
    let sub = i.induced_by_blues(&blues);
    let red_col: Vec<u64> = sub
        .red_ids()
        .iter()
        .map(|id| {
            let g = i.red_index(id).unwrap() + 1;
            if expect_guard.contains_key(&g) {
                g as u64
            } else {
                0
            }
        })
        .collect();
    let mut blue_col = vec![0u64; sub.num_blues()];
    for (j, &t) in path.iter().enumerate() {
        blue_col[sub.blue_index(&i.blue_ids()[gamma[t]]).unwrap()] = j as u64 + 1;
    }
    let (lr, lb) = label_colours(l);
    let budget = Budget::default();
    Ok(canonical_form_coloured(&sub, &red_col, &blue_col, &budget)? == canonical_form_coloured(l.skeleton(), &lr, &lb, &budget)?)
}

/// Vertex colours encoding labels; unlabelled vertices get 0. Assumes the
/// label maps are injective, as they are inside the construction.
fn label_colours(l: &KLabeledIncidenceGraph) -> (Vec<u64>, Vec<u64>) {
    let mut red = vec![0u64; l.skeleton().num_reds()];
    for (&i, &v) in l.red_labels() {
        red[v] = i as u64;
    }
    let mut blue = vec![0u64; l.skeleton().num_blues()];
    for (&j, &b) in l.blue_labels() {
        blue[b] = j as u64;
    }
    (red, blue)
}

/// A forest over the unlabelled blues of a derivation result. Node `x` maps
/// to blue `gamma[x]` of the result skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractedForest {
    pub parent: Vec<Option<usize>>,
    pub gamma: Vec<usize>,
}

impl ExtractedForest {
    pub fn to_elimination_forest(&self, skeleton: &IncidenceGraph) -> Result<EliminationForest> {
        let forest = RootedForest::from_parents((1..=self.parent.len()).map(|n| format!("t{n}")).collect(), self.parent.clone())?;
        let gamma = self.gamma.iter().map(|&b| skeleton.blue_ids()[b].clone()).collect();
        EliminationForest::new(forest, gamma)
    }

    pub fn height(&self) -> Result<usize> {
        Ok(RootedForest::from_parents((0..self.parent.len()).map(|n| n.to_string()).collect(), self.parent.clone())?.height())
    }
}

/// Reads a forest off a derivation: removed blue labels become chains above
/// the forest built so far.
pub fn extract_forest(d: &Derivation) -> ExtractedForest {
    match &d.step {
        Step::Base => ExtractedForest { parent: Vec::new(), gamma: Vec::new() },
        Step::RemoveRed(c, _) => extract_forest(c),
        Step::RemoveBlue(c, labels) => {
            let inner = extract_forest(c);
            let chain: Vec<usize> = labels.iter().map(|j| c.result.blue_labels()[j]).collect();
            prepend_chain(inner, &chain, |b| b)
        }
        Step::Glue(a, b) => {
            let maps = d.maps.as_ref().expect("glue nodes carry merge maps");
            let (fa, fb) = (extract_forest(a), extract_forest(b));
            let off = fa.parent.len();
            let mut parent = fa.parent;
            parent.extend(fb.parent.iter().map(|p| p.map(|x| x + off)));
            let mut gamma: Vec<usize> = fa.gamma.iter().map(|&x| maps.blue[0][x]).collect();
            gamma.extend(fb.gamma.iter().map(|&x| maps.blue[1][x]));
            ExtractedForest { parent, gamma }
        }
        Step::Transition(c, f) => {
            let maps = d.maps.as_ref().expect("transition nodes carry merge maps");
            let inner = extract_forest(c);
            let dropped = c.result.transition_drop(f);
            let chain: Vec<usize> = dropped.iter().map(|j| c.result.blue_labels()[j]).collect();
            prepend_chain(inner, &chain, |b| maps.blue[1][b])
        }
    }
}

fn prepend_chain(inner: ExtractedForest, chain: &[usize], map: impl Fn(usize) -> usize) -> ExtractedForest {
    if chain.is_empty() {
        return ExtractedForest { parent: inner.parent, gamma: inner.gamma.into_iter().map(&map).collect() };
    }
    let l = chain.len();
    let mut parent: Vec<Option<usize>> = (0..l).map(|x| x.checked_sub(1)).collect();
    let mut gamma: Vec<usize> = chain.iter().map(|&b| map(b)).collect();
    parent.extend(inner.parent.iter().map(|p| Some(p.map_or(l - 1, |x| x + l))));
    gamma.extend(inner.gamma.into_iter().map(map));
    ExtractedForest { parent, gamma }
}
