//! Elimination forests: validation, exact (strict) hypertree depth with
//! witnesses, and strictification.

use std::collections::HashMap;
use std::fmt;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::forest::RootedForest;
use crate::hypergraph::IncidenceGraph;

/// A rooted forest together with the node → hyperedge map.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EliminationForest {
    pub forest: RootedForest,
    /// Hyperedge (blue) id for every node, indexed like the forest nodes.
    pub gamma: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthWitness {
    pub depth: usize,
    pub forest: EliminationForest,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Condition 1: a vertex lies in no node's content.
    VertexNotCovered { vertex: String },
    /// Condition 2: no root path covers the hyperedge.
    EdgeNotContained { edge: String },
    /// Condition 3: two nodes share vertices not covered above their lcv.
    SharedHeritage { s: String, t: String, missing: Vec<String> },
    /// Strictness: the map is not a bijection onto the hyperedges.
    NotBijective { edge: String, nodes: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexNotCovered { vertex } => write!(f, "completeness: vertex {vertex} is in no node"),
            Violation::EdgeNotContained { edge } => write!(f, "containment: hyperedge {edge} is not covered by any root path"),
            Violation::SharedHeritage { s, t, missing } => {
                write!(f, "shared heritage: nodes {s},{t} share {} without cover", missing.join(","))
            }
            Violation::NotBijective { edge, nodes } => write!(f, "bijectivity: hyperedge {edge} has {nodes} nodes"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl EliminationForest {
    pub fn new(forest: RootedForest, gamma: Vec<String>) -> Result<Self> {
        if forest.len() != gamma.len() {
            return Err(Error::InvalidForest("one hyperedge per node expected".into()));
        }
        Ok(EliminationForest { forest, gamma })
    }

    pub fn empty() -> Self {
        EliminationForest::default()
    }

    /// Builds from `(node, parent, hyperedge)` triples.
    pub fn from_triples(nodes: &[(&str, Option<&str>, &str)]) -> Result<Self> {
        let pairs: Vec<_> = nodes.iter().map(|(n, p, _)| (n.to_string(), p.map(str::to_string))).collect();
        let forest = RootedForest::new(&pairs)?;
        EliminationForest::new(forest, nodes.iter().map(|(_, _, e)| e.to_string()).collect())
    }

    pub fn height(&self) -> usize {
        self.forest.height()
    }

    /// Blue index of every node; fails on ids unknown to `i`.
    pub fn resolve(&self, i: &IncidenceGraph) -> Result<Vec<usize>> {
        self.gamma.iter().map(|e| i.blue_index(e).ok_or_else(|| Error::UnknownEdge(e.clone()))).collect()
    }

    /// Whether the node map is a bijection onto the blues of `i`.
    pub fn is_strict_for(&self, i: &IncidenceGraph) -> Result<bool> {
        Ok(bijectivity(i, &self.resolve(i)?).is_empty())
    }
}

fn bijectivity(i: &IncidenceGraph, gamma: &[usize]) -> Vec<Violation> {
    let mut count = vec![0usize; i.num_blues()];
    for &b in gamma {
        count[b] += 1;
    }
    count
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 1)
        .map(|(b, &c)| Violation::NotBijective { edge: i.blue_ids()[b].clone(), nodes: c })
        .collect()
}

fn path_cover(f: &RootedForest, gamma: &[usize], masks: &[u64]) -> Vec<u64> {
    (0..f.len()).map(|n| f.path(n).iter().fold(0, |m, &p| m | masks[gamma[p]])).collect()
}

fn shared_heritage(i: &IncidenceGraph, ef: &EliminationForest, gamma: &[usize], masks: &[u64]) -> Vec<Violation> {
    let f = &ef.forest;
    let cover = path_cover(f, gamma, masks);
    let mut out = Vec::new();
    for s in 0..f.len() {
        for t in s + 1..f.len() {
            let shared = masks[gamma[s]] & masks[gamma[t]];
            if shared == 0 {
                continue;
            }
            let covered = f.lcv(s, t).map_or(0, |l| cover[l]);
            let missing = shared & !covered;
            if missing != 0 {
                out.push(Violation::SharedHeritage {
                    s: f.id(s).to_string(),
                    t: f.id(t).to_string(),
                    missing: bits(missing).map(|r| i.red_ids()[r].clone()).collect(),
                });
            }
        }
    }
    out
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let b = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(b)
    })
}

/// Checks completeness, containment and shared heritage.
pub fn validate_ef(i: &IncidenceGraph, ef: &EliminationForest) -> Result<Verdict> {
    let gamma = ef.resolve(i)?;
    let masks = i.content_masks()?;
    let cover = path_cover(&ef.forest, &gamma, &masks);
    let mut violations = Vec::new();
    let all = cover.iter().fold(0, |m, c| m | c);
    for r in 0..i.num_reds() {
        if all & (1 << r) == 0 {
            violations.push(Violation::VertexNotCovered { vertex: i.red_ids()[r].clone() });
        }
    }
    for (b, &m) in masks.iter().enumerate() {
        if !cover.iter().any(|&c| c & m == m) {
            violations.push(Violation::EdgeNotContained { edge: i.blue_ids()[b].clone() });
        }
    }
    violations.extend(shared_heritage(i, ef, &gamma, &masks));
    Ok(Verdict { violations })
}

/// Checks bijectivity and shared heritage.
pub fn validate_strict_ef(i: &IncidenceGraph, ef: &EliminationForest) -> Result<Verdict> {
    let gamma = ef.resolve(i)?;
    let masks = i.content_masks()?;
    let mut violations = bijectivity(i, &gamma);
    violations.extend(shared_heritage(i, ef, &gamma, &masks));
    Ok(Verdict { violations })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Strict,
    Plain,
}

struct Search<'a> {
    masks: &'a [u64],
    mode: Mode,
    budget: &'a Budget,
    memo: HashMap<(u64, u64), (usize, usize)>,
}

impl Search<'_> {
    /// Splits `edges` into classes linked by shared vertices outside `a`.
    /// Edges inside `a` become singleton classes in strict mode and are
    /// dropped otherwise, since the current stem already covers them.
    fn classes(&self, mut edges: u64, a: u64) -> Vec<u64> {
        let mut out = Vec::new();
        while edges != 0 {
            let e = edges.trailing_zeros() as usize;
            edges &= edges - 1;
            let mut verts = self.masks[e] & !a;
            if verts == 0 {
                if self.mode == Mode::Strict {
                    out.push(1 << e);
                }
                continue;
            }
            let mut class = 1u64 << e;
            loop {
                let joined: u64 = bits(edges).filter(|&x| self.masks[x] & verts != 0).fold(0, |m, x| m | 1 << x);
                if joined == 0 {
                    break;
                }
                edges &= !joined;
                class |= joined;
                verts |= bits(joined).fold(0, |m, x| m | self.masks[x]) & !a;
            }
            out.push(class);
        }
        out
    }

    fn solve(&mut self, class: u64, a: u64) -> Result<usize> {
        let relevant = bits(class).fold(0, |m, e| m | self.masks[e]);
        let key = (class, a & relevant);
        if let Some(&(d, _)) = self.memo.get(&key) {
            return Ok(d);
        }
        self.budget.tick("depth search")?;
        let mut best = (usize::MAX, 0);
        let floor = if self.mode == Mode::Strict && class.count_ones() > 1 { 2 } else { 1 };
        for e in bits(class) {
            let a2 = a | self.masks[e];
            let mut d = 1;
            for sub in self.classes(class & !(1 << e), a2) {
                d = d.max(1 + self.solve(sub, a2)?);
                if d >= best.0 {
                    break;
                }
            }
            if d < best.0 {
                best = (d, e);
                if d == floor {
                    break;
                }
            }
        }
        self.memo.insert(key, best);
        Ok(best.0)
    }

    fn build(&self, class: u64, a: u64, parent: Option<usize>, nodes: &mut Vec<(Option<usize>, usize)>) {
        let relevant = bits(class).fold(0, |m, e| m | self.masks[e]);
        let (_, e) = self.memo[&(class, a & relevant)];
        nodes.push((parent, e));
        let me = nodes.len() - 1;
        let a2 = a | self.masks[e];
        for sub in self.classes(class & !(1 << e), a2) {
            self.build(sub, a2, Some(me), nodes);
        }
    }
}

fn exact(i: &IncidenceGraph, mode: Mode, budget: &Budget) -> Result<DepthWitness> {
    if i.num_blues() > 64 {
        return Err(Error::SizeCap(format!("{} hyperedges (at most 64 supported)", i.num_blues())));
    }
    let masks = i.content_masks()?;
    let all = if i.num_blues() == 64 { u64::MAX } else { (1u64 << i.num_blues()) - 1 };
    let mut s = Search { masks: &masks, mode, budget, memo: HashMap::new() };
    let top = s.classes(all, 0);
    let mut depth = 0;
    for &c in &top {
        depth = depth.max(s.solve(c, 0)?);
    }
    let mut nodes = Vec::new();
    for &c in &top {
        s.build(c, 0, None, &mut nodes);
    }
    if nodes.is_empty() && i.num_blues() > 0 {
        // only empty hyperedges: any single node covers them
        nodes.push((None, 0));
        depth = 1;
    }
    let forest = RootedForest::from_parents((1..=nodes.len()).map(|n| format!("t{n}")).collect(), nodes.iter().map(|n| n.0).collect())?;
    let gamma = nodes.iter().map(|n| i.blue_ids()[n.1].clone()).collect();
    Ok(DepthWitness { depth, forest: EliminationForest { forest, gamma } })
}

/// Strict hypertree depth with a minimum-height strict forest.
pub fn shd_exact(i: &IncidenceGraph) -> Result<DepthWitness> {
    shd_exact_with(i, &Budget::default())
}

pub fn shd_exact_with(i: &IncidenceGraph, budget: &Budget) -> Result<DepthWitness> {
    exact(i, Mode::Strict, budget)
}

/// Hypertree depth with a minimum-height forest whose node map is injective.
pub fn hd_exact(i: &IncidenceGraph) -> Result<DepthWitness> {
    hd_exact_with(i, &Budget::default())
}

pub fn hd_exact_with(i: &IncidenceGraph, budget: &Budget) -> Result<DepthWitness> {
    exact(i, Mode::Plain, budget)
}

/// Minimum height over every rooted forest on the blues, checked with
/// [`validate_strict_ef`]. Independent of the recursive search.
pub fn shd_bruteforce(i: &IncidenceGraph) -> Result<usize> {
    let n = i.num_blues();
    if n > 5 {
        return Err(Error::SizeCap(format!("{n} hyperedges (brute force handles at most 5)")));
    }
    if n == 0 {
        return Ok(0);
    }
    let ids: Vec<String> = (0..n).map(|x| format!("t{x}")).collect();
    let gamma: Vec<String> = i.blue_ids().to_vec();
    let mut best = usize::MAX;
    // parent code n means "root"
    let mut code = vec![0usize; n];
    loop {
        let parent: Vec<Option<usize>> = code.iter().map(|&c| (c < n).then_some(c)).collect();
        if parent.iter().enumerate().all(|(x, p)| *p != Some(x)) {
            if let Ok(forest) = RootedForest::from_parents(ids.clone(), parent) {
                let h = forest.height();
                if h < best {
                    let ef = EliminationForest { forest, gamma: gamma.clone() };
                    if validate_strict_ef(i, &ef)?.is_ok() {
                        best = h;
                    }
                }
            }
        }
        let mut k = 0;
        while k < n && code[k] == n {
            code[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
        code[k] += 1;
    }
    Ok(best)
}

/// Turns a valid elimination forest into a strict one of height at most one more.
pub fn strictify(i: &IncidenceGraph, ef: &EliminationForest) -> Result<EliminationForest> {
    let verdict = validate_ef(i, ef)?;
    if !verdict.is_ok() {
        let msg: Vec<String> = verdict.violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::InvalidForest(msg.join("; ")));
    }
    let masks = i.content_masks()?;
    let mut ids: Vec<String> = ef.forest.ids().to_vec();
    let mut parent: Vec<Option<usize>> = ef.forest.parents().to_vec();
    let mut gamma = ef.resolve(i)?;

    // phase 1: contract nodes that repeat a hyperedge into their parents
    loop {
        let f = RootedForest::from_parents(ids.clone(), parent.clone())?;
        let dup = (0..gamma.len()).flat_map(|s| (s + 1..gamma.len()).map(move |t| (s, t))).find(|&(s, t)| gamma[s] == gamma[t]);
        let Some((s, t)) = dup else { break };
        let (s, _) = if f.level(t) >= f.level(s) { (t, s) } else { (s, t) };
        let up = parent[s];
        for p in parent.iter_mut() {
            if *p == Some(s) {
                *p = up;
            }
        }
        ids.remove(s);
        parent.remove(s);
        gamma.remove(s);
        for p in parent.iter_mut().flatten() {
            if *p > s {
                *p -= 1;
            }
        }
    }

    // phase 2: one new leaf per hyperedge without a node, below the
    // shallowest node whose root path covers it
    let f = RootedForest::from_parents(ids.clone(), parent.clone())?;
    let cover = path_cover(&f, &gamma, &masks);
    let mut mapped = vec![false; i.num_blues()];
    for &b in &gamma {
        mapped[b] = true;
    }
    let taken: std::collections::HashSet<String> = ids.iter().cloned().collect();
    let mut fresh = (1..).map(|n| format!("s{n}")).filter(move |x| !taken.contains(x));
    let original = f.len();
    for b in (0..i.num_blues()).filter(|&b| !mapped[b]) {
        let host = (0..original)
            .filter(|&n| cover[n] & masks[b] == masks[b])
            .min_by_key(|&n| (f.level(n), n))
            .ok_or_else(|| Error::InvalidForest(format!("hyperedge {} is not covered", i.blue_ids()[b])))?;
        ids.push(fresh.next().unwrap());
        parent.push(Some(host));
        gamma.push(b);
    }
    let forest = RootedForest::from_parents(ids, parent)?;
    Ok(EliminationForest { forest, gamma: gamma.iter().map(|&b| i.blue_ids()[b].clone()).collect() })
}
