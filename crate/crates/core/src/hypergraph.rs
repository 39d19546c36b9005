//! Hypergraphs, incidence graphs and the conversions between them.
//!
//! Ids are opaque strings; internally every vertex and hyperedge is a dense
//! index into the id vectors, which keep declaration order.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// A hypergraph `(V, E, β)`. Every vertex lies in some hyperedge; empty and
/// repeated contents are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Hypergraph {
    vertices: Vec<String>,
    edges: Vec<String>,
    contents: Vec<Vec<usize>>,
}

/// Bipartite red/blue graph. Blue vertices play the role of hyperedges and
/// every red vertex has at least one blue neighbour.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IncidenceGraph {
    reds: Vec<String>,
    blues: Vec<String>,
    nbrs: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HypergraphMutation {
    /// Add the fresh vertex to one hyperedge.
    Pump { edge: String, fresh: String },
    /// Replace `from` by `into` everywhere; both must lie in `edge`.
    LocalMerge { edge: String, from: String, into: String },
}

fn index_ids(ids: &[String]) -> Result<HashMap<&str, usize>> {
    let mut map = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if map.insert(id.as_str(), i).is_some() {
            return Err(Error::DuplicateId(id.clone()));
        }
    }
    Ok(map)
}

fn fresh_id(base: &str, taken: &HashSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (2..).map(|n| format!("{base}#{n}")).find(|c| !taken.contains(c)).unwrap()
}

impl Hypergraph {
    /// Builds a hypergraph. With `vertices = None` the vertex order is the
    /// order of first appearance in the contents.
    pub fn new(vertices: Option<Vec<String>>, edges: Vec<(String, Vec<String>)>) -> Result<Self> {
        let explicit = vertices.is_some();
        let mut vertices = vertices.unwrap_or_default();
        let mut vindex: HashMap<String, usize> = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vindex.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateId(v.clone()));
            }
        }
        let mut edge_ids = Vec::with_capacity(edges.len());
        let mut contents = Vec::with_capacity(edges.len());
        let mut seen_edges = HashSet::new();
        for (e, content) in edges {
            if !seen_edges.insert(e.clone()) {
                return Err(Error::DuplicateId(e));
            }
            let mut set = BTreeSet::new();
            for v in content {
                let idx = match vindex.get(&v) {
                    Some(&i) => i,
                    None if explicit => return Err(Error::UnknownVertex(v)),
                    None => {
                        vertices.push(v.clone());
                        vindex.insert(v, vertices.len() - 1);
                        vertices.len() - 1
                    }
                };
                set.insert(idx);
            }
            edge_ids.push(e);
            contents.push(set.into_iter().collect());
        }
        let h = Hypergraph { vertices, edges: edge_ids, contents };
        h.check()?;
        Ok(h)
    }

    /// Convenience constructor from string slices.
    pub fn from_edges(edges: &[(&str, &[&str])]) -> Result<Self> {
        Hypergraph::new(None, edges.iter().map(|(e, c)| (e.to_string(), c.iter().map(|v| v.to_string()).collect())).collect())
    }

    pub(crate) fn from_raw(vertices: Vec<String>, edges: Vec<String>, contents: Vec<Vec<usize>>) -> Result<Self> {
        let contents = contents.into_iter().map(|c| c.into_iter().collect::<BTreeSet<_>>().into_iter().collect()).collect();
        let h = Hypergraph { vertices, edges, contents };
        h.check()?;
        Ok(h)
    }

    fn check(&self) -> Result<()> {
        let vi = index_ids(&self.vertices)?;
        index_ids(&self.edges)?;
        for e in &self.edges {
            if vi.contains_key(e.as_str()) {
                return Err(Error::IdClash(e.clone()));
            }
        }
        let mut used = vec![false; self.vertices.len()];
        for c in &self.contents {
            for &v in c {
                used[v] = true;
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::IsolatedRed(self.vertices[i].clone()));
        }
        Ok(())
    }

    pub fn empty() -> Self {
        Hypergraph::default()
    }

    /// `P_n`: vertices `1..=n+1`, hyperedges `e1..en` with `e_i -> {i, i+1}`.
    pub fn path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("path length must be positive".into()));
        }
        let vertices = (1..=n + 1).map(|i| i.to_string()).collect();
        let edges = (1..=n).map(|i| format!("e{i}")).collect();
        let contents = (0..n).map(|i| vec![i, i + 1]).collect();
        Hypergraph::from_raw(vertices, edges, contents)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn edge_ids(&self) -> &[String] {
        &self.edges
    }

    /// Content of the hyperedge with the given index, as sorted vertex indices.
    pub fn content(&self, e: usize) -> &[usize] {
        &self.contents[e]
    }

    pub fn contents(&self) -> &[Vec<usize>] {
        &self.contents
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e == id)
    }

    /// Content of a hyperedge as vertex ids.
    pub fn content_of(&self, edge: &str) -> Result<Vec<&str>> {
        let e = self.edge_index(edge).ok_or_else(|| Error::UnknownEdge(edge.into()))?;
        Ok(self.contents[e].iter().map(|&v| self.vertices[v].as_str()).collect())
    }

    pub fn to_incidence(&self) -> IncidenceGraph {
        IncidenceGraph { reds: self.vertices.clone(), blues: self.edges.clone(), nbrs: self.contents.clone() }
    }

    /// `H|_S`: the hyperedges in `S` and the vertices they cover.
    pub fn induced_sub<S: AsRef<str>>(&self, edges: &[S]) -> Result<Hypergraph> {
        let mut idx = Vec::with_capacity(edges.len());
        for e in edges {
            let e = e.as_ref();
            let i = self.edge_index(e).ok_or_else(|| Error::UnknownEdge(e.into()))?;
            if !idx.contains(&i) {
                idx.push(i);
            }
        }
        idx.sort_unstable();
        Ok(self.to_incidence().induced_by_blues(&idx).to_hypergraph())
    }

    pub fn apply(&self, m: &HypergraphMutation) -> Result<Hypergraph> {
        match m {
            HypergraphMutation::Pump { edge, fresh } => self.pump(edge, fresh),
            HypergraphMutation::LocalMerge { edge, from, into } => self.local_merge(edge, from, into),
        }
    }

    /// Inserts a fresh vertex into the content of `edge`.
    pub fn pump(&self, edge: &str, fresh: &str) -> Result<Hypergraph> {
        let e = self.edge_index(edge).ok_or_else(|| Error::UnknownEdge(edge.into()))?;
        if self.vertex_index(fresh).is_some() || self.edge_index(fresh).is_some() {
            return Err(Error::NotFresh(fresh.into()));
        }
        let mut out = self.clone();
        out.vertices.push(fresh.to_string());
        out.contents[e].push(out.vertices.len() - 1);
        Ok(out)
    }

    /// Merges `from` into `into`, both of which must lie in `β(edge)`.
    pub fn local_merge(&self, edge: &str, from: &str, into: &str) -> Result<Hypergraph> {
        let e = self.edge_index(edge).ok_or_else(|| Error::UnknownEdge(edge.into()))?;
        let not_in = |v: &str| Error::NotInEdge { vertex: v.into(), edge: edge.into() };
        let u = self.vertex_index(from).ok_or_else(|| not_in(from))?;
        let v = self.vertex_index(into).ok_or_else(|| not_in(into))?;
        if u == v {
            return Err(Error::InvalidArgument("cannot merge a vertex with itself".into()));
        }
        if !self.contents[e].contains(&u) {
            return Err(not_in(from));
        }
        if !self.contents[e].contains(&v) {
            return Err(not_in(into));
        }
        let remap = |w: usize| {
            let w = if w == u { v } else { w };
            if w > u {
                w - 1
            } else {
                w
            }
        };
        let mut vertices = self.vertices.clone();
        vertices.remove(u);
        let contents = self.contents.iter().map(|c| c.iter().map(|&w| remap(w)).collect()).collect();
        Hypergraph::from_raw(vertices, self.edges.clone(), contents)
    }

    /// Disjoint union; ids of `other` that clash get a `#n` suffix.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Hypergraph {
        let i = self.to_incidence().disjoint_union(&other.to_incidence());
        i.to_hypergraph()
    }

    pub fn is_connected(&self) -> bool {
        self.to_incidence().connected_components().len() <= 1
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::write_hg(self))
    }
}

impl IncidenceGraph {
    /// Builds an incidence graph from `(blue, red)` pairs.
    pub fn new(reds: Vec<String>, blues: Vec<String>, edges: &[(String, String)]) -> Result<Self> {
        let ri = index_ids(&reds)?;
        let bi = index_ids(&blues)?;
        let mut nbrs = vec![BTreeSet::new(); blues.len()];
        for (b, r) in edges {
            let b = *bi.get(b.as_str()).ok_or_else(|| Error::UnknownEdge(b.clone()))?;
            let r = *ri.get(r.as_str()).ok_or_else(|| Error::UnknownVertex(r.clone()))?;
            nbrs[b].insert(r);
        }
        IncidenceGraph::from_parts(reds, blues, nbrs.into_iter().map(|s| s.into_iter().collect()).collect())
    }

    /// Builds from per-blue neighbour lists of red indices.
    pub fn from_parts(reds: Vec<String>, blues: Vec<String>, nbrs: Vec<Vec<usize>>) -> Result<Self> {
        if nbrs.len() != blues.len() {
            return Err(Error::InvalidArgument("one neighbour list per blue vertex expected".into()));
        }
        let ri = index_ids(&reds)?;
        index_ids(&blues)?;
        if let Some(b) = blues.iter().find(|b| ri.contains_key(b.as_str())) {
            return Err(Error::IdClash(b.clone()));
        }
        let mut seen = vec![false; reds.len()];
        let mut clean = Vec::with_capacity(nbrs.len());
        for n in nbrs {
            let set: BTreeSet<usize> = n.into_iter().collect();
            for &r in &set {
                let slot = seen.get_mut(r).ok_or_else(|| Error::UnknownVertex(format!("#{r}")))?;
                *slot = true;
            }
            clean.push(set.into_iter().collect());
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::IsolatedRed(reds[i].clone()));
        }
        Ok(IncidenceGraph { reds, blues, nbrs: clean })
    }

    pub fn num_reds(&self) -> usize {
        self.reds.len()
    }

    pub fn num_blues(&self) -> usize {
        self.blues.len()
    }

    pub fn num_edges(&self) -> usize {
        self.nbrs.iter().map(Vec::len).sum()
    }

    pub fn red_ids(&self) -> &[String] {
        &self.reds
    }

    pub fn blue_ids(&self) -> &[String] {
        &self.blues
    }

    pub fn red_index(&self, id: &str) -> Option<usize> {
        self.reds.iter().position(|v| v == id)
    }

    pub fn blue_index(&self, id: &str) -> Option<usize> {
        self.blues.iter().position(|v| v == id)
    }

    /// Red neighbours of a blue vertex, sorted.
    pub fn blue_nbrs(&self, b: usize) -> &[usize] {
        &self.nbrs[b]
    }

    pub fn all_blue_nbrs(&self) -> &[Vec<usize>] {
        &self.nbrs
    }

    /// Blue neighbours of every red vertex.
    pub fn red_nbrs(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.reds.len()];
        for (b, rs) in self.nbrs.iter().enumerate() {
            for &r in rs {
                out[r].push(b);
            }
        }
        out
    }

    pub fn has_edge(&self, blue: usize, red: usize) -> bool {
        self.nbrs[blue].binary_search(&red).is_ok()
    }

    /// All `(blue, red)` incidences as ids.
    pub fn edge_list(&self) -> Vec<(&str, &str)> {
        self.nbrs.iter().enumerate().flat_map(|(b, rs)| rs.iter().map(move |&r| (self.blues[b].as_str(), self.reds[r].as_str()))).collect()
    }

    pub fn to_hypergraph(&self) -> Hypergraph {
        Hypergraph { vertices: self.reds.clone(), edges: self.blues.clone(), contents: self.nbrs.clone() }
    }

    /// Keeps the given blues (by index, in the given order) and their reds.
    pub fn induced_by_blues(&self, blues: &[usize]) -> IncidenceGraph {
        let mut keep = vec![false; self.reds.len()];
        for &b in blues {
            for &r in &self.nbrs[b] {
                keep[r] = true;
            }
        }
        let mut new_index = vec![usize::MAX; self.reds.len()];
        let mut reds = Vec::new();
        for (r, k) in keep.iter().enumerate() {
            if *k {
                new_index[r] = reds.len();
                reds.push(self.reds[r].clone());
            }
        }
        IncidenceGraph {
            reds,
            blues: blues.iter().map(|&b| self.blues[b].clone()).collect(),
            nbrs: blues.iter().map(|&b| self.nbrs[b].iter().map(|&r| new_index[r]).collect()).collect(),
        }
    }

    /// Blue index sets of the connected components, ordered by smallest blue index.
    pub fn component_blues(&self) -> Vec<Vec<usize>> {
        let red_nbrs = self.red_nbrs();
        let mut comp = vec![usize::MAX; self.blues.len()];
        let mut out = Vec::new();
        for start in 0..self.blues.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut stack = vec![start];
            while let Some(b) = stack.pop() {
                for &r in &self.nbrs[b] {
                    for &b2 in &red_nbrs[r] {
                        if comp[b2] == usize::MAX {
                            comp[b2] = id;
                            members.push(b2);
                            stack.push(b2);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn connected_components(&self) -> Vec<IncidenceGraph> {
        self.component_blues().iter().map(|bs| self.induced_by_blues(bs)).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.component_blues().len() <= 1
    }

    /// Disjoint union; ids of `other` that clash with ids in `self` get a `#n` suffix.
    pub fn disjoint_union(&self, other: &IncidenceGraph) -> IncidenceGraph {
        let mut taken: HashSet<String> = self.reds.iter().chain(&self.blues).cloned().collect();
        let mut rename = |id: &String| {
            let n = fresh_id(id, &taken);
            taken.insert(n.clone());
            n
        };
        let mut reds = self.reds.clone();
        let mut blues = self.blues.clone();
        reds.extend(other.reds.iter().map(&mut rename));
        blues.extend(other.blues.iter().map(&mut rename));
        let off = self.reds.len();
        let mut nbrs = self.nbrs.clone();
        nbrs.extend(other.nbrs.iter().map(|rs| rs.iter().map(|r| r + off).collect()));
        IncidenceGraph { reds, blues, nbrs }
    }

    /// Reorders vertices: red `r` moves to position `red_perm[r]`, blue `b`
    /// to `blue_perm[b]`; ids travel with their vertices.
    pub fn permuted(&self, red_perm: &[usize], blue_perm: &[usize]) -> IncidenceGraph {
        let mut reds = vec![String::new(); self.reds.len()];
        for (r, &p) in red_perm.iter().enumerate() {
            reds[p] = self.reds[r].clone();
        }
        let mut blues = vec![String::new(); self.blues.len()];
        let mut nbrs = vec![Vec::new(); self.blues.len()];
        for (b, &p) in blue_perm.iter().enumerate() {
            blues[p] = self.blues[b].clone();
            let mut rs: Vec<usize> = self.nbrs[b].iter().map(|&r| red_perm[r]).collect();
            rs.sort_unstable();
            nbrs[p] = rs;
        }
        IncidenceGraph { reds, blues, nbrs }
    }

    /// Replaces every id; `red_ids[r]` names red `r`, `blue_ids[b]` names blue `b`.
    pub fn renamed(&self, red_ids: Vec<String>, blue_ids: Vec<String>) -> Result<IncidenceGraph> {
        IncidenceGraph::from_parts(red_ids, blue_ids, self.nbrs.clone())
    }

    /// Red contents as bitmasks; fails when there are more than 64 reds.
    pub fn content_masks(&self) -> Result<Vec<u64>> {
        if self.reds.len() > 64 {
            return Err(Error::SizeCap(format!("{} red vertices (at most 64 supported)", self.reds.len())));
        }
        Ok(self.nbrs.iter().map(|rs| rs.iter().fold(0u64, |m, &r| m | (1 << r))).collect())
    }
}
