//! k-labeled incidence graphs and their operations: relabelling, label
//! removal, glueing and transitions.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::hypergraph::IncidenceGraph;

/// `(I, r, b, g)`: partial red labels, blue labels in `1..=k`, and a guard
/// label in `1..=k` for every red label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KLabeledIncidenceGraph {
    skeleton: IncidenceGraph,
    k: usize,
    red: BTreeMap<usize, usize>,
    blue: BTreeMap<usize, usize>,
    guard: BTreeMap<usize, usize>,
}

/// Where each operand's vertices ended up in a glued product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeMaps {
    pub red: [Vec<usize>; 2],
    pub blue: [Vec<usize>; 2],
}

/// A partial map from red labels to blue labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionFn(pub BTreeMap<usize, usize>);

impl TransitionFn {
    pub fn new(pairs: &[(usize, usize)]) -> Self {
        TransitionFn(pairs.iter().copied().collect())
    }

    pub fn image(&self) -> BTreeSet<usize> {
        self.0.values().copied().collect()
    }

    /// `∅ ≠ dom(f) ⊆ dom(g)` and every label guarded into `img(f)` is in `dom(f)`.
    pub fn is_transition_for(&self, guard: &BTreeMap<usize, usize>) -> bool {
        let img = self.image();
        !self.0.is_empty()
            && self.0.keys().all(|i| guard.contains_key(i))
            && guard.iter().all(|(i, j)| !img.contains(j) || self.0.contains_key(i))
    }
}

/// Two guard maps agree wherever both are defined.
pub fn compatible(a: &BTreeMap<usize, usize>, b: &BTreeMap<usize, usize>) -> bool {
    a.iter().all(|(i, j)| b.get(i).is_none_or(|x| x == j))
}

impl KLabeledIncidenceGraph {
    pub fn new(
        skeleton: IncidenceGraph,
        k: usize,
        red: BTreeMap<usize, usize>,
        blue: BTreeMap<usize, usize>,
        guard: BTreeMap<usize, usize>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::Label("k must be positive".into()));
        }
        if red.keys().any(|&i| i == 0) {
            return Err(Error::Label("red labels are positive integers".into()));
        }
        if let Some((&j, _)) = blue.iter().find(|(&j, _)| j == 0 || j > k) {
            return Err(Error::Label(format!("blue label {j} outside 1..={k}")));
        }
        if let Some((&i, &j)) = guard.iter().find(|(_, &j)| j == 0 || j > k) {
            return Err(Error::Label(format!("guard of red label {i} is {j}, outside 1..={k}")));
        }
        if !red.keys().eq(guard.keys()) {
            return Err(Error::Label("red labels and guarded labels differ".into()));
        }
        if red.values().any(|&v| v >= skeleton.num_reds()) || blue.values().any(|&b| b >= skeleton.num_blues()) {
            return Err(Error::Label("label points outside the skeleton".into()));
        }
        Ok(KLabeledIncidenceGraph { skeleton, k, red, blue, guard })
    }

    /// Builds from vertex ids.
    pub fn from_ids(
        skeleton: IncidenceGraph,
        k: usize,
        red: &[(usize, &str)],
        blue: &[(usize, &str)],
        guard: &[(usize, usize)],
    ) -> Result<Self> {
        let r = red
            .iter()
            .map(|&(i, v)| skeleton.red_index(v).map(|x| (i, x)).ok_or_else(|| Error::UnknownVertex(v.into())))
            .collect::<Result<_>>()?;
        let b = blue
            .iter()
            .map(|&(j, e)| skeleton.blue_index(e).map(|x| (j, x)).ok_or_else(|| Error::UnknownEdge(e.into())))
            .collect::<Result<_>>()?;
        KLabeledIncidenceGraph::new(skeleton, k, r, b, guard.iter().copied().collect())
    }

    pub fn label_free(skeleton: IncidenceGraph, k: usize) -> Result<Self> {
        KLabeledIncidenceGraph::new(skeleton, k, BTreeMap::new(), BTreeMap::new(), BTreeMap::new())
    }

    pub fn skeleton(&self) -> &IncidenceGraph {
        &self.skeleton
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn red_labels(&self) -> &BTreeMap<usize, usize> {
        &self.red
    }

    pub fn blue_labels(&self) -> &BTreeMap<usize, usize> {
        &self.blue
    }

    pub fn guards(&self) -> &BTreeMap<usize, usize> {
        &self.guard
    }

    pub fn is_label_free(&self) -> bool {
        self.red.is_empty() && self.blue.is_empty() && self.guard.is_empty()
    }

    /// Every red label's guard names a blue label whose vertex is adjacent.
    pub fn real_guards(&self) -> bool {
        self.red.iter().all(|(i, &v)| {
            let j = self.guard[i];
            self.blue.get(&j).is_some_and(|&b| self.skeleton.has_edge(b, v))
        })
    }

    /// Red id carrying label `i`.
    pub fn red_id(&self, i: usize) -> Option<&str> {
        self.red.get(&i).map(|&v| self.skeleton.red_ids()[v].as_str())
    }

    pub fn blue_id(&self, j: usize) -> Option<&str> {
        self.blue.get(&j).map(|&b| self.skeleton.blue_ids()[b].as_str())
    }

    /// Sets red labels `labels[x] -> reds[x]` together with their guards.
    pub fn set_red_labels(&self, labels: &[usize], reds: &[&str], guards: &[usize]) -> Result<Self> {
        if labels.len() != reds.len() || labels.len() != guards.len() {
            return Err(Error::Label("labels, vertices and guards must have equal length".into()));
        }
        let mut out = self.clone();
        for ((&i, v), &j) in labels.iter().zip(reds).zip(guards) {
            let x = self.skeleton.red_index(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
            out.red.insert(i, x);
            out.guard.insert(i, j);
        }
        KLabeledIncidenceGraph::new(out.skeleton, out.k, out.red, out.blue, out.guard)
    }

    pub fn set_blue_labels(&self, labels: &[usize], blues: &[&str]) -> Result<Self> {
        if labels.len() != blues.len() {
            return Err(Error::Label("labels and vertices must have equal length".into()));
        }
        let mut out = self.clone();
        for (&j, e) in labels.iter().zip(blues) {
            let x = self.skeleton.blue_index(e).ok_or_else(|| Error::UnknownEdge(e.to_string()))?;
            out.blue.insert(j, x);
        }
        KLabeledIncidenceGraph::new(out.skeleton, out.k, out.red, out.blue, out.guard)
    }

    /// Drops red labels (and their guards); vertices stay.
    pub fn remove_red(&self, labels: &BTreeSet<usize>) -> Result<Self> {
        let mut out = self.clone();
        for i in labels {
            if out.red.remove(i).is_none() {
                return Err(Error::Label(format!("red label {i} is not defined")));
            }
            out.guard.remove(i);
        }
        Ok(out)
    }

    /// Drops blue labels; vertices stay.
    pub fn remove_blue(&self, labels: &BTreeSet<usize>) -> Result<Self> {
        let mut out = self.clone();
        for j in labels {
            if out.blue.remove(j).is_none() {
                return Err(Error::Label(format!("blue label {j} is not defined")));
            }
        }
        Ok(out)
    }

    /// Disjoint union with equally-labelled vertices merged. Labels and
    /// guards of `self` take precedence.
    pub fn glue(&self, other: &Self) -> Result<(Self, MergeMaps)> {
        if self.k != other.k {
            return Err(Error::Label(format!("cannot glue k = {} with k = {}", self.k, other.k)));
        }
        let (a, b) = (&self.skeleton, &other.skeleton);
        let (na, nb) = (a.num_reds(), a.num_blues());
        let mut reds = Dsu::new(na + b.num_reds());
        for (i, &v) in &self.red {
            if let Some(&w) = other.red.get(i) {
                reds.union(v, na + w);
            }
        }
        let mut blues = Dsu::new(nb + b.num_blues());
        for (j, &x) in &self.blue {
            if let Some(&y) = other.blue.get(j) {
                blues.union(x, nb + y);
            }
        }
        let (red_class, n_red) = reds.classes();
        let (blue_class, n_blue) = blues.classes();

        let mut taken = HashSet::new();
        let red_names = class_names(n_red, &red_class, |x| if x < na { &a.red_ids()[x] } else { &b.red_ids()[x - na] }, &mut taken);
        let blue_names = class_names(n_blue, &blue_class, |x| if x < nb { &a.blue_ids()[x] } else { &b.blue_ids()[x - nb] }, &mut taken);

        let mut nbrs = vec![BTreeSet::new(); n_blue];
        for (x, rs) in a.all_blue_nbrs().iter().enumerate() {
            nbrs[blue_class[x]].extend(rs.iter().map(|&r| red_class[r]));
        }
        for (y, rs) in b.all_blue_nbrs().iter().enumerate() {
            nbrs[blue_class[nb + y]].extend(rs.iter().map(|&r| red_class[na + r]));
        }
        let skeleton = IncidenceGraph::from_parts(red_names, blue_names, nbrs.into_iter().map(|s| s.into_iter().collect()).collect())?;

        let maps = MergeMaps {
            red: [red_class[..na].to_vec(), red_class[na..].to_vec()],
            blue: [blue_class[..nb].to_vec(), blue_class[nb..].to_vec()],
        };
        let mut red = BTreeMap::new();
        for (&i, &w) in &other.red {
            red.insert(i, maps.red[1][w]);
        }
        for (&i, &v) in &self.red {
            red.insert(i, maps.red[0][v]);
        }
        let mut blue = BTreeMap::new();
        for (&j, &y) in &other.blue {
            blue.insert(j, maps.blue[1][y]);
        }
        for (&j, &x) in &self.blue {
            blue.insert(j, maps.blue[0][x]);
        }
        let mut guard = other.guard.clone();
        guard.extend(self.guard.iter().map(|(&i, &j)| (i, j)));
        Ok((KLabeledIncidenceGraph::new(skeleton, self.k, red, blue, guard)?, maps))
    }

    /// `L⟨f⟩`: the labels in `img(g) ∩ img(f) ∩ dom(b)` are dropped and the
    /// result is glued below `M_f`.
    pub fn apply_transition(&self, f: &TransitionFn) -> Result<Self> {
        Ok(self.transition_parts(f)?.0)
    }

    /// The transition result, the merge maps of the inner glue (`M_f` is
    /// operand 0), and the dropped blue labels.
    pub fn transition_parts(&self, f: &TransitionFn) -> Result<(Self, MergeMaps, BTreeSet<usize>)> {
        if !f.is_transition_for(&self.guard) {
            return Err(Error::SideCondition(format!("{:?} is not a transition for guards {:?}", f.0, self.guard)));
        }
        let dropped = self.transition_drop(f);
        let (l, maps) = m_f(f, self.k)?.glue(&self.remove_blue(&dropped)?)?;
        Ok((l, maps, dropped))
    }

    /// `img(g) ∩ img(f) ∩ dom(b)`
    pub fn transition_drop(&self, f: &TransitionFn) -> BTreeSet<usize> {
        let guarded: BTreeSet<usize> = self.guard.values().copied().collect();
        f.image().into_iter().filter(|j| guarded.contains(j) && self.blue.contains_key(j)).collect()
    }
}

fn class_names<'a>(n: usize, class: &[usize], id: impl Fn(usize) -> &'a String, taken: &mut HashSet<String>) -> Vec<String> {
    let mut members: Vec<Vec<&str>> = vec![Vec::new(); n];
    for (x, &c) in class.iter().enumerate() {
        let s = id(x).as_str();
        if !members[c].contains(&s) {
            members[c].push(s);
        }
    }
    members
        .iter()
        .map(|m| {
            let base = m.join("~");
            let name =
                if taken.contains(&base) { (2..).map(|k| format!("{base}#{k}")).find(|c| !taken.contains(c)).unwrap() } else { base };
            taken.insert(name.clone());
            name
        })
        .collect()
}

/// `M_f`: one red per label in `dom(f)`, one blue per label in `img(f)`,
/// everything labelled, guards equal to `f`.
pub fn m_f(f: &TransitionFn, k: usize) -> Result<KLabeledIncidenceGraph> {
    if f.0.is_empty() {
        return Err(Error::Label("transition with empty domain".into()));
    }
    let reds: Vec<usize> = f.0.keys().copied().collect();
    let blues: Vec<usize> = f.image().into_iter().collect();
    let mut nbrs = vec![Vec::new(); blues.len()];
    for (x, (_, j)) in f.0.iter().enumerate() {
        nbrs[blues.binary_search(j).unwrap()].push(x);
    }
    let skeleton =
        IncidenceGraph::from_parts(reds.iter().map(|i| format!("v{i}")).collect(), blues.iter().map(|j| format!("e{j}")).collect(), nbrs)?;
    KLabeledIncidenceGraph::new(
        skeleton,
        k,
        reds.iter().enumerate().map(|(x, &i)| (i, x)).collect(),
        blues.iter().enumerate().map(|(x, &j)| (j, x)).collect(),
        f.0.clone(),
    )
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::canon::isomorphic;
    use crate::hypergraph::Hypergraph;

    pub fn labelled_left() -> KLabeledIncidenceGraph {
        let s = Hypergraph::new(
            Some(["v", "w", "u", "x", "t"].map(String::from).to_vec()),
            vec![
                ("e".into(), ["v", "x", "u"].map(String::from).to_vec()),
                ("f".into(), ["v", "w"].map(String::from).to_vec()),
                ("g".into(), ["u"].map(String::from).to_vec()),
                ("h".into(), ["x", "t"].map(String::from).to_vec()),
            ],
        )
        .unwrap()
        .to_incidence();
        KLabeledIncidenceGraph::from_ids(
            s,
            3,
            &[(1, "u"), (2, "w"), (3, "v"), (5, "w")],
            &[(1, "f"), (2, "g"), (3, "h")],
            &[(1, 2), (2, 1), (3, 1), (5, 1)],
        )
        .unwrap()
    }

    pub fn labelled_right() -> KLabeledIncidenceGraph {
        let s = Hypergraph::new(
            Some(["v", "w", "z", "u", "y"].map(String::from).to_vec()),
            vec![
                ("f".into(), ["v", "w", "z"].map(String::from).to_vec()),
                ("g".into(), ["y", "w", "u"].map(String::from).to_vec()),
                ("h".into(), ["y", "z"].map(String::from).to_vec()),
            ],
        )
        .unwrap()
        .to_incidence();
        KLabeledIncidenceGraph::from_ids(s, 3, &[(1, "u"), (3, "v"), (5, "w")], &[(1, "f"), (2, "g"), (3, "h")], &[(1, 2), (3, 1), (5, 1)])
            .unwrap()
    }

    #[test]
    fn fixtures_have_real_guards() {
        assert!(labelled_left().real_guards());
        assert!(labelled_right().real_guards());
    }

    #[test]
    fn glue_of_fixture_operands() {
        let (l, maps) = labelled_left().glue(&labelled_right()).unwrap();
        assert_eq!((l.skeleton().num_reds(), l.skeleton().num_blues()), (7, 4));
        assert!(l.real_guards());
        // every operand edge lands on a product edge
        for (op, src) in [labelled_left(), labelled_right()].iter().enumerate() {
            for (b, rs) in src.skeleton().all_blue_nbrs().iter().enumerate() {
                for &r in rs {
                    assert!(l.skeleton().has_edge(maps.blue[op][b], maps.red[op][r]));
                }
            }
        }
    }

    #[test]
    fn glue_is_commutative_up_to_isomorphism() {
        let (a, _) = labelled_left().glue(&labelled_right()).unwrap();
        let (b, _) = labelled_right().glue(&labelled_left()).unwrap();
        assert!(isomorphic(a.skeleton(), b.skeleton()).unwrap());
    }

    #[test]
    fn glue_with_itself() {
        let l = labelled_right().set_red_labels(&[6, 7], &["z", "y"], &[1, 3]).unwrap();
        let (g, _) = l.glue(&l).unwrap();
        assert!(isomorphic(g.skeleton(), l.skeleton()).unwrap());
    }

    #[test]
    fn disjoint_label_domains_give_disjoint_union() {
        let a = KLabeledIncidenceGraph::label_free(Hypergraph::path(2).unwrap().to_incidence(), 2).unwrap();
        let (g, _) = a.glue(&a).unwrap();
        assert_eq!(g.skeleton().num_blues(), 4);
        assert_eq!(g.skeleton().connected_components().len(), 2);
    }

    #[test]
    fn relabel_blue() {
        let l = labelled_left().set_blue_labels(&[1], &["g"]).unwrap();
        assert_eq!(l.blue_id(1), Some("g"));
        assert_eq!(labelled_left().set_blue_labels(&[], &[]).unwrap(), labelled_left());
        assert!(labelled_left().set_blue_labels(&[4], &["g"]).is_err());
        let l = labelled_left().set_red_labels(&[7], &["t"], &[3]).unwrap();
        assert_eq!(l.red_id(7), Some("t"));
        assert!(l.real_guards());
    }

    #[test]
    fn removals() {
        let l = labelled_left();
        let none = BTreeSet::new();
        assert_eq!(l.remove_red(&none).unwrap(), l);
        let r = l.remove_red(&[1, 5].into()).unwrap();
        assert_eq!(r.red_labels().len(), 2);
        assert_eq!(r.guards().len(), 2);
        assert_eq!(r.skeleton(), l.skeleton());
        assert!(l.remove_red(&[4].into()).is_err());
        let all = l.remove_red(&[1, 2, 3, 5].into()).unwrap().remove_blue(&[1, 2, 3].into()).unwrap();
        assert!(all.is_label_free());
    }

    #[test]
    fn m_f_shapes() {
        let m = m_f(&TransitionFn::new(&[(1, 2), (3, 2)]), 3).unwrap();
        assert_eq!((m.skeleton().num_reds(), m.skeleton().num_blues(), m.skeleton().num_edges()), (2, 1, 2));
        assert!(m.real_guards());
        let one = m_f(&TransitionFn::new(&[(1, 1)]), 1).unwrap();
        assert_eq!(one.skeleton().num_edges(), 1);
    }

    #[test]
    fn transition_on_fixture_operand() {
        let l = labelled_left();
        let f = TransitionFn::new(&[(1, 2), (3, 2)]);
        assert!(f.is_transition_for(l.guards()));
        let t = l.apply_transition(&f).unwrap();
        let b2 = *t.blue_labels().get(&2).unwrap();
        let s = t.skeleton();
        assert_eq!(s.blue_nbrs(b2).len(), 2);
        assert!(s.has_edge(b2, t.red_labels()[&1]));
        assert!(s.has_edge(b2, t.red_labels()[&3]));
        assert_eq!(s.num_blues(), 5);
        assert!(t.real_guards());
        // both code paths agree
        let dropped = l.transition_drop(&f);
        assert_eq!(dropped, [2].into());
        let (direct, _) = m_f(&f, 3).unwrap().glue(&l.remove_blue(&dropped).unwrap()).unwrap();
        assert_eq!(direct, t);
        // not a transition: label 1 is guarded into img(f) but missing from dom(f)
        assert!(!TransitionFn::new(&[(3, 2)]).is_transition_for(l.guards()));
    }

    #[test]
    fn transition_without_removal() {
        let l = labelled_left();
        let f = TransitionFn::new(&[(2, 3), (3, 3), (5, 3)]);
        // label 3 is not a guard value, so nothing is dropped
        assert!(l.transition_drop(&f).is_empty());
        let t = l.apply_transition(&f).unwrap();
        assert_eq!(t.skeleton().num_blues(), l.skeleton().num_blues());
    }
}
