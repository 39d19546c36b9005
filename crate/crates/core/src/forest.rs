//! Rooted forests with string node ids.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RootedForest {
    ids: Vec<String>,
    parent: Vec<Option<usize>>,
}

impl RootedForest {
    /// Builds a forest from `(node, parent)` pairs; parents may be listed
    /// after their children.
    pub fn new(nodes: &[(String, Option<String>)]) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, (id, _)) in nodes.iter().enumerate() {
            if index.insert(id.as_str(), i).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        let parent = nodes
            .iter()
            .map(|(_, p)| match p {
                None => Ok(None),
                Some(p) => index.get(p.as_str()).map(|&i| Some(i)).ok_or_else(|| Error::UnknownNode(p.clone())),
            })
            .collect::<Result<Vec<_>>>()?;
        RootedForest::from_parents(nodes.iter().map(|(id, _)| id.clone()).collect(), parent)
    }

    pub fn from_parents(ids: Vec<String>, parent: Vec<Option<usize>>) -> Result<Self> {
        if ids.len() != parent.len() {
            return Err(Error::InvalidForest("one parent entry per node expected".into()));
        }
        let f = RootedForest { ids, parent };
        for s in 0..f.len() {
            let mut cur = s;
            for _ in 0..=f.len() {
                match f.parent[cur] {
                    None => break,
                    Some(p) if p >= f.len() => return Err(Error::InvalidForest(format!("parent index {p} out of range"))),
                    Some(p) => cur = p,
                }
            }
            if f.parent[cur].is_some() {
                return Err(Error::InvalidForest(format!("cycle through `{}`", f.ids[s])));
            }
        }
        Ok(f)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, n: usize) -> &str {
        &self.ids[n]
    }

    pub fn node(&self, id: &str) -> Result<usize> {
        self.ids.iter().position(|x| x == id).ok_or_else(|| Error::UnknownNode(id.into()))
    }

    pub fn parent(&self, n: usize) -> Option<usize> {
        self.parent[n]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&n| self.parent[n].is_none()).collect()
    }

    pub fn children(&self, n: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.parent[c] == Some(n)).collect()
    }

    /// Root path `P(n)`, listed from the root down to `n`.
    pub fn path(&self, n: usize) -> Vec<usize> {
        let mut p = vec![n];
        let mut cur = n;
        while let Some(q) = self.parent[cur] {
            p.push(q);
            cur = q;
        }
        p.reverse();
        p
    }

    pub fn level(&self, n: usize) -> usize {
        self.path(n).len()
    }

    pub fn height(&self) -> usize {
        (0..self.len()).map(|n| self.level(n)).max().unwrap_or(0)
    }

    /// Whether `s` lies on the root path of `t`.
    pub fn leq(&self, s: usize, t: usize) -> bool {
        let mut cur = Some(t);
        while let Some(c) = cur {
            if c == s {
                return true;
            }
            cur = self.parent[c];
        }
        false
    }

    /// Deepest common node of the two root paths, if the nodes share a tree.
    pub fn lcv(&self, s: usize, t: usize) -> Option<usize> {
        let ps = self.path(s);
        let pt = self.path(t);
        ps.iter().zip(&pt).take_while(|(a, b)| a == b).last().map(|(a, _)| *a)
    }

    /// `P(n)` together with every descendant of `n`.
    pub fn subtree_with_stem(&self, n: usize) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = self.path(n).into_iter().collect();
        out.extend((0..self.len()).filter(|&t| self.leq(n, t)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn tree(pairs: &[(&str, Option<&str>)]) -> RootedForest {
        let v: Vec<_> = pairs.iter().map(|(a, b)| (a.to_string(), b.map(str::to_string))).collect();
        RootedForest::new(&v).unwrap()
    }

    #[test]
    fn star_lcv_and_stem() {
        let f = tree(&[("t1", None), ("t2", Some("t1")), ("t3", Some("t1")), ("t4", Some("t1"))]);
        assert_eq!(f.lcv(1, 2), Some(0));
        assert_eq!(f.lcv(3, 3), Some(3));
        assert_eq!(f.subtree_with_stem(0).len(), 4);
        assert_eq!(f.height(), 2);
    }

    #[test]
    fn chain_stem() {
        let f = tree(&[("a", None), ("b", Some("a")), ("c", Some("b")), ("d", Some("c"))]);
        assert_eq!(f.subtree_with_stem(1), (0..4).collect());
        assert_eq!(f.lcv(1, 3), Some(1));
        assert!(f.leq(1, 3) && !f.leq(3, 1));
    }

    #[test]
    fn rejects_cycles_and_unknown_parents() {
        let v = vec![("a".to_string(), Some("b".to_string())), ("b".to_string(), Some("a".to_string()))];
        assert!(RootedForest::new(&v).is_err());
        let v = vec![("a".to_string(), Some("zz".to_string()))];
        assert!(matches!(RootedForest::new(&v), Err(Error::UnknownNode(_))));
        let f = tree(&[("a", None)]);
        assert!(f.node("b").is_err());
    }

    #[test]
    fn lcv_matches_path_intersection() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..10);
            let parent: Vec<Option<usize>> =
                (0..n).map(|i| if i == 0 || rng.gen_bool(0.2) { None } else { Some(rng.gen_range(0..i)) }).collect();
            let f = RootedForest::from_parents((0..n).map(|i| format!("n{i}")).collect(), parent).unwrap();
            for s in 0..n {
                for t in 0..n {
                    let ps: BTreeSet<usize> = f.path(s).into_iter().collect();
                    let common: Vec<usize> = f.path(t).into_iter().filter(|x| ps.contains(x)).collect();
                    let deepest = common.iter().copied().max_by_key(|&x| f.level(x));
                    assert_eq!(f.lcv(s, t), deepest);
                    assert_eq!(f.lcv(s, t) == Some(s), f.leq(s, t));
                }
            }
        }
    }
}
