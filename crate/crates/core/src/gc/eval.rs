//! Tuple-counting semantics: `∃^{≥n} x̄ . χ` holds when at least `n`
//! distinct value tuples for `x̄` satisfy `χ`. Tuple entries may coincide.

use std::collections::{BTreeMap, HashMap};

use super::{Count, Formula, Quantifier, Vars};
use crate::error::{Error, Result};
use crate::hypergraph::IncidenceGraph;

/// An incidence graph with assignments for vertex and edge variables.
#[derive(Clone, Debug)]
pub struct Interpretation<'a> {
    pub graph: &'a IncidenceGraph,
    pub nu_v: BTreeMap<usize, usize>,
    pub nu_e: BTreeMap<usize, usize>,
}

impl<'a> Interpretation<'a> {
    pub fn new(graph: &'a IncidenceGraph) -> Self {
        Interpretation { graph, nu_v: BTreeMap::new(), nu_e: BTreeMap::new() }
    }

    /// Assigns by vertex id.
    pub fn with_ids(graph: &'a IncidenceGraph, nu_v: &[(usize, &str)], nu_e: &[(usize, &str)]) -> Result<Self> {
        let mut out = Interpretation::new(graph);
        for &(i, id) in nu_v {
            out.nu_v.insert(i, graph.red_index(id).ok_or_else(|| Error::UnknownVertex(id.into()))?);
        }
        for &(j, id) in nu_e {
            out.nu_e.insert(j, graph.blue_index(id).ok_or_else(|| Error::UnknownEdge(id.into()))?);
        }
        Ok(out)
    }
}

type MemoKey = (*const Quantifier, Vec<usize>, Vec<usize>);

struct Evaluator<'a> {
    graph: &'a IncidenceGraph,
    /// free variables of each quantifier node
    free: HashMap<*const Quantifier, (Vec<usize>, Vec<usize>)>,
    memo: HashMap<MemoKey, usize>,
}

pub fn eval(f: &Formula, interp: &Interpretation) -> Result<bool> {
    let mut ev = Evaluator { graph: interp.graph, free: HashMap::new(), memo: HashMap::new() };
    let mut nu_v = interp.nu_v.clone();
    let mut nu_e = interp.nu_e.clone();
    ev.eval(f, &mut nu_v, &mut nu_e)
}

fn lookup(nu: &BTreeMap<usize, usize>, i: usize, kind: char) -> Result<usize> {
    nu.get(&i).copied().ok_or_else(|| Error::Unassigned(format!("{kind}{i}")))
}

impl Evaluator<'_> {
    fn eval(&mut self, f: &Formula, nu_v: &mut BTreeMap<usize, usize>, nu_e: &mut BTreeMap<usize, usize>) -> Result<bool> {
        Ok(match f {
            Formula::Top => true,
            Formula::VEq(a, b) => lookup(nu_v, *a, 'v')? == lookup(nu_v, *b, 'v')?,
            Formula::EEq(a, b) => lookup(nu_e, *a, 'e')? == lookup(nu_e, *b, 'e')?,
            Formula::Edge(j, i) => {
                let (b, r) = (lookup(nu_e, *j, 'e')?, lookup(nu_v, *i, 'v')?);
                self.graph.has_edge(b, r)
            }
            Formula::Not(x) => !self.eval(x, nu_v, nu_e)?,
            Formula::And(a, b) => self.eval(a, nu_v, nu_e)? && self.eval(b, nu_v, nu_e)?,
            Formula::Exists(q) => {
                let hits = self.count(q, nu_v, nu_e)?;
                match q.count {
                    Count::AtLeast(n) => hits >= n,
                    Count::Exactly(n) => hits == n,
                }
            }
        })
    }

    /// Satisfying tuples, counted up to `n + 1` and memoised on the values
    /// of the free variables.
    fn count(&mut self, q: &Quantifier, nu_v: &mut BTreeMap<usize, usize>, nu_e: &mut BTreeMap<usize, usize>) -> Result<usize> {
        let ptr = q as *const Quantifier;
        let (fv, fe) = self
            .free
            .entry(ptr)
            .or_insert_with(|| {
                let (v, e) = Formula::Exists(q.clone()).free();
                (v.into_iter().collect(), e.into_iter().collect())
            })
            .clone();
        let key_v = fv.iter().map(|&i| lookup(nu_v, i, 'v')).collect::<Result<Vec<_>>>()?;
        let key_e = fe.iter().map(|&j| lookup(nu_e, j, 'e')).collect::<Result<Vec<_>>>()?;
        let key = (ptr, key_v, key_e);
        if let Some(&hits) = self.memo.get(&key) {
            return Ok(hits);
        }
        let vars = q.vars.indices().to_vec();
        let vertex = matches!(q.vars, Vars::Vertex(_));
        let saved: Vec<Option<usize>> = {
            let nu = if vertex { &*nu_v } else { &*nu_e };
            vars.iter().map(|x| nu.get(x).copied()).collect()
        };
        let hits = self.tuples(q, &vars, 0, q.count.n() + 1, nu_v, nu_e)?;
        let nu = if vertex { nu_v } else { nu_e };
        for (x, old) in vars.iter().zip(saved) {
            match old {
                Some(o) => nu.insert(*x, o),
                None => nu.remove(x),
            };
        }
        self.memo.insert(key, hits);
        Ok(hits)
    }

    fn tuples(
        &mut self,
        q: &Quantifier,
        vars: &[usize],
        at: usize,
        cap: usize,
        nu_v: &mut BTreeMap<usize, usize>,
        nu_e: &mut BTreeMap<usize, usize>,
    ) -> Result<usize> {
        if at == vars.len() {
            for (&i, &j) in &q.guard {
                let (b, r) = (lookup(nu_e, j, 'e')?, lookup(nu_v, i, 'v')?);
                if !self.graph.has_edge(b, r) {
                    return Ok(0);
                }
            }
            return Ok(usize::from(self.eval(&q.body, nu_v, nu_e)?));
        }
        let x = vars[at];
        let candidates: Vec<usize> = match &q.vars {
            // a guarded vertex can only sit in its guard's content
            Vars::Vertex(_) => match q.guard.get(&x).map(|&j| nu_e.get(&j).copied()) {
                Some(Some(b)) => self.graph.blue_nbrs(b).to_vec(),
                Some(None) => return Err(Error::Unassigned(format!("e{}", q.guard[&x]))),
                None => (0..self.graph.num_reds()).collect(),
            },
            Vars::Edge(_) => (0..self.graph.num_blues()).collect(),
        };
        let mut hits = 0;
        for c in candidates {
            match &q.vars {
                Vars::Vertex(_) => nu_v.insert(x, c),
                Vars::Edge(_) => nu_e.insert(x, c),
            };
            hits += self.tuples(q, vars, at + 1, cap - hits, nu_v, nu_e)?;
            if hits >= cap {
                break;
            }
        }
        Ok(hits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{example_g, example_h};
    use crate::gc::{parse, phi_g};
    use crate::hypergraph::Hypergraph;

    #[test]
    fn phi_g_describes_g() {
        let g = example_g().to_incidence();
        let h = example_h().to_incidence();
        assert!(eval(&phi_g(), &Interpretation::new(&g)).unwrap());
        assert!(!eval(&phi_g(), &Interpretation::new(&h)).unwrap());
    }

    #[test]
    fn counting_hyperedges() {
        let psi1 = parse("existseq 4 (e1) . e1=e1").unwrap();
        assert!(eval(&psi1, &Interpretation::new(&example_g().to_incidence())).unwrap());
        let three = Hypergraph::path(3).unwrap().to_incidence();
        assert!(!eval(&psi1, &Interpretation::new(&three)).unwrap());
    }

    #[test]
    fn tuples_may_repeat() {
        let one = Hypergraph::from_edges(&[("e", &["x", "y"])]).unwrap().to_incidence();
        let pairs = |n| parse(&format!("existsge 1 (e1) . existsge {n} (v1,v2) [v1@e1,v2@e1] . v1=v1 & v2=v2")).ok();
        assert!(pairs(4).is_none()); // conjunction needs parentheses
        let f = |n| parse(&format!("existsge 1 (e1) . existsge {n} (v1,v2) [v1@e1,v2@e1] . (v1=v1 & v2=v2)")).unwrap();
        let i = Interpretation::new(&one);
        assert!(eval(&f(4), &i).unwrap());
        assert!(!eval(&f(5), &i).unwrap());
    }

    #[test]
    fn free_variables_need_values() {
        let g = example_g().to_incidence();
        let f = parse("E(e1,v1)").unwrap();
        assert!(matches!(eval(&f, &Interpretation::new(&g)), Err(Error::Unassigned(_))));
        let i = Interpretation::with_ids(&g, &[(1, "a")], &[(1, "i")]).unwrap();
        assert!(eval(&f, &i).unwrap());
        let i = Interpretation::with_ids(&g, &[(1, "c")], &[(1, "i")]).unwrap();
        assert!(!eval(&f, &i).unwrap());
    }

    #[test]
    fn nested_memo_is_consistent() {
        // every vertex of G lies in exactly 3 hyperedges
        let f = parse("~existsge 1 (e1) . existsge 1 (v1) [v1@e1] . ~existseq 3 (e1) [v1@e1] . E(e1,v1)").unwrap();
        assert!(eval(&f, &Interpretation::new(&example_g().to_incidence())).unwrap());
        assert!(!eval(&f, &Interpretation::new(&example_h().to_incidence())).unwrap());
    }
}
