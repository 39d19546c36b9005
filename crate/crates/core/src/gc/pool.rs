//! The sentence describing example `G`, and a seeded generator of
//! well-formed sentences.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Count, Formula, GuardFn, Vars};

fn v_all(n: usize) -> GuardFn {
    (1..=n).map(|i| (i, 1)).collect()
}

/// `e1` holds exactly the `n` pairwise distinct vertices `v1..vn`.
fn exactly_these(n: usize) -> Formula {
    let distinct = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| Formula::negate(Formula::VEq(i, j))));
    let other = Formula::all((1..=n).map(|i| Formula::negate(Formula::VEq(n + 1, i))));
    let extra = Formula::exists(Count::AtLeast(1), Vars::Vertex(vec![n + 1]), v_all(n + 1), other);
    Formula::all(distinct.chain([Formula::negate(extra)]))
}

/// Hyperedges with exactly `n` vertices, each in exactly 3 hyperedges.
fn edges_of_size(count: usize, n: usize) -> Formula {
    let members = (1..=n).map(|i| Formula::Edge(1, i));
    let degrees = (1..=n).map(|i| Formula::exists(Count::Exactly(3), Vars::Edge(vec![1]), [(i, 1)].into(), Formula::Edge(1, i)));
    let body = Formula::all(members.chain([exactly_these(n)]).chain(degrees));
    let inner = Formula::exists(Count::AtLeast(1), Vars::Vertex((1..=n).collect()), v_all(n), body);
    Formula::exists(Count::Exactly(count), Vars::Edge(vec![1]), GuardFn::new(), inner)
}

/// A sentence with one edge variable and guard depth 2 that holds exactly
/// on hypergraphs isomorphic to example `G`. Every free vertex variable of
/// a quantifier body is guarded by `e1`.
pub fn phi_g() -> Formula {
    let four_edges = Formula::exists(Count::Exactly(4), Vars::Edge(vec![1]), GuardFn::new(), Formula::EEq(1, 1));
    Formula::all([four_edges, edges_of_size(1, 3), edges_of_size(3, 2)])
}

struct Gen<'a> {
    rng: &'a mut ChaCha8Rng,
    k: usize,
}

impl Gen<'_> {
    /// A formula whose free variables lie in `vs` / `es`, with guard depth
    /// at most `depth` and roughly `size` nodes.
    fn formula(&mut self, vs: &[usize], es: &[usize], depth: usize, size: usize) -> Formula {
        let roll = self.rng.gen_range(0..10);
        if size <= 1 || roll < 3 {
            return self.atom(vs, es);
        }
        match roll {
            3 => Formula::negate(self.formula(vs, es, depth, size - 1)),
            4 | 5 => {
                let left = self.rng.gen_range(1..size.max(2));
                Formula::and(self.formula(vs, es, depth, left), self.formula(vs, es, depth, size.saturating_sub(left + 1).max(1)))
            }
            6 | 7 if depth > 0 => self.edge_quantifier(vs, es, depth, size),
            _ if !es.is_empty() => self.vertex_quantifier(vs, es, depth, size),
            _ if depth > 0 => self.edge_quantifier(vs, es, depth, size),
            _ => self.atom(vs, es),
        }
    }

    fn atom(&mut self, vs: &[usize], es: &[usize]) -> Formula {
        let mut options = vec![Formula::Top];
        if let (Some(&a), Some(&b)) = (vs.choose(self.rng), vs.choose(self.rng)) {
            options.push(Formula::VEq(a, b));
        }
        if let (Some(&a), Some(&b)) = (es.choose(self.rng), es.choose(self.rng)) {
            options.push(Formula::EEq(a, b));
        }
        if let (Some(&j), Some(&i)) = (es.choose(self.rng), vs.choose(self.rng)) {
            options.push(Formula::Edge(j, i));
            options.push(Formula::Edge(j, i));
        }
        options.choose(self.rng).cloned().unwrap()
    }

    fn count(&mut self) -> usize {
        *[1, 1, 2, 2, 3, 4].choose(self.rng).unwrap()
    }

    fn exact(&mut self) -> bool {
        self.rng.gen_bool(0.3)
    }

    fn guard(&mut self, body: &Formula, es: &[usize]) -> GuardFn {
        body.free_v().into_iter().map(|i| (i, *es.choose(self.rng).unwrap())).collect()
    }

    fn edge_quantifier(&mut self, vs: &[usize], es: &[usize], depth: usize, size: usize) -> Formula {
        let width = self.rng.gen_range(1..=depth.min(self.k));
        let mut tuple: Vec<usize> = (1..=self.k).collect();
        tuple.shuffle(self.rng);
        tuple.truncate(width);
        tuple.sort_unstable();
        let mut scope: Vec<usize> = es.to_vec();
        scope.extend(&tuple);
        scope.sort_unstable();
        scope.dedup();
        let mut body = self.formula(vs, &scope, depth - width, size - 1);
        let guard = self.guard(&body, &scope);
        let used = Formula::Exists(super::Quantifier {
            count: Count::AtLeast(1),
            vars: Vars::Edge(vec![]),
            guard: guard.clone(),
            body: Box::new(body.clone()),
        })
        .free_e();
        for &j in tuple.iter().filter(|j| !used.contains(j)) {
            body = Formula::and(body, Formula::EEq(j, j));
        }
        let n = self.count();
        let count = if self.exact() { Count::Exactly(n) } else { Count::AtLeast(n) };
        Formula::exists(count, Vars::Edge(tuple), guard, body)
    }

    fn vertex_quantifier(&mut self, vs: &[usize], es: &[usize], depth: usize, size: usize) -> Formula {
        let next = vs.iter().max().copied().unwrap_or(0) + 1;
        let width = self.rng.gen_range(1..=2);
        let tuple: Vec<usize> = (next..next + width).collect();
        let mut scope = vs.to_vec();
        scope.extend(&tuple);
        let mut body = self.formula(&scope, es, depth, size - 1);
        let free = body.free_v();
        for &i in tuple.iter().filter(|i| !free.contains(i)) {
            body = Formula::and(body, Formula::VEq(i, i));
        }
        let guard = self.guard(&body, es);
        let n = self.count();
        let count = if self.exact() { Count::Exactly(n) } else { Count::AtLeast(n) };
        Formula::exists(count, Vars::Vertex(tuple), guard, body)
    }
}

/// `count` sentences with `k` edge variables, guard depth at most `d` and
/// at most `size_bound` nodes, the same for the same seed. The pool opens
/// with the plain hyperedge-counting sentences.
pub fn sentence_pool(k: usize, d: usize, size_bound: usize, seed: u64, count: usize) -> Vec<Formula> {
    let mut out: Vec<Formula> = (1..=count.min(6))
        .map(|n| Formula::exists(Count::AtLeast(n), Vars::Edge(vec![1]), GuardFn::new(), Formula::EEq(1, 1)))
        .filter(|f| d >= 1 && f.size() <= size_bound)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    while out.len() < count && attempts < count * 200 {
        attempts += 1;
        let target = rng.gen_range(2..=size_bound.max(2));
        let f = Gen { rng: &mut rng, k }.formula(&[], &[], d, target);
        if f.is_sentence() && f.size() <= size_bound && f.guard_depth() <= d && super::wellformed_gck(&f, k).is_empty() {
            out.push(f);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gc::{eval, wellformed_gck, Interpretation};
    use crate::testutil::{random_incidence, shuffled};

    #[test]
    fn pool_contract() {
        for (k, d) in [(1, 1), (2, 2), (1, 2)] {
            let pool = sentence_pool(k, d, 25, 7, 200);
            assert_eq!(pool.len(), 200);
            for f in &pool {
                assert!(wellformed_gck(f, k).is_empty(), "{f}");
                assert!(f.guard_depth() <= d && f.size() <= 25 && f.is_sentence(), "{f}");
            }
        }
        assert_eq!(sentence_pool(1, 1, 25, 3, 50), sentence_pool(1, 1, 25, 3, 50));
        let floor = sentence_pool(1, 1, 25, 3, 50);
        assert_eq!(floor[0].render(), "existsge 1 (e1) [] . e1=e1");
    }

    #[test]
    fn pool_sentences_are_isomorphism_invariant() {
        let pool = sentence_pool(2, 2, 20, 11, 60);
        for seed in 0..10 {
            let i = random_incidence(seed, 4, 4);
            let j = i.permuted(&shuffled(i.num_reds(), seed + 100), &shuffled(i.num_blues(), seed + 200));
            for f in &pool {
                assert_eq!(eval(f, &Interpretation::new(&i)).unwrap(), eval(f, &Interpretation::new(&j)).unwrap(), "{f}");
            }
        }
    }
}
