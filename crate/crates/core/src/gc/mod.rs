//! Guarded counting logic over incidence structures: syntax, free
//! variables, guard depth, well-formedness, the restricted fragment and a
//! tuple-counting evaluator.

mod check;
mod eval;
mod parse;
mod pool;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use check::{is_rgc, wellformed_gck, GcViolation, RgcVerdict};
pub use eval::{eval, Interpretation};
pub use parse::parse;
pub use pool::{phi_g, sentence_pool};

/// Partial map from vertex-variable index to edge-variable index; stands
/// for the conjunction of `E(e_{g(i)}, v_i)`.
pub type GuardFn = BTreeMap<usize, usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Vars {
    Vertex(Vec<usize>),
    Edge(Vec<usize>),
}

impl Vars {
    pub fn indices(&self) -> &[usize] {
        match self {
            Vars::Vertex(x) | Vars::Edge(x) => x,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Count {
    AtLeast(usize),
    Exactly(usize),
}

impl Count {
    pub fn n(self) -> usize {
        match self {
            Count::AtLeast(n) | Count::Exactly(n) => n,
        }
    }
}

/// `∃^{≥n} x̄ . (Guard_g ∧ body)` or its exact-count shorthand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quantifier {
    pub count: Count,
    pub vars: Vars,
    pub guard: GuardFn,
    pub body: Box<Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    VEq(usize, usize),
    EEq(usize, usize),
    /// `E(e_j, v_i)` stored as `(j, i)`
    Edge(usize, usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Exists(Quantifier),
}

impl Formula {
    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    /// Right-nested conjunction; `Top` when empty.
    pub fn all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut parts: Vec<Formula> = parts.into_iter().collect();
        let Some(mut acc) = parts.pop() else { return Formula::Top };
        while let Some(p) = parts.pop() {
            acc = Formula::and(p, acc);
        }
        acc
    }

    pub fn exists(count: Count, vars: Vars, guard: GuardFn, body: Formula) -> Formula {
        Formula::Exists(Quantifier { count, vars, guard, body: Box::new(body) })
    }

    /// The logical guard of `g`.
    pub fn guard_formula(g: &GuardFn) -> Formula {
        Formula::all(g.iter().map(|(&i, &j)| Formula::Edge(j, i)))
    }

    pub fn free_v(&self) -> BTreeSet<usize> {
        self.free().0
    }

    pub fn free_e(&self) -> BTreeSet<usize> {
        self.free().1
    }

    /// Free vertex and edge variable indices.
    pub fn free(&self) -> (BTreeSet<usize>, BTreeSet<usize>) {
        match self {
            Formula::Top => Default::default(),
            Formula::VEq(a, b) => ([*a, *b].into(), BTreeSet::new()),
            Formula::EEq(a, b) => (BTreeSet::new(), [*a, *b].into()),
            Formula::Edge(j, i) => ([*i].into(), [*j].into()),
            Formula::Not(f) => f.free(),
            Formula::And(a, b) => {
                let (mut v, mut e) = a.free();
                let (v2, e2) = b.free();
                v.extend(v2);
                e.extend(e2);
                (v, e)
            }
            Formula::Exists(q) => {
                let (mut v, mut e) = q.guarded_free();
                match &q.vars {
                    Vars::Vertex(x) => x.iter().for_each(|i| {
                        v.remove(i);
                    }),
                    Vars::Edge(x) => x.iter().for_each(|j| {
                        e.remove(j);
                    }),
                }
                (v, e)
            }
        }
    }

    pub fn guard_depth(&self) -> usize {
        match self {
            Formula::Top | Formula::VEq(..) | Formula::EEq(..) | Formula::Edge(..) => 0,
            Formula::Not(f) => f.guard_depth(),
            Formula::And(a, b) => a.guard_depth().max(b.guard_depth()),
            Formula::Exists(q) => {
                q.body.guard_depth()
                    + match &q.vars {
                        Vars::Vertex(_) => 0,
                        Vars::Edge(x) => x.len(),
                    }
            }
        }
    }

    /// Number of AST nodes, counting each quantifier guard as one node.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::VEq(..) | Formula::EEq(..) | Formula::Edge(..) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(a, b) => 1 + a.size() + b.size(),
            Formula::Exists(q) => 1 + usize::from(!q.guard.is_empty()) + q.body.size(),
        }
    }

    pub fn is_sentence(&self) -> bool {
        let (v, e) = self.free();
        v.is_empty() && e.is_empty()
    }

    /// Rewrites every exact-count quantifier as `∃^{≥n} ∧ ¬∃^{≥n+1}`.
    pub fn desugar_eq(&self) -> Formula {
        match self {
            Formula::Not(f) => Formula::negate(f.desugar_eq()),
            Formula::And(a, b) => Formula::and(a.desugar_eq(), b.desugar_eq()),
            Formula::Exists(q) => {
                let body = q.body.desugar_eq();
                let at_least = |n| Formula::exists(Count::AtLeast(n), q.vars.clone(), q.guard.clone(), body.clone());
                match q.count {
                    Count::AtLeast(n) => at_least(n),
                    Count::Exactly(n) => Formula::and(at_least(n), Formula::negate(at_least(n + 1))),
                }
            }
            atom => atom.clone(),
        }
    }

    /// Concrete syntax accepted by [`parse`].
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl Quantifier {
    /// Free variables of `Guard_g ∧ body`.
    pub fn guarded_free(&self) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let (mut v, mut e) = self.body.free();
        v.extend(self.guard.keys());
        e.extend(self.guard.values());
        (v, e)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("T"),
            Formula::VEq(a, b) => write!(f, "v{a}=v{b}"),
            Formula::EEq(a, b) => write!(f, "e{a}=e{b}"),
            Formula::Edge(j, i) => write!(f, "E(e{j},v{i})"),
            Formula::Not(x) => write!(f, "~{x}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Exists(q) => {
                let (kw, n) = match q.count {
                    Count::AtLeast(n) => ("existsge", n),
                    Count::Exactly(n) => ("existseq", n),
                };
                let (prefix, idx) = match &q.vars {
                    Vars::Vertex(x) => ('v', x),
                    Vars::Edge(x) => ('e', x),
                };
                let vars: Vec<String> = idx.iter().map(|i| format!("{prefix}{i}")).collect();
                let guard: Vec<String> = q.guard.iter().map(|(i, j)| format!("v{i}@e{j}")).collect();
                write!(f, "{kw} {n} ({}) [{}] . {}", vars.join(","), guard.join(","), q.body)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_variables() {
        assert_eq!(Formula::Edge(1, 2).free(), ([2].into(), [1].into()));
        let f = Formula::and(Formula::VEq(1, 2), Formula::EEq(1, 1));
        assert_eq!(f.free(), ([1, 2].into(), [1].into()));
        assert!(phi_g().is_sentence());
    }

    #[test]
    fn guard_depths() {
        assert_eq!(Formula::Edge(1, 1).guard_depth(), 0);
        assert_eq!(phi_g().guard_depth(), 2);
        let q = Formula::exists(Count::AtLeast(1), Vars::Edge(vec![1, 2]), GuardFn::new(), Formula::EEq(1, 2));
        assert_eq!(q.guard_depth(), 2);
    }

    #[test]
    fn guard_edges_are_free_in_the_body() {
        let q = Quantifier {
            count: Count::AtLeast(1),
            vars: Vars::Vertex(vec![1]),
            guard: [(1, 2)].into(),
            body: Box::new(Formula::VEq(1, 1)),
        };
        assert_eq!(Formula::Exists(q).free(), (BTreeSet::new(), [2].into()));
    }

    #[test]
    fn desugar_exact() {
        let psi1 = parse("existseq 4 (e1) . e1=e1").unwrap();
        let d = psi1.desugar_eq();
        assert_eq!(d.render(), "(existsge 4 (e1) [] . e1=e1 & ~existsge 5 (e1) [] . e1=e1)");
        assert_eq!(d.guard_depth(), psi1.guard_depth());
        assert_eq!(d.free(), psi1.free());
        let plain = parse("E(e1,v2)").unwrap();
        assert_eq!(plain.desugar_eq(), plain);
    }
}
