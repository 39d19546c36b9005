//! Well-formedness for the full logic and a recogniser for the restricted
//! fragment with consistent guards.

use std::collections::BTreeSet;
use std::fmt;

use super::{Formula, GuardFn, Quantifier, Vars};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GcViolation {
    EdgeIndex {
        j: usize,
        k: usize,
    },
    ZeroIndex,
    ZeroCount,
    EmptyTuple,
    TupleOrder(Vec<usize>),
    /// a quantified variable does not occur free in the guarded body
    TupleNotFree {
        var: String,
    },
    /// the guard domain must be exactly the free vertex variables of the body
    GuardDomain {
        expected: Vec<usize>,
        got: Vec<usize>,
    },
}

impl fmt::Display for GcViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GcViolation::EdgeIndex { j, k } => write!(f, "edge variable e{j} exceeds k = {k}"),
            GcViolation::ZeroIndex => f.write_str("variable index 0"),
            GcViolation::ZeroCount => f.write_str("counting quantifier with n = 0"),
            GcViolation::EmptyTuple => f.write_str("quantifier without variables"),
            GcViolation::TupleOrder(x) => write!(f, "tuple {x:?} is not strictly increasing"),
            GcViolation::TupleNotFree { var } => write!(f, "quantified {var} is not free in its body"),
            GcViolation::GuardDomain { expected, got } => {
                write!(f, "guard covers vertex variables {got:?} but the body has free {expected:?}")
            }
        }
    }
}

fn atom_indices(f: &Formula, k: usize, out: &mut Vec<GcViolation>) {
    let (v, e) = f.free();
    if v.contains(&0) || e.contains(&0) {
        out.push(GcViolation::ZeroIndex);
    }
    for j in e.into_iter().filter(|&j| j > k) {
        out.push(GcViolation::EdgeIndex { j, k });
    }
}

fn collect(f: &Formula, k: usize, out: &mut Vec<GcViolation>) {
    match f {
        Formula::Top => {}
        Formula::VEq(..) | Formula::EEq(..) | Formula::Edge(..) => atom_indices(f, k, out),
        Formula::Not(x) => collect(x, k, out),
        Formula::And(a, b) => {
            collect(a, k, out);
            collect(b, k, out);
        }
        Formula::Exists(q) => {
            collect(&q.body, k, out);
            if q.count.n() == 0 {
                out.push(GcViolation::ZeroCount);
            }
            for (&i, &j) in &q.guard {
                if i == 0 || j == 0 {
                    out.push(GcViolation::ZeroIndex);
                }
                if j > k {
                    out.push(GcViolation::EdgeIndex { j, k });
                }
            }
            let idx = q.vars.indices();
            if idx.is_empty() {
                out.push(GcViolation::EmptyTuple);
            }
            if idx.contains(&0) {
                out.push(GcViolation::ZeroIndex);
            }
            if !idx.windows(2).all(|w| w[0] < w[1]) {
                out.push(GcViolation::TupleOrder(idx.to_vec()));
            }
            let body_v = q.body.free_v();
            let got: Vec<usize> = q.guard.keys().copied().collect();
            if !body_v.iter().copied().eq(got.iter().copied()) {
                out.push(GcViolation::GuardDomain { expected: body_v.into_iter().collect(), got });
            }
            let (fv, fe) = q.guarded_free();
            match &q.vars {
                Vars::Vertex(x) => {
                    for i in x.iter().filter(|i| !fv.contains(i)) {
                        out.push(GcViolation::TupleNotFree { var: format!("v{i}") });
                    }
                }
                Vars::Edge(x) => {
                    for j in x {
                        if *j > k {
                            out.push(GcViolation::EdgeIndex { j: *j, k });
                        }
                        if !fe.contains(j) {
                            out.push(GcViolation::TupleNotFree { var: format!("e{j}") });
                        }
                    }
                }
            }
        }
    }
}

/// All violations of the formation rules with `k` edge variables; empty
/// means well-formed.
pub fn wellformed_gck(f: &Formula, k: usize) -> Vec<GcViolation> {
    let mut out = Vec::new();
    collect(f, k, &mut out);
    out
}

/// Outcome of the restricted-fragment recogniser; `Err` names the rule.
pub type RgcVerdict = std::result::Result<GuardFn, String>;

/// Reads `f` as `(Guard_g ∧ ψ)` and checks `ψ` against the restricted
/// formation rules with guard `g`. Exact-count quantifiers are expanded
/// first. Returns the top-level guard.
pub fn is_rgc(f: &Formula, k: usize) -> RgcVerdict {
    let violations = wellformed_gck(f, k);
    if let Some(v) = violations.first() {
        return Err(format!("not well-formed: {v}"));
    }
    let f = f.desugar_eq();
    let Formula::And(guard, body) = &f else {
        return Err("top level is not a guarded conjunction (Guard & formula)".into());
    };
    let g = read_guard(guard).ok_or("left conjunct is not a logical guard")?;
    shaped(&g, body, k)?;
    Ok(g)
}

/// Parses `T` or a conjunction of `E(e_j, v_i)` atoms with distinct `i`.
fn read_guard(f: &Formula) -> Option<GuardFn> {
    fn go(f: &Formula, g: &mut GuardFn) -> bool {
        match f {
            Formula::Edge(j, i) => g.insert(*i, *j).is_none(),
            Formula::And(a, b) => go(a, g) && go(b, g),
            _ => false,
        }
    }
    let mut g = GuardFn::new();
    match f {
        Formula::Top => Some(g),
        _ => go(f, &mut g).then_some(g),
    }
}

fn restrict(g: &GuardFn, keep: &BTreeSet<usize>) -> GuardFn {
    g.iter().filter(|(i, _)| keep.contains(i)).map(|(&i, &j)| (i, j)).collect()
}

/// `(Guard_g ∧ f)` is in the restricted fragment.
fn shaped(g: &GuardFn, f: &Formula, k: usize) -> std::result::Result<(), String> {
    let free = f.free_v();
    if !g.keys().copied().eq(free.iter().copied()) {
        return Err(format!("guard domain {:?} differs from free vertex variables {:?} in {f}", g.keys().collect::<Vec<_>>(), free));
    }
    if let Some((i, j)) = g.iter().find(|(_, &j)| j == 0 || j > k) {
        return Err(format!("guard v{i}@e{j} outside 1..={k}"));
    }
    match f {
        Formula::Top | Formula::VEq(..) | Formula::EEq(..) | Formula::Edge(..) => Ok(()),
        Formula::Not(x) => shaped(g, x, k),
        Formula::And(a, b) => {
            shaped(&restrict(g, &a.free_v()), a, k)?;
            shaped(&restrict(g, &b.free_v()), b, k)
        }
        Formula::Exists(Quantifier { vars, guard: inner, body, .. }) => {
            shaped(inner, body, k)?;
            match vars {
                Vars::Vertex(x) => {
                    let s: BTreeSet<usize> = x.iter().copied().collect();
                    let expect: GuardFn = inner.iter().filter(|(i, _)| !s.contains(i)).map(|(&i, &j)| (i, j)).collect();
                    if &expect != g {
                        return Err(format!("outer guard {g:?} is not the inner guard {inner:?} without the quantified vertices"));
                    }
                    Ok(())
                }
                Vars::Edge(x) => {
                    let s: BTreeSet<usize> = x.iter().copied().collect();
                    let img: BTreeSet<usize> = inner.values().copied().collect();
                    for (i, &outer) in g {
                        let before = inner[i];
                        if !(outer == before || s.contains(&outer) || !img.contains(&outer)) {
                            return Err(format!(
                                "guard of v{i} moves from e{before} to e{outer}, which is neither quantified here nor free of inner guards"
                            ));
                        }
                    }
                    Ok(())
                }
            }
        }
    }
}
