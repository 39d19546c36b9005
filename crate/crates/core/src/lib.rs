//! Strict hypertree depth, hypergraph homomorphism counts, k-labeled
//! incidence graph derivations and guarded counting logic, all sized for
//! small instances that can be checked exhaustively.

pub mod budget;
pub mod canon;
pub mod cli;
pub mod derivation;
mod dsu;
pub mod elimination;
pub mod error;
pub mod families;
pub mod forest;
pub mod gc;
pub mod homcount;
pub mod homvec;
pub mod hypergraph;
pub mod io;
pub mod kli;
pub mod repro;
pub mod script;

#[cfg(test)]
mod testutil;

pub use budget::Budget;
pub use canon::{canonical_form, isomorphic, CanonicalForm};
pub use elimination::{hd_exact, shd_exact, strictify, validate_ef, validate_strict_ef, DepthWitness, EliminationForest};
pub use error::{Error, Result};
pub use forest::RootedForest;
pub use homcount::{count_hg_homs, count_ig_homs, Semantics};
pub use hypergraph::{Hypergraph, HypergraphMutation, IncidenceGraph};
pub use kli::{KLabeledIncidenceGraph, MergeMaps, TransitionFn};
