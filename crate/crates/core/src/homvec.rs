//! Homomorphism vectors over finite truncations of depth-bounded classes.

use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::budget::Budget;
use crate::canon::{canonical_form, CanonicalForm};
use crate::elimination::{hd_exact_with, shd_exact_with};
use crate::error::{Error, Result};
use crate::families::{enumerate_hypergraphs_with, EnumerationBounds};
use crate::homcount::{count_homs, Semantics};
use crate::hypergraph::{Hypergraph, IncidenceGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassKind {
    /// hypergraphs with strict hypertree depth at most k
    Shd,
    /// hypergraphs with hypertree depth at most k
    Hd,
    /// incidence graphs with strict hypertree depth at most k
    Ishd,
    /// incidence graphs with hypertree depth at most k
    Ihd,
    /// a fixed list of sources, counted under the given semantics
    Explicit(Vec<Hypergraph>, Semantics),
}

impl ClassKind {
    pub fn semantics(&self) -> Semantics {
        match self {
            ClassKind::Shd | ClassKind::Hd => Semantics::Hypergraph,
            ClassKind::Ishd | ClassKind::Ihd => Semantics::Incidence,
            ClassKind::Explicit(_, s) => *s,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassKind::Shd => "SHD",
            ClassKind::Hd => "HD",
            ClassKind::Ishd => "ISHD",
            ClassKind::Ihd => "IHD",
            ClassKind::Explicit(..) => "explicit",
        }
    }
}

impl std::str::FromStr for ClassKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SHD" => Ok(ClassKind::Shd),
            "HD" => Ok(ClassKind::Hd),
            "ISHD" => Ok(ClassKind::Ishd),
            "IHD" => Ok(ClassKind::Ihd),
            _ => Err(Error::InvalidArgument(format!("unknown class `{s}` (expected SHD, HD, ISHD or IHD)"))),
        }
    }
}

/// A class cut down to the members within enumeration bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTruncation {
    pub kind: ClassKind,
    pub k: usize,
    pub bounds: EnumerationBounds,
}

impl fmt::Display for ClassTruncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{} up to ({}, {})", self.kind.name(), self.k, self.bounds.max_edges, self.bounds.max_vertices)?;
        if self.bounds.connected_only {
            f.write_str(" connected")?;
        }
        Ok(())
    }
}

/// One source of a truncation with its canonical key.
#[derive(Clone, Debug)]
pub struct Source {
    pub key: CanonicalForm,
    pub graph: IncidenceGraph,
}

impl ClassTruncation {
    pub fn new(kind: ClassKind, k: usize, bounds: EnumerationBounds) -> Self {
        ClassTruncation { kind, k, bounds }
    }

    /// Members in canonical key order.
    pub fn sources(&self) -> Result<Vec<Source>> {
        self.sources_with(&Budget::default())
    }

    pub fn sources_with(&self, budget: &Budget) -> Result<Vec<Source>> {
        let candidates: Vec<IncidenceGraph> = match &self.kind {
            ClassKind::Explicit(list, _) => list.iter().map(Hypergraph::to_incidence).collect(),
            kind => {
                let all = enumerate_hypergraphs_with(&self.bounds, budget)?;
                let strict = matches!(kind, ClassKind::Shd | ClassKind::Ishd);
                let keep = all
                    .par_iter()
                    .map(|h| {
                        let i = h.to_incidence();
                        let b = Budget::default();
                        let d = if strict { shd_exact_with(&i, &b) } else { hd_exact_with(&i, &b) }?.depth;
                        Ok((d <= self.k).then_some(i))
                    })
                    .collect::<Result<Vec<_>>>()?;
                keep.into_iter().flatten().collect()
            }
        };
        let mut out =
            candidates.into_par_iter().map(|graph| Ok(Source { key: canonical_form(&graph)?, graph })).collect::<Result<Vec<_>>>()?;
        out.sort_by(|a, b| a.key.cmp(&b.key));
        out.dedup_by(|a, b| a.key == b.key);
        Ok(out)
    }
}

/// Counts from every source of a truncation into one target, in key order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomVector {
    pub entries: Vec<(CanonicalForm, BigUint)>,
}

impl HomVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Tab-separated `key<TAB>count` lines.
    pub fn to_tsv(&self) -> String {
        self.entries.iter().map(|(k, c)| format!("{k}\t{c}\n")).collect()
    }
}

fn counts(sources: &[Source], target: &IncidenceGraph, sem: Semantics) -> Result<Vec<BigUint>> {
    sources.par_iter().map(|s| count_homs(&s.graph, target, sem)).collect()
}

pub fn hom_vector(ct: &ClassTruncation, target: &IncidenceGraph) -> Result<HomVector> {
    let sources = ct.sources()?;
    hom_vector_over(&sources, ct.kind.semantics(), target)
}

pub fn hom_vector_over(sources: &[Source], sem: Semantics, target: &IncidenceGraph) -> Result<HomVector> {
    let c = counts(sources, target, sem)?;
    Ok(HomVector { entries: sources.iter().map(|s| s.key.clone()).zip(c).collect() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Indistinguishability {
    /// Equal on every source of the truncation.
    Equal { sources: usize },
    /// The first source in key order with different counts.
    Distinguished { source: IncidenceGraph, key: CanonicalForm, left: BigUint, right: BigUint },
}

impl Indistinguishability {
    pub fn is_equal(&self) -> bool {
        matches!(self, Indistinguishability::Equal { .. })
    }
}

pub fn indistinguishable(ct: &ClassTruncation, a: &IncidenceGraph, b: &IncidenceGraph) -> Result<Indistinguishability> {
    let sources = ct.sources()?;
    indistinguishable_over(&sources, ct.kind.semantics(), a, b)
}

pub fn indistinguishable_over(sources: &[Source], sem: Semantics, a: &IncidenceGraph, b: &IncidenceGraph) -> Result<Indistinguishability> {
    let (left, right) = rayon::join(|| counts(sources, a, sem), || counts(sources, b, sem));
    let (left, right) = (left?, right?);
    for ((s, l), r) in sources.iter().zip(left).zip(right) {
        if l != r {
            return Ok(Indistinguishability::Distinguished { source: s.graph.clone(), key: s.key.clone(), left: l, right: r });
        }
    }
    Ok(Indistinguishability::Equal { sources: sources.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{example_g, skew_pair};

    fn trunc(kind: ClassKind, e: usize, v: usize) -> ClassTruncation {
        ClassTruncation::new(kind, 1, EnumerationBounds::new(e, v, false))
    }

    #[test]
    fn skew_pair_over_small_truncations() {
        let (g, h) = skew_pair(1).unwrap();
        let (g, h) = (g.to_incidence(), h.to_incidence());
        let shd = trunc(ClassKind::Shd, 2, 4);
        assert_eq!(hom_vector(&shd, &g).unwrap(), hom_vector(&shd, &h).unwrap());
        assert!(indistinguishable(&shd, &g, &h).unwrap().is_equal());
        let hd = trunc(ClassKind::Hd, 3, 4);
        match indistinguishable(&hd, &g, &h).unwrap() {
            Indistinguishability::Distinguished { left, right, .. } => assert_ne!(left, right),
            v => panic!("expected a distinguisher, got {v:?}"),
        }
    }

    #[test]
    fn reflexive_and_empty() {
        let g = example_g().to_incidence();
        assert!(indistinguishable(&trunc(ClassKind::Ihd, 2, 3), &g, &g).unwrap().is_equal());
        let none = ClassTruncation::new(ClassKind::Explicit(vec![], Semantics::Hypergraph), 1, EnumerationBounds::new(1, 1, false));
        assert!(hom_vector(&none, &g).unwrap().is_empty());
    }

    #[test]
    fn keys_are_sorted_and_unique() {
        let v = hom_vector(&trunc(ClassKind::Ishd, 2, 4), &example_g().to_incidence()).unwrap();
        assert!(v.entries.windows(2).all(|w| w[0].0 < w[1].0));
        assert!(v.to_tsv().lines().count() == v.len());
    }

    #[test]
    fn class_names_parse() {
        assert_eq!("ishd".parse::<ClassKind>().unwrap(), ClassKind::Ishd);
        assert!("XYZ".parse::<ClassKind>().is_err());
    }
}
