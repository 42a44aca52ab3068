//! Chain complexes of graph generators with edge-contraction boundaries.
//!
//! Both homology pipelines share this machinery: a basis of canonical
//! non-degenerate graphs per degree, and a boundary that contracts each edge
//! in turn with the alternating sign, transported to the target's reference
//! edge order by the sign of the matching permutation. Generators whose
//! automorphisms act oddly on edge orderings are zero and never enter a
//! basis; boundary terms landing on them are dropped.

use crate::graph::{edge_map_under_relabeling, permutation_sign, StableGraph};
use crate::linalg::{betti, LinalgError, SparseRationalMatrix};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomologyError {
    #[error("resource budget exceeded")]
    ResourceBudgetExceeded,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{0}")]
    BadInput(String),
}

/// Wall-clock budget for the homology drivers.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { deadline: None }
    }

    pub fn seconds(s: u64) -> Self {
        Budget {
            deadline: Some(Instant::now() + Duration::from_secs(s)),
        }
    }

    pub fn check(&self) -> Result<(), HomologyError> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(HomologyError::ResourceBudgetExceeded),
            _ => Ok(()),
        }
    }
}

/// A bounded chain complex. `dims[i]` is the dimension in degree
/// `min_degree + i`; `boundaries[i]` maps that degree one step down (its
/// row count is `dims[i-1]`, or zero for `i = 0`).
#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub min_degree: i64,
    pub dims: Vec<usize>,
    pub boundaries: Vec<SparseRationalMatrix>,
}

impl ChainComplex {
    pub fn degree_range(&self) -> impl Iterator<Item = i64> + '_ {
        self.min_degree..self.min_degree + self.dims.len() as i64
    }

    /// Verifies that consecutive boundaries compose to zero, exactly.
    pub fn d_squared_is_zero(&self) -> bool {
        for i in 1..self.boundaries.len() {
            let prod = self.boundaries[i - 1]
                .multiply(&self.boundaries[i])
                .expect("adjacent boundary shapes must chain");
            if !prod.is_zero_matrix() {
                return false;
            }
        }
        true
    }

    /// Exact boundary ranks, one per degree plus a trailing zero for the
    /// (absent) boundary entering the top degree.
    pub fn boundary_ranks(&self, budget: &Budget) -> Result<Vec<usize>, HomologyError> {
        budget.check()?;
        let mut ranks: Vec<usize> = self
            .boundaries
            .par_iter()
            .map(|m| m.rank())
            .collect();
        budget.check()?;
        ranks.push(0);
        Ok(ranks)
    }

    /// Betti numbers per degree, exact over Q.
    pub fn betti_numbers(&self, budget: &Budget) -> Result<Vec<(i64, usize)>, HomologyError> {
        let ranks = self.boundary_ranks(budget)?;
        let b = betti(&self.dims, &ranks)?;
        Ok(self
            .degree_range()
            .zip(b)
            .collect())
    }

    /// Alternating sum of dimensions.
    pub fn euler_characteristic(&self) -> i64 {
        self.degree_range()
            .zip(&self.dims)
            .map(|(d, &dim)| if d.rem_euclid(2) == 0 { dim as i64 } else { -(dim as i64) })
            .sum()
    }
}

/// Builds the boundary matrix from `sources` (graphs with `e` edges, the
/// reference edge order being their sorted edge list) into the indexed
/// non-degenerate targets with `e - 1` edges.
///
/// For source `K` and edge `i`, the term is `(-1)^i * sign(pi) * [target]`
/// where `pi` is the permutation carrying the contraction-induced edge order
/// to the target's reference order. `keep` can veto individual contractions
/// (the graph complex drops those that would create a loop); terms whose
/// target is not in `target_index` (a degenerate class) are dropped.
pub fn contraction_boundary<F>(
    sources: &[StableGraph],
    target_index: &BTreeMap<StableGraph, usize>,
    target_dim: usize,
    keep: F,
) -> SparseRationalMatrix
where
    F: Fn(&StableGraph, usize) -> bool + Sync,
{
    let columns: Vec<Vec<(usize, i64)>> = sources
        .par_iter()
        .map(|k| {
            let mut col: Vec<(usize, i64)> = Vec::new();
            for i in 0..k.edge_count() {
                if !keep(k, i) {
                    continue;
                }
                let (h, track) = k.contract_edge_tracked(i);
                let out = h.canonical_labeling();
                if out.autos.odd_edge_action {
                    continue;
                }
                let canon = h.relabel(&out.relabeling);
                let Some(&target) = target_index.get(&canon) else {
                    continue;
                };
                if h.edge_count() == 0 {
                    // the augmentation target has a single empty ordering
                    col.push((target, if i % 2 == 0 { 1 } else { -1 }));
                    continue;
                }
                let to_canon = edge_map_under_relabeling(&h, &out.relabeling, &canon)
                    .expect("non-degenerate target has unambiguous edges");
                // induced order: source edges in order, skipping i
                let perm: Vec<usize> = (0..k.edge_count())
                    .filter(|&j| j != i)
                    .map(|j| to_canon[track[j].unwrap()])
                    .collect();
                let sign = permutation_sign(&perm) as i64 * if i % 2 == 0 { 1 } else { -1 };
                col.push((target, sign));
            }
            col
        })
        .collect();
    let triples = columns
        .into_iter()
        .enumerate()
        .flat_map(|(src, col)| col.into_iter().map(move |(tgt, s)| (tgt, src, s)));
    SparseRationalMatrix::from_int_triples(target_dim, sources.len(), triples)
        .expect("boundary triples in range")
}

/// Splits canonical graphs by edge count, dropping degenerate classes.
pub fn basis_by_edge_count(graphs: &[StableGraph]) -> BTreeMap<usize, Vec<StableGraph>> {
    let flags: Vec<(StableGraph, bool)> = graphs
        .par_iter()
        .map(|g| {
            let (canon, autos) = g.canonical_form();
            (canon, autos.odd_edge_action)
        })
        .collect();
    let mut out: BTreeMap<usize, Vec<StableGraph>> = BTreeMap::new();
    for (g, odd) in flags {
        if !odd {
            out.entry(g.edge_count()).or_default().push(g);
        }
    }
    for v in out.values_mut() {
        v.sort();
    }
    out
}
