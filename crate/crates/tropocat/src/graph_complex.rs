//! The genus-g piece of the connected commutative graph complex without
//! tadpoles, as an independent homology pipeline.
//!
//! Generators are connected loop-free multigraphs with every valence at
//! least three and first Betti number g, graded by edge count and oriented
//! by edge orderings; an odd automorphism kills a generator. The
//! differential contracts edges, discarding contractions that would create
//! a loop. Its homology in edge degree `e` matches the reduced homology of
//! the genus-g tropical moduli space in simplicial degree `e - 1`; the
//! comparison is wired up in [`compare_with_tropical`].

use crate::graph::{edge_multisets, GraphError, StableGraph};
use crate::homology::{basis_by_edge_count, contraction_boundary, Budget, ChainComplex, HomologyError};
use crate::linalg::SparseRationalMatrix;
use crate::tropical;
use crate::weight::Weighting;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GcError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Tropical(#[from] tropical::TropicalError),
}

/// All generator classes: connected, loop-free, valences >= 3, first Betti
/// number g, no weights. Both odd and even classes are returned; the chain
/// complex keeps only the even ones.
pub fn enumerate_generators(g: i64) -> Result<Vec<StableGraph>, GraphError> {
    if g < 2 {
        return Err(GraphError::InvalidGenus(g));
    }
    let mut found: BTreeSet<StableGraph> = BTreeSet::new();
    for nv in 2..=(2 * (g - 1)) as usize {
        let ne = nv + g as usize - 1;
        edge_multisets(nv, ne, false, None, Some(0), &mut |edges| {
            let graph =
                StableGraph::new(Weighting::NatStable, vec![0; nv], edges.to_vec()).unwrap();
            if !graph.is_connected() {
                return;
            }
            debug_assert!((0..nv).all(|v| graph.valence(v) >= 3));
            let (canon, _) = graph.canonical_form();
            found.insert(canon);
        });
    }
    Ok(found.into_iter().collect())
}

pub struct GcComplex {
    pub genus: i64,
    /// `basis[i]` holds the generators in edge degree `min_degree + i`.
    pub basis: Vec<Vec<StableGraph>>,
    pub complex: ChainComplex,
}

pub fn build_gc(g: i64, budget: &Budget) -> Result<GcComplex, GcError> {
    if g > tropical::MAX_SUPPORTED_GENUS {
        return Err(HomologyError::ResourceBudgetExceeded.into());
    }
    budget.check()?;
    let gens = enumerate_generators(g)?;
    budget.check()?;
    let by_edges = basis_by_edge_count(&gens);
    let min_edges = g as usize + 1; // two trivalent-or-more vertices at least
    let top_edges = 3 * g as usize - 3;
    let mut basis: Vec<Vec<StableGraph>> = Vec::new();
    for e in min_edges..=top_edges {
        basis.push(by_edges.get(&e).cloned().unwrap_or_default());
    }
    let dims: Vec<usize> = basis.iter().map(|b| b.len()).collect();
    // a contraction is discarded when a parallel copy of the same pair
    // exists: the contracted copy would become a loop
    let keep = |k: &StableGraph, i: usize| {
        let pair = k.edges()[i];
        k.edges().iter().filter(|&&e| e == pair).count() == 1
    };
    let mut boundaries = vec![SparseRationalMatrix::zero(0, dims.first().copied().unwrap_or(0))];
    for i in 1..basis.len() {
        budget.check()?;
        let target_index: BTreeMap<StableGraph, usize> = basis[i - 1]
            .iter()
            .cloned()
            .enumerate()
            .map(|(idx, g)| (g, idx))
            .collect();
        boundaries.push(contraction_boundary(
            &basis[i],
            &target_index,
            basis[i - 1].len(),
            keep,
        ));
    }
    Ok(GcComplex {
        genus: g,
        basis,
        complex: ChainComplex {
            min_degree: min_edges as i64,
            dims,
            boundaries,
        },
    })
}

/// Betti numbers per edge degree.
pub fn gc_homology(g: i64, budget: &Budget) -> Result<Vec<(i64, usize)>, GcError> {
    let gc = build_gc(g, budget)?;
    Ok(gc.complex.betti_numbers(budget)?)
}

/// One row of the two-pipeline comparison table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub edge_degree: i64,
    pub simplicial_degree: i64,
    pub tropical_betti: usize,
    pub gc_betti: usize,
    pub equal: bool,
}

/// Runs both pipelines and compares them along the degree dictionary: graph
/// complex edge degree `e` against tropical simplicial degree `e - 1`.
pub fn compare_with_tropical(g: i64, budget: &Budget) -> Result<Vec<ComparisonRow>, GcError> {
    let delta: BTreeMap<i64, usize> = tropical::reduced_homology(g, budget)?
        .into_iter()
        .collect();
    let gc: BTreeMap<i64, usize> = gc_homology(g, budget)?.into_iter().collect();
    let mut rows = Vec::new();
    for e in 1..=(3 * g - 3) {
        let t = delta.get(&(e - 1)).copied().unwrap_or(0);
        let c = gc.get(&e).copied().unwrap_or(0);
        rows.push(ComparisonRow {
            edge_degree: e,
            simplicial_degree: e - 1,
            tropical_betti: t,
            gc_betti: c,
            equal: t == c,
        });
    }
    Ok(rows)
}
