//! The rational chain complex of the genus-g tropical moduli space.
//!
//! The space is the colimit over the graph category of the simplices spanned
//! by edge sets: a graph with `e` edges contributes a cell of simplicial
//! degree `e - 1`. Chains are the sign-coinvariants of the automorphism
//! action on edge orderings, so graphs with an odd symmetry vanish and the
//! remaining isomorphism classes form a basis. Faces contract edges (a loop
//! face bumps the weight by alpha), and contracting the last edge hits the
//! augmentation generator in degree -1, so the homology computed here is
//! reduced.

use crate::graph::{enumerate_genus, GraphError, StableGraph};
use crate::homology::{basis_by_edge_count, contraction_boundary, Budget, ChainComplex, HomologyError};
use crate::linalg::SparseRationalMatrix;
use crate::weight::Weighting;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TropicalError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// The chain complex with its cell basis: `basis[i]` holds the canonical
/// generators in simplicial degree `min_degree + i` (one less than the edge
/// count, with the empty augmentation generator in degree -1).
pub struct TropicalComplex {
    pub genus: i64,
    pub basis: Vec<Vec<StableGraph>>,
    pub complex: ChainComplex,
}

/// Genus ceiling for the default resource budget; the cell enumeration
/// explodes combinatorially past this.
pub const MAX_SUPPORTED_GENUS: i64 = 4;

pub fn build_complex(g: i64, budget: &Budget) -> Result<TropicalComplex, TropicalError> {
    if g > MAX_SUPPORTED_GENUS {
        return Err(HomologyError::ResourceBudgetExceeded.into());
    }
    budget.check()?;
    let cells = enumerate_genus(Weighting::NatStable, g)?;
    budget.check()?;
    let by_edges = basis_by_edge_count(&cells);
    let top_edges = 3 * g as usize - 3;
    // degree -1: the single edgeless generator of weight g
    let augmentation = StableGraph::new(Weighting::NatStable, vec![g], vec![]).unwrap();
    let mut basis: Vec<Vec<StableGraph>> = vec![vec![augmentation]];
    for e in 1..=top_edges {
        basis.push(by_edges.get(&e).cloned().unwrap_or_default());
    }
    budget.check()?;
    let dims: Vec<usize> = basis.iter().map(|b| b.len()).collect();
    let mut boundaries = vec![SparseRationalMatrix::zero(0, 1)];
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
            |_, _| true,
        ));
    }
    Ok(TropicalComplex {
        genus: g,
        basis,
        complex: ChainComplex {
            min_degree: -1,
            dims,
            boundaries,
        },
    })
}

/// Reduced Betti numbers per simplicial degree, `-1 ..= 3g-4`.
pub fn reduced_homology(g: i64, budget: &Budget) -> Result<Vec<(i64, usize)>, TropicalError> {
    let tc = build_complex(g, budget)?;
    Ok(tc.complex.betti_numbers(budget)?)
}

/// Alternating sum of cell counts, including the augmentation generator.
pub fn euler_characteristic(g: i64, budget: &Budget) -> Result<i64, TropicalError> {
    let tc = build_complex(g, budget)?;
    Ok(tc.complex.euler_characteristic())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_two_basis_dimensions() {
        let tc = build_complex(2, &Budget::unlimited()).unwrap();
        // degree -1: augmentation; degree 0: loop on weight-1 vertex and the
        // weight-1--weight-1 bridge; degree 1: loop with pendant weight-1
        // vertex; degree 2: theta and dumbbell are both odd-symmetric
        assert_eq!(tc.complex.dims, vec![1, 2, 1, 0]);
    }

    #[test]
    fn d_squared_zero_small_genus() {
        for g in [2, 3] {
            let tc = build_complex(g, &Budget::unlimited()).unwrap();
            assert!(tc.complex.d_squared_is_zero(), "d^2 != 0 for genus {g}");
        }
    }

    #[test]
    fn genus_two_reduced_homology_vanishes() {
        let h = reduced_homology(2, &Budget::unlimited()).unwrap();
        assert!(h.iter().all(|&(_, b)| b == 0), "{h:?}");
    }

    #[test]
    fn genus_three_has_one_class_in_degree_five() {
        let h = reduced_homology(3, &Budget::unlimited()).unwrap();
        for (deg, b) in h {
            assert_eq!(b, usize::from(deg == 5), "degree {deg}");
        }
    }

    #[test]
    fn one_edge_graphs_hit_the_augmentation_once() {
        for g in [2, 3] {
            let tc = build_complex(g, &Budget::unlimited()).unwrap();
            // the boundary out of degree 0 is the augmentation: one entry of
            // coefficient +-1 per one-edge generator
            let aug = &tc.complex.boundaries[1];
            assert_eq!(aug.rows(), 1);
            assert_eq!(aug.nnz(), tc.complex.dims[1]);
            for (_, _, v) in aug.entries() {
                assert!(v.numer().magnitude() == &1u32.into() && v.denom() == &1.into());
            }
        }
    }

    #[test]
    fn euler_characteristic_matches_betti_sum() {
        for g in [2, 3] {
            let tc = build_complex(g, &Budget::unlimited()).unwrap();
            let chi = tc.complex.euler_characteristic();
            let betti_sum: i64 = tc
                .complex
                .betti_numbers(&Budget::unlimited())
                .unwrap()
                .iter()
                .map(|&(d, b)| if d.rem_euclid(2) == 0 { b as i64 } else { -(b as i64) })
                .sum();
            assert_eq!(chi, betti_sum);
        }
    }

    #[test]
    fn unsupported_genus_is_budget_error() {
        assert!(matches!(
            build_complex(5, &Budget::unlimited()),
            Err(TropicalError::Homology(HomologyError::ResourceBudgetExceeded))
        ));
    }
}
