//! Nested cut systems on stable graphs and their factorization chains.
//!
//! A cut system marks interior points on the edges of a graph, each mark
//! carrying a level and an index within its level. The marks of level `l`
//! form the boundary of a closed subgraph `U_l`, and the subgraphs must be
//! nested: `U_0 ⊆ U_1 ⊆ ..`. Combinatorially this means the complement of
//! the marks splits into pieces that can be consistently assigned region
//! numbers, with a level-`l` mark separating region `l` from region `l+1`.
//! The `root_region` field pins the assignment by naming the region of the
//! piece containing vertex 0.
//!
//! The factorization chain of a cut system lists, per region, the weighted
//! cospan of its connected components labelled by their genus, with the
//! marks as feet. Composing the whole chain recovers the closed connected
//! morphism of the graph's total genus.

use crate::cospan::WeightedCospan;
use crate::finset::Cospan;
use crate::graph::StableGraph;
use crate::moduli::{FactorizationChain, ModuliError};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CutError {
    #[error("cut level {0} has no marks; every cut must be nonempty")]
    EmptyCut(usize),
    #[error("cuts are not nested: {0}")]
    NotNested(String),
    #[error("invalid cut system: {0}")]
    Invalid(String),
    #[error(transparent)]
    Chain(#[from] ModuliError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutMark {
    pub level: usize,
    pub index: usize,
}

/// Marks per edge in traversal order (from the smaller endpoint of the edge
/// as stored; loops traverse in storage orientation).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSystem {
    pub marks: Vec<Vec<CutMark>>,
    pub root_region: usize,
}

struct Regions {
    /// Region index per piece: vertices first, then the segments of each
    /// edge in order.
    phi: Vec<usize>,
    seg_offset: Vec<usize>,
    levels: usize,
}

impl CutSystem {
    pub fn level_count(&self) -> Option<usize> {
        self.marks
            .iter()
            .flatten()
            .map(|m| m.level + 1)
            .max()
    }

    /// Marks of one level sorted by index, as `(edge, position)` pairs.
    fn level_marks(&self, level: usize) -> Result<Vec<(usize, usize)>, CutError> {
        let mut found: Vec<(usize, (usize, usize))> = Vec::new();
        for (e, ms) in self.marks.iter().enumerate() {
            for (p, m) in ms.iter().enumerate() {
                if m.level == level {
                    found.push((m.index, (e, p)));
                }
            }
        }
        if found.is_empty() {
            return Err(CutError::EmptyCut(level));
        }
        found.sort_unstable();
        for (want, (idx, _)) in found.iter().enumerate() {
            if *idx != want {
                return Err(CutError::Invalid(format!(
                    "level {level} indices are not a permutation of 0..{}",
                    found.len()
                )));
            }
        }
        Ok(found.into_iter().map(|(_, em)| em).collect())
    }

    /// Solves the region assignment, or reports why the cuts do not nest.
    fn solve_regions(&self, g: &StableGraph) -> Result<Regions, CutError> {
        if self.marks.len() != g.edge_count() {
            return Err(CutError::Invalid(format!(
                "{} mark lists for {} edges",
                self.marks.len(),
                g.edge_count()
            )));
        }
        let Some(levels) = self.level_count() else {
            return Err(CutError::EmptyCut(0));
        };
        for l in 0..levels {
            self.level_marks(l)?;
        }
        let nv = g.vertex_count();
        let mut seg_offset = vec![0usize; g.edge_count()];
        let mut pieces = nv;
        for (e, ms) in self.marks.iter().enumerate() {
            seg_offset[e] = pieces;
            pieces += ms.len() + 1;
        }
        // adjacency: (piece, piece, Some(level) across a mark, None at a
        // vertex-segment attachment)
        let mut adj: Vec<Vec<(usize, Option<usize>)>> = vec![Vec::new(); pieces];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let k = self.marks[e].len();
            let first = seg_offset[e];
            let last = seg_offset[e] + k;
            adj[u].push((first, None));
            adj[first].push((u, None));
            adj[v].push((last, None));
            adj[last].push((v, None));
            for (p, m) in self.marks[e].iter().enumerate() {
                let a = seg_offset[e] + p;
                adj[a].push((a + 1, Some(m.level)));
                adj[a + 1].push((a, Some(m.level)));
            }
        }
        if self.root_region > levels {
            return Err(CutError::NotNested(format!(
                "root region {} exceeds {}",
                self.root_region, levels
            )));
        }
        let mut phi = vec![usize::MAX; pieces];
        phi[0] = self.root_region;
        let mut queue = vec![0usize];
        while let Some(p) = queue.pop() {
            let here = phi[p];
            for &(q, lvl) in &adj[p] {
                let expect = match lvl {
                    None => here,
                    Some(l) => {
                        if here == l {
                            l + 1
                        } else if here == l + 1 {
                            l
                        } else {
                            return Err(CutError::NotNested(format!(
                                "a level-{l} mark borders region {here}"
                            )));
                        }
                    }
                };
                if phi[q] == usize::MAX {
                    phi[q] = expect;
                    queue.push(q);
                } else if phi[q] != expect {
                    return Err(CutError::NotNested(format!(
                        "piece {q} forced into regions {} and {expect}",
                        phi[q]
                    )));
                }
            }
        }
        if phi.contains(&usize::MAX) {
            return Err(CutError::Invalid("graph is not connected".into()));
        }
        debug_assert!(phi.iter().all(|&x| x <= levels));
        Ok(Regions {
            phi,
            seg_offset,
            levels,
        })
    }
}

/// Turns a nested cut system into the factorization chain whose i-th object
/// is the i-th cut set and whose cospans are the regions between consecutive
/// cuts, each component labelled by its genus.
pub fn cut_to_factorization(
    g: &StableGraph,
    cuts: &CutSystem,
) -> Result<FactorizationChain, CutError> {
    if !g.is_j_object() {
        return Err(CutError::Invalid(
            "graph must be connected, stable, with at least one edge".into(),
        ));
    }
    let regions = cuts.solve_regions(g)?;
    let n = regions.levels; // levels 0..n-1, regions 0..=n
    let nv = g.vertex_count();
    let monoid = g.monoid();

    // components per region: union-find over pieces, linked only at
    // vertex-segment attachments between pieces of the same region
    let pieces = regions.phi.len();
    let mut parent: Vec<usize> = (0..pieces).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let mut links: Vec<(usize, usize)> = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let k = cuts.marks[e].len();
        links.push((u, regions.seg_offset[e]));
        links.push((v, regions.seg_offset[e] + k));
    }
    for &(a, b) in &links {
        debug_assert_eq!(regions.phi[a], regions.phi[b]);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    // genus per component root: weights, then cycle count from the links
    let mut weight_sum: Vec<i64> = vec![0; pieces];
    let mut piece_count: Vec<usize> = vec![0; pieces];
    let mut link_count: Vec<usize> = vec![0; pieces];
    for p in 0..pieces {
        let r = find(&mut parent, p);
        piece_count[r] += 1;
        if p < nv {
            weight_sum[r] = monoid.add(weight_sum[r], g.weights()[p]);
        }
    }
    for &(a, _) in &links {
        let r = find(&mut parent, a);
        link_count[r] += 1;
    }
    let genus_of = |root: usize, monoid: crate::weight::Weighting| {
        let b1 = (link_count[root] + 1 - piece_count[root]) as u64;
        monoid.add_alpha_times(weight_sum[root], b1)
    };

    // level marks and the segment on the given side of each mark
    let mut level_marks: Vec<Vec<(usize, usize)>> = Vec::with_capacity(n);
    for l in 0..n {
        level_marks.push(cuts.level_marks(l)?);
    }
    let side_segment = |e: usize, p: usize, region: usize| -> usize {
        let before = regions.seg_offset[e] + p;
        let after = before + 1;
        if regions.phi[before] == region {
            before
        } else {
            debug_assert_eq!(regions.phi[after], region);
            after
        }
    };

    let mut cospans = Vec::with_capacity(n + 1);
    for r in 0..=n {
        // components of region r in deterministic order
        let mut comps: Vec<usize> = (0..pieces)
            .filter(|&p| regions.phi[p] == r && find(&mut parent, p) == p)
            .collect();
        comps.sort_unstable();
        let comp_index = |parent: &mut Vec<usize>, p: usize, comps: &[usize]| {
            let root = find(parent, p);
            comps.binary_search(&root).expect("piece in its region")
        };
        let left: Vec<(usize, usize)> = if r == 0 {
            Vec::new()
        } else {
            level_marks[r - 1].clone()
        };
        let right: Vec<(usize, usize)> = if r == n {
            Vec::new()
        } else {
            level_marks[r].clone()
        };
        let lm: Vec<usize> = left
            .iter()
            .map(|&(e, p)| comp_index(&mut parent, side_segment(e, p, r), &comps))
            .collect();
        let rm: Vec<usize> = right
            .iter()
            .map(|&(e, p)| comp_index(&mut parent, side_segment(e, p, r), &comps))
            .collect();
        let labels: Vec<i64> = comps.iter().map(|&c| genus_of(c, monoid)).collect();
        let cospan = Cospan::from_class_maps(lm.len(), rm.len(), comps.len(), lm, rm)
            .map_err(|e| CutError::Invalid(e.to_string()))?;
        cospans.push(
            WeightedCospan::new(monoid, cospan, labels)
                .map_err(|e| CutError::Invalid(e.to_string()))?,
        );
    }
    Ok(FactorizationChain::new(cospans)?)
}

/// The edge lengths a cut system induces from barycentric coordinates: each
/// mark contributes `t_level / |level|` to its edge, unmarked edges get
/// length zero.
pub fn induced_metric(
    g: &StableGraph,
    cuts: &CutSystem,
    t: &[BigRational],
) -> Result<Vec<BigRational>, CutError> {
    let Some(levels) = cuts.level_count() else {
        return Err(CutError::EmptyCut(0));
    };
    if t.len() != levels {
        return Err(CutError::Invalid(format!(
            "{} coordinates for {levels} cut levels",
            t.len()
        )));
    }
    let mut level_size = vec![0usize; levels];
    for m in cuts.marks.iter().flatten() {
        level_size[m.level] += 1;
    }
    let mut out = Vec::with_capacity(g.edge_count());
    for ms in &cuts.marks {
        let mut d = BigRational::from_integer(BigInt::from(0));
        for m in ms {
            d += &t[m.level] / BigRational::from_integer(BigInt::from(level_size[m.level] as i64));
        }
        out.push(d);
    }
    Ok(out)
}

/// Samples a valid nested cut system: random region values at the vertices,
/// random monotone-with-excursions walks along each edge, indices shuffled
/// per level. Falls back to a two-mark cut on edge 0 if sampling fails to
/// cover every level.
pub fn random_cut_system<R: Rng>(rng: &mut R, g: &StableGraph, max_levels: usize) -> CutSystem {
    use rand::seq::SliceRandom;
    let ne = g.edge_count();
    'attempt: for _ in 0..64 {
        let levels = rng.random_range(1..=max_levels.max(1));
        let top = levels; // region values 0..=levels
        let phi: Vec<usize> = (0..g.vertex_count())
            .map(|_| rng.random_range(0..=top))
            .collect();
        let mut marks: Vec<Vec<usize>> = Vec::with_capacity(ne);
        for &(u, v) in g.edges() {
            let mut seq = vec![phi[u]];
            let mut cur = phi[u];
            let mut steps = 0;
            loop {
                if cur == phi[v] && (steps >= 8 || rng.random_range(0..10u8) < 6) {
                    break;
                }
                let toward = match cur.cmp(&phi[v]) {
                    std::cmp::Ordering::Less => cur + 1,
                    std::cmp::Ordering::Greater => cur - 1,
                    std::cmp::Ordering::Equal => {
                        if cur == 0 {
                            cur + 1
                        } else if cur == top {
                            cur - 1
                        } else if rng.random_range(0..2u8) == 0 {
                            cur + 1
                        } else {
                            cur - 1
                        }
                    }
                };
                let wander = steps < 6 && rng.random_range(0..4u8) == 0;
                cur = if wander {
                    // step away when possible
                    let away = if toward > cur { cur.checked_sub(1) } else { cur.checked_add(1) };
                    match away {
                        Some(a) if a <= top => a,
                        _ => toward,
                    }
                } else {
                    toward
                };
                seq.push(cur);
                steps += 1;
            }
            marks.push(seq.windows(2).map(|w| w[0].min(w[1])).collect());
        }
        // every level needs at least one mark
        let mut seen = vec![false; levels];
        for l in marks.iter().flatten() {
            seen[*l] = true;
        }
        if seen.iter().any(|&s| !s) {
            continue 'attempt;
        }
        // assign indices per level
        let mut by_level: Vec<Vec<(usize, usize)>> = vec![Vec::new(); levels];
        for (e, ms) in marks.iter().enumerate() {
            for (p, &l) in ms.iter().enumerate() {
                by_level[l].push((e, p));
            }
        }
        let mut index: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        for lv in by_level.iter_mut() {
            lv.shuffle(rng);
            for (i, &em) in lv.iter().enumerate() {
                index.insert(em, i);
            }
        }
        let marks = marks
            .iter()
            .enumerate()
            .map(|(e, ms)| {
                ms.iter()
                    .enumerate()
                    .map(|(p, &l)| CutMark {
                        level: l,
                        index: index[&(e, p)],
                    })
                    .collect()
            })
            .collect();
        return CutSystem {
            marks,
            root_region: phi[0],
        };
    }
    // deterministic fallback: a two-point level-0 cut on edge 0
    let mut marks = vec![Vec::new(); ne];
    marks[0] = vec![CutMark { level: 0, index: 0 }, CutMark { level: 0, index: 1 }];
    CutSystem {
        marks,
        root_region: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::{delta_point_eq, phi, MetricGraph};
    use crate::weight::Weighting;
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn theta() -> StableGraph {
        StableGraph::new(
            Weighting::NatStable,
            vec![0, 0],
            vec![(0, 1), (0, 1), (0, 1)],
        )
        .unwrap()
    }

    #[test]
    fn theta_single_cut_gives_two_tripods() {
        let cuts = CutSystem {
            marks: vec![
                vec![CutMark { level: 0, index: 0 }],
                vec![CutMark { level: 0, index: 1 }],
                vec![CutMark { level: 0, index: 2 }],
            ],
            root_region: 0,
        };
        let chain = cut_to_factorization(&theta(), &cuts).unwrap();
        assert_eq!(chain.cospans().len(), 2);
        let w0 = &chain.cospans()[0];
        assert_eq!(w0.left_size(), 0);
        assert_eq!(w0.right_size(), 3);
        assert_eq!(w0.class_count(), 1);
        assert_eq!(w0.labels(), &[0]);
        let w1 = &chain.cospans()[1];
        assert_eq!(w1.labels(), &[0]);
        assert_eq!(chain.genus(), 2);
    }

    #[test]
    fn loop_on_weight_one_with_a_two_point_cut() {
        // cutting the loop at two points splits off a bare arc: pieces of
        // genus 1 (the vertex side) and 0, the cycle restored by the cut
        let g = StableGraph::new(Weighting::NatStable, vec![1], vec![(0, 0)]).unwrap();
        let cuts = CutSystem {
            marks: vec![vec![
                CutMark { level: 0, index: 0 },
                CutMark { level: 0, index: 1 },
            ]],
            root_region: 0,
        };
        let chain = cut_to_factorization(&g, &cuts).unwrap();
        assert_eq!(chain.cospans()[0].labels(), &[1]);
        assert_eq!(chain.cospans()[1].labels(), &[0]);
        assert_eq!(chain.genus(), 2);
    }

    #[test]
    fn single_mark_on_theta_is_not_nested() {
        let cuts = CutSystem {
            marks: vec![vec![CutMark { level: 0, index: 0 }], vec![], vec![]],
            root_region: 0,
        };
        assert!(matches!(
            cut_to_factorization(&theta(), &cuts),
            Err(CutError::NotNested(_))
        ));
    }

    #[test]
    fn empty_level_is_rejected() {
        let cuts = CutSystem {
            marks: vec![
                vec![CutMark { level: 1, index: 0 }],
                vec![CutMark { level: 1, index: 1 }],
                vec![CutMark { level: 1, index: 2 }],
            ],
            root_region: 0,
        };
        assert_eq!(
            cut_to_factorization(&theta(), &cuts),
            Err(CutError::EmptyCut(0))
        );
    }

    #[test]
    fn bad_indices_and_metric_shapes_are_rejected() {
        // duplicate index within a level
        let cuts = CutSystem {
            marks: vec![
                vec![CutMark { level: 0, index: 0 }],
                vec![CutMark { level: 0, index: 0 }],
                vec![CutMark { level: 0, index: 2 }],
            ],
            root_region: 0,
        };
        assert!(matches!(
            cut_to_factorization(&theta(), &cuts),
            Err(CutError::Invalid(_))
        ));
        // wrong number of mark lists
        let cuts = CutSystem {
            marks: vec![vec![CutMark { level: 0, index: 0 }]],
            root_region: 0,
        };
        assert!(matches!(
            cut_to_factorization(&theta(), &cuts),
            Err(CutError::Invalid(_))
        ));
        // induced_metric wants one coordinate per level
        let cuts = CutSystem {
            marks: vec![
                vec![CutMark { level: 0, index: 0 }],
                vec![CutMark { level: 0, index: 1 }],
                vec![CutMark { level: 0, index: 2 }],
            ],
            root_region: 0,
        };
        assert!(induced_metric(&theta(), &cuts, &[rat(1, 2), rat(1, 2)]).is_err());
    }

    #[test]
    fn random_cuts_compose_to_the_total_genus() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let graphs = crate::graph::enumerate_genus(Weighting::NatStable, 2).unwrap();
        for _ in 0..200 {
            let g = &graphs[rng.random_range(0..graphs.len())];
            let cuts = random_cut_system(&mut rng, g, 3);
            let chain = cut_to_factorization(g, &cuts).unwrap();
            assert_eq!(chain.genus(), g.genus().unwrap());
            // chains over (N, N>=1, 1) are stable morphism by morphism
            for w in chain.cospans() {
                assert!(w.is_stable());
            }
        }
    }

    #[test]
    fn cut_round_trip_through_phi() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let graphs = crate::graph::enumerate_genus(Weighting::NatStable, 2).unwrap();
        for _ in 0..100 {
            let g = &graphs[rng.random_range(0..graphs.len())];
            let cuts = random_cut_system(&mut rng, g, 3);
            let chain = cut_to_factorization(g, &cuts).unwrap();
            let levels = cuts.level_count().unwrap();
            // random positive rationals normalized to 1
            let nums: Vec<i64> = (0..levels).map(|_| rng.random_range(1..=6i64)).collect();
            let total: i64 = nums.iter().sum();
            let t: Vec<BigRational> = nums.iter().map(|&x| rat(x, total)).collect();
            debug_assert!(t.iter().fold(BigRational::from_integer(0.into()), |a, b| a + b).is_one());
            let image = phi(&chain, &t).unwrap();
            let metric = induced_metric(g, &cuts, &t).unwrap();
            let expected = MetricGraph::new(g.clone(), metric).unwrap().stabilize().unwrap();
            assert!(
                delta_point_eq(&image, &expected),
                "round trip failed for {g:?} with {cuts:?}"
            );
        }
    }
}
