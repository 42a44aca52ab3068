//! Points of the volume-one tropical moduli space and the evaluation maps
//! landing there.
//!
//! A point is a metric stable graph: exact rational edge lengths summing to
//! one, taken up to weight- and length-preserving isomorphism. Everything
//! here is exact; the face-compatibility contracts demand equality on the
//! nose, not up to epsilon.

use crate::cospan::WeightedCospan;
use crate::finset::Cospan;
use crate::graph::{canonicalize_colored, GraphError, StableGraph};
use crate::weight::Weighting;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModuliError {
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),
    #[error("smoothing produced a weightless circle, which is not a stable graph")]
    UnstableResidue,
    #[error("metric graph has zero total volume")]
    ZeroVolume,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|e| format!("bad numerator {num:?}: {e}"))?;
    let d: BigInt = den.parse().map_err(|e| format!("bad denominator {den:?}: {e}"))?;
    if d.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(n, d))
}

/// A stable graph with exact nonnegative edge lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    graph: StableGraph,
    lengths: Vec<BigRational>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricGraphJson {
    pub vertices: Vec<crate::graph::VertexJson>,
    pub edges: Vec<[usize; 2]>,
    pub lengths: Vec<String>,
}

impl MetricGraph {
    pub fn new(graph: StableGraph, lengths: Vec<BigRational>) -> Result<Self, ModuliError> {
        if lengths.len() != graph.edge_count() {
            return Err(ModuliError::InvalidChain(format!(
                "{} lengths for {} edges",
                lengths.len(),
                graph.edge_count()
            )));
        }
        if lengths.iter().any(|l| l.is_negative()) {
            return Err(ModuliError::InvalidChain("negative edge length".into()));
        }
        Ok(MetricGraph { graph, lengths })
    }

    pub fn graph(&self) -> &StableGraph {
        &self.graph
    }

    pub fn lengths(&self) -> &[BigRational] {
        &self.lengths
    }

    pub fn total_length(&self) -> BigRational {
        self.lengths.iter().fold(BigRational::zero(), |a, b| a + b)
    }

    /// The canonical representative of a point: contracts all zero-length
    /// edges, smooths weight-0 valence-2 vertices by merging their incident
    /// edges (adding lengths), and rescales the total length to one.
    ///
    /// A weight-0 valence-2 vertex whose both half-edges form a single loop
    /// would smooth to a weightless circle; that configuration is rejected
    /// as [`ModuliError::UnstableResidue`].
    pub fn stabilize(&self) -> Result<MetricGraph, ModuliError> {
        let mut graph = self.graph.clone();
        let mut lengths = self.lengths.clone();
        // contract zero-length edges
        while let Some(idx) = lengths.iter().position(|l| l.is_zero()) {
            let (g, track) = graph.contract_edge_tracked(idx);
            let mut next = vec![BigRational::zero(); g.edge_count()];
            for (j, slot) in track.iter().enumerate() {
                if let Some(t) = *slot {
                    next[t] = lengths[j].clone();
                }
            }
            graph = g;
            lengths = next;
        }
        // smooth weight-0 valence-2 vertices
        'smooth: loop {
            for v in 0..graph.vertex_count() {
                if graph.weights()[v] != 0 || graph.valence(v) != 2 {
                    continue;
                }
                let incident: Vec<usize> = graph
                    .edges()
                    .iter()
                    .enumerate()
                    .filter(|(_, &(a, b))| a == v || b == v)
                    .map(|(i, _)| i)
                    .collect();
                if incident.len() == 1 {
                    // both half-edges of a single loop
                    return Err(ModuliError::UnstableResidue);
                }
                debug_assert_eq!(incident.len(), 2);
                let (e, f) = (incident[0], incident[1]);
                let other = |i: usize| {
                    let (a, b) = graph.edges()[i];
                    if a == v {
                        b
                    } else {
                        a
                    }
                };
                let (a, b) = (other(e), other(f));
                let merged_len = &lengths[e] + &lengths[f];
                // drop v and the two incident edges, add the merged edge
                let rename = |x: usize| if x > v { x - 1 } else { x };
                let mut pairs: Vec<(usize, usize, BigRational)> = graph
                    .edges()
                    .iter()
                    .zip(&lengths)
                    .enumerate()
                    .filter(|(i, _)| *i != e && *i != f)
                    .map(|(_, (&(x, y), l))| (rename(x), rename(y), l.clone()))
                    .collect();
                pairs.push((rename(a).min(rename(b)), rename(a).max(rename(b)), merged_len));
                let weights: Vec<i64> = graph
                    .weights()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != v)
                    .map(|(_, &w)| w)
                    .collect();
                pairs.sort_by(|x, y| (x.0, x.1, &x.2).cmp(&(y.0, y.1, &y.2)));
                let edges: Vec<(usize, usize)> = pairs.iter().map(|&(x, y, _)| (x, y)).collect();
                lengths = pairs.into_iter().map(|(_, _, l)| l).collect();
                graph = StableGraph::new(graph.monoid(), weights, edges)
                    .map_err(ModuliError::Graph)?;
                continue 'smooth;
            }
            break;
        }
        let total = lengths.iter().fold(BigRational::zero(), |a, b| a + b);
        if total.is_zero() {
            return Err(ModuliError::ZeroVolume);
        }
        let lengths: Vec<BigRational> = lengths.into_iter().map(|l| l / &total).collect();
        if !graph.is_stable() || !graph.is_connected() {
            return Err(ModuliError::UnstableResidue);
        }
        Ok(MetricGraph { graph, lengths })
    }

    /// Canonical relabeling with the lengths folded into the edge coloring.
    pub fn canonical(&self) -> MetricGraph {
        let colored: Vec<(usize, usize, BigRational)> = self
            .graph
            .edges()
            .iter()
            .zip(&self.lengths)
            .map(|(&(u, v), l)| (u, v, l.clone()))
            .collect();
        let out = canonicalize_colored(self.graph.vertex_count(), self.graph.weights(), &colored);
        let rel = &out.relabeling;
        let mut pairs: Vec<(usize, usize, BigRational)> = colored
            .into_iter()
            .map(|(u, v, l)| {
                let (a, b) = (rel[u].min(rel[v]), rel[u].max(rel[v]));
                (a, b, l)
            })
            .collect();
        pairs.sort_by(|x, y| (x.0, x.1, &x.2).cmp(&(y.0, y.1, &y.2)));
        let nv = self.graph.vertex_count();
        let mut weights = vec![0; nv];
        for v in 0..nv {
            weights[rel[v]] = self.graph.weights()[v];
        }
        let edges: Vec<(usize, usize)> = pairs.iter().map(|&(u, v, _)| (u, v)).collect();
        let lengths: Vec<BigRational> = pairs.into_iter().map(|(_, _, l)| l).collect();
        MetricGraph {
            graph: StableGraph::new(self.graph.monoid(), weights, edges).unwrap(),
            lengths,
        }
    }

    pub fn to_json(&self) -> MetricGraphJson {
        let g = self.graph.to_json();
        MetricGraphJson {
            vertices: g.vertices,
            edges: g.edges,
            lengths: self.lengths.iter().map(format_rational).collect(),
        }
    }

    pub fn from_json(monoid: Weighting, json: &MetricGraphJson) -> Result<Self, ModuliError> {
        let graph = StableGraph::from_json(
            monoid,
            &crate::graph::GraphJson {
                vertices: json.vertices.clone(),
                edges: json.edges.clone(),
            },
        )?;
        let lengths = json
            .lengths
            .iter()
            .map(|s| parse_rational(s).map_err(ModuliError::InvalidChain))
            .collect::<Result<Vec<_>, _>>()?;
        MetricGraph::new(graph, lengths)
    }
}

/// Equality of moduli points: both sides must already be stabilized; the
/// test is a weight- and length-preserving isomorphism.
pub fn delta_point_eq(p: &MetricGraph, q: &MetricGraph) -> bool {
    p.canonical() == q.canonical()
}

/// A factorization of a closed connected morphism into a chain of weighted
/// cospans `(empty) -> M_0 -> .. -> M_n -> (empty)`: at least two cospans,
/// nonempty intermediate objects, connected composite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationChain {
    cospans: Vec<WeightedCospan>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorizationChainJson {
    pub monoid: String,
    pub cospans: Vec<crate::cospan::WeightedCospanJson>,
}

impl FactorizationChain {
    pub fn new(cospans: Vec<WeightedCospan>) -> Result<Self, ModuliError> {
        if cospans.len() < 2 {
            return Err(ModuliError::InvalidChain(
                "a factorization needs at least two cospans".into(),
            ));
        }
        if cospans[0].left_size() != 0 || cospans.last().unwrap().right_size() != 0 {
            return Err(ModuliError::InvalidChain(
                "chain must start and end at the unit".into(),
            ));
        }
        for w in &cospans {
            if w.monoid() != cospans[0].monoid() {
                return Err(ModuliError::InvalidChain("mixed monoids".into()));
            }
        }
        for i in 0..cospans.len() - 1 {
            let mid = cospans[i].right_size();
            if mid != cospans[i + 1].left_size() {
                return Err(ModuliError::InvalidChain(format!(
                    "feet mismatch between cospans {i} and {}",
                    i + 1
                )));
            }
            if mid == 0 {
                return Err(ModuliError::InvalidChain(
                    "intermediate objects must be nonempty".into(),
                ));
            }
        }
        let chain = FactorizationChain { cospans };
        if chain.composite().class_count() != 1 {
            return Err(ModuliError::InvalidChain("composite is not connected".into()));
        }
        Ok(chain)
    }

    pub fn monoid(&self) -> Weighting {
        self.cospans[0].monoid()
    }

    pub fn cospans(&self) -> &[WeightedCospan] {
        &self.cospans
    }

    /// Number of intermediate objects (one more than the simplex dimension).
    pub fn object_count(&self) -> usize {
        self.cospans.len() - 1
    }

    pub fn composite(&self) -> WeightedCospan {
        let mut acc = self.cospans[0].clone();
        for w in &self.cospans[1..] {
            acc = acc.compose(w).expect("chain validated composable");
        }
        acc
    }

    /// Total genus: the label of the single closed composite class.
    pub fn genus(&self) -> i64 {
        self.composite().labels()[0]
    }

    /// The i-th face: composes the cospans on either side of object `i`.
    pub fn face(&self, i: usize) -> Result<FactorizationChain, ModuliError> {
        if i >= self.object_count() {
            return Err(ModuliError::InvalidChain(format!("no object {i}")));
        }
        if self.object_count() == 1 {
            return Err(ModuliError::InvalidChain(
                "cannot take a face of a zero-simplex".into(),
            ));
        }
        let mut cospans = Vec::with_capacity(self.cospans.len() - 1);
        cospans.extend_from_slice(&self.cospans[..i]);
        cospans.push(self.cospans[i].compose(&self.cospans[i + 1]).unwrap());
        cospans.extend_from_slice(&self.cospans[i + 2..]);
        FactorizationChain::new(cospans)
    }

    pub fn to_json(&self) -> FactorizationChainJson {
        FactorizationChainJson {
            monoid: self.monoid().to_string(),
            cospans: self.cospans.iter().map(|c| c.to_json()).collect(),
        }
    }

    pub fn from_json(json: &FactorizationChainJson) -> Result<Self, ModuliError> {
        let monoid: Weighting = json.monoid.parse().map_err(ModuliError::InvalidChain)?;
        let cospans = json
            .cospans
            .iter()
            .map(|c| {
                WeightedCospan::from_json(monoid, c)
                    .map_err(|e| ModuliError::InvalidChain(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        FactorizationChain::new(cospans)
    }
}

fn check_barycentric(t: &[BigRational], expect: usize) -> Result<(), ModuliError> {
    if t.len() != expect {
        return Err(ModuliError::InvalidChain(format!(
            "{} coordinates for {} simplex vertices",
            t.len(),
            expect
        )));
    }
    if t.iter().any(|x| x.is_negative()) {
        return Err(ModuliError::InvalidChain("negative coordinate".into()));
    }
    let total: BigRational = t.iter().fold(BigRational::zero(), |a, b| a + b);
    if !total.is_one() {
        return Err(ModuliError::InvalidChain(format!(
            "coordinates sum to {total}, expected 1"
        )));
    }
    Ok(())
}

/// Evaluates a factorization chain at a point of its simplex: one vertex per
/// apex class of each cospan (weighted by its label), one edge of length
/// `t_i / |M_i|` per element of the i-th object, then stabilization.
pub fn phi(chain: &FactorizationChain, t: &[BigRational]) -> Result<MetricGraph, ModuliError> {
    if chain.monoid() != Weighting::NatStable {
        return Err(ModuliError::InvalidChain(format!(
            "evaluation needs nat-stable labels, got {}",
            chain.monoid()
        )));
    }
    check_barycentric(t, chain.object_count())?;
    if chain.genus() < 2 {
        return Err(ModuliError::InvalidChain(format!(
            "composite genus {} < 2",
            chain.genus()
        )));
    }
    let cospans = chain.cospans();
    let mut offset = vec![0usize; cospans.len()];
    for i in 1..cospans.len() {
        offset[i] = offset[i - 1] + cospans[i - 1].class_count();
    }
    let total_classes = offset.last().unwrap() + cospans.last().unwrap().class_count();
    let mut weights = vec![0i64; total_classes];
    for (i, w) in cospans.iter().enumerate() {
        for (c, &l) in w.labels().iter().enumerate() {
            weights[offset[i] + c] = l;
        }
    }
    let mut pairs: Vec<(usize, usize, BigRational)> = Vec::new();
    for i in 0..chain.object_count() {
        let mid = cospans[i].right_size();
        let right = cospans[i].right_classes();
        let left = cospans[i + 1].left_classes();
        let len = &t[i] / BigRational::from_integer(BigInt::from(mid as i64));
        for m in 0..mid {
            let (u, v) = (offset[i] + right[m], offset[i + 1] + left[m]);
            pairs.push((u.min(v), u.max(v), len.clone()));
        }
    }
    // StableGraph::new sorts its edge list; sort here the same way so the
    // lengths stay aligned
    pairs.sort_by(|x, y| (x.0, x.1, &x.2).cmp(&(y.0, y.1, &y.2)));
    let graph = StableGraph::new(
        Weighting::NatStable,
        weights,
        pairs.iter().map(|&(u, v, _)| (u, v)).collect(),
    )?;
    let lengths = pairs.into_iter().map(|(_, _, l)| l).collect();
    MetricGraph::new(graph, lengths)?.stabilize()
}

/// A chain of edge contractions `G_0 -> G_1 -> .. -> G_n`, recorded as the
/// base graph and the nested sets of base edges collapsed by `G_0 -> G_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionChain {
    base: StableGraph,
    collapsed: Vec<BTreeSet<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContractionChainJson {
    pub graph: crate::graph::GraphJson,
    pub collapsed: Vec<Vec<usize>>,
}

impl ContractionChain {
    pub fn new(base: StableGraph, collapsed: Vec<BTreeSet<usize>>) -> Result<Self, ModuliError> {
        if base.monoid() != Weighting::NatStable {
            return Err(ModuliError::InvalidSimplex(
                "graphs must be nat-stable weighted".into(),
            ));
        }
        if !base.is_j_object() {
            return Err(ModuliError::InvalidSimplex(
                "base graph must be connected, stable, with an edge".into(),
            ));
        }
        for (i, s) in collapsed.iter().enumerate() {
            if s.iter().any(|&e| e >= base.edge_count()) {
                return Err(ModuliError::InvalidSimplex(format!(
                    "edge out of range in step {i}"
                )));
            }
            if i > 0 && !s.is_superset(&collapsed[i - 1]) {
                return Err(ModuliError::InvalidSimplex(format!(
                    "collapse sets must be nested, step {i} shrank"
                )));
            }
            if s.len() == base.edge_count() {
                return Err(ModuliError::InvalidSimplex(
                    "cannot collapse every edge, targets need an edge".into(),
                ));
            }
        }
        Ok(ContractionChain { base, collapsed })
    }

    pub fn base(&self) -> &StableGraph {
        &self.base
    }

    pub fn collapsed(&self) -> &[BTreeSet<usize>] {
        &self.collapsed
    }

    /// Simplex dimension n; the chain has n+1 graphs.
    pub fn dimension(&self) -> usize {
        self.collapsed.len()
    }

    pub fn graph_at(&self, i: usize) -> StableGraph {
        if i == 0 {
            self.base.clone()
        } else {
            self.base.contract_edges(&self.collapsed[i - 1])
        }
    }

    /// The i-th face: dropping `G_0` re-bases the chain on `G_1`, dropping a
    /// later graph removes its collapse set.
    pub fn face(&self, i: usize) -> Result<ContractionChain, ModuliError> {
        let n = self.dimension();
        if i > n {
            return Err(ModuliError::InvalidSimplex(format!("no vertex {i}")));
        }
        if n == 0 {
            return Err(ModuliError::InvalidSimplex(
                "cannot take a face of a zero-simplex".into(),
            ));
        }
        if i == 0 {
            let s1 = &self.collapsed[0];
            let (new_base, edge_map) = self.base.contract_edge_set_tracked(s1);
            let collapsed = self.collapsed[1..]
                .iter()
                .map(|s| {
                    s.iter()
                        .filter(|e| !s1.contains(e))
                        .map(|&e| edge_map[e].expect("uncollapsed edge survives"))
                        .collect()
                })
                .collect();
            ContractionChain::new(new_base, collapsed)
        } else {
            let mut collapsed = self.collapsed.clone();
            collapsed.remove(i - 1);
            ContractionChain::new(self.base.clone(), collapsed)
        }
    }

    pub fn to_json(&self) -> ContractionChainJson {
        ContractionChainJson {
            graph: self.base.to_json(),
            collapsed: self
                .collapsed
                .iter()
                .map(|s| s.iter().copied().collect())
                .collect(),
        }
    }

    pub fn from_json(json: &ContractionChainJson) -> Result<Self, ModuliError> {
        let base = StableGraph::from_json(Weighting::NatStable, &json.graph)?;
        let collapsed = json
            .collapsed
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect();
        ContractionChain::new(base, collapsed)
    }
}

/// Evaluates a contraction chain at a simplex point: the base graph with
/// `d(e)` the sum of `t_i / |E_i|` over the steps `i` that have not yet
/// collapsed `e`, then stabilization.
pub fn phi2(chain: &ContractionChain, t: &[BigRational]) -> Result<MetricGraph, ModuliError> {
    let n = chain.dimension();
    check_barycentric(t, n + 1).map_err(|e| match e {
        ModuliError::InvalidChain(m) => ModuliError::InvalidSimplex(m),
        other => other,
    })?;
    let ne = chain.base().edge_count();
    let mut lengths = vec![BigRational::zero(); ne];
    for (e, slot) in lengths.iter_mut().enumerate() {
        // m_e = largest i such that G_0 -> G_i keeps e
        let m_e = (0..=n)
            .take_while(|&i| i == 0 || !chain.collapsed()[i - 1].contains(&e))
            .last()
            .unwrap();
        for (i, ti) in t.iter().enumerate().take(m_e + 1) {
            let edges_i = if i == 0 {
                ne
            } else {
                ne - chain.collapsed()[i - 1].len()
            };
            *slot += ti / BigRational::from_integer(BigInt::from(edges_i as i64));
        }
    }
    MetricGraph::new(chain.base().clone(), lengths)?.stabilize()
}

/// A point of the doubly suspended moduli space: a volume-one metric graph
/// with suspension coordinates `a`, `b`. Values with `a = 0`, `b = 0` or
/// `a + b = 1` are the basepoint and are never materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuspendedPoint {
    pub graph: MetricGraph,
    pub a: BigRational,
    pub b: BigRational,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuspendedPointJson {
    pub genus: i64,
    pub a: String,
    pub b: String,
    pub graph: MetricGraphJson,
}

impl SuspendedPoint {
    pub fn genus(&self) -> i64 {
        self.graph
            .graph()
            .genus()
            .expect("stabilized graphs are connected")
    }

    /// Canonical sort key for multiset comparison.
    #[allow(clippy::type_complexity)]
    fn sort_key(
        &self,
    ) -> (
        BigRational,
        BigRational,
        Vec<i64>,
        Vec<(usize, usize)>,
        Vec<BigRational>,
    ) {
        let c = self.graph.canonical();
        (
            self.a.clone(),
            self.b.clone(),
            c.graph().weights().to_vec(),
            c.graph().edges().to_vec(),
            c.lengths().to_vec(),
        )
    }

    pub fn to_json(&self) -> SuspendedPointJson {
        SuspendedPointJson {
            genus: self.genus(),
            a: format_rational(&self.a),
            b: format_rational(&self.b),
            graph: self.graph.canonical().to_json(),
        }
    }
}

/// Compares multisets of suspended points by canonical encodings.
pub fn suspended_multisets_equal(xs: &[SuspendedPoint], ys: &[SuspendedPoint]) -> bool {
    if xs.len() != ys.len() {
        return false;
    }
    let mut a: Vec<_> = xs.iter().map(|p| p.sort_key()).collect();
    let mut b: Vec<_> = ys.iter().map(|p| p.sort_key()).collect();
    a.sort();
    b.sort();
    a == b
}

/// Evaluates the suspension map on a nerve simplex of composable weighted
/// cospans `M_0 -> .. -> M_n` over `(N, N>=1, 1)` with barycentric `t`.
///
/// Each closed connected component of the composite with genus at least two
/// contributes one suspended point: the restricted chain evaluated through
/// [`phi`] (rescaled to volume one), with `a` and `b` the coordinate mass
/// strictly before and after the lines the component touches. Components
/// with boundary, low genus, or a degenerate suspension coordinate are
/// discarded.
pub fn mu(
    cospans: &[WeightedCospan],
    t: &[BigRational],
) -> Result<Vec<SuspendedPoint>, ModuliError> {
    let n = cospans.len();
    check_barycentric(t, n + 1)?;
    for (j, w) in cospans.iter().enumerate() {
        if w.monoid() != Weighting::NatStable {
            return Err(ModuliError::InvalidChain(format!(
                "cospan {j} is over {}, need nat-stable",
                w.monoid()
            )));
        }
        if j + 1 < n && w.right_size() != cospans[j + 1].left_size() {
            return Err(ModuliError::InvalidChain(format!(
                "feet mismatch between cospans {j} and {}",
                j + 1
            )));
        }
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    // union-find over the disjoint union of all apex classes
    let mut offset = vec![0usize; n];
    for j in 1..n {
        offset[j] = offset[j - 1] + cospans[j - 1].class_count();
    }
    let total = offset[n - 1] + cospans[n - 1].class_count();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for j in 0..n - 1 {
        let right = cospans[j].right_classes();
        let left = cospans[j + 1].left_classes();
        for m in 0..cospans[j].right_size() {
            let a = find(&mut parent, offset[j] + right[m]);
            let b = find(&mut parent, offset[j + 1] + left[m]);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let roots: Vec<usize> = (0..total).filter(|&x| find(&mut parent, x) == x).collect();

    let mut out = Vec::new();
    for &root in &roots {
        // boundary components touch the outer objects M_0 or M_n
        let touches_left = cospans[0]
            .left_classes()
            .into_iter()
            .any(|c| find(&mut parent, offset[0] + c) == root);
        let touches_right = cospans[n - 1]
            .right_classes()
            .into_iter()
            .any(|c| find(&mut parent, offset[n - 1] + c) == root);
        if touches_left || touches_right {
            continue;
        }
        // interior lines hit by the component: object M_i sits between
        // cospans i-1 and i, for i in 1..=n-1
        let mut lines = Vec::new();
        for i in 1..n {
            let right = cospans[i - 1].right_classes();
            let hit = (0..cospans[i - 1].right_size())
                .any(|m| find(&mut parent, offset[i - 1] + right[m]) == root);
            if hit {
                lines.push(i);
            }
        }
        let (Some(&a_line), Some(&b_line)) = (lines.first(), lines.last()) else {
            // a closed piece inside a single cospan: a + b = 1, basepoint
            continue;
        };
        // genus of the component: labels plus cycles created by the gluing
        let mut label_sum = 0i64;
        let mut parts = 0usize;
        for (j, w) in cospans.iter().enumerate() {
            for (c, &l) in w.labels().iter().enumerate() {
                if find(&mut parent, offset[j] + c) == root {
                    label_sum += l;
                    parts += 1;
                }
            }
        }
        let mut mid_hits = 0usize;
        for i in &lines {
            let right = cospans[i - 1].right_classes();
            mid_hits += (0..cospans[i - 1].right_size())
                .filter(|&m| find(&mut parent, offset[i - 1] + right[m]) == root)
                .count();
        }
        let genus = label_sum + (mid_hits as i64 - parts as i64 + 1);
        if genus < 2 {
            continue;
        }
        let a: BigRational = t[..a_line].iter().fold(BigRational::zero(), |x, y| x + y);
        let b: BigRational = t[b_line + 1..].iter().fold(BigRational::zero(), |x, y| x + y);
        let inner = BigRational::one() - &a - &b;
        if a.is_zero() || b.is_zero() || inner.is_zero() {
            continue;
        }
        // restricted chain: cospans a_line-1 ..= b_line, cut down to the
        // classes of this component
        let mut restricted = Vec::new();
        for j in a_line - 1..=b_line {
            let w = &cospans[j];
            let classes: Vec<usize> = (0..w.class_count())
                .filter(|&c| find(&mut parent, offset[j] + c) == root)
                .collect();
            let reindex: std::collections::HashMap<usize, usize> =
                classes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let restrict = |foot_classes: Vec<usize>, outer: bool| -> Vec<usize> {
                if outer {
                    Vec::new()
                } else {
                    foot_classes
                        .into_iter()
                        .filter(|c| reindex.contains_key(c))
                        .map(|c| reindex[&c])
                        .collect()
                }
            };
            let lm = restrict(w.left_classes(), j == a_line - 1);
            let rm = restrict(w.right_classes(), j == b_line);
            let labels: Vec<i64> = classes.iter().map(|&c| w.labels()[c]).collect();
            let cospan =
                Cospan::from_class_maps(lm.len(), rm.len(), classes.len(), lm, rm).unwrap();
            restricted.push(
                WeightedCospan::new(Weighting::NatStable, cospan, labels)
                    .map_err(|e| ModuliError::InvalidChain(e.to_string()))?,
            );
        }
        let chain = FactorizationChain::new(restricted)?;
        debug_assert_eq!(chain.genus(), genus);
        let scaled: Vec<BigRational> = t[a_line..=b_line].iter().map(|x| x / &inner).collect();
        let graph = phi(&chain, &scaled)?;
        out.push(SuspendedPoint { graph, a, b });
    }
    Ok(out)
}

/// The i-th face of a nerve simplex: drop an outer morphism or compose at an
/// inner object; the corresponding coordinate is removed.
pub fn nerve_face(
    cospans: &[WeightedCospan],
    i: usize,
) -> Result<Vec<WeightedCospan>, ModuliError> {
    let n = cospans.len();
    if i > n {
        return Err(ModuliError::InvalidChain(format!("no object {i}")));
    }
    if i == 0 {
        Ok(cospans[1..].to_vec())
    } else if i == n {
        Ok(cospans[..n - 1].to_vec())
    } else {
        let mut out = Vec::with_capacity(n - 1);
        out.extend_from_slice(&cospans[..i - 1]);
        out.push(
            cospans[i - 1]
                .compose(&cospans[i])
                .map_err(|e| ModuliError::InvalidChain(e.to_string()))?,
        );
        out.extend_from_slice(&cospans[i + 1..]);
        Ok(out)
    }
}
