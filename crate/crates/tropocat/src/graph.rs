//! Half-edge graphs, stable weighted graphs, canonical forms and
//! enumeration of all isomorphism classes of a fixed genus.
//!
//! A graph is a finite carrier with an involution `s` (half-edge pairing)
//! and an idempotent root map `r`; vertices are the fixed points. Most
//! operations work on the equivalent edge-list view: weights per vertex and
//! an unordered multiset of endpoint pairs, kept sorted.
//!
//! Canonical labelling is individualization-refinement on the vertex set:
//! refine by (weight, incident edge colors, neighbour colors), then branch
//! over the first non-singleton cell. All leaves of the search tree are
//! inspected, the minimal encoding wins, and the leaves attaining the
//! minimum recover the full automorphism group.

use crate::weight::{Weight, Weighting};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("genus must be an integer >= 2, got {0}")]
    InvalidGenus(i64),
    #[error("enumeration is only supported over (N, N>=1, 1), got {0}")]
    UnsupportedMonoid(Weighting),
    #[error("invalid graph: {0}")]
    Invalid(String),
}

/// A graph as a carrier set with pairing and root maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfEdgeGraph {
    s: Vec<usize>,
    r: Vec<usize>,
}

impl HalfEdgeGraph {
    pub fn new(s: Vec<usize>, r: Vec<usize>) -> Result<Self, GraphError> {
        let n = s.len();
        if r.len() != n {
            return Err(GraphError::Invalid("s and r have different lengths".into()));
        }
        for x in 0..n {
            if s[x] >= n || r[x] >= n {
                return Err(GraphError::Invalid("map out of range".into()));
            }
            if s[s[x]] != x {
                return Err(GraphError::Invalid("s is not an involution".into()));
            }
            if r[r[x]] != r[x] {
                return Err(GraphError::Invalid("r is not idempotent".into()));
            }
            if (s[x] == x) != (r[x] == x) {
                return Err(GraphError::Invalid(
                    "fixed points of s and r must coincide".into(),
                ));
            }
        }
        Ok(HalfEdgeGraph { s, r })
    }

    pub fn carrier_size(&self) -> usize {
        self.s.len()
    }

    pub fn s(&self, x: usize) -> usize {
        self.s[x]
    }

    pub fn r(&self, x: usize) -> usize {
        self.r[x]
    }

    pub fn vertices(&self) -> Vec<usize> {
        (0..self.s.len()).filter(|&x| self.r[x] == x).collect()
    }

    pub fn half_edges(&self) -> Vec<usize> {
        (0..self.s.len()).filter(|&x| self.r[x] != x).collect()
    }

    /// Edges as unordered pairs `{h, s(h)}`, listed by smaller member.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.half_edges()
            .into_iter()
            .filter(|&h| h < self.s[h])
            .map(|h| (h, self.s[h]))
            .collect()
    }
}

/// A stable weighted graph in edge-list form. Vertices are `0..nv`, edges an
/// unordered multiset of endpoint pairs with `u <= v`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StableGraph {
    weights: Vec<Weight>,
    edges: Vec<(usize, usize)>,
    monoid: Weighting,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub weight: Weight,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
}

impl StableGraph {
    pub fn new(
        monoid: Weighting,
        weights: Vec<Weight>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        let nv = weights.len();
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(u, v)| if u <= v { (u, v) } else { (v, u) })
            .collect();
        edges.sort_unstable();
        for &(u, v) in &edges {
            if u >= nv || v >= nv {
                return Err(GraphError::Invalid(format!(
                    "edge ({u},{v}) out of range for {nv} vertices"
                )));
            }
        }
        for &w in &weights {
            if !monoid.is_element(w) {
                return Err(GraphError::Invalid(format!("weight {w} not in monoid")));
            }
        }
        Ok(StableGraph {
            weights,
            edges,
            monoid,
        })
    }

    pub fn monoid(&self) -> Weighting {
        self.monoid
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn loop_count(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v && b == v).count()
    }

    pub fn is_connected(&self) -> bool {
        let nv = self.vertex_count();
        if nv == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for &(u, v) in &self.edges {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru.max(rv)] = ru.min(rv);
            }
        }
        (0..nv).all(|v| find(&mut parent, v) == 0)
    }

    /// Checks the stability conditions: valence-1 vertices weighted in
    /// `A_1`, valence-2 vertices weighted nonzero.
    pub fn is_stable(&self) -> bool {
        (0..self.vertex_count()).all(|v| match self.valence(v) {
            1 => self.monoid.is_stable_weight(self.weights[v]),
            2 => self.weights[v] != 0,
            _ => true,
        })
    }

    /// Connected, stable, and at least one edge.
    pub fn is_j_object(&self) -> bool {
        self.edge_count() >= 1 && self.is_connected() && self.is_stable()
    }

    /// `(|E| - |V| + 1) * alpha + sum of weights`, defined for connected
    /// graphs.
    pub fn genus(&self) -> Result<Weight, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let b1 = (self.edge_count() + 1 - self.vertex_count()) as u64;
        let wsum = self.monoid.sum(self.weights.iter().copied());
        Ok(self.monoid.add_alpha_times(wsum, b1))
    }

    /// First Betti number `|E| - |V| + 1` of a connected graph.
    pub fn first_betti(&self) -> Result<usize, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(self.edge_count() + 1 - self.vertex_count())
    }

    /// Contracts edge `idx`. A non-loop edge merges its endpoints and adds
    /// their weights; a loop is deleted and bumps its vertex by `alpha`.
    /// Genus is preserved. The result may have no edges when the last edge
    /// is contracted.
    pub fn contract_edge(&self, idx: usize) -> StableGraph {
        let (u, v) = self.edges[idx];
        if u == v {
            let mut weights = self.weights.clone();
            weights[u] = self.monoid.add_alpha_times(weights[u], 1);
            let mut edges = self.edges.clone();
            edges.remove(idx);
            return StableGraph::new(self.monoid, weights, edges).unwrap();
        }
        // merge v into u, shift indices above v down by one
        let mut weights = Vec::with_capacity(self.vertex_count() - 1);
        for (i, &w) in self.weights.iter().enumerate() {
            if i == v {
                continue;
            }
            weights.push(if i == u { self.monoid.add(w, self.weights[v]) } else { w });
        }
        let rename = |x: usize| {
            if x == v {
                u
            } else if x > v {
                x - 1
            } else {
                x
            }
        };
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, &(a, b))| (rename(a), rename(b)))
            .collect();
        StableGraph::new(self.monoid, weights, edges).unwrap()
    }

    /// Contracts a set of edges, in ascending index order. Different orders
    /// give isomorphic results; this one is the deterministic choice.
    pub fn contract_edges(&self, idxs: &BTreeSet<usize>) -> StableGraph {
        self.contract_edge_set_tracked(idxs).0
    }

    /// Contracts a set of edges and reports, per original edge index, where
    /// it ended up (`None` for the contracted ones). Contraction renames
    /// vertices and re-sorts the edge list at every step, so positions are
    /// composed through each step's tracking.
    pub fn contract_edge_set_tracked(
        &self,
        idxs: &BTreeSet<usize>,
    ) -> (StableGraph, Vec<Option<usize>>) {
        let mut cur = self.clone();
        let mut map: Vec<Option<usize>> = (0..self.edge_count()).map(Some).collect();
        for &orig in idxs {
            let current = map[orig].expect("edge contracted twice");
            let (next, track) = cur.contract_edge_tracked(current);
            for slot in map.iter_mut() {
                *slot = slot.and_then(|t| track[t]);
            }
            cur = next;
        }
        (cur, map)
    }

    /// Like [`StableGraph::contract_edge`] but also reports where each
    /// surviving edge lands: `map[j] = Some(t)` when source edge `j` becomes
    /// target edge `t`, and `map[idx] = None`.
    pub fn contract_edge_tracked(&self, idx: usize) -> (StableGraph, Vec<Option<usize>>) {
        let target = self.contract_edge(idx);
        let (u, v) = self.edges[idx];
        let is_loop = u == v;
        let rename = |x: usize| {
            if is_loop {
                x
            } else if x == v {
                u
            } else if x > v {
                x - 1
            } else {
                x
            }
        };
        // renamed surviving edges in source order, then locate each in the
        // sorted target list, consuming duplicates left to right
        let mut used = vec![false; target.edge_count()];
        let mut map = vec![None; self.edge_count()];
        for (j, &(a, b)) in self.edges.iter().enumerate() {
            if j == idx {
                continue;
            }
            let (x, y) = (rename(a), rename(b));
            let pair = (x.min(y), x.max(y));
            let t = target
                .edges
                .iter()
                .enumerate()
                .position(|(t, &e)| e == pair && !used[t])
                .expect("surviving edge must appear in the contraction");
            used[t] = true;
            map[j] = Some(t);
        }
        (target, map)
    }

    pub fn to_half_edges(&self) -> HalfEdgeGraph {
        let nv = self.vertex_count();
        let n = nv + 2 * self.edge_count();
        let mut s: Vec<usize> = (0..n).collect();
        let mut r: Vec<usize> = (0..n).collect();
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            let h0 = nv + 2 * i;
            let h1 = h0 + 1;
            s[h0] = h1;
            s[h1] = h0;
            r[h0] = u;
            r[h1] = v;
        }
        HalfEdgeGraph::new(s, r).unwrap()
    }

    /// Rebuilds the edge-list view from a half-edge structure; `weights` are
    /// indexed by the vertices of `h` in increasing carrier order.
    pub fn from_half_edges(
        monoid: Weighting,
        h: &HalfEdgeGraph,
        weights: Vec<Weight>,
    ) -> Result<Self, GraphError> {
        let vertices = h.vertices();
        if weights.len() != vertices.len() {
            return Err(GraphError::Invalid("weight count != vertex count".into()));
        }
        let index: BTreeMap<usize, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = h
            .edge_pairs()
            .into_iter()
            .map(|(h0, h1)| (index[&h.r(h0)], index[&h.r(h1)]))
            .collect();
        StableGraph::new(monoid, weights, edges)
    }

    /// The canonical relabeling and automorphism data; see
    /// [`canonicalize_colored`] for the underlying search.
    pub fn canonical_labeling(&self) -> CanonOutcome {
        let colored: Vec<(usize, usize, u8)> =
            self.edges.iter().map(|&(u, v)| (u, v, 0u8)).collect();
        canonicalize_colored(self.vertex_count(), &self.weights, &colored)
    }

    /// Canonical form together with automorphism data.
    pub fn canonical_form(&self) -> (StableGraph, AutomorphismData) {
        let out = self.canonical_labeling();
        let graph = self.relabel(&out.relabeling);
        (graph, out.autos)
    }

    /// Applies a vertex relabeling `old -> new` and re-sorts edges.
    pub fn relabel(&self, relabeling: &[usize]) -> StableGraph {
        let nv = self.vertex_count();
        let mut weights = vec![0; nv];
        for v in 0..nv {
            weights[relabeling[v]] = self.weights[v];
        }
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (relabeling[u], relabeling[v]))
            .collect();
        StableGraph::new(self.monoid, weights, edges).unwrap()
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: (0..self.vertex_count())
                .map(|id| VertexJson {
                    id,
                    weight: self.weights[id],
                })
                .collect(),
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }

    pub fn from_json(monoid: Weighting, json: &GraphJson) -> Result<Self, GraphError> {
        let mut weights = vec![0; json.vertices.len()];
        for (i, v) in json.vertices.iter().enumerate() {
            if v.id != i {
                return Err(GraphError::Invalid("vertex ids must be 0..n in order".into()));
            }
            weights[i] = v.weight;
        }
        StableGraph::new(monoid, weights, json.edges.iter().map(|e| (e[0], e[1])).collect())
    }
}

/// Automorphism data attached to a canonical form. Generators act on the
/// canonical vertex labels; `parities` records the sign of the induced edge
/// permutation for each generator (only defined when every edge is unique,
/// i.e. no parallel copies).
#[derive(Debug, Clone)]
pub struct AutomorphismData {
    pub generators: Vec<Vec<usize>>,
    pub parities: Vec<i8>,
    /// Some endpoint pair (with its color) carries two or more edges; any
    /// swap of copies is an automorphism acting oddly on edge orderings.
    pub has_repeated_edge: bool,
    /// True when the sign action of the automorphism group on edge
    /// orderings is nontrivial.
    pub odd_edge_action: bool,
    /// Total number of vertex-level automorphisms (the repeated-edge copies
    /// are not counted here).
    pub group_size: u64,
}

pub struct CanonOutcome {
    /// Relabeling `old vertex -> canonical vertex`.
    pub relabeling: Vec<usize>,
    pub autos: AutomorphismData,
}

/// Sorted colored edge list under a labeling; the quantity minimized by the
/// canonical search.
type Encoding = Vec<(usize, usize, usize)>;

/// Receives each emitted edge multiset during enumeration.
type EmitEdges<'a> = &'a mut dyn FnMut(&[(usize, usize)]);

/// Canonicalizes a vertex-weighted multigraph with totally ordered edge
/// colors. Returns the relabeling realizing the minimal encoding and the
/// automorphism group, computed from all minimal leaves of the search tree.
pub fn canonicalize_colored<EC: Ord + Clone>(
    nv: usize,
    vcolor: &[Weight],
    edges: &[(usize, usize, EC)],
) -> CanonOutcome {
    assert_eq!(vcolor.len(), nv);
    // dense edge color ids
    let mut palette: Vec<&EC> = edges.iter().map(|(_, _, c)| c).collect();
    palette.sort();
    palette.dedup();
    let cid = |c: &EC| palette.binary_search(&c).unwrap();
    let dense: Vec<(usize, usize, usize)> = edges
        .iter()
        .map(|(u, v, c)| {
            let (a, b) = if u <= v { (*u, *v) } else { (*v, *u) };
            (a, b, cid(c))
        })
        .collect();

    if nv == 0 {
        return CanonOutcome {
            relabeling: vec![],
            autos: AutomorphismData {
                generators: vec![],
                parities: vec![],
                has_repeated_edge: false,
                odd_edge_action: false,
                group_size: 1,
            },
        };
    }

    // incidence lists: per vertex, (color id, other endpoint); loops appear
    // twice with the vertex as its own neighbour
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for &(u, v, c) in &dense {
        incident[u].push((c, v));
        incident[v].push((c, u));
    }

    // initial colors by weight rank
    let mut wts: Vec<Weight> = vcolor.to_vec();
    wts.sort_unstable();
    wts.dedup();
    let init: Vec<usize> = vcolor
        .iter()
        .map(|w| wts.binary_search(w).unwrap())
        .collect();

    let refine = |colors: &Vec<usize>| -> Vec<usize> {
        let mut cur = colors.clone();
        loop {
            let mut keys: Vec<(usize, Vec<(usize, usize)>)> = (0..nv)
                .map(|v| {
                    let mut sig: Vec<(usize, usize)> =
                        incident[v].iter().map(|&(c, o)| (c, cur[o])).collect();
                    sig.sort_unstable();
                    (cur[v], sig)
                })
                .collect();
            let mut sorted: Vec<&(usize, Vec<(usize, usize)>)> = keys.iter().collect();
            sorted.sort();
            sorted.dedup();
            let next: Vec<usize> = keys
                .iter()
                .map(|k| sorted.binary_search(&k).unwrap())
                .collect();
            if next == cur {
                return cur;
            }
            cur = next;
            keys.clear();
        }
    };

    // leaves of the individualization-refinement tree
    let mut leaves: Vec<Vec<usize>> = Vec::new(); // relabeling old -> position
    let mut stack: Vec<Vec<usize>> = vec![refine(&init)];
    while let Some(colors) = stack.pop() {
        // cells in color order
        let max_color = colors.iter().max().copied().unwrap_or(0);
        let mut cells: Vec<Vec<usize>> = vec![Vec::new(); max_color + 1];
        for v in 0..nv {
            cells[colors[v]].push(v);
        }
        if let Some(cell) = cells.iter().find(|c| c.len() > 1) {
            for &v in cell {
                // individualize v: give it a color just below its cell
                let mut next = colors.iter().map(|&c| 2 * c + 1).collect::<Vec<_>>();
                next[v] = 2 * colors[v];
                stack.push(refine(&next));
            }
        } else {
            let mut relabeling = vec![0usize; nv];
            for (pos, cell) in cells.iter().enumerate() {
                debug_assert_eq!(cell.len(), 1);
                relabeling[cell[0]] = pos;
            }
            leaves.push(relabeling);
        }
    }

    let encode = |rel: &Vec<usize>| -> Encoding {
        let mut enc: Encoding = dense
            .iter()
            .map(|&(u, v, c)| {
                let (a, b) = (rel[u].min(rel[v]), rel[u].max(rel[v]));
                (a, b, c)
            })
            .collect();
        enc.sort_unstable();
        enc
    };

    let mut best: Option<(Encoding, Vec<usize>)> = None;
    let mut min_leaves: Vec<Vec<usize>> = Vec::new();
    for rel in leaves {
        let enc = encode(&rel);
        match &best {
            None => {
                min_leaves = vec![rel.clone()];
                best = Some((enc, rel));
            }
            Some((benc, _)) => {
                if enc < *benc {
                    min_leaves = vec![rel.clone()];
                    best = Some((enc, rel));
                } else if enc == *benc {
                    min_leaves.push(rel);
                }
            }
        }
    }
    let (canon_enc, canon_rel) = best.unwrap();

    // automorphisms on canonical labels: pi o pi0^{-1} for each minimal leaf
    let mut inv0 = vec![0usize; nv];
    for v in 0..nv {
        inv0[canon_rel[v]] = v;
    }
    let mut generators = Vec::new();
    let mut seen = BTreeSet::new();
    for rel in &min_leaves {
        let perm: Vec<usize> = (0..nv).map(|pos| rel[inv0[pos]]).collect();
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            continue;
        }
        if seen.insert(perm.clone()) {
            generators.push(perm);
        }
    }
    let group_size = min_leaves.len() as u64;

    // multiplicity of (endpoints, color) in the canonical encoding
    let has_repeated_edge = canon_enc.windows(2).any(|w| w[0] == w[1]);
    let mut parities = Vec::with_capacity(generators.len());
    let mut odd = has_repeated_edge;
    for perm in &generators {
        let parity = if has_repeated_edge {
            0
        } else {
            let mut image: Vec<usize> = Vec::with_capacity(canon_enc.len());
            for &(u, v, c) in &canon_enc {
                let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
                image.push(canon_enc.binary_search(&(a, b, c)).unwrap());
            }
            permutation_sign(&image)
        };
        if parity == -1 {
            odd = true;
        }
        parities.push(parity);
    }

    CanonOutcome {
        relabeling: canon_rel,
        autos: AutomorphismData {
            generators,
            parities,
            has_repeated_edge,
            odd_edge_action: odd,
            group_size,
        },
    }
}

/// Maps each edge of `src` to its index in `dst` under a vertex relabeling,
/// or `None` when some endpoint pair of `dst` carries more than one edge
/// (the matching of copies would be ambiguous).
pub fn edge_map_under_relabeling(
    src: &StableGraph,
    relabeling: &[usize],
    dst: &StableGraph,
) -> Option<Vec<usize>> {
    if dst.edges.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    src.edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (relabeling[u], relabeling[v]);
            let pair = (a.min(b), a.max(b));
            dst.edges.binary_search(&pair).ok()
        })
        .collect()
}

/// Sign of a permutation given in one-line notation.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut sign = 1i8;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = perm[cur];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Lifts a vertex automorphism to a permutation of the half-edge carrier of
/// `g.to_half_edges()` commuting with `s` and `r`. Parallel copies are
/// matched in stored order. Returns `None` when `perm` is not an
/// automorphism.
pub fn lift_vertex_automorphism(g: &StableGraph, perm: &[usize]) -> Option<Vec<usize>> {
    let nv = g.vertex_count();
    // group edge indices by endpoint pair
    let mut buckets: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        buckets.entry((u, v)).or_default().push(i);
    }
    let mut q: Vec<usize> = (0..nv + 2 * g.edge_count()).collect();
    for v in 0..nv {
        if g.weights()[v] != g.weights()[perm[v]] {
            return None;
        }
        q[v] = perm[v];
    }
    for (&(u, v), idxs) in &buckets {
        let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
        let targets = buckets.get(&(a, b))?;
        if targets.len() != idxs.len() {
            return None;
        }
        let crossed = perm[u] > perm[v] && u != v;
        for (&e, &f) in idxs.iter().zip(targets.iter()) {
            let (h0, h1) = (nv + 2 * e, nv + 2 * e + 1);
            let (t0, t1) = (nv + 2 * f, nv + 2 * f + 1);
            if crossed {
                q[h0] = t1;
                q[h1] = t0;
            } else {
                q[h0] = t0;
                q[h1] = t1;
            }
        }
    }
    Some(q)
}

/// Reference implementations used as independent oracles by tests: a
/// brute-force isomorphism search over vertex bijections.
pub mod oracle {
    use super::StableGraph;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        let smaller = permutations(n - 1);
        for p in smaller {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    /// Exhaustive isomorphism test: some vertex bijection preserves weights
    /// and the edge multiset.
    pub fn isomorphic(a: &StableGraph, b: &StableGraph) -> bool {
        if a.vertex_count() != b.vertex_count()
            || a.edge_count() != b.edge_count()
            || a.monoid() != b.monoid()
        {
            return false;
        }
        let mut b_edges = b.edges().to_vec();
        b_edges.sort_unstable();
        for perm in permutations(a.vertex_count()) {
            if (0..a.vertex_count()).any(|v| a.weights()[v] != b.weights()[perm[v]]) {
                continue;
            }
            let mut mapped: Vec<(usize, usize)> = a
                .edges()
                .iter()
                .map(|&(u, v)| {
                    let (x, y) = (perm[u], perm[v]);
                    (x.min(y), x.max(y))
                })
                .collect();
            mapped.sort_unstable();
            if mapped == b_edges {
                return true;
            }
        }
        false
    }

    /// All vertex automorphisms, by brute force.
    pub fn automorphisms(g: &StableGraph) -> Vec<Vec<usize>> {
        let mut sorted = g.edges().to_vec();
        sorted.sort_unstable();
        permutations(g.vertex_count())
            .into_iter()
            .filter(|perm| {
                (0..g.vertex_count()).all(|v| g.weights()[v] == g.weights()[perm[v]]) && {
                    let mut mapped: Vec<(usize, usize)> = g
                        .edges()
                        .iter()
                        .map(|&(u, v)| {
                            let (x, y) = (perm[u], perm[v]);
                            (x.min(y), x.max(y))
                        })
                        .collect();
                    mapped.sort_unstable();
                    mapped == sorted
                }
            })
            .collect()
    }
}

/// Enumerates multisets of `ne` edges on `nv` vertices, reporting each
/// through `emit`. Pairs are scanned in lexicographic order; a vertex is
/// finalized once the scan passes its last pair, at which point it must be
/// non-isolated, match `exact_valence` when given, and vertices of valence
/// at most two are counted against `weight_budget` (they would each need a
/// positive weight to be stable).
pub(crate) fn edge_multisets(
    nv: usize,
    ne: usize,
    allow_loops: bool,
    exact_valence: Option<usize>,
    weight_budget: Option<i64>,
    emit: EmitEdges,
) {
    struct Ctx<'a> {
        pairs: Vec<(usize, usize)>,
        nv: usize,
        exact_valence: Option<usize>,
        weight_budget: Option<i64>,
        chosen: Vec<(usize, usize)>,
        degree: Vec<usize>,
        emit: EmitEdges<'a>,
    }

    impl Ctx<'_> {
        fn rec(&mut self, idx: usize, remaining: usize, finalized: usize, deficit: i64) {
            // vertices below the first coordinate of the current pair can
            // gain no further edges
            let active_first = self.pairs.get(idx).map_or(self.nv, |p| p.0);
            let mut finalized = finalized;
            let mut deficit = deficit;
            while finalized < active_first {
                let d = self.degree[finalized];
                if d == 0 {
                    return;
                }
                if let Some(val) = self.exact_valence {
                    if d != val {
                        return;
                    }
                }
                if d <= 2 {
                    deficit += 1;
                    if let Some(budget) = self.weight_budget {
                        if deficit > budget {
                            return;
                        }
                    }
                }
                finalized += 1;
            }
            if idx == self.pairs.len() {
                if remaining == 0 {
                    (self.emit)(&self.chosen);
                }
                return;
            }
            let (u, v) = self.pairs[idx];
            let per_edge = if u == v { 2 } else { 1 };
            let cap = match self.exact_valence {
                Some(val) => {
                    let head_u = (val - self.degree[u].min(val)) / per_edge;
                    let head_v = if u == v {
                        head_u
                    } else {
                        val - self.degree[v].min(val)
                    };
                    remaining.min(head_u.min(head_v))
                }
                None => remaining,
            };
            for mult in 0..=cap {
                if mult > 0 {
                    self.degree[u] += per_edge;
                    if u != v {
                        self.degree[v] += 1;
                    }
                    self.chosen.push((u, v));
                }
                self.rec(idx + 1, remaining - mult, finalized, deficit);
            }
            for _ in 0..cap {
                self.chosen.pop();
            }
            self.degree[u] -= cap * per_edge;
            if u != v {
                self.degree[v] -= cap;
            }
        }
    }

    let mut pairs = Vec::new();
    for u in 0..nv {
        if allow_loops {
            pairs.push((u, u));
        }
        for v in u + 1..nv {
            pairs.push((u, v));
        }
    }
    let mut ctx = Ctx {
        pairs,
        nv,
        exact_valence,
        weight_budget,
        chosen: Vec::with_capacity(ne),
        degree: vec![0; nv],
        emit,
    };
    ctx.rec(0, ne, 0, 0);
}

/// All weight vectors with `w[v] >= lb[v]` and fixed total.
fn weight_vectors(lb: &[i64], total: i64) -> Vec<Vec<Weight>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; lb.len()];
    fn rec(lb: &[i64], v: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if v == lb.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let tail_min: i64 = lb[v + 1..].iter().sum();
        let mut w = lb[v];
        while w <= left - tail_min {
            cur[v] = w;
            rec(lb, v + 1, left - w, cur, out);
            w += 1;
        }
        cur[v] = 0;
    }
    let min_total: i64 = lb.iter().sum();
    if total < min_total {
        return out;
    }
    rec(lb, 0, total, &mut cur, &mut out);
    out
}

/// Enumerates all isomorphism classes of connected stable weighted graphs
/// of the given genus with at least one edge, over `(N, N>=1, 1)`.
///
/// Search bounds: all-zero weights force valence at least three, giving
/// `|E| <= 3g-3` and `|V| <= 2g-2`; positive weights only shrink the graph,
/// so the same bounds cover every class. The output is sorted canonically.
pub fn enumerate_genus(monoid: Weighting, g: i64) -> Result<Vec<StableGraph>, GraphError> {
    if monoid != Weighting::NatStable {
        return Err(GraphError::UnsupportedMonoid(monoid));
    }
    if g < 2 {
        return Err(GraphError::InvalidGenus(g));
    }
    let max_v = (2 * g - 2) as usize;
    let mut shapes: Vec<(usize, usize)> = Vec::new();
    for nv in 1..=max_v {
        let ne_lo = if nv == 1 { 1 } else { nv - 1 };
        let ne_hi = nv + (g as usize) - 1;
        for ne in ne_lo..=ne_hi.min(3 * g as usize - 3) {
            shapes.push((nv, ne));
        }
    }
    let per_shape: Vec<Vec<StableGraph>> = shapes
        .par_iter()
        .map(|&(nv, ne)| {
            let mut found: BTreeSet<StableGraph> = BTreeSet::new();
            let b1 = ne as i64 - nv as i64 + 1;
            let wsum = g - b1;
            if wsum < 0 {
                return Vec::new();
            }
            edge_multisets(nv, ne, true, None, Some(wsum), &mut |edges| {
                let probe = StableGraph::new(Weighting::NatStable, vec![0; nv], edges.to_vec())
                    .unwrap();
                if !probe.is_connected() {
                    return;
                }
                let lb: Vec<i64> = (0..nv)
                    .map(|v| if probe.valence(v) <= 2 { 1 } else { 0 })
                    .collect();
                for weights in weight_vectors(&lb, wsum) {
                    let graph =
                        StableGraph::new(Weighting::NatStable, weights, edges.to_vec()).unwrap();
                    debug_assert!(graph.is_stable());
                    let (canon, _) = graph.canonical_form();
                    found.insert(canon);
                }
            });
            found.into_iter().collect()
        })
        .collect();
    let mut all: BTreeSet<StableGraph> = BTreeSet::new();
    for batch in per_shape {
        all.extend(batch);
    }
    Ok(all.into_iter().collect())
}

/// The maximal objects: trivalent graphs with all weights zero.
pub fn enumerate_trivalent_weightless(g: i64) -> Result<Vec<StableGraph>, GraphError> {
    if g < 2 {
        return Err(GraphError::InvalidGenus(g));
    }
    let nv = (2 * g - 2) as usize;
    let ne = (3 * g - 3) as usize;
    let mut found: BTreeSet<StableGraph> = BTreeSet::new();
    edge_multisets(nv, ne, true, Some(3), None, &mut |edges| {
        let graph = StableGraph::new(Weighting::NatStable, vec![0; nv], edges.to_vec()).unwrap();
        if !graph.is_connected() {
            return;
        }
        let (canon, _) = graph.canonical_form();
        found.insert(canon);
    });
    Ok(found.into_iter().collect())
}

/// Independent enumeration strategy: close the set of trivalent weightless
/// graphs under single edge contractions.
pub fn enumerate_genus_by_contraction(g: i64) -> Result<Vec<StableGraph>, GraphError> {
    let seeds = enumerate_trivalent_weightless(g)?;
    let mut all: BTreeSet<StableGraph> = seeds.iter().cloned().collect();
    let mut frontier: Vec<StableGraph> = seeds;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for graph in frontier {
            if graph.edge_count() < 2 {
                continue;
            }
            for e in 0..graph.edge_count() {
                let (canon, _) = graph.contract_edge(e).canonical_form();
                debug_assert!(canon.is_j_object());
                if all.insert(canon.clone()) {
                    next.push(canon);
                }
            }
        }
        frontier = next;
    }
    Ok(all.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub fn theta() -> StableGraph {
        StableGraph::new(Weighting::NatStable, vec![0, 0], vec![(0, 1), (0, 1), (0, 1)]).unwrap()
    }

    pub fn dumbbell() -> StableGraph {
        StableGraph::new(Weighting::NatStable, vec![0, 0], vec![(0, 0), (0, 1), (1, 1)]).unwrap()
    }

    #[test]
    fn half_edge_invariants() {
        let h = theta().to_half_edges();
        for x in 0..h.carrier_size() {
            assert_eq!(h.s(h.s(x)), x);
            assert_eq!(h.r(h.r(x)), h.r(x));
            assert_eq!(h.s(x) == x, h.r(x) == x);
        }
        assert_eq!(h.vertices().len(), 2);
        assert_eq!(h.edge_pairs().len(), 3);
        // round trip
        let g = StableGraph::from_half_edges(Weighting::NatStable, &h, vec![0, 0]).unwrap();
        assert_eq!(g, theta());
    }

    #[test]
    fn genus_examples() {
        assert_eq!(theta().genus().unwrap(), 2);
        let loop_on_weight_g = |g: i64| {
            StableGraph::new(Weighting::NatStable, vec![g], vec![(0, 0)]).unwrap()
        };
        assert_eq!(loop_on_weight_g(1).genus().unwrap(), 2);
        assert_eq!(loop_on_weight_g(3).genus().unwrap(), 4);
        let bridge = StableGraph::new(Weighting::NatStable, vec![1, 1], vec![(0, 1)]).unwrap();
        assert_eq!(bridge.genus().unwrap(), 2);
        let disconnected =
            StableGraph::new(Weighting::NatStable, vec![1, 1], vec![(0, 0), (1, 1)]).unwrap();
        assert_eq!(disconnected.genus(), Err(GraphError::Disconnected));
    }

    #[test]
    fn contraction_examples() {
        // theta: contract one edge -> one vertex with two loops, weight 0
        let c = theta().contract_edge(0);
        assert_eq!(c.vertex_count(), 1);
        assert_eq!(c.edges(), &[(0, 0), (0, 0)]);
        assert_eq!(c.genus().unwrap(), 2);
        // contract the loop of a weight-1 loop vertex -> weight 2, no edges
        let l = StableGraph::new(Weighting::NatStable, vec![1], vec![(0, 0)]).unwrap();
        let c = l.contract_edge(0);
        assert_eq!(c.edge_count(), 0);
        assert_eq!(c.weights(), &[2]);
    }

    #[test]
    fn contracting_everything_leaves_the_genus_vertex() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in [theta(), dumbbell()] {
            for _ in 0..20 {
                let mut cur = g.clone();
                while cur.edge_count() > 0 {
                    let e = rng.random_range(0..cur.edge_count());
                    cur = cur.contract_edge(e);
                }
                assert_eq!(cur.vertex_count(), 1);
                assert_eq!(cur.weights()[0], g.genus().unwrap());
            }
        }
    }

    #[test]
    fn canonical_form_is_relabeling_invariant() {
        let g = dumbbell();
        let (canon, _) = g.canonical_form();
        let swapped =
            StableGraph::new(Weighting::NatStable, vec![0, 0], vec![(1, 1), (0, 1), (0, 0)])
                .unwrap();
        let (canon2, _) = swapped.canonical_form();
        assert_eq!(canon, canon2);
        let (theta_canon, _) = theta().canonical_form();
        assert_ne!(canon, theta_canon);
    }

    #[test]
    fn canonical_form_matches_bruteforce_oracle_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let nv = rng.random_range(1..=5usize);
            let ne = rng.random_range(0..=5usize);
            let edges: Vec<(usize, usize)> = (0..ne)
                .map(|_| (rng.random_range(0..nv), rng.random_range(0..nv)))
                .collect();
            let weights: Vec<i64> = (0..nv).map(|_| rng.random_range(0..3i64)).collect();
            let g = StableGraph::new(Weighting::Nat, weights.clone(), edges.clone()).unwrap();
            // random relabeling
            let mut perm: Vec<usize> = (0..nv).collect();
            perm.shuffle(&mut rng);
            let h = g.relabel(&perm);
            assert!(oracle::isomorphic(&g, &h));
            let (cg, _) = g.canonical_form();
            let (ch, _) = h.canonical_form();
            assert_eq!(cg, ch);
            // idempotence
            assert_eq!(cg.canonical_form().0, cg);
            // canonical equality must also separate non-isomorphic pairs
            let other_edges: Vec<(usize, usize)> = (0..ne)
                .map(|_| (rng.random_range(0..nv), rng.random_range(0..nv)))
                .collect();
            let other = StableGraph::new(Weighting::Nat, weights, other_edges).unwrap();
            let (co, _) = other.canonical_form();
            assert_eq!(oracle::isomorphic(&g, &other), cg == co);
        }
    }

    #[test]
    fn automorphism_group_size_matches_bruteforce_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..200 {
            let nv = rng.random_range(1..=5usize);
            let ne = rng.random_range(0..=6usize);
            let edges: Vec<(usize, usize)> = (0..ne)
                .map(|_| (rng.random_range(0..nv), rng.random_range(0..nv)))
                .collect();
            let weights: Vec<i64> = (0..nv).map(|_| rng.random_range(0..2i64)).collect();
            let g = StableGraph::new(Weighting::Nat, weights, edges).unwrap();
            let (canon, autos) = g.canonical_form();
            let brute = oracle::automorphisms(&canon);
            assert_eq!(autos.group_size, brute.len() as u64, "graph {canon:?}");
            // generators plus identity are exactly the brute-force group
            let mut found: Vec<Vec<usize>> = autos.generators.clone();
            found.push((0..canon.vertex_count()).collect());
            found.sort();
            let mut expect = brute;
            expect.sort();
            assert_eq!(found, expect);
        }
    }

    #[test]
    fn automorphisms_commute_with_structure_maps() {
        for g in [theta(), dumbbell()] {
            let (canon, autos) = g.canonical_form();
            assert_eq!(
                autos.group_size,
                oracle::automorphisms(&canon).len() as u64
            );
            let h = canon.to_half_edges();
            for perm in &autos.generators {
                let q = lift_vertex_automorphism(&canon, perm).expect("generator must lift");
                for x in 0..h.carrier_size() {
                    assert_eq!(q[h.s(x)], h.s(q[x]));
                    assert_eq!(q[h.r(x)], h.r(q[x]));
                }
            }
        }
    }

    #[test]
    fn parity_flags() {
        // theta: swapping two of the three parallel edges is odd
        let (_, autos) = theta().canonical_form();
        assert!(autos.has_repeated_edge);
        assert!(autos.odd_edge_action);
        // dumbbell: vertex swap exchanges the two loops, a transposition
        let (_, autos) = dumbbell().canonical_form();
        assert!(autos.odd_edge_action);
        // loop with pendant weight-1 vertex: only the trivial action
        let lp =
            StableGraph::new(Weighting::NatStable, vec![0, 1], vec![(0, 0), (0, 1)]).unwrap();
        let (_, autos) = lp.canonical_form();
        assert!(!autos.odd_edge_action);
    }

    #[test]
    fn genus_two_enumeration_matches_hand_list() {
        let m = Weighting::NatStable;
        let list = enumerate_genus(m, 2).unwrap();
        assert_eq!(list.len(), 6);
        let hand: Vec<StableGraph> = vec![
            theta(),
            dumbbell(),
            // two loops on one vertex
            StableGraph::new(m, vec![0], vec![(0, 0), (0, 0)]).unwrap(),
            // loop on a weight-1 vertex
            StableGraph::new(m, vec![1], vec![(0, 0)]).unwrap(),
            // loop with a pendant weight-1 vertex
            StableGraph::new(m, vec![0, 1], vec![(0, 0), (0, 1)]).unwrap(),
            // edge joining two weight-1 vertices
            StableGraph::new(m, vec![1, 1], vec![(0, 1)]).unwrap(),
        ];
        for h in &hand {
            let (c, _) = h.canonical_form();
            assert!(list.contains(&c), "missing {c:?}");
        }
    }

    #[test]
    fn enumeration_strategies_agree_for_small_genus() {
        for g in [2, 3] {
            let a = enumerate_genus(Weighting::NatStable, g).unwrap();
            let b = enumerate_genus_by_contraction(g).unwrap();
            assert_eq!(a, b, "strategies disagree for genus {g}");
        }
    }

    #[test]
    fn golden_class_counts() {
        // produced once by both strategies and frozen
        assert_eq!(enumerate_genus(Weighting::NatStable, 2).unwrap().len(), 6);
        assert_eq!(enumerate_genus(Weighting::NatStable, 3).unwrap().len(), 41);
        assert_eq!(enumerate_genus(Weighting::NatStable, 4).unwrap().len(), 378);
    }

    #[test]
    fn enumeration_closed_under_contraction_and_genus_preserved() {
        for genus in [2, 3] {
            let list = enumerate_genus(Weighting::NatStable, genus).unwrap();
            for g in &list {
                for e in 0..g.edge_count() {
                    let contracted = g.contract_edge(e);
                    assert_eq!(contracted.genus().unwrap(), genus);
                    if g.edge_count() >= 2 {
                        let (c, _) = contracted.canonical_form();
                        assert!(list.contains(&c));
                    }
                }
            }
        }
    }

    #[test]
    fn automorphism_lifts_commute_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..100 {
            let nv = rng.random_range(1..=5usize);
            let ne = rng.random_range(0..=5usize);
            let edges: Vec<(usize, usize)> = (0..ne)
                .map(|_| (rng.random_range(0..nv), rng.random_range(0..nv)))
                .collect();
            let weights: Vec<i64> = (0..nv).map(|_| rng.random_range(0..2i64)).collect();
            let g = StableGraph::new(Weighting::Nat, weights, edges).unwrap();
            let (canon, autos) = g.canonical_form();
            let h = canon.to_half_edges();
            for perm in &autos.generators {
                // weights preserved by construction of the generators
                for v in 0..nv {
                    assert_eq!(canon.weights()[v], canon.weights()[perm[v]]);
                }
                let q = lift_vertex_automorphism(&canon, perm).expect("generator lifts");
                for x in 0..h.carrier_size() {
                    assert_eq!(q[h.s(x)], h.s(q[x]));
                    assert_eq!(q[h.r(x)], h.r(q[x]));
                }
            }
        }
    }

    #[test]
    fn enumeration_rejects_other_monoids_and_small_genus() {
        assert!(matches!(
            enumerate_genus(Weighting::Nat, 2),
            Err(GraphError::UnsupportedMonoid(_))
        ));
        assert!(matches!(
            enumerate_genus(Weighting::NatStable, 1),
            Err(GraphError::InvalidGenus(1))
        ));
    }
}
