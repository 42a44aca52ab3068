//! Finite sets, presented sets and cospans.
//!
//! A presented set is a quotient of a subset of `{0, .., l-1}` by an
//! equivalence relation, stored as a union-find forest whose roots are the
//! minimal elements of their classes. Gluing two presented sets along a pair
//! of maps is strictly associative on the nose, which is what makes cospan
//! composition below well behaved without any coherence bookkeeping.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CospanError {
    #[error("cannot compose: right feet have {right} elements but left feet have {left}")]
    FootMismatch { right: usize, left: usize },
    #[error("map entry {value} is not an element of the apex")]
    MapOutOfRange { value: usize },
    #[error("labels must be pairwise distinct and match the set size")]
    BadLabels,
}

/// A finite set `{0, .., size-1}`, optionally carrying display labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl FinSet {
    pub fn new(size: usize) -> Self {
        FinSet { size, labels: None }
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self, CospanError> {
        let mut seen = labels.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != labels.len() {
            return Err(CospanError::BadLabels);
        }
        Ok(FinSet {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.as_ref().map(|ls| ls[i].as_str())
    }
}

/// A presented set `(l, X, R)`: a subset `X` of `{0, .., l-1}` together with
/// an equivalence relation `R` on `X`.
///
/// The relation is stored fully compressed: `parent[x]` is the minimum of the
/// class of `x` for members, and `x` itself for non-members. Two presented
/// sets are equal as Rust values exactly when they are equal as triples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PresentedSet {
    l: usize,
    member: Vec<bool>,
    parent: Vec<usize>,
}

impl PresentedSet {
    /// The discrete presented set on all of `{0, .., l-1}`.
    pub fn discrete(l: usize) -> Self {
        PresentedSet {
            l,
            member: vec![true; l],
            parent: (0..l).collect(),
        }
    }

    /// Builds a presented set from a membership mask and a list of generating
    /// relations `a ~ b` (both must be members).
    pub fn from_relations(l: usize, member: Vec<bool>, relations: &[(usize, usize)]) -> Self {
        assert_eq!(member.len(), l);
        let mut ps = PresentedSet {
            l,
            member,
            parent: (0..l).collect(),
        };
        for &(a, b) in relations {
            assert!(ps.member[a] && ps.member[b], "relation on non-members");
            ps.union(a, b);
        }
        ps.compress();
        ps
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn is_member(&self, x: usize) -> bool {
        x < self.l && self.member[x]
    }

    /// The minimal element of the class of `x`.
    pub fn class_of(&self, x: usize) -> usize {
        debug_assert!(self.member[x]);
        // parent is kept fully compressed, one hop suffices
        self.parent[x]
    }

    /// Class representatives in increasing order.
    pub fn class_reps(&self) -> Vec<usize> {
        (0..self.l)
            .filter(|&x| self.member[x] && self.parent[x] == x)
            .collect()
    }

    pub fn class_count(&self) -> usize {
        (0..self.l)
            .filter(|&x| self.member[x] && self.parent[x] == x)
            .count()
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        // always hang the larger representative under the smaller one, so the
        // forest root is the class minimum
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
    }

    /// Re-points every member directly at its class minimum.
    fn compress(&mut self) {
        for x in 0..self.l {
            if self.member[x] {
                let r = self.find(x);
                self.parent[x] = r;
            }
        }
    }
}

/// Glues `p` and `q` along a middle set of size `mid`, where `i[a]` is an
/// element of `p` and `j[a]` an element of `q` for each `a < mid`.
///
/// The result is `(l_p + l_q, X_p ∪ (X_q + l_p), R)` with `R` generated by
/// both relations together with `i(a) ~ j(a) + l_p`. Gluing is strictly
/// associative: composing three presented sets in either order yields
/// identical values, not merely isomorphic ones.
pub fn glue(p: &PresentedSet, q: &PresentedSet, mid: usize, i: &[usize], j: &[usize]) -> PresentedSet {
    assert_eq!(i.len(), mid);
    assert_eq!(j.len(), mid);
    let l = p.l + q.l;
    let mut member = Vec::with_capacity(l);
    member.extend_from_slice(&p.member);
    member.extend_from_slice(&q.member);
    let mut parent = Vec::with_capacity(l);
    parent.extend_from_slice(&p.parent);
    parent.extend(q.parent.iter().map(|&x| x + p.l));
    let mut out = PresentedSet { l, member, parent };
    for a in 0..mid {
        assert!(p.is_member(i[a]) && q.is_member(j[a]));
        out.union(i[a], j[a] + p.l);
    }
    out.compress();
    out
}

/// A cospan of finite sets `left -> apex classes <- right`.
///
/// The maps send feet to apex *elements*; the class structure lives in the
/// apex. Equality of `Cospan` values is structural; isomorphism classes are
/// compared through [`Cospan::canonicalize`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cospan {
    left: FinSet,
    right: FinSet,
    apex: PresentedSet,
    left_map: Vec<usize>,
    right_map: Vec<usize>,
}

/// Classification of a cospan, see [`Cospan::classify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    /// Every apex class is hit by at least one foot.
    pub is_reduced: bool,
    /// The apex has exactly one class.
    pub is_connected: bool,
    /// The right map is surjective onto apex classes.
    pub is_positive_boundary: bool,
    /// Class indices (in canonical class order) hit by no foot.
    pub closed_classes: Vec<usize>,
}

/// Wire format of a canonical cospan, see the `to_json` methods.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CospanJson {
    pub left: usize,
    pub right: usize,
    pub apex_classes: usize,
    pub left_map: Vec<usize>,
    pub right_map: Vec<usize>,
}

impl Cospan {
    pub fn new(
        left: FinSet,
        right: FinSet,
        apex: PresentedSet,
        left_map: Vec<usize>,
        right_map: Vec<usize>,
    ) -> Result<Self, CospanError> {
        if left_map.len() != left.size() || right_map.len() != right.size() {
            return Err(CospanError::FootMismatch {
                right: right_map.len(),
                left: left.size(),
            });
        }
        for &v in left_map.iter().chain(right_map.iter()) {
            if !apex.is_member(v) {
                return Err(CospanError::MapOutOfRange { value: v });
            }
        }
        Ok(Cospan {
            left,
            right,
            apex,
            left_map,
            right_map,
        })
    }

    /// Builds a cospan whose apex is discrete with `classes` points and whose
    /// maps are given directly by class index.
    pub fn from_class_maps(
        left: usize,
        right: usize,
        classes: usize,
        left_map: Vec<usize>,
        right_map: Vec<usize>,
    ) -> Result<Self, CospanError> {
        Cospan::new(
            FinSet::new(left),
            FinSet::new(right),
            PresentedSet::discrete(classes),
            left_map,
            right_map,
        )
    }

    /// The identity cospan on an `n`-element set.
    pub fn identity(n: usize) -> Self {
        Cospan::from_class_maps(n, n, n, (0..n).collect(), (0..n).collect()).unwrap()
    }

    pub fn left_size(&self) -> usize {
        self.left.size()
    }

    pub fn right_size(&self) -> usize {
        self.right.size()
    }

    pub fn apex(&self) -> &PresentedSet {
        &self.apex
    }

    pub fn class_count(&self) -> usize {
        self.apex.class_count()
    }

    /// Class representatives of the feet maps, in foot order.
    pub fn left_classes(&self) -> Vec<usize> {
        self.left_map.iter().map(|&x| self.apex.class_of(x)).collect()
    }

    pub fn right_classes(&self) -> Vec<usize> {
        self.right_map.iter().map(|&x| self.apex.class_of(x)).collect()
    }

    /// Composes two cospans by gluing their apexes along the shared feet.
    pub fn compose(&self, other: &Cospan) -> Result<Cospan, CospanError> {
        if self.right.size() != other.left.size() {
            return Err(CospanError::FootMismatch {
                right: self.right.size(),
                left: other.left.size(),
            });
        }
        let apex = glue(
            &self.apex,
            &other.apex,
            self.right.size(),
            &self.right_map,
            &other.left_map,
        );
        let left_map = self.left_map.clone();
        let right_map = other.right_map.iter().map(|&x| x + self.apex.l()).collect();
        Ok(Cospan {
            left: self.left.clone(),
            right: other.right.clone(),
            apex,
            left_map,
            right_map,
        })
    }

    /// Assigns each apex class its canonical index: left feet first in index
    /// order, then right feet, then the remaining classes in representative
    /// order. Returns the total class count and, per class representative,
    /// its canonical index.
    fn canonical_class_order(&self) -> (usize, Vec<Option<usize>>) {
        let mut index: Vec<Option<usize>> = vec![None; self.apex.l()];
        let mut next = 0;
        for &x in self.left_map.iter().chain(self.right_map.iter()) {
            let rep = self.apex.class_of(x);
            if index[rep].is_none() {
                index[rep] = Some(next);
                next += 1;
            }
        }
        for rep in self.apex.class_reps() {
            if index[rep].is_none() {
                index[rep] = Some(next);
                next += 1;
            }
        }
        (next, index)
    }

    /// The canonical representative of the isomorphism class of this cospan:
    /// a discrete apex `{0, .., k-1}` with classes numbered by first
    /// occurrence in the scan order (left feet, right feet, leftovers).
    ///
    /// Idempotent, and two cospans are isomorphic in `Csp` iff their
    /// canonical forms are equal.
    pub fn canonicalize(&self) -> Cospan {
        let (k, index) = self.canonical_class_order();
        let left_map = self
            .left_map
            .iter()
            .map(|&x| index[self.apex.class_of(x)].unwrap())
            .collect();
        let right_map = self
            .right_map
            .iter()
            .map(|&x| index[self.apex.class_of(x)].unwrap())
            .collect();
        Cospan {
            left: self.left.clone(),
            right: self.right.clone(),
            apex: PresentedSet::discrete(k),
            left_map,
            right_map,
        }
    }

    /// Like [`Cospan::canonicalize`] but also returns, per apex class
    /// representative, the canonical class index.
    pub(crate) fn canonicalize_with_index(&self) -> (Cospan, Vec<Option<usize>>) {
        let (_, index) = self.canonical_class_order();
        (self.canonicalize(), index)
    }

    pub fn classify(&self) -> Classification {
        let canon = self.canonicalize();
        let k = canon.class_count();
        let mut hit_left = vec![false; k];
        let mut hit_right = vec![false; k];
        for &c in &canon.left_map {
            hit_left[c] = true;
        }
        for &c in &canon.right_map {
            hit_right[c] = true;
        }
        let closed_classes: Vec<usize> = (0..k)
            .filter(|&c| !hit_left[c] && !hit_right[c])
            .collect();
        Classification {
            is_reduced: closed_classes.is_empty(),
            is_connected: k == 1,
            is_positive_boundary: hit_right.iter().all(|&h| h),
            closed_classes,
        }
    }

    pub fn to_json(&self) -> CospanJson {
        let canon = self.canonicalize();
        CospanJson {
            left: canon.left.size(),
            right: canon.right.size(),
            apex_classes: canon.class_count(),
            left_map: canon.left_map,
            right_map: canon.right_map,
        }
    }

    pub fn from_json(json: &CospanJson) -> Result<Cospan, CospanError> {
        Cospan::from_class_maps(
            json.left,
            json.right,
            json.apex_classes,
            json.left_map.clone(),
            json.right_map.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps_classes(ps: &PresentedSet) -> Vec<Vec<usize>> {
        ps.class_reps()
            .into_iter()
            .map(|r| {
                (0..ps.l())
                    .filter(|&x| ps.is_member(x) && ps.class_of(x) == r)
                    .collect()
            })
            .collect()
    }

    #[test]
    fn empty_glue_is_disjoint_union() {
        let p = PresentedSet::discrete(2);
        let q = PresentedSet::discrete(3);
        let g = glue(&p, &q, 0, &[], &[]);
        assert_eq!(g.class_count(), 5);
        assert_eq!(ps_classes(&g), vec![vec![0], vec![1], vec![2], vec![3], vec![4]]);
    }

    #[test]
    fn one_point_glue_merges_classes() {
        let p = PresentedSet::discrete(1);
        let q = PresentedSet::discrete(1);
        let g = glue(&p, &q, 1, &[0], &[0]);
        assert_eq!(g.class_count(), 1);
        assert_eq!(ps_classes(&g), vec![vec![0, 1]]);
    }

    #[test]
    fn crossed_glue_matches_union_find_oracle() {
        // P with classes {0},{1}; Q with classes {0},{1}; two mid points with
        // i = (0,1), j = (1,0). Expected classes {0_P, 1_Q} and {1_P, 0_Q}.
        let p = PresentedSet::discrete(2);
        let q = PresentedSet::discrete(2);
        let g = glue(&p, &q, 2, &[0, 1], &[1, 0]);
        assert_eq!(g.class_count(), 2);
        assert_eq!(ps_classes(&g), vec![vec![0, 3], vec![1, 2]]);
    }

    /// Every presented set on `{0..l-1}`: all member subsets, all partitions
    /// of the members.
    fn all_presented_sets(l: usize) -> Vec<PresentedSet> {
        fn partitions(elems: &[usize]) -> Vec<Vec<Vec<usize>>> {
            match elems.split_first() {
                None => vec![vec![]],
                Some((&head, rest)) => {
                    let mut out = Vec::new();
                    for smaller in partitions(rest) {
                        for i in 0..smaller.len() {
                            let mut p = smaller.clone();
                            p[i].push(head);
                            out.push(p);
                        }
                        let mut p = smaller.clone();
                        p.push(vec![head]);
                        out.push(p);
                    }
                    out
                }
            }
        }
        let mut out = Vec::new();
        for mask in 0..(1usize << l) {
            let member: Vec<bool> = (0..l).map(|x| mask >> x & 1 == 1).collect();
            let elems: Vec<usize> = (0..l).filter(|&x| member[x]).collect();
            for partition in partitions(&elems) {
                let relations: Vec<(usize, usize)> = partition
                    .iter()
                    .flat_map(|block| block.windows(2).map(|w| (w[0], w[1])))
                    .collect();
                out.push(PresentedSet::from_relations(l, member.clone(), &relations));
            }
        }
        out.sort_by_key(|p| format!("{p:?}"));
        out.dedup();
        out
    }

    #[test]
    fn glue_is_strictly_associative_small_exhaustive() {
        // All presented sets on l <= 2 with all elements members, all maps.
        let sets: Vec<PresentedSet> = vec![
            PresentedSet::discrete(0),
            PresentedSet::discrete(1),
            PresentedSet::discrete(2),
            PresentedSet::from_relations(2, vec![true, true], &[(0, 1)]),
        ];
        let maps = |ps: &PresentedSet, mid: usize| -> Vec<Vec<usize>> {
            let elems: Vec<usize> = (0..ps.l()).filter(|&x| ps.is_member(x)).collect();
            let mut out = vec![vec![]];
            for _ in 0..mid {
                let mut next = Vec::new();
                for m in &out {
                    for &e in &elems {
                        let mut m2 = m.clone();
                        m2.push(e);
                        next.push(m2);
                    }
                }
                out = next;
            }
            out
        };
        for p in &sets {
            for q in &sets {
                for r in &sets {
                    for mid1 in 0..=1usize {
                        for mid2 in 0..=1usize {
                            if (mid1 > 0 && (p.class_count() == 0 || q.class_count() == 0))
                                || (mid2 > 0 && (q.class_count() == 0 || r.class_count() == 0))
                            {
                                continue;
                            }
                            for i1 in maps(p, mid1) {
                                for j1 in maps(q, mid1) {
                                    for i2 in maps(q, mid2) {
                                        for j2 in maps(r, mid2) {
                                            let pq = glue(p, q, mid1, &i1, &j1);
                                            let i2s: Vec<usize> =
                                                i2.iter().map(|&x| x + p.l()).collect();
                                            let lhs = glue(&pq, r, mid2, &i2s, &j2);
                                            let qr = glue(q, r, mid2, &i2, &j2);
                                            let rhs = glue(p, &qr, mid1, &i1, &j1);
                                            assert_eq!(lhs, rhs);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn glue_is_strictly_associative_exhaustive_l3_and_random_l6() {
        // exhaustive over all presented sets on three points, one-point glues
        let sets = all_presented_sets(3);
        for p in &sets {
            for q in &sets {
                for r in &sets {
                    let p_elems: Vec<usize> = (0..p.l()).filter(|&x| p.is_member(x)).collect();
                    let q_elems: Vec<usize> = (0..q.l()).filter(|&x| q.is_member(x)).collect();
                    let r_elems: Vec<usize> = (0..r.l()).filter(|&x| r.is_member(x)).collect();
                    for &i1 in &p_elems {
                        for &j1 in &q_elems {
                            for &i2 in &q_elems {
                                for &j2 in &r_elems {
                                    let pq = glue(p, q, 1, &[i1], &[j1]);
                                    let lhs = glue(&pq, r, 1, &[i2 + p.l()], &[j2]);
                                    let qr = glue(q, r, 1, &[i2], &[j2]);
                                    let rhs = glue(p, &qr, 1, &[i1], &[j1]);
                                    assert_eq!(lhs, rhs);
                                }
                            }
                        }
                    }
                }
            }
        }
        // random triples on six points with multi-point middles
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let rand_set = |rng: &mut rand_chacha::ChaCha8Rng| {
            let l = 6;
            let member: Vec<bool> = (0..l).map(|_| rng.random_range(0..4u8) > 0).collect();
            let elems: Vec<usize> = (0..l).filter(|&x| member[x]).collect();
            let mut rels = Vec::new();
            for w in elems.windows(2) {
                if rng.random_range(0..3u8) == 0 {
                    rels.push((w[0], w[1]));
                }
            }
            (PresentedSet::from_relations(l, member, &rels), elems)
        };
        for _ in 0..2000 {
            let (p, pe) = rand_set(&mut rng);
            let (q, qe) = rand_set(&mut rng);
            let (r, re) = rand_set(&mut rng);
            if pe.is_empty() || qe.is_empty() || re.is_empty() {
                continue;
            }
            let mid1 = rng.random_range(0..=3usize);
            let mid2 = rng.random_range(0..=3usize);
            let pick = |rng: &mut rand_chacha::ChaCha8Rng, v: &[usize], n: usize| -> Vec<usize> {
                (0..n).map(|_| v[rng.random_range(0..v.len())]).collect()
            };
            let i1 = pick(&mut rng, &pe, mid1);
            let j1 = pick(&mut rng, &qe, mid1);
            let i2 = pick(&mut rng, &qe, mid2);
            let j2 = pick(&mut rng, &re, mid2);
            let pq = glue(&p, &q, mid1, &i1, &j1);
            let i2s: Vec<usize> = i2.iter().map(|&x| x + p.l()).collect();
            let lhs = glue(&pq, &r, mid2, &i2s, &j2);
            let qr = glue(&q, &r, mid2, &i2, &j2);
            let rhs = glue(&p, &qr, mid1, &i1, &j1);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn canonicalize_is_idempotent_and_label_invariant() {
        // apex with classes {0,2} and {1}, left foot -> 2, right foot -> 1
        let apex = PresentedSet::from_relations(3, vec![true; 3], &[(0, 2)]);
        let c = Cospan::new(FinSet::new(1), FinSet::new(1), apex, vec![2], vec![1]).unwrap();
        let canon = c.canonicalize();
        assert_eq!(canon.canonicalize(), canon);
        // permuting apex labels gives the same canonical form
        let apex2 = PresentedSet::from_relations(3, vec![true; 3], &[(1, 2)]);
        let c2 = Cospan::new(FinSet::new(1), FinSet::new(1), apex2, vec![1], vec![0]).unwrap();
        assert_eq!(c2.canonicalize(), canon);
    }

    #[test]
    fn compose_identity_is_identity() {
        let c = Cospan::from_class_maps(2, 1, 2, vec![0, 1], vec![0]).unwrap();
        let id_l = Cospan::identity(2);
        let id_r = Cospan::identity(1);
        assert_eq!(id_l.compose(&c).unwrap().canonicalize(), c.canonicalize());
        assert_eq!(c.compose(&id_r).unwrap().canonicalize(), c.canonicalize());
    }

    #[test]
    fn compose_pushout_example() {
        // ({a} -> {x} <- {b1,b2}) o ({b1,b2} -> {y} <- {}): one class,
        // two mid points onto it, two merged parts.
        let c1 = Cospan::from_class_maps(1, 2, 1, vec![0], vec![0, 0]).unwrap();
        let c2 = Cospan::from_class_maps(2, 0, 1, vec![0, 0], vec![]).unwrap();
        let c = c1.compose(&c2).unwrap();
        assert_eq!(c.class_count(), 1);
        assert_eq!(c.left_size(), 1);
        assert_eq!(c.right_size(), 0);
    }

    #[test]
    fn foot_mismatch_is_reported() {
        let c1 = Cospan::identity(2);
        let c2 = Cospan::identity(3);
        assert_eq!(
            c1.compose(&c2).unwrap_err(),
            CospanError::FootMismatch { right: 2, left: 3 }
        );
    }

    #[test]
    fn classify_examples() {
        let id1 = Cospan::identity(1);
        let cls = id1.classify();
        assert!(cls.is_reduced && cls.is_connected && cls.is_positive_boundary);

        let id2 = Cospan::identity(2);
        assert!(!id2.classify().is_connected);

        // (0 -> {x} <- 0): closed point
        let closed = Cospan::from_class_maps(0, 0, 1, vec![], vec![]).unwrap();
        let cls = closed.classify();
        assert!(!cls.is_reduced);
        assert!(cls.is_connected);
        assert_eq!(cls.closed_classes, vec![0]);

        // ({a} -> {x,y} <- {b}), a -> x, b -> x: y closed, not connected
        let c = Cospan::from_class_maps(1, 1, 2, vec![0], vec![0]).unwrap();
        let cls = c.classify();
        assert!(!cls.is_reduced);
        assert!(!cls.is_connected);
        assert_eq!(cls.closed_classes, vec![1]);
    }

    #[test]
    fn bad_labels_rejected() {
        assert!(FinSet::with_labels(vec!["a".into(), "a".into()]).is_err());
        assert!(FinSet::with_labels(vec!["a".into(), "b".into()]).is_ok());
    }
}
