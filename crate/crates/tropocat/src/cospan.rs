//! Weighted cospans: cospans whose apex classes carry monoid labels.
//!
//! Composition glues the underlying cospans and labels each composite class
//! with the sum of its constituent labels plus `alpha` times the first Betti
//! number of the glued class. Values are kept in canonical form at all
//! times, so equality of values is equality of morphisms.

use crate::finset::{Classification, Cospan, CospanError};
use crate::weight::{GroupWeight, Weight, Weighting};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    #[error(transparent)]
    Cospan(#[from] CospanError),
    #[error("cannot combine cospans over {0} with cospans over {1}")]
    MonoidMismatch(Weighting, Weighting),
    #[error("class has {mid_hits} gluing points over {parts} parts; not connected")]
    NegativeBetti { mid_hits: usize, parts: usize },
    #[error("operation requires a natural-number weighting, got {0}")]
    WrongMonoid(Weighting),
    #[error("label count {labels} does not match class count {classes}")]
    LabelMismatch { labels: usize, classes: usize },
}

/// First Betti number of a glued class: the number of middle points mapping
/// into it, minus the number of parts it was merged from, plus one.
pub fn b1_of_class(mid_hits: usize, part_count: usize) -> Result<u64, WeightError> {
    if part_count == 0 || mid_hits + 1 < part_count {
        return Err(WeightError::NegativeBetti {
            mid_hits,
            parts: part_count,
        });
    }
    Ok((mid_hits + 1 - part_count) as u64)
}

/// A morphism of the weighted cospan category: a canonical cospan together
/// with one label per apex class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedCospan {
    monoid: Weighting,
    cospan: Cospan,
    labels: Vec<Weight>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightedCospanJson {
    pub left: usize,
    pub right: usize,
    pub apex_classes: usize,
    pub left_map: Vec<usize>,
    pub right_map: Vec<usize>,
    pub labels: Vec<Weight>,
}

impl WeightedCospan {
    /// Wraps a cospan with labels listed per apex class, classes taken in
    /// increasing order of their representatives. The result is canonical.
    pub fn new(monoid: Weighting, cospan: Cospan, labels: Vec<Weight>) -> Result<Self, WeightError> {
        let reps = cospan.apex().class_reps();
        if labels.len() != reps.len() {
            return Err(WeightError::LabelMismatch {
                labels: labels.len(),
                classes: reps.len(),
            });
        }
        let (canon, index) = cospan.canonicalize_with_index();
        let mut canon_labels = vec![0; reps.len()];
        for (i, &rep) in reps.iter().enumerate() {
            canon_labels[index[rep].unwrap()] = labels[i];
        }
        let mut out = WeightedCospan {
            monoid,
            cospan: canon,
            labels: canon_labels,
        };
        out.sort_closed_tail();
        Ok(out)
    }

    /// Canonical order puts classes hit by feet first; the closed classes
    /// form a tail that is only determined up to permutation, so we pin it
    /// by sorting the labels.
    fn sort_closed_tail(&mut self) {
        let k = self.cospan.class_count();
        let mut hit = vec![false; k];
        for &c in self.cospan.left_classes().iter().chain(self.cospan.right_classes().iter()) {
            hit[c] = true;
        }
        let first_closed = hit.iter().filter(|&&h| h).count();
        debug_assert!(hit[..first_closed].iter().all(|&h| h));
        self.labels[first_closed..].sort_unstable();
    }

    pub fn identity(monoid: Weighting, n: usize) -> Self {
        WeightedCospan::new(monoid, Cospan::identity(n), vec![0; n]).unwrap()
    }

    /// The morphism of a bijection: `left_map[i] = perm[i]`, right map the
    /// identity, all labels zero.
    pub fn from_permutation(monoid: Weighting, perm: &[usize]) -> Self {
        let n = perm.len();
        let cospan = Cospan::from_class_maps(n, n, n, perm.to_vec(), (0..n).collect()).unwrap();
        WeightedCospan::new(monoid, cospan, vec![0; n]).unwrap()
    }

    /// The symmetry `A ⊗ B -> B ⊗ A` for `|A| = m`, `|B| = n`.
    pub fn braiding(monoid: Weighting, m: usize, n: usize) -> Self {
        let perm: Vec<usize> = (0..m).map(|i| n + i).chain(0..n).collect();
        WeightedCospan::from_permutation(monoid, &perm)
    }

    pub fn monoid(&self) -> Weighting {
        self.monoid
    }

    pub fn cospan(&self) -> &Cospan {
        &self.cospan
    }

    pub fn labels(&self) -> &[Weight] {
        &self.labels
    }

    pub fn left_size(&self) -> usize {
        self.cospan.left_size()
    }

    pub fn right_size(&self) -> usize {
        self.cospan.right_size()
    }

    pub fn class_count(&self) -> usize {
        self.cospan.class_count()
    }

    /// Canonical class indices of the left feet. The stored cospan is
    /// canonical, so class representatives coincide with class indices.
    pub fn left_classes(&self) -> Vec<usize> {
        self.cospan.left_classes()
    }

    pub fn right_classes(&self) -> Vec<usize> {
        self.cospan.right_classes()
    }

    pub fn classify(&self) -> Classification {
        self.cospan.classify()
    }

    pub fn is_connected(&self) -> bool {
        self.class_count() == 1
    }

    /// Checks the stability condition: every class hit by at most one foot
    /// carries a label in `A_1`.
    pub fn is_stable(&self) -> bool {
        let k = self.class_count();
        let mut hits = vec![0usize; k];
        for c in self.left_classes().into_iter().chain(self.right_classes()) {
            hits[c] += 1;
        }
        (0..k).all(|c| hits[c] > 1 || self.monoid.is_stable_weight(self.labels[c]))
    }

    /// Disjoint union of morphisms; feet of `other` are appended after ours.
    pub fn tensor(&self, other: &WeightedCospan) -> Result<WeightedCospan, WeightError> {
        if self.monoid != other.monoid {
            return Err(WeightError::MonoidMismatch(self.monoid, other.monoid));
        }
        let k1 = self.class_count();
        let left_map: Vec<usize> = self
            .left_classes()
            .into_iter()
            .chain(other.left_classes().into_iter().map(|c| c + k1))
            .collect();
        let right_map: Vec<usize> = self
            .right_classes()
            .into_iter()
            .chain(other.right_classes().into_iter().map(|c| c + k1))
            .collect();
        let cospan = Cospan::from_class_maps(
            self.left_size() + other.left_size(),
            self.right_size() + other.right_size(),
            k1 + other.class_count(),
            left_map,
            right_map,
        )?;
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        WeightedCospan::new(self.monoid, cospan, labels)
    }

    /// Composes two weighted cospans. The underlying cospans are glued along
    /// the shared feet; each composite class gets the sum of its constituent
    /// labels plus `alpha * b1` for the cycles created by the gluing.
    pub fn compose(&self, other: &WeightedCospan) -> Result<WeightedCospan, WeightError> {
        if self.monoid != other.monoid {
            return Err(WeightError::MonoidMismatch(self.monoid, other.monoid));
        }
        let m = self.monoid;
        let composed = self.cospan.compose(&other.cospan)?;
        // Both stored cospans are canonical, so their apexes are discrete
        // and the glued apex is a partition of k1 + k2 atoms.
        let k1 = self.class_count();
        let k2 = other.class_count();
        let apex = composed.apex();
        let mut parts: Vec<usize> = Vec::new();
        let mut rep_index = vec![usize::MAX; k1 + k2];
        let mut label_sum: Vec<Weight> = Vec::new();
        let mut part_count: Vec<usize> = Vec::new();
        for atom in 0..k1 + k2 {
            let rep = apex.class_of(atom);
            if rep_index[rep] == usize::MAX {
                rep_index[rep] = parts.len();
                parts.push(rep);
                label_sum.push(0);
                part_count.push(0);
            }
            let idx = rep_index[rep];
            let lab = if atom < k1 {
                self.labels[atom]
            } else {
                other.labels[atom - k1]
            };
            label_sum[idx] = m.add(label_sum[idx], lab);
            part_count[idx] += 1;
        }
        let mut mid_hits = vec![0usize; parts.len()];
        for c in self.right_classes() {
            mid_hits[rep_index[apex.class_of(c)]] += 1;
        }
        // WeightedCospan::new expects labels per class in increasing order
        // of representatives; atoms are scanned in order, so the first
        // occurrence of each class is its minimal atom, i.e. its rep.
        debug_assert!(parts.windows(2).all(|w| w[0] < w[1]));
        let mut labels = vec![0; parts.len()];
        for idx in 0..parts.len() {
            let b1 = b1_of_class(mid_hits[idx], part_count[idx])?;
            labels[idx] = m.add_alpha_times(label_sum[idx], b1);
        }
        WeightedCospan::new(m, composed, labels)
    }

    /// Euler characteristic under the surface dictionary: each class of
    /// label `g` hit by `d` feet contributes `2 - 2g - d`.
    pub fn euler_characteristic(&self) -> Result<i64, WeightError> {
        match self.monoid {
            Weighting::Nat | Weighting::NatStable => {}
            other => return Err(WeightError::WrongMonoid(other)),
        }
        let k = self.class_count();
        let mut feet = vec![0i64; k];
        for c in self.left_classes().into_iter().chain(self.right_classes()) {
            feet[c] += 1;
        }
        Ok((0..k).map(|c| 2 - 2 * self.labels[c] - feet[c]).sum())
    }

    /// The genus functor into the group completion: the sum of all labels
    /// plus `alpha * (|right feet| - |apex classes|)`.
    pub fn pb_genus_functor(&self) -> GroupWeight {
        let raw: i64 = self.labels.iter().sum::<i64>()
            + self.monoid.alpha() * (self.right_size() as i64 - self.class_count() as i64);
        self.monoid.group_complete(raw)
    }

    /// The same value computed inside the monoid, defined exactly on
    /// positive boundary morphisms (where `|right feet| >= |classes|`).
    pub fn pb_genus_monoid(&self) -> Option<Weight> {
        let n = self.right_size();
        let k = self.class_count();
        if n < k {
            return None;
        }
        let s = self.monoid.sum(self.labels.iter().copied());
        Some(self.monoid.add_alpha_times(s, (n - k) as u64))
    }

    /// Splits off the closed classes as a multiset of labels, leaving a
    /// reduced cospan. [`WeightedCospan::reassemble`] inverts this.
    pub fn split_reduced_closed(&self) -> (WeightedCospan, Vec<Weight>) {
        let cls = self.classify();
        let closed: Vec<usize> = cls.closed_classes;
        if closed.is_empty() {
            return (self.clone(), Vec::new());
        }
        // closed classes form the tail of the canonical class order
        let first_closed = self.class_count() - closed.len();
        let reduced = Cospan::from_class_maps(
            self.left_size(),
            self.right_size(),
            first_closed,
            self.left_classes(),
            self.right_classes(),
        )
        .unwrap();
        let reduced_labels = self.labels[..first_closed].to_vec();
        let closed_labels = self.labels[first_closed..].to_vec();
        (
            WeightedCospan::new(self.monoid, reduced, reduced_labels).unwrap(),
            closed_labels,
        )
    }

    /// Adjoins closed classes with the given labels.
    pub fn reassemble(&self, closed: &[Weight]) -> WeightedCospan {
        let k = self.class_count();
        let cospan = Cospan::from_class_maps(
            self.left_size(),
            self.right_size(),
            k + closed.len(),
            self.left_classes(),
            self.right_classes(),
        )
        .unwrap();
        let mut labels = self.labels.clone();
        labels.extend_from_slice(closed);
        WeightedCospan::new(self.monoid, cospan, labels).unwrap()
    }

    pub fn to_json(&self) -> WeightedCospanJson {
        let base = self.cospan.to_json();
        WeightedCospanJson {
            left: base.left,
            right: base.right,
            apex_classes: base.apex_classes,
            left_map: base.left_map,
            right_map: base.right_map,
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(monoid: Weighting, json: &WeightedCospanJson) -> Result<Self, WeightError> {
        let cospan = Cospan::from_class_maps(
            json.left,
            json.right,
            json.apex_classes,
            json.left_map.clone(),
            json.right_map.clone(),
        )?;
        WeightedCospan::new(monoid, cospan, json.labels.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wc(
        monoid: Weighting,
        left: usize,
        right: usize,
        classes: usize,
        lm: Vec<usize>,
        rm: Vec<usize>,
        labels: Vec<Weight>,
    ) -> WeightedCospan {
        let c = Cospan::from_class_maps(left, right, classes, lm, rm).unwrap();
        WeightedCospan::new(monoid, c, labels).unwrap()
    }

    #[test]
    fn b1_examples() {
        assert_eq!(b1_of_class(1, 2).unwrap(), 0);
        assert_eq!(b1_of_class(2, 2).unwrap(), 1);
        assert_eq!(b1_of_class(3, 2).unwrap(), 2);
        assert!(b1_of_class(0, 2).is_err());
    }

    #[test]
    fn compose_adds_labels_and_cycles() {
        // ({a} -> {x:1} <- {b1,b2}) o ({b1,b2} -> {y:0} <- 0)
        // over (N, N>=1, 1): one class of label 1 + 0 + 1*b1 with b1 = 1.
        let m = Weighting::NatStable;
        let w1 = wc(m, 1, 2, 1, vec![0], vec![0, 0], vec![1]);
        let w2 = wc(m, 2, 0, 1, vec![0, 0], vec![], vec![0]);
        let c = w1.compose(&w2).unwrap();
        assert_eq!(c.class_count(), 1);
        assert_eq!(c.labels(), &[2]);
        assert_eq!(c.left_size(), 1);
        assert_eq!(c.right_size(), 0);
    }

    #[test]
    fn compose_with_identity_is_identity() {
        let m = Weighting::NatStable;
        let w = wc(m, 2, 1, 1, vec![0, 0], vec![0], vec![3]);
        let idl = WeightedCospan::identity(m, 2);
        let idr = WeightedCospan::identity(m, 1);
        assert_eq!(idl.compose(&w).unwrap(), w);
        assert_eq!(w.compose(&idr).unwrap(), w);
    }

    #[test]
    fn pants_glued_along_one_circle() {
        // two genus 0 pairs of pants glued along one boundary circle:
        // connected, label 0, b1 = 0, and chi adds as (-1) + (-1) = -2.
        let m = Weighting::Nat;
        let w1 = wc(m, 2, 1, 1, vec![0, 0], vec![0], vec![0]);
        let w2 = wc(m, 1, 2, 1, vec![0], vec![0, 0], vec![0]);
        let c = w1.compose(&w2).unwrap();
        assert_eq!(c.labels(), &[0]);
        assert_eq!(w1.euler_characteristic().unwrap(), -1);
        assert_eq!(w2.euler_characteristic().unwrap(), -1);
        assert_eq!(c.euler_characteristic().unwrap(), -2);
    }

    #[test]
    fn euler_characteristic_examples() {
        let m = Weighting::Nat;
        // closed genus-g class
        for g in 0..4 {
            let w = wc(m, 0, 0, 1, vec![], vec![], vec![g]);
            assert_eq!(w.euler_characteristic().unwrap(), 2 - 2 * g);
        }
        // cylinder
        let cyl = wc(m, 1, 1, 1, vec![0], vec![0], vec![0]);
        assert_eq!(cyl.euler_characteristic().unwrap(), 0);
        // additivity on the labelled example: (-3) + 0 = -3
        let w1 = wc(m, 1, 2, 1, vec![0], vec![0, 0], vec![1]);
        let w2 = wc(m, 2, 0, 1, vec![0, 0], vec![], vec![0]);
        assert_eq!(w1.euler_characteristic().unwrap(), -3);
        assert_eq!(w2.euler_characteristic().unwrap(), 0);
        let c = w1.compose(&w2).unwrap();
        assert_eq!(c.euler_characteristic().unwrap(), -3);
        assert!(wc(Weighting::Trivial, 0, 0, 0, vec![], vec![], vec![])
            .euler_characteristic()
            .is_err());
    }

    #[test]
    fn pb_genus_examples() {
        let m = Weighting::NatStable;
        let id1 = WeightedCospan::identity(m, 1);
        assert_eq!(id1.pb_genus_functor(), 0);
        // ({m} -> {x:1} <- {n1,n2}): 1 + 1*(2 - 1) = 2
        let w = wc(m, 1, 2, 1, vec![0], vec![0, 0], vec![1]);
        assert_eq!(w.pb_genus_functor(), 2);
        assert_eq!(w.pb_genus_monoid(), Some(2));
        // not positive boundary: |N| < |W|
        let v = wc(m, 1, 0, 1, vec![0], vec![], vec![1]);
        assert_eq!(v.pb_genus_monoid(), None);
        assert_eq!(v.pb_genus_functor(), 0);
    }

    #[test]
    fn split_and_reassemble_round_trip() {
        let m = Weighting::Nat;
        let w = wc(m, 0, 0, 2, vec![], vec![], vec![2, 1]);
        let (red, closed) = w.split_reduced_closed();
        assert_eq!(red.class_count(), 0);
        assert_eq!(closed, vec![1, 2]);
        assert_eq!(red.reassemble(&closed), w);

        let v = wc(m, 1, 1, 2, vec![0], vec![0], vec![0, 5]);
        let (red, closed) = v.split_reduced_closed();
        assert_eq!(red.class_count(), 1);
        assert_eq!(closed, vec![5]);
        assert_eq!(red.reassemble(&closed), v);

        let reduced = wc(m, 1, 1, 1, vec![0], vec![0], vec![4]);
        let (r, c) = reduced.split_reduced_closed();
        assert_eq!(r, reduced);
        assert!(c.is_empty());
    }

    #[test]
    fn stability_is_closed_under_composition() {
        let m = Weighting::NatStable;
        // a stable morphism with a class hit once must have label >= 1
        let w = wc(m, 1, 0, 1, vec![0], vec![], vec![1]);
        assert!(w.is_stable());
        let bad = wc(m, 1, 0, 1, vec![0], vec![], vec![0]);
        assert!(!bad.is_stable());
    }

    #[test]
    fn closed_label_order_is_canonical() {
        let m = Weighting::Nat;
        let a = wc(m, 0, 0, 2, vec![], vec![], vec![3, 1]);
        let b = wc(m, 0, 0, 2, vec![], vec![], vec![1, 3]);
        assert_eq!(a, b);
        assert_eq!(a.labels(), &[1, 3]);
    }

    #[test]
    fn truncated_weighting_saturates_under_composition() {
        // over nat-mod:2 every genus at least two is identified: gluing two
        // labelled tori along a circle saturates instead of reaching 2+2+0
        let m = Weighting::NatMod(2);
        let w1 = wc(m, 0, 1, 1, vec![], vec![0], vec![2]);
        let w2 = wc(m, 1, 0, 1, vec![0], vec![], vec![2]);
        let c = w1.compose(&w2).unwrap();
        assert_eq!(c.labels(), &[2]);
        // and the cycle correction saturates the same way
        let u1 = wc(m, 0, 2, 1, vec![], vec![0, 0], vec![1]);
        let u2 = wc(m, 2, 0, 1, vec![0, 0], vec![], vec![1]);
        assert_eq!(u1.compose(&u2).unwrap().labels(), &[2]);
    }

    #[test]
    fn stable_connected_cospans_have_nonpositive_euler_characteristic() {
        // the surface dictionary: a connected morphism is stable exactly
        // when 2 - 2g - d <= 0, i.e. it is neither a disk nor a sphere
        let m = Weighting::NatStable;
        for feet in 0..=4usize {
            for label in 0..=3i64 {
                for left in 0..=feet {
                    let right = feet - left;
                    let c = Cospan::from_class_maps(left, right, 1, vec![0; left], vec![0; right])
                        .unwrap();
                    let w = WeightedCospan::new(m, c, vec![label]).unwrap();
                    assert_eq!(
                        w.is_stable(),
                        w.euler_characteristic().unwrap() <= 0,
                        "feet {feet}, genus {label}"
                    );
                }
            }
        }
    }

    #[test]
    fn braiding_squares_to_identity() {
        let m = Weighting::Trivial;
        let b = WeightedCospan::braiding(m, 2, 3);
        let b2 = WeightedCospan::braiding(m, 3, 2);
        assert_eq!(b.compose(&b2).unwrap(), WeightedCospan::identity(m, 5));
    }
}
