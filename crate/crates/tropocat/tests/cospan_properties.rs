//! Property tests for the weighted cospan category: associativity, Euler
//! additivity, stability closure, genus functoriality, and canonical-form
//! separation against a brute-force isomorphism oracle.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropocat::axioms::{random_weighted_cospan_with_feet, TrialConfig};
use tropocat::cospan::WeightedCospan;
use tropocat::finset::Cospan;
use tropocat::weight::Weighting;

fn cfg() -> TrialConfig {
    TrialConfig {
        seed: 99,
        trials: 0,
        max_feet: 4,
        max_apex: 4,
        max_label: 3,
    }
}

fn composable_triple(
    rng: &mut ChaCha8Rng,
    monoid: Weighting,
    stable: bool,
) -> (WeightedCospan, WeightedCospan, WeightedCospan) {
    let c = cfg();
    let a = rng.random_range(0..=c.max_feet);
    let b = rng.random_range(0..=c.max_feet);
    let d = rng.random_range(0..=c.max_feet);
    let e = rng.random_range(0..=c.max_feet);
    (
        random_weighted_cospan_with_feet(rng, monoid, a, b, &c, stable),
        random_weighted_cospan_with_feet(rng, monoid, b, d, &c, stable),
        random_weighted_cospan_with_feet(rng, monoid, d, e, &c, stable),
    )
}

proptest! {
    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for monoid in [Weighting::Trivial, Weighting::Nat, Weighting::NatStable, Weighting::NatMod(2)] {
            let (w1, w2, w3) = composable_triple(&mut rng, monoid, monoid == Weighting::NatStable);
            let left = w1.compose(&w2).unwrap().compose(&w3).unwrap();
            let right = w1.compose(&w2.compose(&w3).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn euler_characteristic_is_additive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (w1, w2, _) = composable_triple(&mut rng, Weighting::Nat, false);
        let composite = w1.compose(&w2).unwrap();
        prop_assert_eq!(
            composite.euler_characteristic().unwrap(),
            w1.euler_characteristic().unwrap() + w2.euler_characteristic().unwrap()
        );
    }

    #[test]
    fn stability_is_closed_under_composition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (w1, w2, _) = composable_triple(&mut rng, Weighting::NatStable, true);
        prop_assert!(w1.is_stable());
        prop_assert!(w2.is_stable());
        prop_assert!(w1.compose(&w2).unwrap().is_stable());
    }

    #[test]
    fn genus_functor_is_functorial_and_monoidal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for monoid in [Weighting::Nat, Weighting::NatStable, Weighting::Trivial] {
            let (w1, w2, _) = composable_triple(&mut rng, monoid, monoid == Weighting::NatStable);
            let composite = w1.compose(&w2).unwrap();
            prop_assert_eq!(
                composite.pb_genus_functor(),
                monoid.group_add(w1.pb_genus_functor(), w2.pb_genus_functor())
            );
            // additive under disjoint union as well
            let tensor = w1.tensor(&w2).unwrap();
            prop_assert_eq!(
                tensor.pb_genus_functor(),
                monoid.group_add(w1.pb_genus_functor(), w2.pb_genus_functor())
            );
        }
    }

    #[test]
    fn positive_boundary_is_closed_under_composition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (w1, w2, _) = composable_triple(&mut rng, Weighting::NatStable, true);
        if w1.classify().is_positive_boundary && w2.classify().is_positive_boundary {
            prop_assert!(w1.compose(&w2).unwrap().classify().is_positive_boundary);
        }
    }

    #[test]
    fn split_reassemble_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = cfg();
        let w = tropocat::axioms::random_weighted_cospan(&mut rng, Weighting::Nat, &c, false);
        let (reduced, closed) = w.split_reduced_closed();
        prop_assert!(reduced.classify().is_reduced);
        prop_assert_eq!(reduced.reassemble(&closed), w);
    }
}

/// Brute-force cospan isomorphism: search for a class bijection commuting
/// with both foot maps (and matching labels). Independent of the canonical
/// scan-order construction it cross-checks.
fn cospan_isomorphic(a: &WeightedCospan, b: &WeightedCospan) -> bool {
    if a.left_size() != b.left_size()
        || a.right_size() != b.right_size()
        || a.class_count() != b.class_count()
    {
        return false;
    }
    let k = a.class_count();
    let mut perm: Vec<usize> = (0..k).collect();
    // Heap's algorithm over all class bijections
    fn heaps(perm: &mut Vec<usize>, n: usize, check: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if n <= 1 {
            return check(perm);
        }
        for i in 0..n {
            if heaps(perm, n - 1, check) {
                return true;
            }
            if n.is_multiple_of(2) {
                perm.swap(i, n - 1);
            } else {
                perm.swap(0, n - 1);
            }
        }
        false
    }
    let (al, ar, bl, br) = (
        a.left_classes(),
        a.right_classes(),
        b.left_classes(),
        b.right_classes(),
    );
    heaps(&mut perm, k, &mut |p: &[usize]| {
        al.iter().zip(&bl).all(|(&x, &y)| p[x] == y)
            && ar.iter().zip(&br).all(|(&x, &y)| p[x] == y)
            && (0..k).all(|c| a.labels()[c] == b.labels()[p[c]])
    })
}

#[test]
fn canonical_forms_separate_isomorphism_classes() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    // apexes up to six classes (one more may be forced in by a closed part)
    let c = TrialConfig {
        max_feet: 3,
        max_apex: 5,
        max_label: 2,
        ..cfg()
    };
    let mut pool: Vec<WeightedCospan> = Vec::new();
    for _ in 0..60 {
        pool.push(tropocat::axioms::random_weighted_cospan(
            &mut rng,
            Weighting::Nat,
            &c,
            false,
        ));
    }
    for i in 0..pool.len() {
        for j in i..pool.len() {
            let same = pool[i] == pool[j];
            assert_eq!(
                same,
                cospan_isomorphic(&pool[i], &pool[j]),
                "canonical equality disagrees with brute force on {i},{j}"
            );
        }
    }
}

#[test]
fn relabelled_cospans_have_equal_canonical_forms() {
    // a cospan built with arbitrary class numbering equals its canonical
    // form built with scan-order numbering
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..500 {
        let left = rng.random_range(0..=3usize);
        let right = rng.random_range(0..=3usize);
        let k = rng.random_range(1..=4usize);
        let lm: Vec<usize> = (0..left).map(|_| rng.random_range(0..k)).collect();
        let rm: Vec<usize> = (0..right).map(|_| rng.random_range(0..k)).collect();
        let labels: Vec<i64> = (0..k).map(|_| rng.random_range(0..3)).collect();
        let w = WeightedCospan::new(
            Weighting::Nat,
            Cospan::from_class_maps(left, right, k, lm.clone(), rm.clone()).unwrap(),
            labels.clone(),
        )
        .unwrap();
        // relabel classes by a random permutation
        let mut perm: Vec<usize> = (0..k).collect();
        for i in (1..k).rev() {
            let j = rng.random_range(0..=i);
            perm.swap(i, j);
        }
        let w2 = WeightedCospan::new(
            Weighting::Nat,
            Cospan::from_class_maps(
                left,
                right,
                k,
                lm.iter().map(|&c| perm[c]).collect(),
                rm.iter().map(|&c| perm[c]).collect(),
            )
            .unwrap(),
            {
                let mut l2 = vec![0; k];
                for c in 0..k {
                    l2[perm[c]] = labels[c];
                }
                l2
            },
        )
        .unwrap();
        assert_eq!(w, w2);
    }
}
