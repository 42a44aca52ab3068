//! Weighting monoids `(A, A_1, alpha)`.
//!
//! An abelian monoid `A` with a stability subset `A_1` (closed under adding
//! anything) and a distinguished element `alpha` in `A_1`. Elements are
//! stored uniformly as `i64`; each variant interprets and normalizes them.
//!
//! The monoid laws are obligations on the variants, sampled by the tests in
//! this module rather than proven.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A monoid element. Interpretation depends on the [`Weighting`] in use.
pub type Weight = i64;

/// An element of the group completion of the weighting monoid.
///
/// For the natural numbers this is a plain signed integer. Saturating
/// quotients of the naturals group-complete to the trivial group (once
/// `a = a + 1` holds, every difference collapses), so their completed
/// values normalize to zero; the trivial monoid completes to itself.
pub type GroupWeight = i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Weighting {
    /// The trivial monoid (0, 0, 0); plain cospans.
    Trivial,
    /// (N, N, 1): genus labels with no stability constraint.
    Nat,
    /// (N, N>=1, 1): the surface case with non-positive Euler characteristic.
    NatStable,
    /// N truncated at `gamma`: all values >= gamma are identified. The
    /// stability subset is the whole monoid.
    NatMod(u32),
    /// (Z, Z, 1). Integer weights admit pathological collapses, so this
    /// variant is opt-in and no stability closure is promised for it.
    IntUnchecked,
}

impl Weighting {
    pub fn zero(&self) -> Weight {
        0
    }

    pub fn alpha(&self) -> Weight {
        match self {
            Weighting::Trivial => 0,
            Weighting::Nat | Weighting::NatStable | Weighting::IntUnchecked => 1,
            Weighting::NatMod(g) => 1.min(*g as i64),
        }
    }

    /// Normalizes an arbitrary integer into a valid element.
    pub fn normalize(&self, x: i64) -> Weight {
        match self {
            Weighting::Trivial => 0,
            Weighting::Nat | Weighting::NatStable => x.max(0),
            Weighting::NatMod(g) => x.clamp(0, *g as i64),
            Weighting::IntUnchecked => x,
        }
    }

    pub fn is_element(&self, x: Weight) -> bool {
        match self {
            Weighting::Trivial => x == 0,
            Weighting::Nat | Weighting::NatStable => x >= 0,
            Weighting::NatMod(g) => (0..=*g as i64).contains(&x),
            Weighting::IntUnchecked => true,
        }
    }

    pub fn add(&self, a: Weight, b: Weight) -> Weight {
        debug_assert!(self.is_element(a) && self.is_element(b));
        match self {
            Weighting::Trivial => 0,
            Weighting::Nat | Weighting::NatStable | Weighting::IntUnchecked => a + b,
            Weighting::NatMod(g) => (a + b).min(*g as i64),
        }
    }

    /// `a + n * alpha` in the monoid.
    pub fn add_alpha_times(&self, a: Weight, n: u64) -> Weight {
        match self {
            Weighting::Trivial => 0,
            Weighting::Nat | Weighting::NatStable | Weighting::IntUnchecked => a + n as i64,
            Weighting::NatMod(g) => (a + n as i64).min(*g as i64),
        }
    }

    pub fn sum<I: IntoIterator<Item = Weight>>(&self, it: I) -> Weight {
        it.into_iter().fold(0, |acc, x| self.add(acc, x))
    }

    /// Membership in the stability subset `A_1`.
    pub fn is_stable_weight(&self, x: Weight) -> bool {
        match self {
            Weighting::Trivial | Weighting::Nat | Weighting::IntUnchecked => true,
            Weighting::NatStable => x >= 1,
            Weighting::NatMod(g) => *g == 0 || x >= 1,
        }
    }

    /// Maps a monoid element into the group completion.
    pub fn group_complete(&self, x: i64) -> GroupWeight {
        match self {
            Weighting::Trivial | Weighting::NatMod(_) => 0,
            Weighting::Nat | Weighting::NatStable | Weighting::IntUnchecked => x,
        }
    }

    /// Addition in the group completion.
    pub fn group_add(&self, a: GroupWeight, b: GroupWeight) -> GroupWeight {
        self.group_complete(a + b)
    }

    /// Uniform sample of an element with magnitude bounded by `max`.
    pub fn sample<R: Rng>(&self, rng: &mut R, max: u32) -> Weight {
        match self {
            Weighting::Trivial => 0,
            Weighting::Nat | Weighting::NatStable => rng.random_range(0..=max as i64),
            Weighting::NatMod(g) => rng.random_range(0..=(max as i64).min(*g as i64)),
            Weighting::IntUnchecked => rng.random_range(-(max as i64)..=max as i64),
        }
    }

    /// Uniform sample from the stability subset, bounded by `max`.
    pub fn sample_stable<R: Rng>(&self, rng: &mut R, max: u32) -> Weight {
        match self {
            Weighting::Trivial => 0,
            Weighting::Nat | Weighting::IntUnchecked => self.sample(rng, max),
            Weighting::NatStable => rng.random_range(1..=(max.max(1)) as i64),
            Weighting::NatMod(g) => {
                if *g == 0 {
                    0
                } else {
                    rng.random_range(1..=(max as i64).clamp(1, *g as i64))
                }
            }
        }
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weighting::Trivial => write!(f, "trivial"),
            Weighting::Nat => write!(f, "nat"),
            Weighting::NatStable => write!(f, "nat-stable"),
            Weighting::NatMod(g) => write!(f, "nat-mod:{g}"),
            Weighting::IntUnchecked => write!(f, "int-unchecked"),
        }
    }
}

impl FromStr for Weighting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trivial" => Ok(Weighting::Trivial),
            "nat" => Ok(Weighting::Nat),
            "nat-stable" => Ok(Weighting::NatStable),
            "int-unchecked" => Ok(Weighting::IntUnchecked),
            _ => {
                if let Some(g) = s.strip_prefix("nat-mod:") {
                    g.parse::<u32>()
                        .map(Weighting::NatMod)
                        .map_err(|e| format!("bad modulus in {s:?}: {e}"))
                } else {
                    Err(format!(
                        "unknown monoid {s:?}; expected trivial|nat|nat-stable|nat-mod:<g>|int-unchecked"
                    ))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const ALL: [Weighting; 6] = [
        Weighting::Trivial,
        Weighting::Nat,
        Weighting::NatStable,
        Weighting::NatMod(0),
        Weighting::NatMod(3),
        Weighting::IntUnchecked,
    ];

    #[test]
    fn monoid_laws_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in ALL {
            assert!(m.is_stable_weight(m.alpha()), "alpha must lie in A_1 for {m}");
            for _ in 0..2000 {
                let a = m.sample(&mut rng, 9);
                let b = m.sample(&mut rng, 9);
                let c = m.sample(&mut rng, 9);
                assert_eq!(m.add(a, b), m.add(b, a));
                assert_eq!(m.add(m.add(a, b), c), m.add(a, m.add(b, c)));
                assert_eq!(m.add(a, m.zero()), a);
                // A_1 + A ⊆ A_1
                let s = m.sample_stable(&mut rng, 9);
                assert!(m.is_stable_weight(m.add(s, a)));
            }
        }
    }

    #[test]
    fn saturation_at_gamma() {
        let m = Weighting::NatMod(2);
        assert_eq!(m.add(1, 1), 2);
        assert_eq!(m.add(2, 2), 2);
        assert_eq!(m.add_alpha_times(1, 5), 2);
        // gamma = 0 collapses to the trivial monoid
        let m0 = Weighting::NatMod(0);
        assert_eq!(m0.alpha(), 0);
        assert_eq!(m0.add(0, 0), 0);
    }

    #[test]
    fn group_completion() {
        assert_eq!(Weighting::Nat.group_complete(-3), -3);
        assert_eq!(Weighting::NatMod(4).group_complete(7), 0);
        assert_eq!(Weighting::Trivial.group_complete(5), 0);
    }

    #[test]
    fn parse_round_trip() {
        for m in ALL {
            assert_eq!(m.to_string().parse::<Weighting>().unwrap(), m);
        }
        assert!("nat-mod:x".parse::<Weighting>().is_err());
        assert!("bogus".parse::<Weighting>().is_err());
    }
}
