//! Randomized and small-exhaustive checks of the labelled cospan category
//! axioms and of the surgery diagrams for weighted cospans.
//!
//! Every check is deterministic given its [`TrialConfig`]: trials draw from
//! a counter-seeded ChaCha stream, and a failing report embeds the witness
//! morphisms so it can be replayed without re-sampling.

use crate::cospan::{WeightedCospan, WeightedCospanJson};
use crate::finset::Cospan;
use crate::weight::{Weight, Weighting};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_feet: usize,
    pub max_apex: usize,
    pub max_label: u32,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            seed: 0,
            trials: 1000,
            max_feet: 4,
            max_apex: 4,
            max_label: 3,
        }
    }
}

impl TrialConfig {
    /// Ranges small enough that exhaustive enumeration beats sampling.
    pub fn is_exhaustive_range(&self) -> bool {
        self.max_feet <= 3 && self.max_apex <= 3 && self.max_label <= 1
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub description: String,
    /// For the surgery check, which of the three diagrams failed (1-based).
    pub diagram: Option<usize>,
    pub witnesses: Vec<WeightedCospanJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub monoid: String,
    pub exhaustive: bool,
    pub trials_run: usize,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

impl Report {
    fn pass(check: &str, monoid: Weighting, exhaustive: bool, trials_run: usize) -> Self {
        Report {
            check: check.to_string(),
            monoid: monoid.to_string(),
            exhaustive,
            trials_run,
            passed: true,
            counterexample: None,
        }
    }

    fn fail(
        check: &str,
        monoid: Weighting,
        exhaustive: bool,
        trials_run: usize,
        ce: Counterexample,
    ) -> Self {
        Report {
            check: check.to_string(),
            monoid: monoid.to_string(),
            exhaustive,
            trials_run,
            passed: false,
            counterexample: Some(ce),
        }
    }
}

/// Per-trial RNG; keeps trials independent so a failing trial can be
/// replayed on its own without consuming the shared stream.
fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Samples a weighted cospan by drawing foot sizes, throwing in a few fresh
/// closed points, sampling a surjection from feet and closed points onto a
/// class set, then labelling uniformly. A quarter of the samples force at
/// least one closed class, otherwise axiom (iii) is checked vacuously.
pub fn random_weighted_cospan<R: Rng>(
    rng: &mut R,
    monoid: Weighting,
    cfg: &TrialConfig,
    stable: bool,
) -> WeightedCospan {
    let left = rng.random_range(0..=cfg.max_feet);
    let right = rng.random_range(0..=cfg.max_feet);
    random_weighted_cospan_with_feet(rng, monoid, left, right, cfg, stable)
}

pub fn random_weighted_cospan_with_feet<R: Rng>(
    rng: &mut R,
    monoid: Weighting,
    left: usize,
    right: usize,
    cfg: &TrialConfig,
    stable: bool,
) -> WeightedCospan {
    let force_closed = rng.random_range(0..4u8) == 0;
    let closed_points = if force_closed {
        rng.random_range(1..=2usize)
    } else {
        rng.random_range(0..=2usize)
    };
    let sources = left + right + closed_points;
    if sources == 0 {
        let c = Cospan::from_class_maps(0, 0, 0, vec![], vec![]).unwrap();
        return WeightedCospan::new(monoid, c, vec![]).unwrap();
    }
    let k = rng.random_range(1..=cfg.max_apex.min(sources).max(1));
    let mut order: Vec<usize> = (0..sources).collect();
    order.shuffle(rng);
    let mut assignment = vec![0usize; sources];
    for (cls, &src) in order.iter().take(k).enumerate() {
        assignment[src] = cls;
    }
    for &src in order.iter().skip(k) {
        assignment[src] = rng.random_range(0..k);
    }
    let left_map = assignment[..left].to_vec();
    let right_map = assignment[left..left + right].to_vec();
    let mut k = k;
    if force_closed {
        let mut hit = vec![false; k];
        for &c in left_map.iter().chain(right_map.iter()) {
            hit[c] = true;
        }
        if hit.iter().all(|&h| h) {
            k += 1; // one extra class touched by nothing
        }
    }
    let cospan = Cospan::from_class_maps(left, right, k, left_map.clone(), right_map.clone()).unwrap();
    let mut foot_hits = vec![0usize; k];
    for &c in left_map.iter().chain(right_map.iter()) {
        foot_hits[c] += 1;
    }
    let labels: Vec<Weight> = (0..k)
        .map(|c| {
            if stable && foot_hits[c] <= 1 {
                monoid.sample_stable(rng, cfg.max_label)
            } else {
                monoid.sample(rng, cfg.max_label)
            }
        })
        .collect();
    WeightedCospan::new(monoid, cospan, labels).unwrap()
}

/// A connected morphism with the given feet: single apex class.
pub fn random_connected_with_feet<R: Rng>(
    rng: &mut R,
    monoid: Weighting,
    left: usize,
    right: usize,
    max_label: u32,
) -> WeightedCospan {
    let cospan = Cospan::from_class_maps(left, right, 1, vec![0; left], vec![0; right]).unwrap();
    let label = if left + right <= 1 {
        monoid.sample_stable(rng, max_label)
    } else {
        monoid.sample(rng, max_label)
    };
    WeightedCospan::new(monoid, cospan, vec![label]).unwrap()
}

/// A stream of composable weighted cospans `M_0 -> M_1 -> .. -> M_n`.
pub fn random_chain<R: Rng>(
    rng: &mut R,
    monoid: Weighting,
    cfg: &TrialConfig,
    length: usize,
    stable: bool,
) -> Vec<WeightedCospan> {
    let mut sizes = Vec::with_capacity(length + 1);
    for _ in 0..=length {
        sizes.push(rng.random_range(0..=cfg.max_feet));
    }
    (0..length)
        .map(|i| random_weighted_cospan_with_feet(rng, monoid, sizes[i], sizes[i + 1], cfg, stable))
        .collect()
}

fn closed_point(monoid: Weighting, label: Weight) -> WeightedCospan {
    let c = Cospan::from_class_maps(0, 0, 1, vec![], vec![]).unwrap();
    WeightedCospan::new(monoid, c, vec![label]).unwrap()
}

fn empty_morphism(monoid: Weighting) -> WeightedCospan {
    WeightedCospan::identity(monoid, 0)
}

/// Axiom (i)/(ii) content at the combinatorial level: every object is a
/// product of singletons, and endomorphisms of the unit decompose uniquely
/// into connected closed pieces.
pub fn check_axiom_decomposition(monoid: Weighting, cfg: &TrialConfig, exhaustive: bool) -> Report {
    let name = "decomposition";
    let exhaustive = exhaustive || cfg.is_exhaustive_range();
    let mut trials_run = 0;

    // (i) an n-element object is the n-fold product of the singleton; we
    // witness this through the monoidal unit laws on identities.
    for n in 0..=cfg.max_feet {
        let mut acc = empty_morphism(monoid);
        for _ in 0..n {
            acc = acc.tensor(&WeightedCospan::identity(monoid, 1)).unwrap();
        }
        if acc != WeightedCospan::identity(monoid, n) {
            return Report::fail(
                name,
                monoid,
                exhaustive,
                trials_run,
                Counterexample {
                    trial: 0,
                    description: format!("identity on {n} points is not a product of singletons"),
                    diagram: None,
                    witnesses: vec![acc.to_json()],
                },
            );
        }
    }

    let check_closed = |trial: usize,
                            w: &WeightedCospan,
                            rng: &mut ChaCha8Rng|
     -> Option<Counterexample> {
        // decomposition: the multiset of class labels
        let mut pieces: Vec<Weight> = w.labels().to_vec();
        let mut acc = empty_morphism(monoid);
        for &l in &pieces {
            acc = acc.tensor(&closed_point(monoid, l)).unwrap();
        }
        if acc != *w {
            return Some(Counterexample {
                trial,
                description: "closed morphism is not the product of its pieces".into(),
                diagram: None,
                witnesses: vec![w.to_json(), acc.to_json()],
            });
        }
        // uniqueness: reassembly is order-independent, and the canonical
        // multiset is recovered from the product
        pieces.shuffle(rng);
        let mut acc2 = empty_morphism(monoid);
        for &l in &pieces {
            acc2 = acc2.tensor(&closed_point(monoid, l)).unwrap();
        }
        if acc2 != *w {
            return Some(Counterexample {
                trial,
                description: "closed decomposition depends on the order of pieces".into(),
                diagram: None,
                witnesses: vec![w.to_json(), acc2.to_json()],
            });
        }
        None
    };

    if exhaustive {
        let mut rng = trial_rng(cfg.seed, usize::MAX);
        for k in 0..=cfg.max_apex {
            for labels in enumerate_labels(monoid, k, cfg.max_label) {
                // closed classes meet no feet, so stability constrains them
                if !labels.iter().all(|&l| monoid.is_stable_weight(l)) {
                    continue;
                }
                let c = Cospan::from_class_maps(0, 0, k, vec![], vec![]).unwrap();
                let w = WeightedCospan::new(monoid, c, labels).unwrap();
                trials_run += 1;
                if let Some(ce) = check_closed(trials_run, &w, &mut rng) {
                    return Report::fail(name, monoid, exhaustive, trials_run, ce);
                }
            }
        }
        return Report::pass(name, monoid, exhaustive, trials_run);
    }

    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial);
        let w = random_weighted_cospan_with_feet(&mut rng, monoid, 0, 0, cfg, true);
        trials_run += 1;
        if let Some(ce) = check_closed(trial, &w, &mut rng) {
            return Report::fail(name, monoid, exhaustive, trials_run, ce);
        }
    }
    Report::pass(name, monoid, exhaustive, trials_run)
}

/// Splits a reduced tensor product back into its two blocks. Fails when the
/// input is not reduced or some class mixes feet of both blocks.
pub fn decompose_tensor(
    u: &WeightedCospan,
    left_split: (usize, usize),
    right_split: (usize, usize),
) -> Result<(WeightedCospan, WeightedCospan), String> {
    let (m1, m2) = left_split;
    let (n1, n2) = right_split;
    if u.left_size() != m1 + m2 || u.right_size() != n1 + n2 {
        return Err("split sizes do not match feet".into());
    }
    if !u.classify().is_reduced {
        return Err("input is not reduced".into());
    }
    let k = u.class_count();
    let lc = u.left_classes();
    let rc = u.right_classes();
    // 0 = unseen, 1 = first block, 2 = second block, 3 = mixed
    let mut block = vec![0u8; k];
    let mark = |cls: usize, b: u8, block: &mut Vec<u8>| {
        block[cls] = match block[cls] {
            0 => b,
            x if x == b => b,
            _ => 3,
        };
    };
    for (i, &c) in lc.iter().enumerate() {
        mark(c, if i < m1 { 1 } else { 2 }, &mut block);
    }
    for (j, &c) in rc.iter().enumerate() {
        mark(c, if j < n1 { 1 } else { 2 }, &mut block);
    }
    if block.contains(&3) {
        return Err("a class is hit by feet of both blocks".into());
    }
    let build = |which: u8, left: Vec<usize>, right: Vec<usize>| -> WeightedCospan {
        let classes: Vec<usize> = (0..k).filter(|&c| block[c] == which).collect();
        let reindex: std::collections::HashMap<usize, usize> =
            classes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let lm: Vec<usize> = left.iter().map(|&c| reindex[&c]).collect();
        let rm: Vec<usize> = right.iter().map(|&c| reindex[&c]).collect();
        let labels: Vec<Weight> = classes.iter().map(|&c| u.labels()[c]).collect();
        let cospan = Cospan::from_class_maps(lm.len(), rm.len(), classes.len(), lm, rm).unwrap();
        WeightedCospan::new(u.monoid(), cospan, labels).unwrap()
    };
    let w1 = build(1, lc[..m1].to_vec(), rc[..n1].to_vec());
    let w2 = build(2, lc[m1..].to_vec(), rc[n1..].to_vec());
    Ok((w1, w2))
}

/// Axioms (iii) and (iv): the closed/reduced splitting is a bijection, and
/// the disjoint union of reduced morphisms injects onto the pairs compatible
/// over the underlying cospans.
pub fn check_axiom_product(monoid: Weighting, cfg: &TrialConfig, exhaustive: bool) -> Report {
    let name = "product";
    let exhaustive = exhaustive || cfg.is_exhaustive_range();
    let mut trials_run = 0;

    let check_iii = |trial: usize, w: &WeightedCospan| -> Option<Counterexample> {
        let (red, closed) = w.split_reduced_closed();
        if !red.classify().is_reduced {
            return Some(Counterexample {
                trial,
                description: "split did not produce a reduced morphism".into(),
                diagram: None,
                witnesses: vec![w.to_json(), red.to_json()],
            });
        }
        let back = red.reassemble(&closed);
        if back != *w {
            return Some(Counterexample {
                trial,
                description: "reduced x closed splitting is not a bijection".into(),
                diagram: None,
                witnesses: vec![w.to_json(), back.to_json()],
            });
        }
        None
    };

    let check_iv =
        |trial: usize, w1: &WeightedCospan, w2: &WeightedCospan| -> Option<Counterexample> {
            let (r1, _) = w1.split_reduced_closed();
            let (r2, _) = w2.split_reduced_closed();
            let u = r1.tensor(&r2).unwrap();
            if !u.classify().is_reduced {
                return Some(Counterexample {
                    trial,
                    description: "product of reduced morphisms is not reduced".into(),
                    diagram: None,
                    witnesses: vec![r1.to_json(), r2.to_json(), u.to_json()],
                });
            }
            match decompose_tensor(
                &u,
                (r1.left_size(), r2.left_size()),
                (r1.right_size(), r2.right_size()),
            ) {
                Ok((v1, v2)) => {
                    if v1 != r1 || v2 != r2 {
                        return Some(Counterexample {
                            trial,
                            description: "product decomposition is not unique".into(),
                            diagram: None,
                            witnesses: vec![
                                r1.to_json(),
                                r2.to_json(),
                                v1.to_json(),
                                v2.to_json(),
                            ],
                        });
                    }
                    None
                }
                Err(e) => Some(Counterexample {
                    trial,
                    description: format!("product failed to decompose: {e}"),
                    diagram: None,
                    witnesses: vec![r1.to_json(), r2.to_json(), u.to_json()],
                }),
            }
        };

    if exhaustive {
        let all = enumerate_weighted_cospans(monoid, cfg);
        for (i, w) in all.iter().enumerate() {
            trials_run += 1;
            if let Some(ce) = check_iii(i, w) {
                return Report::fail(name, monoid, exhaustive, trials_run, ce);
            }
        }
        // all pairs when the square is small, otherwise a deterministic
        // stride that still touches every morphism on both sides
        let pair_partners: Vec<usize> = if all.len() <= 1200 {
            (0..all.len()).collect()
        } else {
            vec![3, all.len() / 2, all.len() - 4]
        };
        for (i, w1) in all.iter().enumerate() {
            for &off in &pair_partners {
                let w2 = &all[(i + off) % all.len()];
                trials_run += 1;
                if let Some(ce) = check_iv(i, w1, w2) {
                    return Report::fail(name, monoid, exhaustive, trials_run, ce);
                }
            }
        }
        return Report::pass(name, monoid, exhaustive, trials_run);
    }

    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial);
        let w = random_weighted_cospan(&mut rng, monoid, cfg, true);
        trials_run += 1;
        if let Some(ce) = check_iii(trial, &w) {
            return Report::fail(name, monoid, exhaustive, trials_run, ce);
        }
        let w1 = random_weighted_cospan(&mut rng, monoid, cfg, true);
        let w2 = random_weighted_cospan(&mut rng, monoid, cfg, true);
        if let Some(ce) = check_iv(trial, &w1, &w2) {
            return Report::fail(name, monoid, exhaustive, trials_run, ce);
        }
    }
    Report::pass(name, monoid, exhaustive, trials_run)
}

/// The surgery data for weighted cospans: `O` is the singleton and
/// `P: A -> O ⊗ A` is the cospan `(* -> * <- * ⊔ *)` weighted by zero.
pub fn surgery_p(monoid: Weighting) -> WeightedCospan {
    let c = Cospan::from_class_maps(1, 2, 1, vec![0], vec![0, 0]).unwrap();
    WeightedCospan::new(monoid, c, vec![0]).unwrap()
}

/// `T: 1 -> O`, the cospan `(∅ -> * = *)` weighted by `alpha`. Not
/// constrained by any diagram; provided for completeness.
pub fn surgery_t(monoid: Weighting) -> WeightedCospan {
    let c = Cospan::from_class_maps(0, 1, 1, vec![], vec![0]).unwrap();
    WeightedCospan::new(monoid, c, vec![monoid.alpha()]).unwrap()
}

fn surgery_diagrams(
    monoid: Weighting,
    trial: usize,
    u: &WeightedCospan,
    v: &WeightedCospan,
    w: &WeightedCospan,
    m: usize,
    n: usize,
) -> Option<Counterexample> {
    let p = surgery_p(monoid);
    let id = |k| WeightedCospan::identity(monoid, k);
    let swap = WeightedCospan::braiding(monoid, 1, 1);

    // 1: (id_O ⊗ U) ∘ (P_A ⊗ id_M) = (P_B ⊗ id_N) ∘ U
    let lhs = p
        .tensor(&id(m))
        .unwrap()
        .compose(&id(1).tensor(u).unwrap())
        .unwrap();
    let rhs = u.compose(&p.tensor(&id(n)).unwrap()).unwrap();
    if lhs != rhs {
        return Some(Counterexample {
            trial,
            description: "surgery diagram 1 does not commute".into(),
            diagram: Some(1),
            witnesses: vec![u.to_json(), lhs.to_json(), rhs.to_json()],
        });
    }

    // 2: both paths A⊗B⊗M -> O⊗N around a connected V: A⊗B⊗M -> N
    let top = p
        .tensor(&id(1 + m))
        .unwrap()
        .compose(&id(1).tensor(v).unwrap())
        .unwrap();
    let left = id(1)
        .tensor(&p.tensor(&id(m)).unwrap())
        .unwrap()
        .compose(&swap.tensor(&id(1 + m)).unwrap())
        .unwrap()
        .compose(&id(1).tensor(v).unwrap())
        .unwrap();
    if top != left {
        return Some(Counterexample {
            trial,
            description: "surgery diagram 2 does not commute".into(),
            diagram: Some(2),
            witnesses: vec![v.to_json(), top.to_json(), left.to_json()],
        });
    }

    // 3: both paths M -> O⊗A⊗B⊗N around a connected W: M -> A⊗B⊗N
    let bottom = w.compose(&p.tensor(&id(1 + n)).unwrap()).unwrap();
    let right = w
        .compose(&id(1).tensor(&p.tensor(&id(n)).unwrap()).unwrap())
        .unwrap()
        .compose(&swap.tensor(&id(1 + n)).unwrap())
        .unwrap();
    if bottom != right {
        return Some(Counterexample {
            trial,
            description: "surgery diagram 3 does not commute".into(),
            diagram: Some(3),
            witnesses: vec![w.to_json(), bottom.to_json(), right.to_json()],
        });
    }
    None
}

/// Checks the three surgery diagrams on connected morphisms `U`, `V`, `W`
/// against arbitrary context objects `M`, `N`.
pub fn check_surgery_diagrams(monoid: Weighting, cfg: &TrialConfig, exhaustive: bool) -> Report {
    let name = "surgery";
    let exhaustive = exhaustive || cfg.is_exhaustive_range();
    let mut trials_run = 0;

    if exhaustive {
        // connected morphisms are determined by feet sizes and one label
        for m in 0..=cfg.max_feet {
            for n in 0..=cfg.max_feet {
                for label in enumerate_labels(monoid, 1, cfg.max_label) {
                    let conn = |l: usize, r: usize| {
                        let stable_needed = l + r <= 1;
                        if stable_needed && !monoid.is_stable_weight(label[0]) {
                            return None;
                        }
                        let c = Cospan::from_class_maps(l, r, 1, vec![0; l], vec![0; r]).unwrap();
                        WeightedCospan::new(monoid, c, label.clone()).ok()
                    };
                    let (u, v, w) = match (conn(1 + m, 1 + n), conn(2 + m, n), conn(m, 2 + n)) {
                        (Some(u), Some(v), Some(w)) => (u, v, w),
                        _ => continue,
                    };
                    trials_run += 1;
                    if let Some(ce) = surgery_diagrams(monoid, trials_run, &u, &v, &w, m, n) {
                        return Report::fail(name, monoid, exhaustive, trials_run, ce);
                    }
                }
            }
        }
        return Report::pass(name, monoid, exhaustive, trials_run);
    }

    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial);
        let m = rng.random_range(0..=cfg.max_feet);
        let n = rng.random_range(0..=cfg.max_feet);
        let u = random_connected_with_feet(&mut rng, monoid, 1 + m, 1 + n, cfg.max_label);
        let v = random_connected_with_feet(&mut rng, monoid, 2 + m, n, cfg.max_label);
        let w = random_connected_with_feet(&mut rng, monoid, m, 2 + n, cfg.max_label);
        trials_run += 1;
        if let Some(ce) = surgery_diagrams(monoid, trial, &u, &v, &w, m, n) {
            return Report::fail(name, monoid, exhaustive, trials_run, ce);
        }
    }
    Report::pass(name, monoid, exhaustive, trials_run)
}

/// Runs the three checks and returns the reports in a fixed order.
pub fn run_all(monoid: Weighting, cfg: &TrialConfig, exhaustive: bool) -> Vec<Report> {
    vec![
        check_axiom_decomposition(monoid, cfg, exhaustive),
        check_axiom_product(monoid, cfg, exhaustive),
        check_surgery_diagrams(monoid, cfg, exhaustive),
    ]
}

/// All label vectors of length `k` with entries of magnitude at most
/// `max_label`; used by the exhaustive modes.
fn enumerate_labels(monoid: Weighting, k: usize, max_label: u32) -> Vec<Vec<Weight>> {
    let range: Vec<Weight> = match monoid {
        Weighting::Trivial => vec![0],
        Weighting::Nat | Weighting::NatStable => (0..=max_label as i64).collect(),
        Weighting::NatMod(g) => (0..=(max_label as i64).min(g as i64)).collect(),
        Weighting::IntUnchecked => (-(max_label as i64)..=max_label as i64).collect(),
    };
    let mut out: Vec<Vec<Weight>> = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for v in &out {
            for &x in &range {
                let mut v2 = v.clone();
                v2.push(x);
                next.push(v2);
            }
        }
        out = next;
    }
    out
}

/// All weighted cospans within the configured bounds, stability respected,
/// one representative per isomorphism class.
pub fn enumerate_weighted_cospans(monoid: Weighting, cfg: &TrialConfig) -> Vec<WeightedCospan> {
    let mut out = Vec::new();
    for left in 0..=cfg.max_feet {
        for right in 0..=cfg.max_feet {
            for k in 0..=cfg.max_apex {
                if k == 0 && (left > 0 || right > 0) {
                    continue;
                }
                for map in enumerate_maps(left + right, k) {
                    let lm = map[..left].to_vec();
                    let rm = map[left..].to_vec();
                    let mut foot_hits = vec![0usize; k];
                    for &c in map.iter() {
                        foot_hits[c] += 1;
                    }
                    for labels in enumerate_labels(monoid, k, cfg.max_label) {
                        let stable_ok = (0..k)
                            .all(|c| foot_hits[c] > 1 || monoid.is_stable_weight(labels[c]));
                        if !stable_ok {
                            continue;
                        }
                        let c = Cospan::from_class_maps(left, right, k, lm.clone(), rm.clone())
                            .unwrap();
                        out.push(WeightedCospan::new(monoid, c, labels).unwrap());
                    }
                }
            }
        }
    }
    // canonical forms collapse relabelings of the same morphism
    out.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    out.dedup();
    out
}

fn enumerate_maps(points: usize, k: usize) -> Vec<Vec<usize>> {
    if points == 0 {
        return vec![vec![]];
    }
    if k == 0 {
        return vec![];
    }
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..points {
        let mut next = Vec::new();
        for v in &out {
            for c in 0..k {
                let mut v2 = v.clone();
                v2.push(c);
                next.push(v2);
            }
        }
        out = next;
    }
    out
}
