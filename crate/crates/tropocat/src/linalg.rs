//! Exact sparse linear algebra over the rationals.
//!
//! Rank is computed by clearing denominators row by row and running
//! fraction-free integer elimination with Markowitz pivoting, stripping the
//! content of each updated row to bound growth. A modular pre-pass can
//! propose the pivot order; its result is never trusted on its own, the
//! exact elimination always recomputes the rank profile.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension lists are inconsistent: {0}")]
    InconsistentDims(String),
    #[error("entry ({row},{col}) outside a {rows}x{cols} matrix")]
    OutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

/// A sparse matrix over Q: sorted `(row, col, value)` triples, no explicit
/// zeros, no duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseRationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, BigRational)>,
}

impl SparseRationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseRationalMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseRationalMatrix {
            rows: n,
            cols: n,
            entries: (0..n).map(|i| (i, i, BigRational::one())).collect(),
        }
    }

    /// Builds from triples, summing duplicates and dropping zeros.
    pub fn from_triples<I>(rows: usize, cols: usize, triples: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = (usize, usize, BigRational)>,
    {
        let mut acc: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
        for (r, c, v) in triples {
            if r >= rows || c >= cols {
                return Err(LinalgError::OutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            let slot = acc.entry((r, c)).or_insert_with(BigRational::zero);
            *slot += v;
        }
        let entries = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((r, c), v)| (r, c, v))
            .collect();
        Ok(SparseRationalMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_int_triples<I>(rows: usize, cols: usize, triples: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        Self::from_triples(
            rows,
            cols,
            triples
                .into_iter()
                .map(|(r, c, v)| (r, c, BigRational::from_integer(BigInt::from(v)))),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, BigRational)] {
        &self.entries
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> SparseRationalMatrix {
        let mut entries: Vec<(usize, usize, BigRational)> = self
            .entries
            .iter()
            .map(|(r, c, v)| (*c, *r, v.clone()))
            .collect();
        entries.sort_by_key(|a| (a.0, a.1));
        SparseRationalMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Matrix product, used by the boundary-squared checks.
    pub fn multiply(&self, other: &SparseRationalMatrix) -> Result<SparseRationalMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::InconsistentDims(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut rows_of_other: Vec<Vec<(usize, &BigRational)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in &other.entries {
            rows_of_other[*r].push((*c, v));
        }
        let mut triples = Vec::new();
        for (r, k, v) in &self.entries {
            for (c, w) in &rows_of_other[*k] {
                triples.push((*r, *c, v * *w));
            }
        }
        SparseRationalMatrix::from_triples(self.rows, other.cols, triples)
    }

    /// Integer rows with denominators cleared; scaling rows does not change
    /// the rank.
    fn integer_rows(&self) -> Vec<BTreeMap<usize, BigInt>> {
        let mut rows: Vec<BTreeMap<usize, BigRational>> = vec![BTreeMap::new(); self.rows];
        for (r, c, v) in &self.entries {
            rows[*r].insert(*c, v.clone());
        }
        rows.into_iter()
            .map(|row| {
                let lcm = row
                    .values()
                    .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                row.into_iter()
                    .map(|(c, v)| {
                        let scaled = v * BigRational::from_integer(lcm.clone());
                        debug_assert!(scaled.is_integer());
                        (c, scaled.to_integer())
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact rank over Q by fraction-free elimination with Markowitz
    /// pivoting.
    pub fn rank(&self) -> usize {
        eliminate(self.integer_rows(), None)
    }

    /// Rank with a modular pre-pass: a mod-p elimination proposes the pivot
    /// order and the exact elimination recomputes the rank profile along it,
    /// falling back to fresh pivots whenever a hinted pivot vanishes
    /// exactly. The returned value is always the certified exact rank.
    pub fn rank_modular_certified(&self) -> usize {
        let rows = self.integer_rows();
        let hint = modular_pivot_hint(&rows, self.cols);
        eliminate(rows, Some(hint))
    }
}

/// Fraction-free elimination on integer rows. Each step picks the pivot with
/// the smallest Markowitz score, combines rows as `piv * row - coef * prow`,
/// and divides out the content of the updated row.
fn eliminate(mut rows: Vec<BTreeMap<usize, BigInt>>, hint: Option<Vec<(usize, usize)>>) -> usize {
    let mut rank = 0;
    let mut active: Vec<usize> = (0..rows.len()).collect();
    let mut hint = hint.unwrap_or_default();
    hint.reverse(); // pop from the back

    loop {
        active.retain(|&r| !rows[r].is_empty());
        if active.is_empty() {
            return rank;
        }
        // column occupancy among active rows
        let mut col_count: BTreeMap<usize, usize> = BTreeMap::new();
        for &r in &active {
            for &c in rows[r].keys() {
                *col_count.entry(c).or_insert(0) += 1;
            }
        }
        // pivot choice: hinted pair if still valid, else Markowitz
        let hinted = loop {
            match hint.pop() {
                Some((r, c)) => {
                    if active.contains(&r) && rows[r].contains_key(&c) {
                        break Some((r, c));
                    }
                }
                None => break None,
            }
        };
        let (prow, pcol) = hinted.unwrap_or_else(|| {
            let mut best: Option<(usize, usize, usize)> = None; // (score, col, row)
            for &r in &active {
                let rscore = rows[r].len() - 1;
                for &c in rows[r].keys() {
                    let score = rscore * (col_count[&c] - 1);
                    if best.is_none() || (score, c, r) < best.unwrap() {
                        best = Some((score, c, r));
                    }
                }
            }
            let (_, c, r) = best.unwrap();
            (r, c)
        });
        let pivot_row = rows[prow].clone();
        let pivot_val = pivot_row[&pcol].clone();
        rank += 1;
        active.retain(|&r| r != prow);
        rows[prow].clear();
        for &r in &active {
            let coef = match rows[r].get(&pcol) {
                Some(v) => v.clone(),
                None => continue,
            };
            let mut updated: BTreeMap<usize, BigInt> = BTreeMap::new();
            let mut content: Option<BigInt> = None;
            let mut keys: Vec<usize> = rows[r].keys().copied().collect();
            keys.extend(pivot_row.keys().copied());
            keys.sort_unstable();
            keys.dedup();
            for c in keys {
                if c == pcol {
                    continue;
                }
                let a = rows[r].get(&c).cloned().unwrap_or_else(BigInt::zero);
                let b = pivot_row.get(&c).cloned().unwrap_or_else(BigInt::zero);
                let v = &pivot_val * a - &coef * b;
                if !v.is_zero() {
                    content = Some(match content {
                        None => v.abs(),
                        Some(g) => g.gcd(&v),
                    });
                    updated.insert(c, v);
                }
            }
            if let Some(g) = content {
                if !g.is_one() {
                    for v in updated.values_mut() {
                        *v = &*v / &g;
                    }
                }
            }
            rows[r] = updated;
        }
    }
}

const MOD_P: u64 = (1 << 61) - 1;

fn mod_mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MOD_P as u128) as u64
}

fn mod_inv(a: u64) -> u64 {
    // Fermat: a^(p-2) mod p
    let mut base = a % MOD_P;
    let mut exp = MOD_P - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base);
        }
        base = mod_mul(base, base);
        exp >>= 1;
    }
    acc
}

/// Gaussian elimination mod a 61-bit prime, returning the pivot pairs in the
/// order they were used. Only a hint: entries divisible by p vanish here but
/// not exactly.
fn modular_pivot_hint(rows: &[BTreeMap<usize, BigInt>], cols: usize) -> Vec<(usize, usize)> {
    let p = BigInt::from(MOD_P);
    let mut m: Vec<BTreeMap<usize, u64>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .filter_map(|(&c, v)| {
                    let red = ((v % &p) + &p) % &p;
                    let red: u64 = red.try_into().unwrap();
                    (red != 0).then_some((c, red))
                })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut used_rows = vec![false; m.len()];
    for col in 0..cols {
        let Some(prow) = (0..m.len()).find(|&r| !used_rows[r] && m[r].contains_key(&col)) else {
            continue;
        };
        used_rows[prow] = true;
        pivots.push((prow, col));
        let inv = mod_inv(m[prow][&col]);
        let pivot_row: Vec<(usize, u64)> = m[prow].iter().map(|(&c, &v)| (c, v)).collect();
        for r in 0..m.len() {
            if used_rows[r] || !m[r].contains_key(&col) {
                continue;
            }
            let factor = mod_mul(m[r][&col], inv);
            for &(c, v) in &pivot_row {
                let sub = mod_mul(factor, v);
                let cur = m[r].get(&c).copied().unwrap_or(0);
                let next = (cur + MOD_P - sub) % MOD_P;
                if next == 0 {
                    m[r].remove(&c);
                } else {
                    m[r].insert(c, next);
                }
            }
        }
    }
    pivots
}

/// Betti numbers from dimensions and boundary ranks:
/// `betti[p] = dims[p] - ranks[p] - ranks[p+1]`, where `ranks[p]` is the
/// rank of the boundary leaving degree `p` and `ranks` carries one trailing
/// entry for the boundary entering the top degree from above.
pub fn betti(dims: &[usize], ranks: &[usize]) -> Result<Vec<usize>, LinalgError> {
    if ranks.len() != dims.len() + 1 {
        return Err(LinalgError::InconsistentDims(format!(
            "need {} ranks for {} dimensions",
            dims.len() + 1,
            dims.len()
        )));
    }
    dims.iter()
        .enumerate()
        .map(|(p, &d)| {
            d.checked_sub(ranks[p] + ranks[p + 1]).ok_or_else(|| {
                LinalgError::InconsistentDims(format!(
                    "negative betti at degree {p}: {d} - {} - {}",
                    ranks[p],
                    ranks[p + 1]
                ))
            })
        })
        .collect()
}
