//! Finite function classes over a k-ary alphabet and exact combinatorial
//! oracles on them.
//!
//! Binary classes use symbol 0 for -1 and symbol 1 for +1. Distances are
//! exact: binary rows are bit-packed and compared by XOR/popcount, other
//! alphabets symbol by symbol.

mod audit;
mod dimension;
mod io;
mod packing;

use std::collections::HashSet;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub use audit::{sauer_audit, sauer_audit_with, AuditCheck, AuditOptions, SauerAudit};
pub use dimension::{
    generalized_dimension, graph_dim, natarajan_dim, pollard_dim, vc_dimension,
    vc_dimension_bounded, DimensionRange, GeneralizedDimension,
};
pub use io::{parse_family, write_family};
pub use packing::{packing_number, packing_number_bounded, PackingResult};

pub const MAX_ALPHABET: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionClass {
    k: u32,
    n: usize,
    m: usize,
    symbols: Vec<u8>,
    /// Bit-packed rows for binary classes, `words` u64 per row.
    packed: Vec<u64>,
    words: usize,
}

impl FunctionClass {
    /// Builds a class from rows of symbols; duplicate rows are rejected.
    pub fn new(k: u32, n: usize, rows: Vec<Vec<u8>>) -> Result<Self> {
        Self::build(k, n, rows, false)
    }

    /// Like [`FunctionClass::new`] but keeps only the first copy of repeated
    /// rows.
    pub fn with_dedup(k: u32, n: usize, rows: Vec<Vec<u8>>) -> Result<Self> {
        Self::build(k, n, rows, true)
    }

    /// Binary class from rows of `+1` / `-1`.
    pub fn from_signs(rows: &[Vec<i8>]) -> Result<Self> {
        let n = rows.first().map(|r| r.len()).unwrap_or(0);
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&s| match s {
                        1 => Ok(1u8),
                        -1 => Ok(0u8),
                        other => Err(Error::domain(format!("sign entry {other} is not +1/-1"))),
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(2, n, rows)
    }

    fn build(k: u32, n: usize, rows: Vec<Vec<u8>>, dedup: bool) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&k) {
            return Err(Error::domain(format!(
                "alphabet size k = {k} outside [2, {MAX_ALPHABET}]"
            )));
        }
        if n == 0 {
            return Err(Error::domain("coordinate dimension n must be >= 1"));
        }
        if rows.is_empty() {
            return Err(Error::domain("a function class needs at least one vector"));
        }
        let mut seen = HashSet::with_capacity(rows.len());
        let mut kept = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::domain(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            if let Some(&s) = row.iter().find(|&&s| s as u32 >= k) {
                return Err(Error::domain(format!("row {i} has symbol {s} >= k = {k}")));
            }
            if !seen.insert(row.clone()) {
                if dedup {
                    continue;
                }
                return Err(Error::domain(format!("row {i} duplicates an earlier row")));
            }
            kept.push(row);
        }
        let m = kept.len();
        let symbols: Vec<u8> = kept.into_iter().flatten().collect();
        let (packed, words) = if k == 2 {
            pack(&symbols, n)
        } else {
            (Vec::new(), 0)
        };
        Ok(FunctionClass {
            k,
            n,
            m,
            symbols,
            packed,
            words,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of vectors.
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn is_binary(&self) -> bool {
        self.k == 2
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.symbols[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.symbols.chunks_exact(self.n)
    }

    pub fn symbol(&self, row: usize, coord: usize) -> u8 {
        self.symbols[row * self.n + coord]
    }

    fn packed_row(&self, i: usize) -> &[u64] {
        &self.packed[i * self.words..(i + 1) * self.words]
    }

    /// Number of coordinates where rows `i` and `j` differ.
    pub fn disagreements(&self, i: usize, j: usize) -> usize {
        if self.is_binary() {
            self.packed_row(i)
                .iter()
                .zip(self.packed_row(j))
                .map(|(a, b)| (a ^ b).count_ones() as usize)
                .sum()
        } else {
            self.row(i)
                .iter()
                .zip(self.row(j))
                .filter(|(a, b)| a != b)
                .count()
        }
    }

    /// Normalized Hamming distance between rows `i` and `j`.
    pub fn rho(&self, i: usize, j: usize) -> Rational64 {
        Rational64::new(self.disagreements(i, j) as i64, self.n as i64)
    }

    /// Normalized inner product of two rows of a binary class.
    pub fn inner_product(&self, i: usize, j: usize) -> Result<Rational64> {
        self.require_binary("inner_product")?;
        let diff = self.disagreements(i, j) as i64;
        Ok(Rational64::new(self.n as i64 - 2 * diff, self.n as i64))
    }

    fn require_binary(&self, what: &str) -> Result<()> {
        if self.is_binary() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{what} requires a binary class, got k = {}",
                self.k
            )))
        }
    }

    /// Largest pairwise distance count, smallest pairwise count; `None` when
    /// there are fewer than two rows.
    pub fn disagreement_range(&self) -> Option<(usize, usize)> {
        let mut range: Option<(usize, usize)> = None;
        for i in 0..self.m {
            for j in i + 1..self.m {
                let d = self.disagreements(i, j);
                range = Some(match range {
                    None => (d, d),
                    Some((lo, hi)) => (lo.min(d), hi.max(d)),
                });
            }
        }
        range
    }
}

fn pack(symbols: &[u8], n: usize) -> (Vec<u64>, usize) {
    let words = n.div_ceil(64);
    let mut packed = Vec::with_capacity(symbols.len() / n * words);
    for row in symbols.chunks_exact(n) {
        let mut buf = vec![0u64; words];
        for (j, &s) in row.iter().enumerate() {
            if s == 1 {
                buf[j / 64] |= 1u64 << (j % 64);
            }
        }
        packed.extend(buf);
    }
    (packed, words)
}

fn check_lengths(x: &[u8], y: &[u8]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::domain(format!(
            "vector lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.is_empty() {
        return Err(Error::domain("vectors must have length >= 1"));
    }
    Ok(())
}

/// `(1/n) #{i : x_i != y_i}`.
pub fn hamming_rho(x: &[u8], y: &[u8]) -> Result<Rational64> {
    check_lengths(x, y)?;
    let diff = x.iter().zip(y).filter(|(a, b)| a != b).count();
    Ok(Rational64::new(diff as i64, x.len() as i64))
}

/// `(1/n) sum x_i y_i` for symbol vectors over {0, 1} read as -1/+1.
pub fn inner_product(x: &[u8], y: &[u8]) -> Result<Rational64> {
    check_lengths(x, y)?;
    if x.iter().chain(y).any(|&s| s > 1) {
        return Err(Error::domain("inner_product requires binary vectors"));
    }
    let rho = hamming_rho(x, y)?;
    Ok(Rational64::from_integer(1) - rho * 2)
}

/// `gamma_k(x, y) = 1 - (k/(k-1)) rho(x, y)`; equals the inner product when
/// `k = 2`.
pub fn gamma_k_pair(x: &[u8], y: &[u8], k: u32) -> Result<Rational64> {
    if k < 2 {
        return Err(Error::domain(format!("gamma_k requires k >= 2, got {k}")));
    }
    let rho = hamming_rho(x, y)?;
    Ok(Rational64::from_integer(1) - rho * Rational64::new(k as i64, k as i64 - 1))
}

/// Orthogonality accuracy of a binary class: the largest `|<x, y>|` over
/// distinct pairs. A class with fewer than two vectors has accuracy 0.
pub fn gamma_orth(f: &FunctionClass) -> Result<Rational64> {
    f.require_binary("gamma_orth")?;
    Ok(gamma_orth_k(f))
}

/// k-ary orthogonality accuracy: the largest `|gamma_k|` over distinct pairs
/// (0 for fewer than two vectors).
pub fn gamma_orth_k(f: &FunctionClass) -> Rational64 {
    let n = f.n() as i64;
    let k = f.k() as i64;
    let mut worst = Rational64::zero();
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            let d = f.disagreements(i, j) as i64;
            // 1 - k d / ((k-1) n)
            let g = Rational64::new((k - 1) * n - k * d, (k - 1) * n).abs();
            if g > worst {
                worst = g;
            }
        }
    }
    worst
}

fn check_index_set(f: &FunctionClass, indices: &[usize]) -> Result<()> {
    let mut seen = vec![false; f.n()];
    for &i in indices {
        if i >= f.n() {
            return Err(Error::domain(format!(
                "index {i} out of range for n = {}",
                f.n()
            )));
        }
        if seen[i] {
            return Err(Error::domain(format!("index {i} repeated")));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Restriction of every vector to `indices` (in the given order), with
/// repeated restrictions merged.
pub fn project(f: &FunctionClass, indices: &[usize]) -> Result<FunctionClass> {
    if indices.is_empty() {
        return Err(Error::domain("projection onto an empty index set"));
    }
    check_index_set(f, indices)?;
    let rows = f
        .rows()
        .map(|r| indices.iter().map(|&i| r[i]).collect())
        .collect();
    FunctionClass::with_dedup(f.k(), indices.len(), rows)
}

/// Whether the projection onto `indices` is the full cube `[k]^|I|`. The
/// empty set is shattered by convention.
pub fn shatters(f: &FunctionClass, indices: &[usize]) -> Result<bool> {
    check_index_set(f, indices)?;
    if indices.is_empty() {
        return Ok(true);
    }
    let full = (f.k() as u128).checked_pow(indices.len() as u32);
    match full {
        Some(full) if full <= f.len() as u128 => Ok(project(f, indices)?.len() as u128 == full),
        _ => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::sylvester_hadamard;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn rejects_malformed_classes() {
        assert!(FunctionClass::new(2, 2, vec![vec![0, 1], vec![0, 1]]).is_err());
        assert_eq!(
            FunctionClass::with_dedup(2, 2, vec![vec![0, 1], vec![0, 1]])
                .unwrap()
                .len(),
            1
        );
        assert!(FunctionClass::new(2, 2, vec![vec![0, 2]]).is_err());
        assert!(FunctionClass::new(2, 2, vec![vec![0]]).is_err());
        assert!(FunctionClass::new(2, 2, vec![]).is_err());
        assert!(FunctionClass::new(1, 2, vec![vec![0, 0]]).is_err());
    }

    #[test]
    fn rho_examples() {
        let x = [1u8, 1, 1, 1];
        assert_eq!(hamming_rho(&x, &x).unwrap(), r(0, 1));
        assert_eq!(hamming_rho(&x, &[1, 0, 1, 0]).unwrap(), r(1, 2));
        assert_eq!(hamming_rho(&x, &[0, 0, 0, 0]).unwrap(), r(1, 1));
        assert!(hamming_rho(&x, &[1, 1]).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let x = [1u8, 0, 1, 1];
        assert_eq!(inner_product(&x, &x).unwrap(), r(1, 1));
        assert_eq!(inner_product(&x, &[0, 1, 0, 0]).unwrap(), r(-1, 1));
        assert!(inner_product(&[2], &[0]).is_err());
        let h = sylvester_hadamard(2).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(h.inner_product(i, j).unwrap(), r(0, 1));
                }
            }
        }
    }

    #[test]
    fn gamma_orth_examples() {
        let h = sylvester_hadamard(2).unwrap();
        assert_eq!(gamma_orth(&h).unwrap(), r(0, 1));
        let anti = FunctionClass::new(2, 3, vec![vec![1, 0, 1], vec![0, 1, 0]]).unwrap();
        assert_eq!(gamma_orth(&anti).unwrap(), r(1, 1));
        let f = FunctionClass::from_signs(&[vec![1, 1, 1, 1], vec![1, 1, 1, -1]]).unwrap();
        assert_eq!(gamma_orth(&f).unwrap(), r(1, 2));
        let single = FunctionClass::new(2, 3, vec![vec![1, 0, 1]]).unwrap();
        assert_eq!(gamma_orth(&single).unwrap(), r(0, 1));
        let ternary = FunctionClass::new(3, 2, vec![vec![0, 2]]).unwrap();
        assert!(gamma_orth(&ternary).is_err());
    }

    #[test]
    fn gamma_k_examples() {
        assert_eq!(gamma_k_pair(&[0, 1, 2], &[0, 1, 2], 3).unwrap(), r(1, 1));
        assert_eq!(gamma_k_pair(&[0, 1, 2], &[1, 2, 0], 3).unwrap(), r(-1, 2));
        assert!(gamma_k_pair(&[0], &[0], 1).is_err());
    }

    #[test]
    fn projection_examples() {
        let h = sylvester_hadamard(2).unwrap();
        assert_eq!(project(&h, &[0, 1, 2, 3]).unwrap(), h);
        let p = project(&h, &[1, 2]).unwrap();
        assert_eq!(p.len(), 4);
        let p0 = project(&h, &[0]).unwrap();
        assert_eq!(p0.len(), 1);
        assert!(project(&h, &[]).is_err());
        assert!(project(&h, &[4]).is_err());
        assert!(project(&h, &[1, 1]).is_err());
    }

    #[test]
    fn shatter_examples() {
        let h = sylvester_hadamard(2).unwrap();
        assert!(shatters(&h, &[1, 2]).unwrap());
        assert!(!shatters(&h, &[0]).unwrap());
        assert!(shatters(&h, &[]).unwrap());
        assert!(!shatters(&h, &[1, 2, 3]).unwrap());
    }

    #[test]
    fn packed_distance_matches_symbolwise_past_word_boundary() {
        let n = 150;
        let a: Vec<u8> = (0..n).map(|i| (i % 3 == 0) as u8).collect();
        let b: Vec<u8> = (0..n).map(|i| (i % 5 == 0) as u8).collect();
        let f = FunctionClass::new(2, n, vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(f.rho(0, 1), hamming_rho(&a, &b).unwrap());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn pair(k: u8) -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
            (1usize..40).prop_flat_map(move |n| {
                (
                    proptest::collection::vec(0..k, n),
                    proptest::collection::vec(0..k, n),
                )
            })
        }

        proptest! {
            #[test]
            fn distance_and_inner_product_relation((x, y) in pair(2)) {
                let rho = hamming_rho(&x, &y).unwrap();
                let ip = inner_product(&x, &y).unwrap();
                prop_assert_eq!(rho * 2 + ip, r(1, 1));
                prop_assert_eq!(gamma_k_pair(&x, &y, 2).unwrap(), ip);
            }

            #[test]
            fn gamma_k_relation(k in 2u8..7, seed in any::<u64>()) {
                use rand::{Rng, SeedableRng};
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let n = rng.random_range(1..30);
                let x: Vec<u8> = (0..n).map(|_| rng.random_range(0..k)).collect();
                let y: Vec<u8> = (0..n).map(|_| rng.random_range(0..k)).collect();
                let rho = hamming_rho(&x, &y).unwrap();
                let g = gamma_k_pair(&x, &y, k as u32).unwrap();
                prop_assert_eq!(rho * r(k as i64, k as i64 - 1) + g, r(1, 1));
            }
        }
    }
}
