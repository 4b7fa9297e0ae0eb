//! Exhaustive sweeps of the two binomial-sum lemmas.

use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{
    check_lemma_binom_k_with, check_lemma_binom_with, kary_upper_admissible, LemmaCheck,
    LemmaOptions, Verdict,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tightest {
    pub n: u64,
    pub d: u64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    /// `None` for the binary lemma.
    pub k: Option<u64>,
    pub checks: usize,
    pub verified: usize,
    pub counterexamples: usize,
    pub precision_insufficient: usize,
    /// Check with the largest `lhs / rhs`.
    pub tightest: Option<Tightest>,
    /// Every check that was not verified, in `(n, d)` order.
    pub failures: Vec<LemmaCheck>,
}

impl SweepSummary {
    fn collect(k: Option<u64>, checks: Vec<LemmaCheck>) -> Self {
        let mut s = SweepSummary {
            k,
            checks: checks.len(),
            verified: 0,
            counterexamples: 0,
            precision_insufficient: 0,
            tightest: None,
            failures: Vec::new(),
        };
        for c in checks {
            match c.verdict {
                Verdict::Verified => s.verified += 1,
                Verdict::Counterexample => s.counterexamples += 1,
                Verdict::PrecisionInsufficient => s.precision_insufficient += 1,
            }
            if s.tightest.as_ref().is_none_or(|t| c.ratio > t.ratio) {
                s.tightest = Some(Tightest {
                    n: c.n,
                    d: c.d,
                    ratio: c.ratio,
                });
            }
            if c.verdict != Verdict::Verified {
                s.failures.push(c);
            }
        }
        s
    }

    pub fn all_verified(&self) -> bool {
        self.verified == self.checks
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaSweepReport {
    pub n_max: u64,
    pub binary: SweepSummary,
    pub kary: Vec<SweepSummary>,
}

impl LemmaSweepReport {
    pub fn all_verified(&self) -> bool {
        self.binary.all_verified() && self.kary.iter().all(SweepSummary::all_verified)
    }

    pub fn counterexamples(&self) -> usize {
        self.binary.counterexamples + self.kary.iter().map(|s| s.counterexamples).sum::<usize>()
    }

    pub fn total_checks(&self) -> usize {
        self.binary.checks + self.kary.iter().map(|s| s.checks).sum::<usize>()
    }
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub binary: LemmaOptions,
    pub kary: LemmaOptions,
    /// Smallest `n` for the k-ary sweep.
    pub kary_n_min: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            binary: LemmaOptions::binary(),
            kary: LemmaOptions::kary(),
            kary_n_min: 6,
        }
    }
}

impl SweepOptions {
    pub fn with_precision(mut self, bits: u32) -> Self {
        self.binary.precision_bits = bits;
        self.kary.precision_bits = bits;
        self
    }
}

pub fn lemma_sweep(n_max: u64, ks: &[u64]) -> Result<LemmaSweepReport> {
    lemma_sweep_with(n_max, ks, &SweepOptions::default())
}

/// Binary lemma for `1 <= d <= n/2, n <= n_max`; k-ary lemma for
/// `kary_n_min <= n <= n_max` and `2 <= d <= nk/(k+1.6)`. Cells run in
/// parallel and are reported in `(n, d)` order.
pub fn lemma_sweep_with(n_max: u64, ks: &[u64], opts: &SweepOptions) -> Result<LemmaSweepReport> {
    if n_max < 2 {
        return Err(Error::domain(format!("n_max = {n_max} < 2")));
    }
    if let Some(&k) = ks.iter().find(|&&k| k < 2) {
        return Err(Error::domain(format!("alphabet size k = {k} < 2")));
    }
    let cells: Vec<(u64, u64)> = (2..=n_max)
        .flat_map(|n| (1..=n / 2).map(move |d| (n, d)))
        .collect();
    let checks = cells
        .par_iter()
        .map(|&(n, d)| check_lemma_binom_with(n, d, &opts.binary))
        .collect::<Result<Vec<_>>>()?;
    let binary = SweepSummary::collect(None, checks);

    let mut kary = Vec::new();
    let mut seen = Vec::new();
    for &k in ks {
        if seen.contains(&k) {
            continue;
        }
        seen.push(k);
        let cells: Vec<(u64, u64)> = (opts.kary_n_min.max(6)..=n_max)
            .flat_map(|n| {
                (2..=n)
                    .take_while(move |&d| kary_upper_admissible(n, d, k))
                    .map(move |d| (n, d))
            })
            .collect();
        let checks = cells
            .par_iter()
            .map(|&(n, d)| check_lemma_binom_k_with(n, d, k, &opts.kary))
            .collect::<Result<Vec<_>>>()?;
        kary.push(SweepSummary::collect(Some(k), checks));
    }
    Ok(LemmaSweepReport {
        n_max,
        binary,
        kary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_sweep() {
        let r = lemma_sweep(2, &[]).unwrap();
        assert_eq!(r.binary.checks, 1);
        assert!(r.all_verified());
        assert!(r.kary.is_empty());
        let t = r.binary.tightest.unwrap();
        assert_eq!((t.n, t.d), (2, 1));
    }

    #[test]
    fn small_sweep_counts() {
        let r = lemma_sweep(20, &[3, 3]).unwrap();
        assert_eq!(
            r.binary.checks,
            (2..=20u64).map(|n| n / 2).sum::<u64>() as usize
        );
        assert_eq!(r.kary.len(), 1);
        assert!(r.all_verified());
        assert_eq!(r.counterexamples(), 0);
        assert!(lemma_sweep(1, &[]).is_err());
        assert!(lemma_sweep(10, &[1]).is_err());
    }

    #[test]
    fn impossible_constant_is_caught() {
        let mut opts = SweepOptions::default();
        opts.binary.constant = num_rational::BigRational::new(1.into(), 2.into());
        let r = lemma_sweep_with(10, &[], &opts).unwrap();
        assert!(r.binary.counterexamples > 0);
        assert!(!r.all_verified());
    }
}
