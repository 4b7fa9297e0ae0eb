//! Explicit function classes: Sylvester-Hadamard rows, random near-orthogonal
//! sign matrices, greedy packings.

mod vclb;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{vc_dimension_bounded, DimensionRange, FunctionClass};
use crate::rng;

pub use vclb::{vclb_csv, vclb_curve, VclbOptions, VclbRow};

/// Largest supported Hadamard order exponent (8192 x 8192).
pub const MAX_HADAMARD_EXP: u32 = 13;

/// Rows of the Sylvester-Hadamard matrix of order `2^order_exp`, built by the
/// doubling `H -> [[H, H], [H, -H]]` starting from `[+1]`.
pub fn sylvester_hadamard(order_exp: u32) -> Result<FunctionClass> {
    if order_exp > MAX_HADAMARD_EXP {
        return Err(Error::Overflow(format!(
            "Hadamard order 2^{order_exp} exceeds 2^{MAX_HADAMARD_EXP}"
        )));
    }
    let mut rows: Vec<Vec<u8>> = vec![vec![1]];
    for _ in 0..order_exp {
        let mut next = Vec::with_capacity(rows.len() * 2);
        for r in &rows {
            next.push(r.iter().chain(r).copied().collect());
        }
        for r in &rows {
            next.push(r.iter().copied().chain(r.iter().map(|s| 1 - s)).collect());
        }
        rows = next;
    }
    FunctionClass::new(2, 1 << order_exp, rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomFamilySpec {
    pub n: usize,
    pub gamma: f64,
    pub m_target: usize,
    pub seed: u64,
    pub max_attempts: usize,
    /// Shattering-test budget for the dimension measurement.
    pub dimension_budget: Option<u64>,
}

/// `floor(exp(n gamma^2 / 4))`, at least 1.
pub fn default_m_target(n: usize, gamma: f64) -> usize {
    let m = (n as f64 * gamma * gamma / 4.0).exp().floor();
    if m.is_finite() && m < usize::MAX as f64 {
        (m as usize).max(1)
    } else {
        usize::MAX
    }
}

impl RandomFamilySpec {
    pub fn new(n: usize, gamma: f64, seed: u64) -> Self {
        RandomFamilySpec {
            n,
            gamma,
            m_target: default_m_target(n, gamma),
            seed,
            max_attempts: 10,
            dimension_budget: Some(1_000_000),
        }
    }

    pub fn with_m_target(mut self, m: usize) -> Self {
        self.m_target = m;
        self
    }

    pub fn with_max_attempts(mut self, attempts: usize) -> Self {
        self.max_attempts = attempts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("n must be >= 1"));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::domain(format!(
                "gamma = {} outside (0, 1)",
                self.gamma
            )));
        }
        if self.m_target == 0 {
            return Err(Error::domain("m_target must be >= 1"));
        }
        if self.max_attempts == 0 {
            return Err(Error::domain("max_attempts must be >= 1"));
        }
        if self.m_target > 1 << 20 {
            return Err(Error::Overflow(format!(
                "m_target = {} too large",
                self.m_target
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AttemptStats {
    pub attempts: usize,
    pub duplicate_rejections: usize,
    pub gamma_rejections: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RandomFamily {
    #[serde(skip)]
    pub class: FunctionClass,
    /// Exact gamma_orth of the accepted class, `p/q`.
    pub gamma_measured: String,
    pub gamma_measured_f64: f64,
    pub vc: DimensionRange,
    /// Zero-based attempt that succeeded and the seed it used.
    pub attempt: usize,
    pub attempt_seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RandomFamilyReport {
    pub spec: RandomFamilySpec,
    pub stats: AttemptStats,
    pub family: Option<RandomFamily>,
}

impl RandomFamilyReport {
    pub fn succeeded(&self) -> bool {
        self.family.is_some()
    }
}

/// Largest `t` with `t <= gamma * n`, computed exactly from the binary value
/// of `gamma`.
fn inner_product_threshold(gamma: f64, n: usize) -> i64 {
    let g = BigRational::from_float(gamma).unwrap_or_default();
    let t = (g * BigRational::from_integer(BigInt::from(n)))
        .floor()
        .to_integer();
    i64::try_from(t).unwrap_or(i64::MAX)
}

fn random_rows(g: &mut rng::Generator, m: usize, n: usize) -> Vec<Vec<u8>> {
    (0..m)
        .map(|_| (0..n).map(|_| g.random::<bool>() as u8).collect())
        .collect()
}

/// Largest `|n - 2 * disagreements|` over distinct pairs, stopping early once
/// it exceeds `limit`.
fn max_correlation(f: &FunctionClass, limit: i64) -> i64 {
    let n = f.n() as i64;
    let mut worst = 0;
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            let c = (n - 2 * f.disagreements(i, j) as i64).abs();
            worst = worst.max(c);
            if worst > limit {
                return worst;
            }
        }
    }
    worst
}

/// Samples `m_target x n` sign matrices with independent fair entries until
/// one has distinct rows and `gamma_orth <= gamma`, or attempts run out.
/// Attempt `t` draws from sub-seed `derive_seed(seed, t)`.
pub fn random_orthogonal_family(spec: &RandomFamilySpec) -> Result<RandomFamilyReport> {
    spec.validate()?;
    let limit = inner_product_threshold(spec.gamma, spec.n);
    let mut stats = AttemptStats::default();
    for attempt in 0..spec.max_attempts {
        stats.attempts += 1;
        let seed = rng::derive_seed(spec.seed, attempt as u64);
        let mut g = rng::generator(seed);
        let class = match FunctionClass::new(2, spec.n, random_rows(&mut g, spec.m_target, spec.n))
        {
            Ok(c) => c,
            Err(Error::Domain(_)) => {
                stats.duplicate_rejections += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let worst = max_correlation(&class, limit);
        if worst > limit {
            stats.gamma_rejections += 1;
            continue;
        }
        let measured = Rational64::new(worst, spec.n as i64);
        let vc = vc_dimension_bounded(&class, spec.dimension_budget)?;
        return Ok(RandomFamilyReport {
            spec: spec.clone(),
            stats,
            family: Some(RandomFamily {
                gamma_measured: format!("{}/{}", measured.numer(), measured.denom()),
                gamma_measured_f64: *measured.numer() as f64 / *measured.denom() as f64,
                class,
                vc,
                attempt,
                attempt_seed: seed,
            }),
        });
    }
    Ok(RandomFamilyReport {
        spec: spec.clone(),
        stats,
        family: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyOptions {
    /// Consecutive rejected samples after which the search stops.
    pub stall_limit: usize,
    pub max_size: usize,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        GreedyOptions {
            stall_limit: 2000,
            max_size: 4096,
        }
    }
}

/// Random greedy eps-separated set in `{-1, +1}^n`: a sample is kept when its
/// distance to every kept vector is at least `eps`.
pub fn greedy_packing(
    n: usize,
    eps: Rational64,
    seed: u64,
    opts: &GreedyOptions,
) -> Result<FunctionClass> {
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    if eps <= Rational64::from_integer(0) || eps > Rational64::from_integer(1) {
        return Err(Error::domain(format!("packing eps = {eps} outside (0, 1]")));
    }
    // rho >= p/q  <=>  disagreements * q >= p * n
    let (p, q) = (*eps.numer() as i128, *eps.denom() as i128);
    let need = ((p * n as i128 + q - 1) / q) as usize;
    let mut g = rng::generator(seed);
    let mut kept: Vec<Vec<u8>> = Vec::new();
    let mut stall = 0;
    while stall < opts.stall_limit && kept.len() < opts.max_size {
        let x: Vec<u8> = (0..n).map(|_| g.random::<bool>() as u8).collect();
        let ok = kept
            .iter()
            .all(|y| x.iter().zip(y).filter(|(a, b)| a != b).count() >= need.max(1));
        if ok {
            kept.push(x);
            stall = 0;
        } else {
            stall += 1;
        }
    }
    FunctionClass::new(2, n, kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{gamma_orth, packing_number, vc_dimension};

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn hadamard_matches_closed_form() {
        for e in 0..=6u32 {
            let h = sylvester_hadamard(e).unwrap();
            let n = 1usize << e;
            assert_eq!(h.len(), n);
            for i in 0..n {
                for j in 0..n {
                    let sign = (i & j).count_ones() % 2 == 0;
                    assert_eq!(h.symbol(i, j), sign as u8);
                }
            }
        }
        assert_eq!(sylvester_hadamard(0).unwrap().row(0), &[1]);
        assert_eq!(sylvester_hadamard(1).unwrap().row(1), &[1, 0]);
        assert!(matches!(sylvester_hadamard(14), Err(Error::Overflow(_))));
    }

    #[test]
    fn hadamard_invariants() {
        for e in 0..=4u32 {
            let h = sylvester_hadamard(e).unwrap();
            assert_eq!(gamma_orth(&h).unwrap(), r(0, 1));
            assert_eq!(vc_dimension(&h).unwrap(), e as usize);
            assert_eq!(packing_number(&h, r(1, 2)).unwrap().size, 1 << e);
            for i in 0..h.len() {
                for j in i + 1..h.len() {
                    assert_eq!(h.rho(i, j), r(1, 2));
                }
            }
        }
    }

    #[test]
    fn default_target_size() {
        assert_eq!(default_m_target(400, 0.2), 54);
        assert_eq!(default_m_target(10, 0.01), 1);
    }

    #[test]
    fn threshold_is_exact() {
        assert_eq!(inner_product_threshold(0.2, 400), 80);
        assert_eq!(inner_product_threshold(0.5, 4), 2);
        assert_eq!(inner_product_threshold(0.9999, 10), 9);
    }

    #[test]
    fn near_vacuous_constraint_succeeds() {
        let spec = RandomFamilySpec::new(10, 0.9999, 3).with_m_target(2);
        let rep = random_orthogonal_family(&spec).unwrap();
        let fam = rep.family.unwrap();
        assert_eq!(fam.class.len(), 2);
    }

    #[test]
    fn impossible_orthogonality_fails_cleanly() {
        let spec = RandomFamilySpec::new(4, 0.01, 0)
            .with_m_target(16)
            .with_max_attempts(25);
        let rep = random_orthogonal_family(&spec).unwrap();
        assert!(!rep.succeeded());
        assert_eq!(rep.stats.attempts, 25);
        assert_eq!(
            rep.stats.duplicate_rejections + rep.stats.gamma_rejections,
            25
        );
    }

    #[test]
    fn accepted_family_respects_gamma() {
        let spec = RandomFamilySpec::new(400, 0.2, 11);
        let rep = random_orthogonal_family(&spec).unwrap();
        if let Some(f) = rep.family {
            let g = gamma_orth(&f.class).unwrap();
            assert!(*g.numer() as f64 / *g.denom() as f64 <= 0.2);
            assert_eq!(f.class.len(), 54);
            assert!(f.vc.upper <= 5);
        }
    }

    #[test]
    fn same_seed_same_family() {
        let spec = RandomFamilySpec::new(64, 0.5, 99);
        let a = random_orthogonal_family(&spec).unwrap().family.unwrap();
        let b = random_orthogonal_family(&spec).unwrap().family.unwrap();
        assert_eq!(a.class, b.class);
        assert_eq!(a.attempt_seed, b.attempt_seed);
        let c = random_orthogonal_family(&RandomFamilySpec::new(64, 0.5, 100))
            .unwrap()
            .family
            .unwrap();
        assert_ne!(a.class, c.class);
    }

    #[test]
    fn invalid_specs() {
        assert!(random_orthogonal_family(&RandomFamilySpec::new(0, 0.5, 0)).is_err());
        assert!(random_orthogonal_family(&RandomFamilySpec::new(4, 1.0, 0)).is_err());
        assert!(random_orthogonal_family(&RandomFamilySpec::new(4, 0.0, 0)).is_err());
    }

    #[test]
    fn greedy_packing_cases() {
        let opts = GreedyOptions::default();
        let all = greedy_packing(6, r(1, 6), 5, &opts).unwrap();
        assert!(all.len() >= 60);
        let anti = greedy_packing(8, r(1, 1), 5, &opts).unwrap();
        assert!(anti.len() <= 2);
        let half = greedy_packing(8, r(1, 2), 1, &opts).unwrap();
        for i in 0..half.len() {
            for j in i + 1..half.len() {
                assert!(half.rho(i, j) >= r(1, 2));
            }
        }
        assert!(greedy_packing(4, r(0, 1), 0, &opts).is_err());
    }
}
