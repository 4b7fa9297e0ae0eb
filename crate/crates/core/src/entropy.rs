//! Binary entropy, its inverse on `[0, 1/2]`, the exponent functions `beta`
//! and `delta`, exact binomial sums and rigorous checks of the two
//! binomial-sum inequalities
//!
//! ```text
//!   sum_{i<=d} C(n,i)       < 0.98 * 2^{n H(d/n)}              1 <= d <= n/2
//!   sum_{i<=d} C(n,i) k^i   < 0.94 * 2^{n H(d/n) + d log2 k}   2 <= d <= nk/(k+1.6), n >= 6
//! ```
//!
//! The right-hand sides are evaluated through the identity
//! `2^{n H(d/n)} = n^n / (d^d (n-d)^(n-d))`, which turns each check into an
//! exact integer on the left against an outward-rounded interval on the right.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{RigorInterval, DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS};

pub const BISECTION_TOLERANCE: f64 = 1e-12;
pub const BISECTION_MAX_ITERATIONS: usize = 200;

/// Binary entropy in bits, with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!(
            "binary_entropy: x = {x} outside [0,1]"
        )));
    }
    Ok(entropy_unchecked(x))
}

fn entropy_unchecked(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let y = 1.0 - x;
    -x * x.log2() - y * y.log2()
}

/// Bisection for the boundary of a predicate that holds on `[lo, t]` and
/// fails on `(t, hi]`. Returns the final bracket; `lo` satisfies it.
fn bisect_last_true(mut lo: f64, mut hi: f64, holds: impl Fn(f64) -> bool) -> (f64, f64) {
    for _ in 0..BISECTION_MAX_ITERATIONS {
        if hi - lo <= BISECTION_TOLERANCE {
            break;
        }
        let mid = lo + (hi - lo) / 2.0;
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// The unique `x` in `[0, 1/2]` with `H(x) = y`.
pub fn entropy_inverse(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::domain(format!(
            "entropy_inverse: y = {y} outside [0,1]"
        )));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == 1.0 {
        return Ok(0.5);
    }
    let (lo, hi) = bisect_last_true(0.0, 0.5, |x| entropy_unchecked(x) <= y);
    Ok(lo + (hi - lo) / 2.0)
}

/// `beta(gamma) = 1 / H^{-1}(log2(2/(1+gamma)))`, the exponent rate of the
/// `100 * 2^{d beta}` packing bound.
pub fn beta(gamma: f64) -> Result<f64> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::domain(format!("beta: gamma = {gamma} must be >= 0")));
    }
    if gamma >= 1.0 {
        return Err(Error::divergence(format!("beta: gamma = {gamma} >= 1")));
    }
    let target = (2.0 / (1.0 + gamma)).log2();
    if target <= 0.0 {
        return Err(Error::divergence(format!(
            "beta: gamma = {gamma} too close to 1"
        )));
    }
    let x = entropy_inverse(target.min(1.0))?;
    if x <= 0.0 {
        return Err(Error::divergence(format!(
            "beta: gamma = {gamma} too close to 1"
        )));
    }
    Ok(1.0 / x)
}

/// Upper end of the interval searched by [`delta`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum DeltaDomain {
    /// `[0, k/(k+1.6)]`, where the left side is known to be increasing.
    #[default]
    Narrow,
    /// `[0, k/(k+1)]`, the maximiser of `x log2 k + H(x)`.
    Wide,
}

impl DeltaDomain {
    pub fn upper(self, k: u32) -> f64 {
        let k = k as f64;
        match self {
            DeltaDomain::Narrow => k / (k + 1.6),
            DeltaDomain::Wide => k / (k + 1.0),
        }
    }
}

/// Largest `x` in the search interval with
/// `x log2 k + H(x) <= log2(k / (1 + (k-1) gamma))`.
pub fn delta(gamma: f64, k: u32) -> Result<f64> {
    delta_with(gamma, k, DeltaDomain::default())
}

pub fn delta_with(gamma: f64, k: u32, domain: DeltaDomain) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain(format!("delta: k = {k} must be >= 2")));
    }
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::domain(format!(
            "delta: gamma = {gamma} must be >= 0"
        )));
    }
    let kf = k as f64;
    let rhs = (kf / (1.0 + (kf - 1.0) * gamma)).log2();
    if gamma >= 1.0 || rhs <= 0.0 {
        return Err(Error::divergence(format!(
            "delta: right side log2(k/(1+(k-1)gamma)) = {rhs} <= 0"
        )));
    }
    let lhs = |x: f64| x * kf.log2() + entropy_unchecked(x);
    let end = domain.upper(k);
    if lhs(end) <= rhs {
        return Ok(end);
    }
    let (x, _) = bisect_last_true(0.0, end, |x| lhs(x) <= rhs);
    if x <= 0.0 {
        return Err(Error::divergence(format!(
            "delta: root below resolution for gamma = {gamma}, k = {k}"
        )));
    }
    Ok(x)
}

pub fn binomial(n: u64, i: u64) -> BigUint {
    if i > n {
        return BigUint::zero();
    }
    let i = i.min(n - i);
    let mut acc = BigUint::one();
    for j in 0..i {
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

/// `sum_{i=0}^{d} C(n,i)`, exactly.
pub fn binom_sum(n: u64, d: u64) -> Result<BigUint> {
    if d > n {
        return Err(Error::domain(format!("binom_sum: d = {d} > n = {n}")));
    }
    Ok(weighted_binom_sum(n, d, 1))
}

/// `sum_{i=0}^{d} C(n,i) k^i`, exactly.
pub fn binom_sum_k(n: u64, d: u64, k: u64) -> Result<BigUint> {
    if d > n {
        return Err(Error::domain(format!("binom_sum_k: d = {d} > n = {n}")));
    }
    if k < 2 {
        return Err(Error::domain(format!("binom_sum_k: k = {k} < 2")));
    }
    Ok(weighted_binom_sum(n, d, k))
}

fn weighted_binom_sum(n: u64, d: u64, k: u64) -> BigUint {
    let mut term = BigUint::one();
    let mut sum = BigUint::one();
    for i in 1..=d {
        term = term * (n - i + 1) * k / i;
        sum += &term;
    }
    sum
}

/// `2^{n H(d/n)}` as the exact fraction `n^n / (d^d (n-d)^(n-d))`.
pub fn entropy_power(n: u64, d: u64) -> (BigUint, BigUint) {
    let pow = |b: u64, e: u64| BigUint::from(b).pow(e as u32);
    (pow(n, n), pow(d, d) * pow(n - d, n - d))
}

/// Enclosure of `H(p/q)` evaluated in interval arithmetic from logarithms.
pub fn binary_entropy_interval(p: u64, q: u64, precision_bits: u32) -> Result<RigorInterval> {
    if q == 0 || p > q {
        return Err(Error::domain(format!(
            "binary_entropy_interval: {p}/{q} outside [0,1]"
        )));
    }
    let xlogx = |a: u64| -> Result<RigorInterval> {
        if a == 0 {
            Ok(RigorInterval::from_integer(0, precision_bits))
        } else {
            let v = RigorInterval::from_integer(a, precision_bits);
            Ok(v.mul(&v.log2()?))
        }
    };
    // H(p/q) = log2 q - (p log2 p + (q-p) log2(q-p)) / q
    let qi = RigorInterval::from_integer(q, precision_bits);
    let inner = xlogx(p)?.add(&xlogx(q - p)?).div(&qi)?;
    Ok(qi.log2()?.sub(&inner))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Verified,
    Counterexample,
    PrecisionInsufficient,
}

/// Outcome of one rigorous lemma check.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaCheck {
    pub n: u64,
    pub d: u64,
    pub k: Option<u64>,
    pub verdict: Verdict,
    /// Exact left side, as a decimal string.
    pub lhs: String,
    pub rhs: RigorInterval,
    /// `rhs - lhs`.
    pub margin: RigorInterval,
    /// `lhs / rhs`, approximate; the tightest checks have the largest ratio.
    pub ratio: f64,
    pub precision_bits: u32,
}

#[derive(Debug, Clone)]
pub struct LemmaOptions {
    /// Multiplier on the right side; defaults to the proven constant.
    pub constant: BigRational,
    pub precision_bits: u32,
    /// Double the precision on `PrecisionInsufficient` up to
    /// [`MAX_PRECISION_BITS`].
    pub adaptive: bool,
}

impl LemmaOptions {
    pub fn binary() -> Self {
        LemmaOptions {
            constant: BigRational::new(BigInt::from(49), BigInt::from(50)),
            precision_bits: DEFAULT_PRECISION_BITS,
            adaptive: true,
        }
    }

    pub fn kary() -> Self {
        LemmaOptions {
            constant: BigRational::new(BigInt::from(47), BigInt::from(50)),
            ..LemmaOptions::binary()
        }
    }
}

fn decide(
    n: u64,
    d: u64,
    k: Option<u64>,
    lhs: &BigUint,
    rhs_exact: &BigRational,
    opts: &LemmaOptions,
) -> LemmaCheck {
    let lhs_int = BigInt::from(lhs.clone());
    let mut bits = opts.precision_bits;
    loop {
        let rhs = RigorInterval::from_ratio(rhs_exact, bits);
        let lhs_iv = RigorInterval::from_integer(lhs_int.clone(), bits);
        let verdict = match lhs_iv.certain_cmp(&rhs) {
            Some(std::cmp::Ordering::Less) => Verdict::Verified,
            Some(_) => Verdict::Counterexample,
            None if lhs_iv.lo() >= rhs.hi() => Verdict::Counterexample,
            None => Verdict::PrecisionInsufficient,
        };
        if verdict == Verdict::PrecisionInsufficient && opts.adaptive && bits < MAX_PRECISION_BITS {
            bits = (bits * 2).min(MAX_PRECISION_BITS);
            continue;
        }
        let margin = rhs.sub(&lhs_iv);
        let ratio = lhs_iv
            .div(&rhs)
            .map(|r| r.mid_f64())
            .unwrap_or(f64::INFINITY);
        return LemmaCheck {
            n,
            d,
            k,
            verdict,
            lhs: lhs.to_string(),
            rhs,
            margin,
            ratio,
            precision_bits: bits,
        };
    }
}

/// Rigorous check of `sum_{i<=d} C(n,i) < 0.98 * 2^{n H(d/n)}`.
pub fn check_lemma_binom(n: u64, d: u64) -> Result<LemmaCheck> {
    check_lemma_binom_with(n, d, &LemmaOptions::binary())
}

pub fn check_lemma_binom_with(n: u64, d: u64, opts: &LemmaOptions) -> Result<LemmaCheck> {
    if d < 1 || 2 * d > n {
        return Err(Error::precondition(format!(
            "binary lemma requires 1 <= d <= n/2, got n = {n}, d = {d}"
        )));
    }
    let lhs = weighted_binom_sum(n, d, 1);
    let (num, den) = entropy_power(n, d);
    let rhs = &opts.constant * BigRational::new(BigInt::from(num), BigInt::from(den));
    Ok(decide(n, d, None, &lhs, &rhs, opts))
}

/// Whether `d <= n k / (k + 1.6)`, decided in integers: `d (5k + 8) <= 5 n k`.
pub fn kary_upper_admissible(n: u64, d: u64, k: u64) -> bool {
    (d as u128) * (5 * k as u128 + 8) <= 5 * (n as u128) * (k as u128)
}

/// Whether `d >= 6k / (k + 1.6)`: `d (5k + 8) >= 30 k`.
pub fn kary_lower_admissible(d: u64, k: u64) -> bool {
    (d as u128) * (5 * k as u128 + 8) >= 30 * (k as u128)
}

/// Rigorous check of `sum_{i<=d} C(n,i) k^i < 0.94 * 2^{n H(d/n) + d log2 k}`.
pub fn check_lemma_binom_k(n: u64, d: u64, k: u64) -> Result<LemmaCheck> {
    check_lemma_binom_k_with(n, d, k, &LemmaOptions::kary())
}

pub fn check_lemma_binom_k_with(n: u64, d: u64, k: u64, opts: &LemmaOptions) -> Result<LemmaCheck> {
    if k < 2 {
        return Err(Error::precondition(format!(
            "k-ary lemma requires k >= 2, got {k}"
        )));
    }
    if n < 6 {
        return Err(Error::precondition(format!(
            "k-ary lemma requires n >= 6, got {n}"
        )));
    }
    if d < 2 || !kary_upper_admissible(n, d, k) {
        return Err(Error::precondition(format!(
            "k-ary lemma requires 2 <= d <= n k/(k+1.6), got n = {n}, d = {d}, k = {k}"
        )));
    }
    let lhs = weighted_binom_sum(n, d, k);
    let (num, den) = entropy_power(n, d);
    let num = num * BigUint::from(k).pow(d as u32);
    let rhs = &opts.constant * BigRational::new(BigInt::from(num), BigInt::from(den));
    Ok(decide(n, d, Some(k), &lhs, &rhs, opts))
}

/// Enclosure of `2^{n H(i/n)} / sqrt(2 pi i (1 - i/n))`, which dominates
/// `C(n, i)` for `1 <= i <= n-1`.
pub fn stirling_binom_upper(n: u64, i: u64, precision_bits: u32) -> Result<RigorInterval> {
    if i == 0 || i >= n {
        return Err(Error::domain(format!(
            "stirling_binom_upper requires 1 <= i <= n-1, got n = {n}, i = {i}"
        )));
    }
    let p = precision_bits + 16;
    let (num, den) = entropy_power(n, i);
    let power =
        RigorInterval::from_ratio(&BigRational::new(BigInt::from(num), BigInt::from(den)), p);
    // 2 pi i (n - i) / n
    let inner = RigorInterval::pi(p).mul(&RigorInterval::from_fraction(
        2 * i as u128 * (n - i) as u128,
        n,
        p,
    ));
    let value = power.div(&inner.sqrt()?)?;
    Ok(value.with_precision(precision_bits))
}

/// Approximate value of an exact binomial-type integer, for display.
pub fn to_f64_lossy(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed independently with 50-digit mpmath bisection.
    const H_QUARTER: f64 = 0.811_278_124_459_132_9;
    const BETA_QUARTER: f64 = 5.583_931_570_467_623;
    const DELTA_0_2: f64 = 0.227_092_195_219_348_2;
    const DELTA_0_3: f64 = 0.390_910_232_076_181_3;

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        let closed_form = 2.0 - 0.75 * 3f64.log2();
        assert!((binary_entropy(0.25).unwrap() - closed_form).abs() < 1e-15);
        assert!((binary_entropy(0.25).unwrap() - H_QUARTER).abs() < 1e-15);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(entropy_inverse(1.0).unwrap(), 0.5);
        assert_eq!(entropy_inverse(0.0).unwrap(), 0.0);
        assert!((entropy_inverse(0.811_278_1).unwrap() - 0.25).abs() < 1e-7);
        assert!((entropy_inverse(H_QUARTER).unwrap() - 0.25).abs() < 1e-12);
        assert!(entropy_inverse(1.01).is_err());
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta(0.0).unwrap(), 2.0);
        assert!((beta(0.25).unwrap() - BETA_QUARTER).abs() < 1e-9);
        let big = beta(0.9999).unwrap();
        assert!(big.is_finite() && big > 1e5);
        assert!(matches!(beta(1.0), Err(Error::Divergence(_))));
        assert!(matches!(beta(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn delta_examples() {
        assert!((delta(0.0, 2).unwrap() - DELTA_0_2).abs() < 1e-11);
        assert!((delta(0.0, 3).unwrap() - DELTA_0_3).abs() < 1e-11);
        let almost_one = 1.0 - f64::EPSILON / 2.0;
        for k in [2, 3, 4, 5, 10, 100] {
            assert!(
                matches!(delta(almost_one, k), Err(Error::Divergence(_))),
                "k = {k}"
            );
            assert!(matches!(delta(1.0, k), Err(Error::Divergence(_))));
        }
        assert!(delta(0.1, 1).is_err());
    }

    #[test]
    fn delta_wide_domain_clamps_or_agrees() {
        for k in [2u32, 3, 5] {
            for g in [0.0, 0.1, 0.5] {
                let narrow = delta_with(g, k, DeltaDomain::Narrow).unwrap();
                let wide = delta_with(g, k, DeltaDomain::Wide).unwrap();
                assert!(wide >= narrow - 1e-12);
            }
        }
    }

    #[test]
    fn binomial_sums() {
        assert_eq!(binom_sum(4, 2).unwrap(), BigUint::from(11u32));
        assert_eq!(binom_sum(9, 0).unwrap(), BigUint::one());
        assert_eq!(binom_sum(10, 10).unwrap(), BigUint::from(1024u32));
        assert!(binom_sum(3, 4).is_err());
        assert_eq!(binom_sum_k(2, 1, 3).unwrap(), BigUint::from(7u32));
        // 1 + 6*3 + 15*9
        assert_eq!(binom_sum_k(6, 2, 3).unwrap(), BigUint::from(154u32));
        assert_eq!(binom_sum_k(7, 0, 5).unwrap(), BigUint::one());
        assert!(binom_sum_k(3, 4, 2).is_err());
        assert!(binom_sum_k(3, 1, 1).is_err());
    }

    #[test]
    fn weighted_sum_matches_direct_summation() {
        for n in 0..30u64 {
            for d in 0..=n {
                for k in [1u64, 2, 3, 7] {
                    let direct: BigUint = (0..=d)
                        .map(|i| binomial(n, i) * BigUint::from(k).pow(i as u32))
                        .sum();
                    assert_eq!(weighted_binom_sum(n, d, k), direct);
                }
            }
        }
    }

    #[test]
    fn lemma_binary_examples() {
        let c = check_lemma_binom(4, 2).unwrap();
        assert_eq!(c.verdict, Verdict::Verified);
        assert_eq!(c.lhs, "11");
        // 0.98 * 16 = 15.68
        assert!(c
            .rhs
            .contains_rational(&BigRational::new(1568.into(), 100.into())));
        let c = check_lemma_binom(2, 1).unwrap();
        assert_eq!(c.verdict, Verdict::Verified);
        assert!(c
            .rhs
            .contains_rational(&BigRational::new(392.into(), 100.into())));
        assert!(matches!(
            check_lemma_binom(4, 3),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            check_lemma_binom(4, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn lemma_constant_is_caller_adjustable() {
        // at d = n/2 the sum exceeds half of 2^n, so 1/2 is never attainable
        let mut opts = LemmaOptions::binary();
        opts.constant = BigRational::new(1.into(), 2.into());
        let c = check_lemma_binom_with(10, 5, &opts).unwrap();
        assert_eq!(c.verdict, Verdict::Counterexample);
        // exact equality lands on the counterexample side
        opts.constant = BigRational::new(3.into(), 4.into());
        let c = check_lemma_binom_with(2, 1, &opts).unwrap();
        assert_eq!(c.verdict, Verdict::Counterexample);
    }

    #[test]
    fn lemma_kary_examples() {
        let c = check_lemma_binom_k(6, 2, 3).unwrap();
        assert_eq!(c.verdict, Verdict::Verified);
        assert_eq!(c.lhs, "154");
        assert!((c.rhs.mid_f64() - 385.458_75).abs() < 1e-9);
        assert!(matches!(
            check_lemma_binom_k(6, 4, 3),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            check_lemma_binom_k(5, 2, 3),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            check_lemma_binom_k(8, 1, 3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn admissibility_is_exact_at_boundary() {
        // 6 * 3 / 4.6 = 3.913..., so d = 3 is in range and d = 4 is not
        assert!(kary_upper_admissible(6, 3, 3));
        assert!(!kary_upper_admissible(6, 4, 3));
        // 6k/(k+1.6) with k = 2 is 3.33..
        assert!(!kary_lower_admissible(3, 2));
        assert!(kary_lower_admissible(4, 2));
        // 48 * 8 / 9.6 = 40 exactly; the bound is inclusive
        assert!(kary_upper_admissible(48, 40, 8));
        assert!(!kary_upper_admissible(48, 41, 8));
    }

    #[test]
    fn stirling_examples() {
        let s = stirling_binom_upper(4, 2, 128).unwrap();
        assert!((s.mid_f64() - 6.383_076_486_422_923).abs() < 1e-12);
        assert!(s.lo_f64() > 6.0);
        let s = stirling_binom_upper(2, 1, 128).unwrap();
        assert!((s.mid_f64() - 2.256_758_334_191_025).abs() < 1e-12);
        assert!(stirling_binom_upper(5, 0, 128).is_err());
        assert!(stirling_binom_upper(5, 5, 128).is_err());
    }

    #[test]
    fn stirling_dominates_binomial() {
        for n in 2..=200u64 {
            for i in 1..n {
                let s = stirling_binom_upper(n, i, 96).unwrap();
                let c = RigorInterval::from_integer(BigInt::from(binomial(n, i)), 96);
                assert_eq!(
                    c.certain_cmp(&s),
                    Some(std::cmp::Ordering::Less),
                    "C({n},{i}) not below {s}"
                );
            }
        }
    }

    #[test]
    fn entropy_power_matches_log_route() {
        for (n, d) in [(4u64, 2u64), (10, 3), (57, 20), (200, 1)] {
            let (num, den) = entropy_power(n, d);
            let exact = RigorInterval::from_ratio(
                &BigRational::new(BigInt::from(num), BigInt::from(den)),
                128,
            );
            let h = binary_entropy_interval(d, n, 160).unwrap();
            let via_log = h.mul(&RigorInterval::from_integer(n, 160)).exp2();
            assert!(
                exact.certain_cmp(&via_log).is_none(),
                "{n} {d}: {exact} vs {via_log}"
            );
        }
    }

    #[test]
    fn entropy_interval_symmetry() {
        for q in 1..40u64 {
            for p in 0..=q {
                let a = binary_entropy_interval(p, q, 128).unwrap();
                let b = binary_entropy_interval(q - p, q, 128).unwrap();
                assert_eq!(a, b);
                let x = p as f64 / q as f64;
                assert!((a.mid_f64() - binary_entropy(x).unwrap()).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn lemma_binary_exhaustive_to_200() {
        for n in 2..=200u64 {
            for d in 1..=n / 2 {
                let c = check_lemma_binom(n, d).unwrap();
                assert_eq!(c.verdict, Verdict::Verified, "n = {n}, d = {d}");
            }
        }
    }

    #[test]
    fn lemma_kary_exhaustive_to_120() {
        for k in [3u64, 4, 5, 10] {
            for n in 6..=120u64 {
                let mut d = 2;
                while kary_upper_admissible(n, d, k) {
                    let c = check_lemma_binom_k(n, d, k).unwrap();
                    assert_eq!(c.verdict, Verdict::Verified, "n = {n}, d = {d}, k = {k}");
                    d += 1;
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn entropy_is_symmetric(x in 0.0f64..=1.0) {
                let a = binary_entropy(x).unwrap();
                let b = binary_entropy(1.0 - x).unwrap();
                prop_assert!((a - b).abs() <= 1e-14);
            }

            #[test]
            fn inverse_is_right_inverse(y in 0.0f64..=1.0) {
                let x = entropy_inverse(y).unwrap();
                prop_assert!((0.0..=0.5).contains(&x));
                prop_assert!((binary_entropy(x).unwrap() - y).abs() <= 1e-10);
            }

            // Near x = 1/2 the entropy is flat to second order and H(x)
            // rounds to 1.0 in double precision once |x - 1/2| < ~6e-9, so the
            // round trip is only well-posed where H' is resolvable.
            #[test]
            fn inverse_is_left_inverse(x in 0.0f64..0.4999) {
                let y = binary_entropy(x).unwrap();
                prop_assert!((entropy_inverse(y).unwrap() - x).abs() <= 1e-10);
            }
        }

        #[test]
        fn left_inverse_on_grid_including_half() {
            for i in 0..=500 {
                let x = i as f64 / 1000.0;
                let y = binary_entropy(x).unwrap();
                assert!((entropy_inverse(y).unwrap() - x).abs() <= 1e-10, "x = {x}");
            }
        }

        #[test]
        fn beta_is_nondecreasing() {
            let mut prev = beta(0.0).unwrap();
            assert!((prev - 2.0).abs() <= 1e-9);
            for i in 1..1000 {
                let b = beta(i as f64 / 1000.0).unwrap();
                assert!(b >= prev, "beta decreased at {}", i);
                prev = b;
            }
        }

        #[test]
        fn delta_is_nonincreasing() {
            for k in [2u32, 3, 4, 5, 10] {
                let mut prev = delta(0.0, k).unwrap();
                for i in 1..1000 {
                    let v = delta(i as f64 / 1000.0, k).unwrap();
                    assert!(v <= prev, "k = {k}, i = {i}");
                    prev = v;
                }
            }
        }
    }
}
