//! Closed-form cardinality and packing bounds.
//!
//! Every bound returns a [`BoundReport`]. Inputs outside a bound's validity
//! range give a report with `preconditions_met = false` and no value;
//! inputs outside the function's domain (nonpositive eps, gamma >= 1) are
//! errors. Real-valued bounds are evaluated in interval arithmetic; bounds
//! that are rational in their inputs are computed exactly from the binary
//! value of the `f64` arguments.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::entropy::{
    beta, binom_sum, binom_sum_k, delta_with, kary_lower_admissible, kary_upper_admissible,
    to_f64_lossy, DeltaDomain,
};
use crate::error::{Error, Result};
use crate::interval::{RigorInterval, DEFAULT_PRECISION_BITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BoundName {
    HausslerUpper,
    EntropyRateUpper,
    KaryUpper,
    SauerUpper,
    GeneralizedSauer,
    RothSeroussi,
    RothSeroussiCn,
    HausslerLower,
    GilbertVarshamovLower,
}

impl BoundName {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::HausslerUpper => "haussler_upper",
            BoundName::EntropyRateUpper => "entropy_rate_upper",
            BoundName::KaryUpper => "kary_upper",
            BoundName::SauerUpper => "sauer_upper",
            BoundName::GeneralizedSauer => "generalized_sauer",
            BoundName::RothSeroussi => "roth_seroussi",
            BoundName::RothSeroussiCn => "roth_seroussi_cn",
            BoundName::HausslerLower => "haussler_lower",
            BoundName::GilbertVarshamovLower => "gv_lower",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Interval(RigorInterval),
    Exact(BigRational),
}

impl BoundValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            BoundValue::Interval(iv) => iv.mid_f64(),
            BoundValue::Exact(q) => rational_to_f64(q),
        }
    }

    /// Base-2 logarithm, finite even when the value overflows `f64`.
    pub fn log2(&self) -> f64 {
        let iv = match self {
            BoundValue::Interval(iv) => iv.clone(),
            BoundValue::Exact(q) => RigorInterval::from_ratio(q, DEFAULT_PRECISION_BITS),
        };
        iv.log2().map(|l| l.mid_f64()).unwrap_or(f64::NAN)
    }

    pub fn as_interval(&self, precision_bits: u32) -> RigorInterval {
        match self {
            BoundValue::Interval(iv) => iv.clone(),
            BoundValue::Exact(q) => RigorInterval::from_ratio(q, precision_bits),
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            BoundValue::Exact(q) => Some(q),
            BoundValue::Interval(_) => None,
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BoundValue::Interval(iv) => iv.serialize(s),
            BoundValue::Exact(q) => s.serialize_str(&q.to_string()),
        }
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    let (n, d) = (q.numer(), q.denom());
    let shift = (n.bits() as i64 - d.bits() as i64 - 60).max(0);
    let unshift = (d.bits() as i64 - n.bits() as i64 + 60).max(0);
    let scaled = (n << unshift as usize) / (d << shift as usize);
    let mag = to_f64_lossy(scaled.magnitude());
    let v = mag * 2f64.powi((shift - unshift) as i32);
    if scaled < BigInt::zero() {
        -v
    } else {
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: BoundName,
    pub inputs: BTreeMap<String, f64>,
    pub value: Option<BoundValue>,
    pub preconditions_met: bool,
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(name: BoundName) -> Self {
        BoundReport {
            name,
            inputs: BTreeMap::new(),
            value: None,
            preconditions_met: true,
            notes: Vec::new(),
        }
    }

    fn input(mut self, key: &str, v: f64) -> Self {
        self.inputs.insert(key.to_string(), v);
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    fn with_value(mut self, v: BoundValue) -> Self {
        self.value = Some(v);
        self
    }

    fn unmet(mut self, why: impl Into<String>) -> Self {
        self.preconditions_met = false;
        self.value = None;
        self.notes.push(why.into());
        self
    }

    pub fn value_f64(&self) -> Option<f64> {
        self.value.as_ref().map(BoundValue::to_f64)
    }

    pub fn log2_value(&self) -> Option<f64> {
        self.value.as_ref().map(BoundValue::log2)
    }
}

/// `gamma = 1 - 2 eps`.
pub fn eps_to_gamma(eps: f64) -> f64 {
    1.0 - 2.0 * eps
}

/// `eps = (1 - gamma) / 2`.
pub fn gamma_to_eps(gamma: f64) -> f64 {
    (1.0 - gamma) / 2.0
}

fn exact(x: f64, what: &str) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::domain(format!("{what} = {x} is not finite")))
}

fn big(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Bound evaluation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub precision_bits: u32,
    pub delta_domain: DeltaDomain,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            precision_bits: DEFAULT_PRECISION_BITS,
            delta_domain: DeltaDomain::default(),
        }
    }
}

impl Bounds {
    pub fn new(precision_bits: u32) -> Self {
        Bounds {
            precision_bits,
            ..Bounds::default()
        }
    }

    fn real(&self, x: f64) -> Result<RigorInterval> {
        RigorInterval::from_f64(x, self.precision_bits)
    }

    fn int(&self, v: u64) -> RigorInterval {
        RigorInterval::from_integer(v, self.precision_bits)
    }

    /// `e (d+1) (2e/eps)^d`.
    pub fn haussler_upper(&self, eps: f64, d: u64) -> Result<BoundReport> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::domain(format!("eps = {eps} outside (0, 1]")));
        }
        if d == 0 {
            return Err(Error::domain("d must be >= 1"));
        }
        let e = RigorInterval::e(self.precision_bits);
        let ratio = e.scale_pow2(1).div(&self.real(eps)?)?;
        let v = e.mul(&self.int(d + 1)).mul(&ratio.powi(dim_u32(d)?));
        Ok(BoundReport::new(BoundName::HausslerUpper)
            .input("eps", eps)
            .input("gamma", eps_to_gamma(eps))
            .input("d", d as f64)
            .with_value(BoundValue::Interval(v)))
    }

    /// `100 * 2^(d beta(gamma))`. When `n` is given and `d > n/2` the value
    /// is still returned, with a note.
    pub fn entropy_rate_upper(&self, gamma: f64, d: u64, n: Option<u64>) -> Result<BoundReport> {
        if !(0.0..1.0).contains(&gamma) {
            if gamma >= 1.0 {
                return Err(Error::divergence(format!("gamma = {gamma} >= 1")));
            }
            return Err(Error::domain(format!("gamma = {gamma} outside [0, 1)")));
        }
        if d == 0 {
            return Err(Error::domain("d must be >= 1"));
        }
        let b = beta(gamma)?;
        let v = self.real(b)?.mul(&self.int(d)).exp2().mul(&self.int(100));
        let mut rep = BoundReport::new(BoundName::EntropyRateUpper)
            .input("gamma", gamma)
            .input("eps", gamma_to_eps(gamma))
            .input("d", d as f64)
            .input("beta", b)
            .with_value(BoundValue::Interval(v));
        if let Some(n) = n {
            rep = rep.input("n", n as f64);
            if 2 * d > n {
                rep = rep.note(format!(
                    "d = {d} > n/2 = {}: outside the proven range",
                    n as f64 / 2.0
                ));
            }
        }
        Ok(rep)
    }

    /// `34 k^d 2^(d / delta(gamma, k))` for `6k/(k+1.6) <= d <= nk/(k+1.6)`.
    pub fn kary_upper(&self, gamma: f64, k: u64, d: u64, n: u64) -> Result<BoundReport> {
        if k < 2 {
            return Err(Error::domain(format!("alphabet size k = {k} < 2")));
        }
        if gamma >= 1.0 {
            return Err(Error::divergence(format!("gamma = {gamma} >= 1")));
        }
        if !(gamma >= 0.0) {
            return Err(Error::domain(format!("gamma = {gamma} outside [0, 1)")));
        }
        let mut rep = BoundReport::new(BoundName::KaryUpper)
            .input("gamma", gamma)
            .input("k", k as f64)
            .input("d", d as f64)
            .input("n", n as f64);
        if k == 2 {
            rep = rep.note("k = 2: entropy_rate_upper is sharper");
        }
        if !kary_lower_admissible(d, k) {
            return Ok(rep.unmet(format!(
                "d = {d} < 6k/(k+1.6) = {:.4}",
                6.0 * k as f64 / (k as f64 + 1.6)
            )));
        }
        if !kary_upper_admissible(n, d, k) {
            return Ok(rep.unmet(format!(
                "d = {d} > nk/(k+1.6) = {:.4}",
                (n * k) as f64 / (k as f64 + 1.6)
            )));
        }
        let kk = u32::try_from(k).map_err(|_| Error::domain("k too large"))?;
        let dl = delta_with(gamma, kk, self.delta_domain)?;
        let kd =
            RigorInterval::from_integer(BigUint::from(k).pow(dim_u32(d)?), self.precision_bits);
        let expo = self.int(d).div(&self.real(dl)?)?;
        let v = expo.exp2().mul(&kd).mul(&self.int(34));
        Ok(rep.input("delta", dl).with_value(BoundValue::Interval(v)))
    }

    /// `(1 / (2e (eps + d/n)))^d`; with `n = None` the `n -> infinity` limit
    /// `(1 / (2e eps))^d`.
    pub fn haussler_lower(&self, eps: f64, d: u64, n: Option<u64>) -> Result<BoundReport> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::domain(format!("eps = {eps} must be positive")));
        }
        if d == 0 {
            return Err(Error::domain("d must be >= 1"));
        }
        let mut rep = BoundReport::new(BoundName::HausslerLower)
            .input("eps", eps)
            .input("gamma", eps_to_gamma(eps))
            .input("d", d as f64);
        let mut base = self.real(eps)?;
        match n {
            Some(n) => {
                if d > n {
                    return Err(Error::domain(format!("d = {d} > n = {n}")));
                }
                rep = rep.input("n", n as f64);
                base = base.add(&RigorInterval::from_fraction(d, n, self.precision_bits));
            }
            None => rep = rep.note("limit n -> infinity"),
        }
        let denom = RigorInterval::e(self.precision_bits)
            .scale_pow2(1)
            .mul(&base);
        let v = denom.recip()?.powi(dim_u32(d)?);
        Ok(rep.with_value(BoundValue::Interval(v)))
    }

    /// `|F| <= n (1 - gamma^2) / (1 - n gamma^2)`, vacuous once
    /// `gamma^2 >= 1/n`.
    pub fn roth_seroussi(&self, n: u64, gamma: f64) -> Result<BoundReport> {
        if n < 2 {
            return Err(Error::domain(format!("n = {n} < 2")));
        }
        if !(gamma >= 0.0) {
            return Err(Error::domain(format!("gamma = {gamma} must be >= 0")));
        }
        let g = exact(gamma, "gamma")?;
        let rep = BoundReport::new(BoundName::RothSeroussi)
            .input("n", n as f64)
            .input("gamma", gamma)
            .input("eps", gamma_to_eps(gamma));
        match roth_seroussi_exact(n, &g) {
            Some(v) => Ok(rep.with_value(BoundValue::Exact(v))),
            None => Ok(rep.unmet("bound vacuous: gamma^2 >= 1/n")),
        }
    }

    /// Interval form of [`Bounds::roth_seroussi`] for irrational gamma.
    /// Returns `None` unless `gamma^2 < 1/n` holds for the whole interval.
    pub fn roth_seroussi_interval(
        &self,
        n: u64,
        gamma: &RigorInterval,
    ) -> Result<Option<RigorInterval>> {
        let nn = self.int(n);
        let g2 = gamma.square();
        let denom = RigorInterval::from_integer(1, self.precision_bits).sub(&nn.mul(&g2));
        if denom.lo().is_negative() || denom.lo().is_zero() {
            return Ok(None);
        }
        let num = nn.mul(&RigorInterval::from_integer(1, self.precision_bits).sub(&g2));
        num.div(&denom).map(Some)
    }

    /// `(c^2 n - 1) / (c^2 - 1)`, exact in the binary value of `c`.
    pub fn roth_seroussi_cn(&self, n: u64, c: f64) -> Result<BoundReport> {
        if !(c > 1.0 && c.is_finite()) {
            return Err(Error::domain(format!("c = {c} must be > 1")));
        }
        if n == 0 {
            return Err(Error::domain("n must be >= 1"));
        }
        let c2 = exact(c, "c")?.pow(2);
        let one = BigRational::one();
        let v = (&c2 * big(n) - &one) / (&c2 - &one);
        Ok(BoundReport::new(BoundName::RothSeroussiCn)
            .input("n", n as f64)
            .input("c", c)
            .with_value(BoundValue::Exact(v)))
    }

    /// `sum_{i <= d} C(n, i)`.
    pub fn sauer_upper(&self, n: u64, d: u64) -> Result<BoundReport> {
        let v = binom_sum(n, d.min(n))?;
        Ok(BoundReport::new(BoundName::SauerUpper)
            .input("n", n as f64)
            .input("d", d as f64)
            .with_value(BoundValue::Exact(BigRational::from_integer(v.into()))))
    }

    /// `sum_{i <= d} C(n, i) k^i`.
    pub fn generalized_sauer(&self, n: u64, d: u64, k: u64) -> Result<BoundReport> {
        let v = binom_sum_k(n, d.min(n), k)?;
        Ok(BoundReport::new(BoundName::GeneralizedSauer)
            .input("n", n as f64)
            .input("d", d as f64)
            .input("k", k as f64)
            .with_value(BoundValue::Exact(BigRational::from_integer(v.into()))))
    }

    /// `ceil(2^n / sum_{i < min_dist} C(n, i))`.
    pub fn gv_lower(&self, n: u64, min_dist: u64) -> Result<BoundReport> {
        if min_dist == 0 || min_dist > n {
            return Err(Error::domain(format!(
                "min_dist = {min_dist} outside [1, n = {n}]"
            )));
        }
        let ball = binom_sum(n, min_dist - 1)?;
        let cube = BigUint::one() << n as usize;
        let v = Integer::div_ceil(&cube, &ball);
        Ok(BoundReport::new(BoundName::GilbertVarshamovLower)
            .input("n", n as f64)
            .input("min_dist", min_dist as f64)
            .note("standard Gilbert-Varshamov form")
            .with_value(BoundValue::Exact(BigRational::from_integer(v.into()))))
    }
}

fn dim_u32(d: u64) -> Result<u32> {
    u32::try_from(d).map_err(|_| Error::Overflow(format!("d = {d} too large")))
}

fn roth_seroussi_exact(n: u64, gamma: &BigRational) -> Option<BigRational> {
    let one = BigRational::one();
    let g2 = gamma * gamma;
    let denom = &one - big(n) * &g2;
    if denom <= BigRational::zero() {
        return None;
    }
    Some(big(n) * (&one - &g2) / denom)
}

pub fn haussler_upper(eps: f64, d: u64) -> Result<BoundReport> {
    Bounds::default().haussler_upper(eps, d)
}

pub fn entropy_rate_upper(gamma: f64, d: u64, n: Option<u64>) -> Result<BoundReport> {
    Bounds::default().entropy_rate_upper(gamma, d, n)
}

pub fn kary_upper(gamma: f64, k: u64, d: u64, n: u64) -> Result<BoundReport> {
    Bounds::default().kary_upper(gamma, k, d, n)
}

pub fn haussler_lower(eps: f64, d: u64, n: Option<u64>) -> Result<BoundReport> {
    Bounds::default().haussler_lower(eps, d, n)
}

pub fn roth_seroussi(n: u64, gamma: f64) -> Result<BoundReport> {
    Bounds::default().roth_seroussi(n, gamma)
}

pub fn roth_seroussi_cn(n: u64, c: f64) -> Result<BoundReport> {
    Bounds::default().roth_seroussi_cn(n, c)
}

pub fn gv_lower(n: u64, min_dist: u64) -> Result<BoundReport> {
    Bounds::default().gv_lower(n, min_dist)
}

/// Per-dimension log growth rates `((ln 2) beta(gamma), ln(4e / (1 - gamma)))`
/// of the entropy-rate and Haussler upper bounds.
pub fn asymptotic_log_per_d(gamma: f64) -> Result<(f64, f64)> {
    if gamma >= 1.0 {
        return Err(Error::divergence(format!("gamma = {gamma} >= 1")));
    }
    if !(gamma >= 0.0) {
        return Err(Error::domain(format!("gamma = {gamma} outside [0, 1)")));
    }
    let entropy_rate = std::f64::consts::LN_2 * beta(gamma)?;
    let haussler = 1.0 + 4f64.ln() - (1.0 - gamma).ln();
    Ok((entropy_rate, haussler))
}

/// Upper end of the search interval for [`crossover_gamma`].
pub const CROSSOVER_BRACKET: (f64, f64) = (0.0, 0.15);

/// The gamma where the two growth rates of [`asymptotic_log_per_d`] meet,
/// by bisection on `[0, 0.15]` to width `tol`.
pub fn crossover_gamma(tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance {tol} must be positive")));
    }
    let diff = |g: f64| asymptotic_log_per_d(g).map(|(a, b)| a - b);
    let (mut lo, mut hi) = CROSSOVER_BRACKET;
    if diff(lo)? >= 0.0 || diff(hi)? <= 0.0 {
        return Err(Error::divergence(
            "growth rates do not change order on [0, 0.15]",
        ));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if diff(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
