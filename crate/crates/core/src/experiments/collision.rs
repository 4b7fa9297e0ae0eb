//! Collision probabilities of random projections and the inequalities
//! built on them.
//!
//! For a binary class `F` of size `m`, pick an index set `I` of size `r`
//! uniformly and an ordered pair `(x, y)` uniformly from `F x F`. The
//! collision event is `x|I = y|I`; its probability is sandwiched between
//! `1 / sum_{i <= d} C(r, i)` and `1/m + ((1 + gamma)/2)^r`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{seq::index::sample, Rng};
use serde::Serialize;

use crate::entropy::{beta, binom_sum, binomial};
use crate::error::{Error, Result};
use crate::families::{gamma_orth, project, vc_dimension, FunctionClass};
use crate::interval::RigorInterval;
use crate::rng;

/// Default cap on `C(n, r) * m^2` for exhaustive collision counts.
pub const DEFAULT_EXHAUSTIVE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CollisionMode {
    Exhaustive { budget: u64 },
    Sampled { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModeTag {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectionStats {
    pub r: usize,
    pub d: usize,
    pub m: usize,
    pub gamma: String,
    pub mode: ModeTag,
    /// Exact collision probability `p/q` (exhaustive mode only).
    pub p_collision: Option<String>,
    pub p_collision_f64: f64,
    /// Standard error of the estimate (sampled mode only).
    pub stderr: Option<f64>,
    pub lower_envelope: String,
    pub lower_envelope_f64: f64,
    pub upper_envelope: String,
    pub upper_envelope_f64: f64,
    /// `lower <= p < upper`; decided exactly, exhaustive mode only.
    pub within_envelopes: Option<bool>,
    /// Whether `2d <= r <= n`.
    pub in_range: bool,
}

pub(crate) fn ratio(a: impl Into<BigInt>, b: impl Into<BigInt>) -> BigRational {
    BigRational::new(a.into(), b.into())
}

pub(crate) fn rat_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub(crate) fn rat_f64(q: &BigRational) -> f64 {
    RigorInterval::from_ratio(q, 128).mid_f64()
}

fn rat_from_f64(q: &num_rational::Rational64) -> BigRational {
    ratio(*q.numer(), *q.denom())
}

/// `1 / sum_{i <= d} C(r, i)`.
pub fn lower_envelope(r: usize, d: usize) -> Result<BigRational> {
    let s = binom_sum(r as u64, d.min(r) as u64)?;
    Ok(ratio(1, s))
}

/// `1/m + ((1 + gamma)/2)^r`.
pub fn upper_envelope(m: usize, gamma: &BigRational, r: usize) -> BigRational {
    let half = (BigRational::one() + gamma) / ratio(2, 1);
    ratio(1, m as u64) + num_traits::pow(half, r)
}

/// Advances `idx` to the next `r`-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let r = idx.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if idx[i] < n - r + i {
            idx[i] += 1;
            for j in i + 1..r {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Sum over all `r`-subsets `I` of `sum_c |c|^2`, where `c` ranges over the
/// classes of rows with equal projection on `I`.
fn exhaustive_collisions(f: &FunctionClass, r: usize) -> BigUint {
    let m = f.len();
    let mut total = BigUint::zero();
    if r == 0 {
        return BigUint::from(m * m);
    }
    let mut idx: Vec<usize> = (0..r).collect();
    let mut keys: Vec<Vec<u8>> = vec![Vec::with_capacity(r); m];
    loop {
        for (row, key) in keys.iter_mut().enumerate() {
            key.clear();
            key.extend(idx.iter().map(|&c| f.symbol(row, c)));
        }
        keys.sort_unstable();
        let mut sum = 0u64;
        let mut run = 1u64;
        for w in keys.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                sum += run * run;
                run = 1;
            }
        }
        sum += run * run;
        total += sum;
        if !next_combination(&mut idx, f.n()) {
            break;
        }
    }
    total
}

pub fn projection_collision(
    f: &FunctionClass,
    r: usize,
    mode: CollisionMode,
) -> Result<ProjectionStats> {
    if !f.is_binary() {
        return Err(Error::domain("collision statistics need a binary class"));
    }
    if r > f.n() {
        return Err(Error::domain(format!(
            "projection size r = {r} exceeds n = {}",
            f.n()
        )));
    }
    let m = f.len();
    let d = vc_dimension(f)?;
    let gamma = rat_from_f64(&gamma_orth(f)?);
    let lower = lower_envelope(r, d)?;
    let upper = upper_envelope(m, &gamma, r);
    let mut stats = ProjectionStats {
        r,
        d,
        m,
        gamma: rat_string(&gamma),
        mode: ModeTag::Exhaustive,
        p_collision: None,
        p_collision_f64: f64::NAN,
        stderr: None,
        lower_envelope: rat_string(&lower),
        lower_envelope_f64: rat_f64(&lower),
        upper_envelope: rat_string(&upper),
        upper_envelope_f64: rat_f64(&upper),
        within_envelopes: None,
        in_range: 2 * d <= r,
    };
    match mode {
        CollisionMode::Exhaustive { budget } => {
            let sets = binomial(f.n() as u64, r as u64);
            let work = &sets * BigUint::from(m as u64 * m as u64);
            if work > BigUint::from(budget) {
                return Err(Error::BudgetExceeded(format!(
                    "C({}, {r}) * m^2 = {work} exceeds the budget {budget}",
                    f.n()
                )));
            }
            let hits = exhaustive_collisions(f, r);
            let p = BigRational::new(hits.into(), (sets * BigUint::from(m * m)).into());
            stats.within_envelopes = Some(lower <= p && p < upper);
            stats.p_collision_f64 = rat_f64(&p);
            stats.p_collision = Some(rat_string(&p));
        }
        CollisionMode::Sampled { trials, seed } => {
            if trials == 0 {
                return Err(Error::domain("trials must be >= 1"));
            }
            stats.mode = ModeTag::Sampled;
            let mut g = rng::generator(seed);
            let mut hits = 0u64;
            for _ in 0..trials {
                let idx = sample(&mut g, f.n(), r);
                let x = g.random_range(0..m);
                let y = g.random_range(0..m);
                if idx.iter().all(|c| f.symbol(x, c) == f.symbol(y, c)) {
                    hits += 1;
                }
            }
            let p = hits as f64 / trials as f64;
            stats.p_collision_f64 = p;
            stats.stderr = Some((p * (1.0 - p) / trials as f64).sqrt());
        }
    }
    Ok(stats)
}

#[derive(Debug, Clone, Serialize)]
pub struct FloorCheck {
    pub indices: Vec<usize>,
    pub projected_size: usize,
    /// `sum_x' P(x')^2` over the projected class, exact.
    pub collision: String,
    pub jensen_floor: String,
    pub sauer_floor: String,
    pub holds: bool,
}

/// Collision probability of one draw pair after projecting onto `indices`,
/// against the floors `1/|F|I|` and `1/sum_{i <= d} C(|I|, i)`.
pub fn collision_floor_check(f: &FunctionClass, indices: &[usize]) -> Result<FloorCheck> {
    let projected = project(f, indices)?;
    let m = f.len() as u64;
    let mut keys: Vec<Vec<u8>> = (0..f.len())
        .map(|row| indices.iter().map(|&c| f.symbol(row, c)).collect())
        .collect();
    keys.sort_unstable();
    let mut sum = 0u64;
    let mut run = 1u64;
    for w in keys.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            sum += run * run;
            run = 1;
        }
    }
    sum += run * run;
    let collision = ratio(sum, m * m);
    let jensen = ratio(1, projected.len() as u64);
    let d = if f.is_binary() {
        vc_dimension(f)?
    } else {
        indices.len()
    };
    let sauer = lower_envelope(indices.len(), d)?;
    Ok(FloorCheck {
        indices: indices.to_vec(),
        projected_size: projected.len(),
        holds: collision >= jensen && collision >= sauer,
        collision: rat_string(&collision),
        jensen_floor: rat_string(&jensen),
        sauer_floor: rat_string(&sauer),
    })
}

/// `2^(-r H(d/r)) = d^d (r-d)^(r-d) / r^r`, exactly.
pub fn entropy_weight(r: u64, d: u64) -> BigRational {
    let p = |b: u64, e: u64| num_traits::pow(BigInt::from(b), e as usize);
    BigRational::new(p(d, d) * p(r - d, r - d), p(r, r))
}

#[derive(Debug, Clone, Serialize)]
pub struct KeyInequalityReport {
    pub r: usize,
    pub d: usize,
    pub m: usize,
    pub gamma: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub margin: f64,
    pub holds: bool,
}

/// `(51/50) 2^(-r H(d/r)) < 1/m + ((1 + gamma)/2)^r` with `d` the VC
/// dimension and `gamma` the orthogonality of `f`, decided exactly.
pub fn key_inequality_check(f: &FunctionClass, r: usize) -> Result<KeyInequalityReport> {
    if !f.is_binary() {
        return Err(Error::domain("key inequality needs a binary class"));
    }
    let d = vc_dimension(f)?;
    if d == 0 {
        return Err(Error::precondition(
            "VC dimension 0: the inequality needs d >= 1",
        ));
    }
    if r < 2 * d || r > f.n() {
        return Err(Error::precondition(format!(
            "r = {r} outside [2d, n] = [{}, {}]",
            2 * d,
            f.n()
        )));
    }
    let gamma = rat_from_f64(&gamma_orth(f)?);
    let lhs = ratio(51, 50) * entropy_weight(r as u64, d as u64);
    let rhs = upper_envelope(f.len(), &gamma, r);
    Ok(KeyInequalityReport {
        r,
        d,
        m: f.len(),
        gamma: rat_string(&gamma),
        lhs: rat_f64(&lhs),
        rhs: rat_f64(&rhs),
        margin: rat_f64(&(&rhs - &lhs)),
        holds: lhs < rhs,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RStar {
    pub gamma: f64,
    pub d: u64,
    pub beta: f64,
    pub r: u64,
    /// `log2` of both sides of `2^(-r H(d/r)) >= ((1 + gamma)/2)^r`.
    pub log2_lhs: f64,
    pub log2_rhs: f64,
    pub holds: bool,
}

/// `r* = ceil(beta(gamma) d)` together with the check
/// `2^(-r* H(d/r*)) >= ((1 + gamma)/2)^r*`.
pub fn rstar_choice(gamma: f64, d: u64) -> Result<RStar> {
    rstar_choice_with(gamma, d, crate::interval::DEFAULT_PRECISION_BITS)
}

pub fn rstar_choice_with(gamma: f64, d: u64, precision_bits: u32) -> Result<RStar> {
    if d == 0 {
        return Err(Error::domain("d must be >= 1"));
    }
    if !(gamma >= 0.0) {
        return Err(Error::domain(format!("gamma = {gamma} must be >= 0")));
    }
    let b = beta(gamma)?;
    let rf = (b * d as f64).ceil();
    if !(rf.is_finite() && rf < 1e15) {
        return Err(Error::Overflow(format!("r* = {rf} too large")));
    }
    let r = rf as u64;
    let bits = precision_bits;
    let int = |v: u64| RigorInterval::from_integer(v, bits);
    let xlog = |v: u64| -> Result<RigorInterval> {
        if v == 0 {
            Ok(int(0))
        } else {
            Ok(int(v).mul(&int(v).log2()?))
        }
    };
    let lhs = xlog(d)?.add(&xlog(r - d)?).sub(&xlog(r)?);
    let g = RigorInterval::from_f64(gamma, bits)?;
    let half = g.add(&int(1)).scale_pow2(-1);
    let rhs = int(r).mul(&half.log2()?);
    let holds = match lhs.certain_cmp(&rhs) {
        Some(o) => o != std::cmp::Ordering::Less,
        None => {
            let exact_gamma = BigRational::from_float(gamma).unwrap_or_default();
            let half = (BigRational::one() + exact_gamma) / ratio(2, 1);
            entropy_weight(r, d) >= num_traits::pow(half, r as usize)
        }
    };
    Ok(RStar {
        gamma,
        d,
        beta: b,
        r,
        log2_lhs: lhs.mid_f64(),
        log2_rhs: rhs.mid_f64(),
        holds,
    })
}
