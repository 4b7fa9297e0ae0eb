//! Outward-rounded interval arithmetic over dyadic rationals.
//!
//! Every endpoint is a `mantissa * 2^exponent` with an arbitrary-size
//! mantissa. Operations compute exact dyadic results where possible and then
//! round the lower endpoint toward -inf and the upper endpoint toward +inf to
//! the interval's precision, so the exact result is always enclosed.
//! Transcendental functions (exp, ln, pi) are evaluated from series whose
//! truncation error is added to the enclosure explicitly.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 128;
pub const MAX_PRECISION_BITS: u32 = 1024;
const MIN_PRECISION_BITS: u32 = 8;
const GUARD_BITS: u32 = 32;

/// An exact dyadic rational `mantissa * 2^exponent`, kept normalized
/// (odd mantissa, or zero with exponent 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        Dyadic { mantissa, exponent }.normalized()
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let fraction = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (fraction, -1074)
        } else {
            (fraction | (1u64 << 52), biased - 1075)
        };
        let m = BigInt::from(m);
        Some(Dyadic::new(if negative { -m } else { m }, e))
    }

    fn normalized(mut self) -> Self {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return self;
        }
        if let Some(tz) = self.mantissa.trailing_zeros() {
            if tz > 0 {
                self.mantissa >>= tz;
                self.exponent += tz as i64;
            }
        }
        self
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    fn bits(&self) -> u64 {
        self.mantissa.bits()
    }

    /// Exponent of the leading bit plus one: `|self| < 2^magnitude()`.
    fn magnitude(&self) -> i64 {
        self.bits() as i64 + self.exponent
    }

    fn abs(&self) -> Dyadic {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    fn neg(&self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }

    /// Multiplies by `2^k` exactly.
    pub fn scale_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
        }
    }

    fn round(&self, prec: u32, up: bool) -> Dyadic {
        let bits = self.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let divisor = BigInt::one() << shift;
        let (q, r) = self.mantissa.div_mod_floor(&divisor);
        let q = if up && !r.is_zero() { q + 1 } else { q };
        Dyadic::new(q, self.exponent + shift as i64)
    }

    fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        Dyadic::new(a + b, e)
    }

    fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mantissa: &self.mantissa * &other.mantissa,
            exponent: self.exponent + other.exponent,
        }
    }

    fn div_round(&self, other: &Dyadic, prec: u32, up: bool) -> Dyadic {
        debug_assert!(!other.is_zero());
        if self.is_zero() {
            return Dyadic::zero();
        }
        let k = (prec as i64 + other.bits() as i64 - self.bits() as i64 + 2).max(0);
        let num = &self.mantissa << k as u64;
        let (q, r) = num.div_mod_floor(&other.mantissa);
        let q = if up && !r.is_zero() { q + 1 } else { q };
        Dyadic::new(q, self.exponent - other.exponent - k).round(prec, up)
    }

    fn sqrt_round(&self, prec: u32, up: bool) -> Dyadic {
        debug_assert!(!self.is_negative());
        if self.is_zero() {
            return Dyadic::zero();
        }
        let want = 2 * (prec as i64 + 2);
        let mut shift = (want - self.bits() as i64).max(0);
        if (self.exponent - shift) % 2 != 0 {
            shift += 1;
        }
        let m = &self.mantissa << shift as u64;
        let e = self.exponent - shift;
        let mut s = m.sqrt();
        if up && &s * &s != m {
            s += 1;
        }
        Dyadic::new(s, e / 2).round(prec, up)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            BigRational::new(
                self.mantissa.clone(),
                BigInt::one() << (-self.exponent) as u64,
            )
        }
    }

    /// Nearest-ish double (truncated mantissa); saturates to +/-inf or 0.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.bits() as i64;
        let (m, e) = if bits > 62 {
            (
                &self.mantissa >> (bits - 62) as u64,
                self.exponent + bits - 62,
            )
        } else {
            (self.mantissa.clone(), self.exponent)
        };
        ldexp(m.to_f64().unwrap_or(f64::NAN), e)
    }

    fn to_f64_directed(&self, up: bool) -> f64 {
        let x = self.to_f64();
        match Dyadic::from_f64(x) {
            Some(d) => match d.cmp(self) {
                Ordering::Equal => x,
                Ordering::Less if up => x.next_up(),
                Ordering::Greater if !up => x.next_down(),
                _ => x,
            },
            None => x,
        }
    }
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.mantissa.sign(), other.mantissa.sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A closed interval `[lo, hi]` of dyadic rationals with a working precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigorInterval {
    lo: Dyadic,
    hi: Dyadic,
    precision_bits: u32,
}

fn check_precision(bits: u32) -> u32 {
    bits.max(MIN_PRECISION_BITS)
}

impl RigorInterval {
    pub fn new(lo: Dyadic, hi: Dyadic, precision_bits: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain("interval lower endpoint exceeds upper"));
        }
        Ok(RigorInterval {
            lo,
            hi,
            precision_bits: check_precision(precision_bits),
        })
    }

    /// A degenerate interval holding `d` exactly (no rounding applied).
    pub fn exact(d: Dyadic, precision_bits: u32) -> Self {
        RigorInterval {
            lo: d.clone(),
            hi: d,
            precision_bits: check_precision(precision_bits),
        }
    }

    pub fn from_integer(v: impl Into<BigInt>, precision_bits: u32) -> Self {
        Self::exact(Dyadic::from_integer(v), precision_bits)
    }

    pub fn from_f64(x: f64, precision_bits: u32) -> Result<Self> {
        let d = Dyadic::from_f64(x).ok_or_else(|| Error::domain("non-finite value"))?;
        Ok(Self::exact(d, precision_bits))
    }

    /// Outward-rounded enclosure of an exact rational.
    pub fn from_ratio(q: &BigRational, precision_bits: u32) -> Self {
        let p = check_precision(precision_bits);
        let num = Dyadic::from_integer(q.numer().clone());
        let den = Dyadic::from_integer(q.denom().clone());
        RigorInterval {
            lo: num.div_round(&den, p, false),
            hi: num.div_round(&den, p, true),
            precision_bits: p,
        }
    }

    pub fn from_fraction(
        num: impl Into<BigInt>,
        den: impl Into<BigInt>,
        precision_bits: u32,
    ) -> Self {
        Self::from_ratio(&BigRational::new(num.into(), den.into()), precision_bits)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn with_precision(mut self, precision_bits: u32) -> Self {
        self.precision_bits = check_precision(precision_bits);
        self
    }

    /// Largest double not above `lo`.
    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_directed(false)
    }

    /// Smallest double not below `hi`.
    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_directed(true)
    }

    pub fn mid_f64(&self) -> f64 {
        let l = self.lo.to_f64();
        let h = self.hi.to_f64();
        if l.is_infinite() || h.is_infinite() {
            return if l == h { l } else { l / 2.0 + h / 2.0 };
        }
        l + (h - l) / 2.0
    }

    pub fn width(&self) -> Dyadic {
        self.hi.add(&self.lo.neg())
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        &self.lo <= d && d <= &self.hi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.lo.to_rational() <= *q && *q <= self.hi.to_rational()
    }

    /// Certain ordering of every point of `self` against every point of
    /// `other`; `None` when the intervals overlap.
    pub fn certain_cmp(&self, other: &RigorInterval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && other.lo == other.hi && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    fn prec_with(&self, other: &RigorInterval) -> u32 {
        self.precision_bits.max(other.precision_bits)
    }

    fn rounded(lo: Dyadic, hi: Dyadic, p: u32) -> Self {
        RigorInterval {
            lo: lo.round(p, false),
            hi: hi.round(p, true),
            precision_bits: p,
        }
    }

    pub fn add(&self, other: &RigorInterval) -> Self {
        Self::rounded(
            self.lo.add(&other.lo),
            self.hi.add(&other.hi),
            self.prec_with(other),
        )
    }

    pub fn sub(&self, other: &RigorInterval) -> Self {
        Self::rounded(
            self.lo.add(&other.hi.neg()),
            self.hi.add(&other.lo.neg()),
            self.prec_with(other),
        )
    }

    pub fn neg(&self) -> Self {
        RigorInterval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            precision_bits: self.precision_bits,
        }
    }

    pub fn mul(&self, other: &RigorInterval) -> Self {
        let p = self.prec_with(other);
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().cloned().unwrap_or_else(Dyadic::zero);
        let hi = products.iter().max().cloned().unwrap_or_else(Dyadic::zero);
        Self::rounded(lo, hi, p)
    }

    pub fn square(&self) -> Self {
        if !self.lo.is_negative() {
            Self::rounded(
                self.lo.mul(&self.lo),
                self.hi.mul(&self.hi),
                self.precision_bits,
            )
        } else if !self.hi.is_negative() && !self.hi.is_zero() {
            let a = self.lo.mul(&self.lo);
            let b = self.hi.mul(&self.hi);
            Self::rounded(Dyadic::zero(), a.max(b), self.precision_bits)
        } else {
            self.neg().square()
        }
    }

    pub fn powi(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = RigorInterval::from_integer(1, self.precision_bits);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn scale_pow2(&self, k: i64) -> Self {
        RigorInterval {
            lo: self.lo.scale_pow2(k),
            hi: self.hi.scale_pow2(k),
            precision_bits: self.precision_bits,
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_zero() && !self.hi.is_zero() && self.lo.is_negative() != self.hi.is_negative()
            || self.lo.is_zero()
            || self.hi.is_zero()
    }

    pub fn div(&self, other: &RigorInterval) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::domain(
                "interval division by an interval containing zero",
            ));
        }
        let p = self.prec_with(other);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs.iter().map(|(a, b)| a.div_round(b, p, false)).min();
        let hi = pairs.iter().map(|(a, b)| a.div_round(b, p, true)).max();
        Ok(RigorInterval {
            lo: lo.unwrap_or_else(Dyadic::zero),
            hi: hi.unwrap_or_else(Dyadic::zero),
            precision_bits: p,
        })
    }

    pub fn recip(&self) -> Result<Self> {
        RigorInterval::from_integer(1, self.precision_bits).div(self)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.lo.is_negative() {
            return Err(Error::domain(
                "square root of an interval with negative part",
            ));
        }
        let p = self.precision_bits;
        Ok(RigorInterval {
            lo: self.lo.sqrt_round(p, false),
            hi: self.hi.sqrt_round(p, true),
            precision_bits: p,
        })
    }

    fn widen(&self, radius: &Dyadic) -> Self {
        RigorInterval {
            lo: self.lo.add(&radius.neg()),
            hi: self.hi.add(radius),
            precision_bits: self.precision_bits,
        }
    }

    fn hull(&self, other: &RigorInterval) -> Self {
        RigorInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            precision_bits: self.prec_with(other),
        }
    }

    fn mag(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn pi(precision_bits: u32) -> Self {
        cached(&PI_CACHE, precision_bits, compute_pi)
    }

    pub fn ln2(precision_bits: u32) -> Self {
        cached(&LN2_CACHE, precision_bits, compute_ln2)
    }

    pub fn e(precision_bits: u32) -> Self {
        RigorInterval::from_integer(1, precision_bits).exp()
    }

    pub fn exp(&self) -> Self {
        let p = self.precision_bits;
        let lo = exp_point(&self.lo, p);
        let hi = if self.lo == self.hi {
            lo.clone()
        } else {
            exp_point(&self.hi, p)
        };
        RigorInterval {
            lo: lo.lo,
            hi: hi.hi,
            precision_bits: p,
        }
    }

    pub fn ln(&self) -> Result<Self> {
        if self.lo.is_negative() || self.lo.is_zero() {
            return Err(Error::domain(
                "logarithm of an interval reaching 0 or below",
            ));
        }
        let p = self.precision_bits;
        let lo = ln_point(&self.lo, p);
        let hi = if self.lo == self.hi {
            lo.clone()
        } else {
            ln_point(&self.hi, p)
        };
        Ok(RigorInterval {
            lo: lo.lo,
            hi: hi.hi,
            precision_bits: p,
        })
    }

    /// `2^self`.
    pub fn exp2(&self) -> Self {
        let p = self.precision_bits + GUARD_BITS;
        let scaled = self.clone().with_precision(p).mul(&RigorInterval::ln2(p));
        let r = scaled.exp();
        Self::rounded(r.lo, r.hi, self.precision_bits)
    }

    pub fn log2(&self) -> Result<Self> {
        let p = self.precision_bits + GUARD_BITS;
        let r = self
            .clone()
            .with_precision(p)
            .ln()?
            .div(&RigorInterval::ln2(p))?;
        Ok(Self::rounded(r.lo, r.hi, self.precision_bits))
    }

    /// `self^y` for a positive base.
    pub fn pow(&self, y: &RigorInterval) -> Result<Self> {
        let p = self.prec_with(y) + GUARD_BITS;
        let l = self.clone().with_precision(p).ln()?;
        let r = l.mul(&y.clone().with_precision(p)).exp();
        Ok(Self::rounded(r.lo, r.hi, p - GUARD_BITS))
    }
}

impl fmt::Display for RigorInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12e}, {:.12e}]", self.lo_f64(), self.hi_f64())
    }
}

impl Serialize for RigorInterval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("RigorInterval", 3)?;
        s.serialize_field("lo", &self.lo_f64())?;
        s.serialize_field("hi", &self.hi_f64())?;
        s.serialize_field("precision_bits", &self.precision_bits)?;
        s.end()
    }
}

type Cache = OnceLock<Mutex<HashMap<u32, RigorInterval>>>;
static PI_CACHE: Cache = OnceLock::new();
static LN2_CACHE: Cache = OnceLock::new();

fn cached(cache: &Cache, p: u32, compute: fn(u32) -> RigorInterval) -> RigorInterval {
    let p = check_precision(p);
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = map.lock().ok().and_then(|m| m.get(&p).cloned()) {
        return v;
    }
    let v = compute(p);
    if let Ok(mut m) = map.lock() {
        m.insert(p, v.clone());
    }
    v
}

/// `2^-k` as a dyadic.
fn pow2_neg(k: i64) -> Dyadic {
    Dyadic::new(BigInt::one(), -k)
}

/// atan(1/q) by its alternating series; the first omitted term bounds the
/// truncation error.
fn atan_recip(q: u32, p: u32) -> RigorInterval {
    let w = p + GUARD_BITS;
    let q2 = BigInt::from(q) * BigInt::from(q);
    let mut power = BigInt::from(q);
    let mut sum = RigorInterval::from_integer(0, w);
    let mut j: u64 = 0;
    loop {
        let term = RigorInterval::from_fraction(1, &power * BigInt::from(2 * j + 1), w);
        sum = if j.is_multiple_of(2) {
            sum.add(&term)
        } else {
            sum.sub(&term)
        };
        j += 1;
        power *= &q2;
        // next term magnitude <= 1/power
        if power.bits() > w as u64 + 4 {
            let bound = pow2_neg(power.bits() as i64 - 1);
            return sum.widen(&bound);
        }
    }
}

fn compute_pi(p: u32) -> RigorInterval {
    let a = atan_recip(5, p).scale_pow2(4);
    let b = atan_recip(239, p).scale_pow2(2);
    let r = a.sub(&b);
    RigorInterval::rounded(r.lo, r.hi, p)
}

/// atanh(z) for an interval with |z| <= 1/3, series plus explicit tail.
fn atanh_small(z: &RigorInterval, w: u32) -> RigorInterval {
    let z2 = z.square();
    let mut power = z.clone();
    let mut sum = RigorInterval::from_integer(0, w);
    let mut j: u64 = 0;
    loop {
        let term = power.div_int(2 * j + 1);
        sum = sum.add(&term);
        j += 1;
        power = power.mul(&z2);
        let m = power.mag();
        if m.is_zero() || m.magnitude() < -(w as i64) - 4 {
            // tail <= |z|^(2j+1) / ((2j+1)(1 - z^2)) <= 2 |z|^(2j+1) for |z| <= 1/3
            let bound = if m.is_zero() {
                Dyadic::zero()
            } else {
                pow2_neg(-m.magnitude() - 1)
            };
            return sum.widen(&bound);
        }
    }
}

fn compute_ln2(p: u32) -> RigorInterval {
    let w = p + GUARD_BITS;
    let third = RigorInterval::from_fraction(1, 3, w);
    let r = atanh_small(&third, w).scale_pow2(1);
    RigorInterval::rounded(r.lo, r.hi, p)
}

/// Enclosure of exp(a) for an exact dyadic `a`.
fn exp_point(a: &Dyadic, p: u32) -> RigorInterval {
    if a.is_zero() {
        return RigorInterval::from_integer(1, p);
    }
    // reduce so that |t| <= 1/2, then square back
    let s = (a.magnitude() + 1).max(0);
    let w = p + GUARD_BITS + s as u32;
    let t = RigorInterval::exact(a.scale_pow2(-s), w);
    let mut term = RigorInterval::from_integer(1, w);
    let mut sum = term.clone();
    let mut j: u64 = 1;
    // |t|^j / j! <= 2^-j / j!; stop once that is below 2^-(w+6)
    let mut log2_factorial = 0.0f64;
    loop {
        term = term.mul(&t).div_int(j);
        sum = sum.add(&term);
        j += 1;
        log2_factorial += (j as f64).log2();
        if -(j as f64) - log2_factorial < -(w as f64) - 6.0 {
            break;
        }
    }
    // remaining tail <= 2 * 2^-j / j!
    let mut r = sum.widen(&pow2_neg(w as i64 + 4));
    for _ in 0..s {
        r = r.square();
    }
    RigorInterval::rounded(r.lo, r.hi, p)
}

/// Enclosure of ln(a) for an exact positive dyadic `a`.
fn ln_point(a: &Dyadic, p: u32) -> RigorInterval {
    let w = p + GUARD_BITS;
    // a = m * 2^e with m in [3/4, 3/2)
    let mut e = a.magnitude() - 1;
    let mut m = a.scale_pow2(-e);
    if m > Dyadic::new(BigInt::from(3), -1) {
        m = m.scale_pow2(-1);
        e += 1;
    }
    let one = RigorInterval::from_integer(1, w);
    let mi = RigorInterval::exact(m, w);
    let z = mi
        .sub(&one)
        .div(&mi.add(&one))
        .unwrap_or_else(|_| one.clone());
    let ln_m = atanh_small(&z, w).scale_pow2(1);
    let r = ln_m.add(&RigorInterval::ln2(w).mul(&RigorInterval::from_integer(e, w)));
    RigorInterval::rounded(r.lo, r.hi, p)
}

impl RigorInterval {
    /// Division by a positive integer.
    fn div_int(&self, j: u64) -> Self {
        debug_assert!(j > 0);
        let d = Dyadic::from_integer(j);
        let p = self.precision_bits;
        RigorInterval {
            lo: self.lo.div_round(&d, p, false),
            hi: self.hi.div_round(&d, p, true),
            precision_bits: p,
        }
    }

    /// Union of two enclosures; used by callers that evaluate the same
    /// quantity along two routes.
    pub fn union(&self, other: &RigorInterval) -> Self {
        self.hull(other)
    }
}
