//! C ABI for `vcpack`.
//!
//! Every function returns a [`VcpackStatus`] and writes results through out
//! pointers. On a non-`OK` status, [`vcpack_last_error`] returns a message
//! for the calling thread. Families are opaque handles created by the
//! `vcpack_family_*` constructors and released with [`vcpack_family_free`];
//! strings returned by the library are released with [`vcpack_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_rational::Rational64;
use vcpack::bounds::Bounds;
use vcpack::constructions::{random_orthogonal_family, sylvester_hadamard, RandomFamilySpec};
use vcpack::entropy::{beta, binary_entropy, delta, entropy_inverse};
use vcpack::families::{
    gamma_orth, gamma_orth_k, packing_number_bounded, parse_family, vc_dimension_bounded,
    write_family, FunctionClass,
};
use vcpack::Error;

/// Result code of every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VcpackStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Divergence = 4,
    Precondition = 5,
    BudgetExceeded = 6,
    Parse = 7,
    Overflow = 8,
    TheoremViolation = 9,
    Io = 10,
    Panic = 11,
}

/// Opaque function class handle.
pub struct VcpackFamily {
    inner: FunctionClass,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    let c = CString::new(text).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> VcpackStatus {
    match e {
        Error::Domain(_) => VcpackStatus::Domain,
        Error::Divergence(_) => VcpackStatus::Divergence,
        Error::Precondition(_) => VcpackStatus::Precondition,
        Error::BudgetExceeded(_) => VcpackStatus::BudgetExceeded,
        Error::Parse { .. } => VcpackStatus::Parse,
        Error::Overflow(_) => VcpackStatus::Overflow,
        Error::TheoremViolation(_) => VcpackStatus::TheoremViolation,
        Error::Io(_) => VcpackStatus::Io,
    }
}

fn fail(status: VcpackStatus, msg: impl Into<String>) -> VcpackStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), VcpackStatus>) -> VcpackStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VcpackStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(VcpackStatus::Panic, "internal panic"),
    }
}

fn check<T>(r: vcpack::Result<T>) -> Result<T, VcpackStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, VcpackStatus> {
    // SAFETY: caller guarantees `p` is null or valid for writes.
    unsafe { p.as_mut() }.ok_or_else(|| fail(VcpackStatus::NullPointer, "null output pointer"))
}

fn family_ref<'a>(f: *const VcpackFamily) -> Result<&'a FunctionClass, VcpackStatus> {
    // SAFETY: caller guarantees `f` is null or a live handle from this library.
    unsafe { f.as_ref() }
        .map(|h| &h.inner)
        .ok_or_else(|| fail(VcpackStatus::NullPointer, "null family handle"))
}

fn emit_family(f: FunctionClass, out: *mut *mut VcpackFamily) -> Result<(), VcpackStatus> {
    let slot = out_ref(out)?;
    *slot = Box::into_raw(Box::new(VcpackFamily { inner: f }));
    Ok(())
}

fn opt_budget(budget: u64) -> Option<u64> {
    (budget != 0).then_some(budget)
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn vcpack_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Binary entropy in bits.
#[no_mangle]
pub extern "C" fn vcpack_binary_entropy(x: f64, out: *mut f64) -> VcpackStatus {
    guard(|| {
        *out_ref(out)? = check(binary_entropy(x))?;
        Ok(())
    })
}

/// Inverse of binary entropy on [0, 1/2].
#[no_mangle]
pub extern "C" fn vcpack_entropy_inverse(y: f64, out: *mut f64) -> VcpackStatus {
    guard(|| {
        *out_ref(out)? = check(entropy_inverse(y))?;
        Ok(())
    })
}

/// beta(gamma) = 1 / H^-1(log2(2/(1+gamma))).
#[no_mangle]
pub extern "C" fn vcpack_beta(gamma: f64, out: *mut f64) -> VcpackStatus {
    guard(|| {
        *out_ref(out)? = check(beta(gamma))?;
        Ok(())
    })
}

/// delta(gamma, k) on the default search interval.
#[no_mangle]
pub extern "C" fn vcpack_delta(gamma: f64, k: u32, out: *mut f64) -> VcpackStatus {
    guard(|| {
        *out_ref(out)? = check(delta(gamma, k))?;
        Ok(())
    })
}

/// Identifies a bound for [`vcpack_bound`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VcpackBound {
    /// e (d+1) (2e/eps)^d; uses `eps`, `d`.
    HausslerUpper = 0,
    /// 100 * 2^(d beta(gamma)); uses `gamma`, `d`.
    EntropyRateUpper = 1,
    /// 34 k^d 2^(d/delta(gamma,k)); uses `gamma`, `k`, `d`, `n`.
    KaryUpper = 2,
    /// (1/(2e(eps + d/n)))^d; `n = 0` takes the limit n -> infinity.
    HausslerLower = 3,
    /// n (1 - gamma^2) / (1 - n gamma^2); uses `n`, `gamma`.
    RothSeroussi = 4,
    /// Gilbert-Varshamov; uses `n` and `d` as the minimum distance.
    GvLower = 5,
    /// sum_{i<=d} C(n,i).
    SauerUpper = 6,
    /// sum_{i<=d} C(n,i) k^i.
    GeneralizedSauer = 7,
}

/// Inputs for [`vcpack_bound`]; unused fields are ignored.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct VcpackBoundInput {
    pub eps: f64,
    pub gamma: f64,
    pub d: u64,
    pub n: u64,
    pub k: u64,
    /// Interval precision in bits; 0 selects the default.
    pub precision_bits: u32,
}

/// Evaluates a bound. `value` receives the value (possibly +inf when it
/// overflows a double) and `log2_value` its base-2 logarithm; either may be
/// NULL. A bound whose preconditions fail returns `PRECONDITION`.
///
/// # Safety
/// `input` must point to a valid `VcpackBoundInput`; `value` and
/// `log2_value` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vcpack_bound(
    which: VcpackBound,
    input: *const VcpackBoundInput,
    value: *mut f64,
    log2_value: *mut f64,
) -> VcpackStatus {
    guard(|| {
        // SAFETY: checked for null; caller guarantees validity otherwise.
        let i = unsafe { input.as_ref() }
            .ok_or_else(|| fail(VcpackStatus::NullPointer, "null input"))?;
        let b = if i.precision_bits == 0 {
            Bounds::default()
        } else {
            Bounds::new(i.precision_bits)
        };
        let n_opt = (i.n != 0).then_some(i.n);
        let rep = check(match which {
            VcpackBound::HausslerUpper => b.haussler_upper(i.eps, i.d),
            VcpackBound::EntropyRateUpper => b.entropy_rate_upper(i.gamma, i.d, n_opt),
            VcpackBound::KaryUpper => b.kary_upper(i.gamma, i.k, i.d, i.n),
            VcpackBound::HausslerLower => b.haussler_lower(i.eps, i.d, n_opt),
            VcpackBound::RothSeroussi => b.roth_seroussi(i.n, i.gamma),
            VcpackBound::GvLower => b.gv_lower(i.n, i.d),
            VcpackBound::SauerUpper => b.sauer_upper(i.n, i.d),
            VcpackBound::GeneralizedSauer => b.generalized_sauer(i.n, i.d, i.k),
        })?;
        if !rep.preconditions_met {
            return Err(fail(VcpackStatus::Precondition, rep.notes.join("; ")));
        }
        // SAFETY: caller guarantees these are null or valid for writes.
        if let Some(v) = unsafe { value.as_mut() } {
            *v = rep.value_f64().unwrap_or(f64::NAN);
        }
        if let Some(v) = unsafe { log2_value.as_mut() } {
            *v = rep.log2_value().unwrap_or(f64::NAN);
        }
        Ok(())
    })
}

/// Parses the text family format (`k n m` header, then m rows).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vcpack_family_parse(
    text: *const c_char,
    out: *mut *mut VcpackFamily,
) -> VcpackStatus {
    guard(|| {
        if text.is_null() {
            return Err(fail(VcpackStatus::NullPointer, "null text"));
        }
        // SAFETY: non-null and NUL-terminated by contract.
        let s = unsafe { CStr::from_ptr(text) }
            .to_str()
            .map_err(|_| fail(VcpackStatus::InvalidArgument, "text is not UTF-8"))?;
        emit_family(check(parse_family(s, false))?, out)
    })
}

/// Rows of the Sylvester-Hadamard matrix of order 2^order_exp.
#[no_mangle]
pub extern "C" fn vcpack_family_hadamard(
    order_exp: u32,
    out: *mut *mut VcpackFamily,
) -> VcpackStatus {
    guard(|| emit_family(check(sylvester_hadamard(order_exp))?, out))
}

/// Random sign matrix with max |<x,y>| <= gamma. `m = 0` selects
/// floor(exp(n gamma^2 / 4)). Returns `BUDGET_EXCEEDED` when every attempt
/// is rejected.
#[no_mangle]
pub extern "C" fn vcpack_family_random(
    n: usize,
    gamma: f64,
    m: usize,
    seed: u64,
    max_attempts: usize,
    out: *mut *mut VcpackFamily,
) -> VcpackStatus {
    guard(|| {
        let mut spec = RandomFamilySpec::new(n, gamma, seed).with_max_attempts(max_attempts);
        if m != 0 {
            spec = spec.with_m_target(m);
        }
        let rep = check(random_orthogonal_family(&spec))?;
        match rep.family {
            Some(f) => emit_family(f.class, out),
            None => Err(fail(
                VcpackStatus::BudgetExceeded,
                format!("no acceptable family in {} attempts", rep.stats.attempts),
            )),
        }
    })
}

/// Releases a family handle. NULL is ignored.
///
/// # Safety
/// `f` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vcpack_family_free(f: *mut VcpackFamily) {
    if !f.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(f) });
    }
}

/// Alphabet size, coordinate count and number of vectors.
#[no_mangle]
pub extern "C" fn vcpack_family_shape(
    f: *const VcpackFamily,
    k: *mut u32,
    n: *mut usize,
    m: *mut usize,
) -> VcpackStatus {
    guard(|| {
        let f = family_ref(f)?;
        *out_ref(k)? = f.k();
        *out_ref(n)? = f.n();
        *out_ref(m)? = f.len();
        Ok(())
    })
}

/// VC dimension of a binary family. `budget = 0` searches exhaustively;
/// otherwise `lower` and `upper` bracket the dimension when the budget runs
/// out.
#[no_mangle]
pub extern "C" fn vcpack_family_vc_dimension(
    f: *const VcpackFamily,
    budget: u64,
    lower: *mut usize,
    upper: *mut usize,
) -> VcpackStatus {
    guard(|| {
        let f = family_ref(f)?;
        let r = check(vc_dimension_bounded(f, opt_budget(budget)))?;
        *out_ref(lower)? = r.lower;
        *out_ref(upper)? = r.upper;
        Ok(())
    })
}

/// Exact orthogonality max |<x,y>| (binary) or max |gamma_k| (k-ary) as
/// `num/den`.
#[no_mangle]
pub extern "C" fn vcpack_family_gamma(
    f: *const VcpackFamily,
    num: *mut i64,
    den: *mut i64,
) -> VcpackStatus {
    guard(|| {
        let f = family_ref(f)?;
        let g = if f.is_binary() {
            check(gamma_orth(f))?
        } else {
            gamma_orth_k(f)
        };
        *out_ref(num)? = *g.numer();
        *out_ref(den)? = *g.denom();
        Ok(())
    })
}

/// Largest subset with pairwise normalized distance >= eps_num/eps_den.
/// `exact` receives 0 when the node budget ran out.
#[no_mangle]
pub extern "C" fn vcpack_family_packing(
    f: *const VcpackFamily,
    eps_num: i64,
    eps_den: i64,
    budget: u64,
    size: *mut usize,
    exact: *mut i32,
) -> VcpackStatus {
    guard(|| {
        let f = family_ref(f)?;
        if eps_den <= 0 {
            return Err(fail(
                VcpackStatus::InvalidArgument,
                "eps denominator must be positive",
            ));
        }
        let p = check(packing_number_bounded(
            f,
            Rational64::new(eps_num, eps_den),
            opt_budget(budget),
        ))?;
        *out_ref(size)? = p.size;
        *out_ref(exact)? = p.exact as i32;
        Ok(())
    })
}

/// Family in the text format; release with [`vcpack_string_free`].
#[no_mangle]
pub extern "C" fn vcpack_family_to_text(
    f: *const VcpackFamily,
    out: *mut *mut c_char,
) -> VcpackStatus {
    guard(|| {
        let f = family_ref(f)?;
        let text =
            CString::new(write_family(f)).map_err(|_| fail(VcpackStatus::Panic, "interior NUL"))?;
        *out_ref(out)? = text.into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vcpack_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: created by CString::into_raw in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}
