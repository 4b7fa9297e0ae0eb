//! Random near-orthogonal classes with `gamma = d^(-a)`, where `d` is the
//! class's own VC dimension.
//!
//! The target is self-referential, so it is realized by fixed-point
//! iteration. The start `d0 = (n / (4 ln 2))^(1/(2a+1))` is the solution of
//! `d = log2 m` with `m = exp(n gamma^2 / 4)` and `gamma = d^(-a)`. Each round
//! builds a class at the current `gamma`, measures its dimension, and sets
//! `gamma = d^(-a)` from the witnessed lower end of the dimension range
//! (floored at 2, since `d = 1` would make the orthogonality constraint vacuous),
//! stopping once `gamma` moves by at most 5% or after 10 rounds. Since
//! `gamma` is a function of an integer, the iteration can cycle; a repeated
//! `gamma` ends it early. Unconverged runs report the round whose `gamma` is
//! closest to `d^(-a)`.

use std::fmt::Write as _;

use serde::Serialize;

use super::{default_m_target, random_orthogonal_family, RandomFamilySpec};
use crate::error::{Error, Result};
use crate::experiments::{fmt_coord, fmt_sig};
use crate::rng;

#[derive(Debug, Clone)]
pub struct VclbOptions {
    pub max_rounds: usize,
    pub tolerance: f64,
    pub max_attempts: usize,
    pub dimension_budget: Option<u64>,
    /// Upper cap on `m` per round, to keep the dimension search tractable.
    pub max_m: usize,
}

impl Default for VclbOptions {
    fn default() -> Self {
        VclbOptions {
            max_rounds: 10,
            tolerance: 0.05,
            max_attempts: 20,
            dimension_budget: Some(200_000),
            max_m: 4096,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VclbRow {
    pub n: usize,
    pub seed: u64,
    pub a: f64,
    pub gamma_used: f64,
    pub d_lower: usize,
    pub d_upper: usize,
    pub m_achieved: usize,
    /// `exp(n^(1/(2a+1)))`.
    pub reference: f64,
    pub rounds: usize,
    pub converged: bool,
    /// `gamma_used` within a factor 2 of `d^(-a)` for some `d` in the
    /// measured range.
    pub consistent: bool,
    pub note: String,
}

fn empty_row(n: usize, seed: u64, a: f64, reference: f64, rounds: usize, note: String) -> VclbRow {
    VclbRow {
        n,
        seed,
        a,
        gamma_used: f64::NAN,
        d_lower: 0,
        d_upper: 0,
        m_achieved: 0,
        reference,
        rounds,
        converged: false,
        consistent: false,
        note,
    }
}

struct Round {
    gamma: f64,
    lo: usize,
    hi: usize,
    m: usize,
}

/// Distance in log space from `gamma` to the nearest `d^(-a)` with `d` in
/// the measured range.
fn mismatch(r: &Round, a: f64) -> f64 {
    (r.lo.max(1)..=r.hi.max(1))
        .map(|d| (r.gamma.ln() + a * (d as f64).ln()).abs())
        .fold(f64::INFINITY, f64::min)
}

fn one_row(a: f64, n: usize, seed: u64, opts: &VclbOptions) -> Result<VclbRow> {
    let reference = (n as f64).powf(1.0 / (2.0 * a + 1.0)).exp();
    let d0 = (n as f64 / (4.0 * std::f64::consts::LN_2)).powf(1.0 / (2.0 * a + 1.0));
    let mut gamma = d0.powf(-a).min(0.99);
    let mut rounds: Vec<Round> = Vec::new();
    let mut converged = false;
    let mut cycled = false;
    for round in 0..opts.max_rounds {
        let m = default_m_target(n, gamma).clamp(2, opts.max_m);
        let spec = RandomFamilySpec {
            n,
            gamma,
            m_target: m,
            seed: rng::derive_seed(seed, round as u64),
            max_attempts: opts.max_attempts,
            dimension_budget: opts.dimension_budget,
        };
        let rep = random_orthogonal_family(&spec)?;
        let Some(fam) = rep.family else {
            return Ok(empty_row(
                n,
                seed,
                a,
                reference,
                round + 1,
                format!(
                    "construction failed after {} attempts at gamma = {gamma:.6}",
                    rep.stats.attempts
                ),
            ));
        };
        rounds.push(Round {
            gamma,
            lo: fam.vc.lower,
            hi: fam.vc.upper,
            m: fam.class.len(),
        });
        let next = (fam.vc.lower.max(2) as f64).powf(-a);
        if (next - gamma).abs() <= opts.tolerance * gamma {
            converged = true;
            break;
        }
        if rounds.iter().any(|r| r.gamma == next) {
            cycled = true;
            break;
        }
        gamma = next;
    }
    if rounds.is_empty() {
        return Err(Error::domain("max_rounds must be >= 1"));
    }
    let used = rounds.len();
    let best = if converged {
        rounds.last()
    } else {
        rounds
            .iter()
            .min_by(|x, y| mismatch(x, a).total_cmp(&mismatch(y, a)))
    }
    .expect("nonempty rounds");
    let consistent = mismatch(best, a) <= std::f64::consts::LN_2;
    let mut notes = Vec::new();
    if best.lo != best.hi {
        notes.push("dimension bounded by search budget");
    }
    if cycled {
        notes.push("iteration cycled; best round reported");
    } else if !converged {
        notes.push("round limit reached; best round reported");
    }
    Ok(VclbRow {
        n,
        seed,
        a,
        gamma_used: best.gamma,
        d_lower: best.lo,
        d_upper: best.hi,
        m_achieved: best.m,
        reference,
        rounds: used,
        converged,
        consistent,
        note: notes.join("; "),
    })
}

/// One row per `(n, seed)` pair, in input order.
pub fn vclb_curve(
    a: f64,
    n_list: &[usize],
    seeds: &[u64],
    opts: &VclbOptions,
) -> Result<Vec<VclbRow>> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain(format!("exponent a = {a} must be positive")));
    }
    let mut rows = Vec::with_capacity(n_list.len() * seeds.len());
    for &n in n_list {
        if n == 0 {
            return Err(Error::domain("n must be >= 1"));
        }
        for &seed in seeds {
            rows.push(one_row(a, n, seed, opts)?);
        }
    }
    Ok(rows)
}

pub fn vclb_csv(rows: &[VclbRow]) -> String {
    let mut out = String::from(
        "n,seed,a,gamma_used,d_lower,d_upper,m_achieved,reference,rounds,converged,consistent,note\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.seed,
            fmt_coord(r.a),
            fmt_sig(r.gamma_used),
            r.d_lower,
            r.d_upper,
            r.m_achieved,
            fmt_sig(r.reference),
            r.rounds,
            r.converged,
            r.consistent,
            r.note.replace(',', ";"),
        );
    }
    out
}
