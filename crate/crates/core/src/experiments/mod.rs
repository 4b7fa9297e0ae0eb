//! Executable proof mechanics, figure data and randomized audits.

mod collision;
mod figures;
mod sweep;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{sauer_audit_with, vc_dimension, AuditOptions, FunctionClass};
use crate::rng;

pub use collision::{
    collision_floor_check, entropy_weight, key_inequality_check, lower_envelope,
    projection_collision, rstar_choice, rstar_choice_with, upper_envelope, CollisionMode,
    FloorCheck, KeyInequalityReport, ModeTag, ProjectionStats, RStar, DEFAULT_EXHAUSTIVE_BUDGET,
};
pub use figures::{
    bound_comparison_table, figure1_csv, figure1_data, figure2_csv, figure2_data, fmt_coord,
    fmt_sig, grid, parse_grid, sign_changes, BetaRow, GrowthRow, FIGURE1_DEFAULT_GRID,
    FIGURE2_DEFAULT_GRID,
};
pub use sweep::{
    lemma_sweep, lemma_sweep_with, LemmaSweepReport, SweepOptions, SweepSummary, Tightest,
};

/// `count` random binary classes: `n` uniform in `1..=n_max`, `m` uniform
/// in `1..=min(m_max, 2^n)`, rows drawn without replacement from the cube.
/// Class `i` uses sub-seed `derive_seed(seed, i)`.
pub fn random_corpus(
    count: usize,
    n_max: usize,
    m_max: usize,
    seed: u64,
) -> Result<Vec<FunctionClass>> {
    if !(1..=20).contains(&n_max) || m_max == 0 {
        return Err(Error::domain(
            "corpus needs 1 <= n_max <= 20 and m_max >= 1",
        ));
    }
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut g = rng::generator(rng::derive_seed(seed, i as u64));
            let n = g.random_range(1..=n_max);
            let m = g.random_range(1..=m_max.min(1 << n));
            let mut codes = sample(&mut g, 1 << n, m).into_vec();
            codes.sort_unstable();
            let rows = codes
                .iter()
                .map(|c| (0..n).map(|j| (c >> j & 1) as u8).collect())
                .collect();
            FunctionClass::new(2, n, rows)
        })
        .collect()
}

/// All 255 nonempty subsets of `{-1, +1}^3`, by bitmask.
pub fn cube3_subsets() -> Vec<FunctionClass> {
    (1u32..256)
        .map(|mask| {
            let rows = (0..8u8)
                .filter(|v| mask >> v & 1 == 1)
                .map(|v| (0..3).map(|j| v >> j & 1).collect())
                .collect();
            FunctionClass::new(2, 3, rows).expect("distinct cube points")
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditViolation {
    pub class_index: usize,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct AuditSummary {
    pub classes: usize,
    pub checks: usize,
    pub violations: Vec<AuditViolation>,
}

impl AuditSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(parts: Vec<AuditSummary>) -> AuditSummary {
        let mut out = AuditSummary::default();
        for p in parts {
            out.classes += p.classes;
            out.checks += p.checks;
            out.violations.extend(p.violations);
        }
        out
    }
}

/// For each class and each `r` with `2d <= r <= n`: the exhaustive
/// collision probability lies within its envelopes, and (when `d >= 1`) the
/// key inequality holds.
pub fn proof_mechanics_audit(classes: &[FunctionClass], budget: u64) -> Result<AuditSummary> {
    let parts = classes
        .par_iter()
        .enumerate()
        .map(|(i, f)| -> Result<AuditSummary> {
            let mut s = AuditSummary {
                classes: 1,
                ..Default::default()
            };
            let d = vc_dimension(f)?;
            for r in 2 * d..=f.n() {
                let p = projection_collision(f, r, CollisionMode::Exhaustive { budget })?;
                s.checks += 1;
                if p.within_envelopes != Some(true) {
                    s.violations.push(AuditViolation {
                        class_index: i,
                        check: "collision_envelopes".into(),
                        detail: format!(
                            "r = {r}: P(A) = {} outside [{}, {})",
                            p.p_collision.unwrap_or_default(),
                            p.lower_envelope,
                            p.upper_envelope
                        ),
                    });
                }
                if d >= 1 {
                    let k = key_inequality_check(f, r)?;
                    s.checks += 1;
                    if !k.holds {
                        s.violations.push(AuditViolation {
                            class_index: i,
                            check: "key_inequality".into(),
                            detail: format!("r = {r}: lhs {} >= rhs {}", k.lhs, k.rhs),
                        });
                    }
                }
            }
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AuditSummary::merge(parts))
}

/// Sauer-Shelah and generalized Sauer checks on every class.
pub fn sauer_corpus_audit(
    classes: &[FunctionClass],
    samples: usize,
    seed: u64,
) -> Result<AuditSummary> {
    let parts = classes
        .par_iter()
        .enumerate()
        .map(|(i, f)| -> Result<AuditSummary> {
            let opts = AuditOptions {
                samples,
                seed: rng::derive_seed(seed, i as u64),
                dimension_budget: None,
            };
            let a = sauer_audit_with(f, &opts)?;
            let violations = a
                .violation
                .map(|v| AuditViolation {
                    class_index: i,
                    check: v.kind.clone(),
                    detail: format!(
                        "size {} > bound {} (dimension {})",
                        v.size, v.bound, v.dimension
                    ),
                })
                .into_iter()
                .collect();
            Ok(AuditSummary {
                classes: 1,
                checks: a.checks,
                violations,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AuditSummary::merge(parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible_and_in_range() {
        let a = random_corpus(50, 12, 32, 7).unwrap();
        let b = random_corpus(50, 12, 32, 7).unwrap();
        assert_eq!(a, b);
        assert!(a
            .iter()
            .all(|f| f.n() <= 12 && f.len() <= 32 && f.len() <= 1 << f.n()));
        assert_ne!(a, random_corpus(50, 12, 32, 8).unwrap());
    }

    #[test]
    fn cube3_subsets_are_all_distinct() {
        let all = cube3_subsets();
        assert_eq!(all.len(), 255);
        assert_eq!(all.iter().filter(|f| f.len() == 8).count(), 1);
    }

    #[test]
    fn small_audits_pass() {
        let corpus = random_corpus(40, 8, 16, 1).unwrap();
        let p = proof_mechanics_audit(&corpus, DEFAULT_EXHAUSTIVE_BUDGET).unwrap();
        assert!(p.passed(), "{:?}", p.violations);
        assert!(p.checks > 40);
        let s = sauer_corpus_audit(&cube3_subsets(), 4, 0).unwrap();
        assert!(s.passed());
        assert_eq!(s.classes, 255);
    }
}
