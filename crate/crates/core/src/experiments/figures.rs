//! Growth-rate and beta curves, the side-by-side bound table, and the CSV
//! number format shared by all tabular output.
//!
//! CSV: header row, `.` decimal separator, LF endings. Values carry 12
//! significant digits with trailing zeros kept; grid coordinates are
//! printed in shortest form.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{asymptotic_log_per_d, gamma_to_eps, BoundReport, Bounds};
use crate::entropy::beta;
use crate::error::{Error, Result};

/// Formats `v` with 12 significant digits. Fixed notation for magnitudes in
/// `[1e-5, 1e15)`, scientific otherwise.
pub fn fmt_sig(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return "0.00000000000".into();
    }
    let sci = format!("{v:.11e}");
    let exp: i32 = sci[sci.find('e').map(|i| i + 1).unwrap_or(sci.len())..]
        .parse()
        .unwrap_or(0);
    if (-5..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}

/// Shortest form of a grid coordinate: 12 significant digits, trailing
/// zeros removed.
pub fn fmt_coord(v: f64) -> String {
    let s = fmt_sig(v);
    if s.contains('e') || !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.into()
    }
}

/// Parses `a:step:b` into `a, a+step, ..., b` (inclusive up to rounding).
/// A single number is a one-point grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let num = |s: &str| {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::domain(format!("grid value '{s}' is not a number")))
    };
    match parts.as_slice() {
        [a] => Ok(vec![num(a)?]),
        [a, step, b] => grid(num(a)?, num(step)?, num(b)?),
        _ => Err(Error::domain(format!(
            "grid '{spec}' is not of the form a:step:b"
        ))),
    }
}

/// Points `a + i*step` for `i = 0..=round((b-a)/step)`.
pub fn grid(a: f64, step: f64, b: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(Error::domain(format!("grid step {step} must be positive")));
    }
    if b < a {
        return Ok(Vec::new());
    }
    let count = ((b - a) / step + 1e-9).floor();
    if count > 1e7 {
        return Err(Error::domain(format!("grid has {count} points")));
    }
    Ok((0..=count as usize).map(|i| a + i as f64 * step).collect())
}

pub const FIGURE1_DEFAULT_GRID: &str = "0:0.001:0.15";
pub const FIGURE2_DEFAULT_GRID: &str = "0:0.0001:0.25";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthRow {
    pub gamma: f64,
    pub entropy_rate: f64,
    pub haussler: f64,
}

/// Per-dimension log growth of the two upper bounds along a gamma grid.
pub fn figure1_data(gammas: &[f64]) -> Result<Vec<GrowthRow>> {
    gammas
        .par_iter()
        .map(|&g| {
            asymptotic_log_per_d(g).map(|(entropy_rate, haussler)| GrowthRow {
                gamma: g,
                entropy_rate,
                haussler,
            })
        })
        .collect()
}

pub fn figure1_csv(rows: &[GrowthRow]) -> String {
    let mut out = String::from("gamma,entropy_rate_log_rate,haussler_log_rate\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_coord(r.gamma),
            fmt_sig(r.entropy_rate),
            fmt_sig(r.haussler)
        );
    }
    out
}

/// Number of sign changes of `entropy_rate - haussler` along the rows.
pub fn sign_changes(rows: &[GrowthRow]) -> usize {
    rows.windows(2)
        .filter(|w| {
            (w[0].entropy_rate - w[0].haussler).signum()
                != (w[1].entropy_rate - w[1].haussler).signum()
        })
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaRow {
    pub gamma: f64,
    pub beta: f64,
}

pub fn figure2_data(gammas: &[f64]) -> Result<Vec<BetaRow>> {
    gammas
        .par_iter()
        .map(|&g| beta(g).map(|b| BetaRow { gamma: g, beta: b }))
        .collect()
}

pub fn figure2_csv(rows: &[BetaRow]) -> String {
    let mut out = String::from("gamma,beta\n");
    for r in rows {
        let _ = writeln!(out, "{},{}", fmt_coord(r.gamma), fmt_sig(r.beta));
    }
    out
}

fn cell(rep: Result<BoundReport>) -> String {
    match rep {
        Ok(r) => match r.value_f64() {
            Some(v) => fmt_sig(v),
            None => format!("n/a: {}", r.notes.join("; ").replace(',', ";")),
        },
        Err(e) => format!("n/a: {}", e.to_string().replace(',', ";")),
    }
}

/// One row per `(gamma, d)`; lower bounds use `eps = (1 - gamma)/2`.
pub fn bound_comparison_table(
    gammas: &[f64],
    ds: &[u64],
    n: Option<u64>,
    bounds: &Bounds,
) -> String {
    let mut out = String::from(
        "gamma,eps,d,haussler_upper,entropy_rate_upper,sauer_upper,roth_seroussi,haussler_lower\n",
    );
    let cells: Vec<(f64, u64)> = gammas
        .iter()
        .flat_map(|&g| ds.iter().map(move |&d| (g, d)))
        .collect();
    let rows: Vec<String> = cells
        .par_iter()
        .map(|&(g, d)| {
            let eps = gamma_to_eps(g);
            let need_n = |f: &dyn Fn(u64) -> Result<BoundReport>| match n {
                Some(n) => cell(f(n)),
                None => "n/a: n required".to_string(),
            };
            format!(
                "{},{},{},{},{},{},{},{}",
                fmt_coord(g),
                fmt_coord(eps),
                d,
                cell(bounds.haussler_upper(eps, d)),
                cell(bounds.entropy_rate_upper(g, d, n)),
                need_n(&|n| bounds.sauer_upper(n, d)),
                need_n(&|n| bounds.roth_seroussi(n, g)),
                cell(bounds.haussler_lower(eps, d, n)),
            )
        })
        .collect();
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_sig(2.0), "2.00000000000");
        assert_eq!(fmt_sig(1.3862943611198906), "1.38629436112");
        assert_eq!(fmt_sig(59.11244879144521), "59.1124487914");
        assert_eq!(fmt_sig(9.9999999999999), "10.0000000000");
        assert_eq!(fmt_sig(0.0001), "0.000100000000000");
        assert_eq!(fmt_sig(1e20), "1.00000000000e20");
        assert_eq!(fmt_coord(0.0), "0");
        assert_eq!(fmt_coord(0.15000000000000002), "0.15");
        assert_eq!(fmt_coord(0.001 * 3.0), "0.003");
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:0.001:0.15").unwrap().len(), 151);
        assert_eq!(parse_grid("0:0.0001:0.25").unwrap().len(), 2501);
        assert_eq!(parse_grid("0.5").unwrap(), vec![0.5]);
        assert!(parse_grid("0:0:1").is_err());
        assert!(parse_grid("a:b").is_err());
        assert!(parse_grid("1:0.1:0").unwrap().is_empty());
    }

    #[test]
    fn figure1_shape() {
        let rows = figure1_data(&parse_grid(FIGURE1_DEFAULT_GRID).unwrap()).unwrap();
        assert_eq!(rows.len(), 151);
        assert_eq!(sign_changes(&rows), 1);
        let csv = figure1_csv(&rows);
        assert!(csv.starts_with(
            "gamma,entropy_rate_log_rate,haussler_log_rate\n0,1.38629436112,2.38629436112\n"
        ));
        assert_eq!(figure1_csv(&[]).lines().count(), 1);
        for w in rows.windows(2) {
            assert!(w[1].entropy_rate > w[0].entropy_rate && w[1].haussler > w[0].haussler);
        }
    }

    #[test]
    fn figure2_shape() {
        let rows = figure2_data(&parse_grid("0:0.001:0.25").unwrap()).unwrap();
        assert!(figure2_csv(&rows).starts_with("gamma,beta\n0,2.00000000000\n"));
        assert!(rows.windows(2).all(|w| w[1].beta > w[0].beta));
        assert!((rows.last().unwrap().beta - 5.583931570467623).abs() < 1e-6);
    }

    #[test]
    fn comparison_table() {
        let b = Bounds::default();
        let t = bound_comparison_table(&[0.0], &[1], None, &b);
        let row: Vec<&str> = t.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[0], "0");
        assert_eq!(row[3], "59.1124487914");
        assert_eq!(row[4], "400.000000000");
        assert!(row[6].starts_with("n/a"));
        let t = bound_comparison_table(&[0.6], &[1], Some(4), &b);
        assert!(t.lines().nth(1).unwrap().contains("n/a: bound vacuous"));
        assert_eq!(
            bound_comparison_table(&[], &[], None, &b).lines().count(),
            1
        );
    }

    #[test]
    fn lower_never_exceeds_upper() {
        let b = Bounds::default();
        for i in 0..20 {
            let g = i as f64 * 0.045;
            for d in 1..8u64 {
                let eps = gamma_to_eps(g);
                let lo = b
                    .haussler_lower(eps, d, Some(64))
                    .unwrap()
                    .log2_value()
                    .unwrap();
                let up = b.haussler_upper(eps, d).unwrap().log2_value().unwrap();
                let entropy_rate = b
                    .entropy_rate_upper(g, d, None)
                    .unwrap()
                    .log2_value()
                    .unwrap();
                assert!(lo <= up && lo <= entropy_rate);
            }
        }
    }
}
