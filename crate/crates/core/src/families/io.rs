//! Text format for function classes.
//!
//! ```text
//! k n m
//! s_11 s_12 ... s_1n
//! ...
//! s_m1 s_m2 ... s_mn
//! ```
//!
//! Symbols are decimal integers in `0..k`. Binary classes may also be
//! written with `+`/`-` characters (separated or contiguous). The writer
//! always emits the numeric form, single spaces, LF line endings.

use std::fmt::Write as _;

use super::FunctionClass;
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_row(k: u32, n: usize, text: &str, line: usize) -> Result<Vec<u8>> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let signs = k == 2
        && !tokens.is_empty()
        && tokens
            .iter()
            .all(|t| t.chars().all(|c| c == '+' || c == '-'));
    let row: Vec<u8> = if signs {
        tokens
            .iter()
            .flat_map(|t| t.chars())
            .map(|c| if c == '+' { 1 } else { 0 })
            .collect()
    } else {
        tokens
            .iter()
            .map(|t| {
                t.parse::<u32>()
                    .ok()
                    .filter(|&s| s < k)
                    .map(|s| s as u8)
                    .ok_or_else(|| parse_err(line, format!("invalid symbol '{t}' for k = {k}")))
            })
            .collect::<Result<_>>()?
    };
    if row.len() != n {
        return Err(parse_err(
            line,
            format!("expected {n} symbols, found {}", row.len()),
        ));
    }
    Ok(row)
}

/// Parses the family text format. With `dedup`, repeated rows are merged
/// instead of rejected.
pub fn parse_family(text: &str, dedup: bool) -> Result<FunctionClass> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing header 'k n m'"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(parse_err(hline, "header must be 'k n m'"));
    }
    let num = |s: &str, what: &str| {
        s.parse::<u64>().map_err(|_| {
            parse_err(
                hline,
                format!("{what} = '{s}' is not a nonnegative integer"),
            )
        })
    };
    let k = num(fields[0], "k")?;
    let n = num(fields[1], "n")? as usize;
    let m = num(fields[2], "m")? as usize;
    if !(2..=super::MAX_ALPHABET as u64).contains(&k) {
        return Err(parse_err(hline, format!("k = {k} unsupported")));
    }
    let k = k as u32;
    let mut rows = Vec::with_capacity(m);
    for (line, text) in lines {
        if rows.len() == m {
            return Err(parse_err(line, format!("more than m = {m} rows")));
        }
        rows.push(parse_row(k, n, text, line)?);
    }
    if rows.len() != m {
        return Err(parse_err(
            hline,
            format!("header declares {m} rows, found {}", rows.len()),
        ));
    }
    let built = if dedup {
        FunctionClass::with_dedup(k, n, rows)
    } else {
        FunctionClass::new(k, n, rows)
    };
    built.map_err(|e| match e {
        Error::Domain(msg) => parse_err(hline, msg),
        other => other,
    })
}

pub fn write_family(f: &FunctionClass) -> String {
    let mut out = String::with_capacity(f.len() * (2 * f.n() + 1) + 16);
    let _ = writeln!(out, "{} {} {}", f.k(), f.n(), f.len());
    for row in f.rows() {
        for (j, s) in row.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{s}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn numeric_and_sign_forms_agree() {
        let a = parse_family("2 3 2\n1 0 1\n0 0 1\n", false).unwrap();
        let b = parse_family("2 3 2\n+-+\n- - +\n", false).unwrap();
        assert_eq!(a, b);
        assert_eq!(write_family(&b), "2 3 2\n1 0 1\n0 0 1\n");
    }

    #[test]
    fn crlf_and_blank_lines_tolerated() {
        let a = parse_family("3 2 2\r\n0 2\r\n\r\n1 1\r\n", false).unwrap();
        assert_eq!(a.k(), 3);
        assert_eq!(a.row(0), &[0, 2]);
    }

    #[test]
    fn malformed_inputs() {
        let bad = [
            "",
            "2 3\n1 0 1\n",
            "2 3 2\n1 0 1\n",
            "2 3 1\n1 0 1\n0 1 1\n",
            "2 3 1\n1 0\n",
            "2 3 1\n1 0 2\n",
            "3 2 1\n+ -\n",
            "2 2 2\n1 0\n1 0\n",
            "x 2 1\n1 0\n",
            "2 0 1\n\n",
        ];
        for text in bad {
            assert!(
                matches!(parse_family(text, false), Err(Error::Parse { .. })),
                "{text:?}"
            );
        }
        assert_eq!(parse_family("2 2 2\n1 0\n1 0\n", true).unwrap().len(), 1);
    }

    proptest! {
        #[test]
        fn write_read_is_a_fixpoint(
            k in 2u32..6,
            rows in proptest::collection::vec(proptest::collection::vec(0u8..6, 5), 1..20),
        ) {
            let rows: Vec<Vec<u8>> = rows
                .into_iter()
                .map(|r| r.into_iter().map(|s| s % k as u8).collect())
                .collect();
            let f = FunctionClass::with_dedup(k, 5, rows).unwrap();
            let text = write_family(&f);
            let g = parse_family(&text, false).unwrap();
            prop_assert_eq!(&g, &f);
            prop_assert_eq!(write_family(&g), text);
        }
    }
}
