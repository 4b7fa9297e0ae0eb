//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or i/o error, 2 invalid input or
//! precondition violation, 3 budget exceeded (search budget, precision
//! ceiling, construction attempts), 4 a theorem-backed invariant failed.
//! Data goes to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde::Serialize;

use crate::bounds::{gamma_to_eps, BoundReport, Bounds};
use crate::constructions::{
    greedy_packing, random_orthogonal_family, sylvester_hadamard, vclb_csv, vclb_curve,
    GreedyOptions, RandomFamilySpec, VclbOptions,
};
use crate::entropy::{beta, delta_with, DeltaDomain};
use crate::error::{Error, Result};
use crate::experiments::{
    bound_comparison_table, collision_floor_check, cube3_subsets, figure1_csv, figure1_data,
    figure2_csv, figure2_data, fmt_coord, fmt_sig, key_inequality_check, lemma_sweep_with,
    parse_grid, projection_collision, proof_mechanics_audit, random_corpus, rstar_choice_with,
    sauer_corpus_audit, AuditSummary, CollisionMode, LemmaSweepReport, SweepOptions,
    FIGURE1_DEFAULT_GRID, FIGURE2_DEFAULT_GRID,
};
use crate::families::{
    gamma_orth, gamma_orth_k, generalized_dimension, packing_number_bounded, parse_family,
    sauer_audit_with, vc_dimension_bounded, write_family, AuditOptions, FunctionClass,
    GeneralizedDimension,
};
use crate::interval::{DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "vcpack",
    version,
    about = "Packing-number bounds, exact combinatorial oracles and constructions for classes of sign vectors"
)]
pub struct Cli {
    /// Working precision of interval arithmetic, in bits.
    #[arg(long, global = true, env = "VCPACK_PRECISION_BITS", default_value_t = DEFAULT_PRECISION_BITS)]
    pub precision_bits: u32,

    /// Seed for every randomized command.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,

    /// Cap on exhaustive enumeration work (comparisons or search nodes).
    #[arg(long, global = true, default_value_t = 100_000_000)]
    pub budget: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Upper and lower bounds on packing numbers and class sizes: Haussler's
    /// packing bound, the entropy-rate bound 100*2^(d*beta), the k-ary bound,
    /// Sauer-Shelah, Roth-Seroussi and Gilbert-Varshamov.
    Bounds(BoundsArgs),
    /// Side-by-side bound table over a gamma grid and a list of dimensions.
    Compare(CompareArgs),
    /// beta(gamma) = 1 / H^-1(log2(2/(1+gamma))), the exponent rate of the
    /// entropy-rate upper bound.
    Beta {
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
    },
    /// delta(gamma, k): the largest x with x*log2(k) + H(x) <= log2(k/(1+(k-1)gamma)).
    Delta {
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long)]
        k: u32,
        /// Search up to k/(k+1) instead of k/(k+1.6).
        #[arg(long)]
        wide: bool,
    },
    /// Rigorous sweep of the binomial-sum entropy lemmas: sum_{i<=d} C(n,i) <=
    /// 0.98*2^(nH(d/n)) and its k-ary form with constant 0.94.
    VerifyLemmas(VerifyArgs),
    /// Exact oracles on a family file (`-` reads stdin).
    Family {
        #[command(subcommand)]
        op: FamilyOp,
    },
    /// Build explicit families: Sylvester-Hadamard rows, random nearly
    /// orthogonal sign matrices, greedy packings.
    Construct {
        #[command(subcommand)]
        op: ConstructOp,
    },
    /// Projection-collision mechanics behind the entropy-rate bound, and
    /// randomized audits.
    Experiment {
        #[command(subcommand)]
        op: ExperimentOp,
    },
    /// Figure data: 1 = per-dimension log growth of the two upper bounds,
    /// 2 = beta(gamma).
    Figures {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        /// Grid `a:step:b`.
        #[arg(long)]
        grid: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long)]
    pub d: u64,
    #[arg(long)]
    pub n: Option<u64>,
    /// Alphabet size for the k-ary bounds (requires --n).
    #[arg(long)]
    pub k: Option<u64>,
    /// Minimum distance for the Gilbert-Varshamov bound (requires --n).
    #[arg(long)]
    pub min_dist: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, default_value = "0:0.05:0.95")]
    pub grid: String,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', default_value = "1,2,5,10")]
    pub d: Vec<u64>,
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n_max: u64,
    /// Comma-separated alphabet sizes for the k-ary lemma.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<u64>,
    /// Replace the binary constant 49/50 (as `p/q`) to probe tightness.
    #[arg(long)]
    pub constant: Option<String>,
    /// Replace the k-ary constant 47/50.
    #[arg(long)]
    pub kary_constant: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum FamilyOp {
    /// Size, alphabet, distances, orthogonality and dimensions.
    Stats { file: String },
    /// Exact VC dimension (binary classes).
    Vcdim { file: String },
    /// Orthogonality: max |<x,y>| (binary) or max |gamma_k| over distinct pairs.
    Gamma { file: String },
    /// Exact packing number: largest subset with pairwise distance >= eps.
    Packing {
        #[arg(long)]
        eps: String,
        file: String,
    },
    /// Natarajan, graph and Pollard dimensions.
    Dims { file: String },
    /// Sauer-Shelah and generalized Sauer audit.
    Audit {
        #[arg(long, default_value_t = 16)]
        samples: usize,
        file: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConstructOp {
    /// Rows of the Sylvester-Hadamard matrix of order 2^n.
    Hadamard {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<String>,
    },
    /// m x n matrix of fair random signs, accepted when max |<x,y>| <= gamma.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: f64,
        /// Rows; defaults to floor(exp(n gamma^2 / 4)).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 10)]
        max_attempts: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Random greedy eps-separated subset of the cube.
    Greedy {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 2000)]
        stall_limit: usize,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExperimentOp {
    /// Probability that two random members agree on a random r-subset of
    /// coordinates, with its lower and upper envelopes.
    Projection {
        #[arg(long)]
        r: usize,
        #[arg(long, conflicts_with = "trials")]
        exhaustive: bool,
        /// Monte Carlo trials instead of exhaustive enumeration.
        #[arg(long)]
        trials: Option<u64>,
        file: String,
    },
    /// 1.02*2^(-rH(d/r)) < 1/|F| + ((1+gamma)/2)^r for the family's d and gamma.
    KeyInequality {
        #[arg(long)]
        r: usize,
        file: String,
    },
    /// Collision probability after projecting onto fixed coordinates, against
    /// the Jensen and Sauer floors.
    Floor {
        /// Comma-separated zero-based coordinates.
        #[arg(long, value_delimiter = ',')]
        indices: Vec<usize>,
        file: String,
    },
    /// r* = ceil(beta(gamma) d) and its entropy check.
    Rstar {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        d: u64,
    },
    /// Randomized audit: collision envelopes, key inequality, Sauer and
    /// generalized Sauer bounds over a random corpus plus every nonempty
    /// subset of {-1,+1}^3.
    Audit {
        #[arg(long, default_value_t = 1000)]
        classes: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 32)]
        m_max: usize,
    },
    /// Random near-orthogonal classes with gamma = d^(-a), one row per (n, seed).
    Vclb {
        #[arg(long)]
        a: f64,
        /// Comma-separated dimensions.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Comma-separated seeds; defaults to --seed.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
    },
}

struct Ctx<'a> {
    cli: &'a Cli,
    stdin: &'a mut dyn Read,
    out: String,
    err: String,
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::Io(_) => 1,
        Error::BudgetExceeded(_) => 3,
        Error::TheoremViolation(_) => 4,
        _ => 2,
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        cli: &cli,
        stdin,
        out: String::new(),
        err: String::new(),
    };
    let code = match dispatch(&mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            code_of(&e)
        }
    };
    let _ = stdout.write_all(ctx.out.as_bytes());
    let _ = stderr.write_all(ctx.err.as_bytes());
    let _ = stdout.flush();
    code
}

fn dispatch(ctx: &mut Ctx) -> Result<i32> {
    let bits = ctx.cli.precision_bits;
    if !(16..=MAX_PRECISION_BITS * 16).contains(&bits) {
        return Err(Error::domain(format!(
            "precision {bits} bits outside [16, {}]",
            MAX_PRECISION_BITS * 16
        )));
    }
    match &ctx.cli.command {
        Command::Bounds(a) => cmd_bounds(ctx, a),
        Command::Compare(a) => {
            let grid = parse_grid(&a.grid)?;
            let table = bound_comparison_table(&grid, &a.d, a.n, &Bounds::new(bits));
            ctx.out.push_str(&table);
            Ok(0)
        }
        Command::Beta { gamma } => {
            let b = beta(*gamma)?;
            single(ctx, &[("gamma", *gamma), ("beta", b)]);
            Ok(0)
        }
        Command::Delta { gamma, k, wide } => {
            let domain = if *wide {
                DeltaDomain::Wide
            } else {
                DeltaDomain::Narrow
            };
            let d = delta_with(*gamma, *k, domain)?;
            single(ctx, &[("gamma", *gamma), ("k", *k as f64), ("delta", d)]);
            Ok(0)
        }
        Command::VerifyLemmas(a) => cmd_verify(ctx, a),
        Command::Family { op } => cmd_family(ctx, op),
        Command::Construct { op } => cmd_construct(ctx, op),
        Command::Experiment { op } => cmd_experiment(ctx, op),
        Command::Figures { which, grid } => {
            let default = if *which == 1 {
                FIGURE1_DEFAULT_GRID
            } else {
                FIGURE2_DEFAULT_GRID
            };
            let grid = parse_grid(grid.as_deref().unwrap_or(default))?;
            if *which == 1 {
                let rows = figure1_data(&grid)?;
                match ctx.cli.format {
                    Format::Json => push_json(ctx, &rows)?,
                    _ => ctx.out.push_str(&figure1_csv(&rows)),
                }
            } else {
                let rows = figure2_data(&grid)?;
                match ctx.cli.format {
                    Format::Json => push_json(ctx, &rows)?,
                    _ => ctx.out.push_str(&figure2_csv(&rows)),
                }
            }
            Ok(0)
        }
    }
}

fn push_json<T: Serialize + ?Sized>(ctx: &mut Ctx, v: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    ctx.out.push_str(&s);
    ctx.out.push('\n');
    Ok(())
}

/// Named scalar outputs; plain prints the last value alone.
fn single(ctx: &mut Ctx, fields: &[(&str, f64)]) {
    match ctx.cli.format {
        Format::Plain => {
            let _ = writeln!(ctx.out, "{:?}", fields[fields.len() - 1].1);
        }
        Format::Csv => {
            let names: Vec<&str> = fields.iter().map(|f| f.0).collect();
            let vals: Vec<String> = fields
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    if i + 1 == fields.len() {
                        fmt_sig(f.1)
                    } else {
                        fmt_coord(f.1)
                    }
                })
                .collect();
            let _ = writeln!(ctx.out, "{}\n{}", names.join(","), vals.join(","));
        }
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = fields
                .iter()
                .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
                .collect();
            let _ = writeln!(ctx.out, "{}", serde_json::Value::Object(map));
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || Error::domain(format!("'{s}' is not a rational p/q or decimal"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(p, q));
    }
    let t = s.trim();
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let den = 10i64.pow(frac.len() as u32);
    let whole: i64 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let part: i64 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let sign = if int.starts_with('-') { -1 } else { 1 };
    Ok(Rational64::new(whole * den + sign * part, den))
}

fn read_family(ctx: &mut Ctx, path: &str) -> Result<FunctionClass> {
    let text = if path == "-" {
        let mut s = String::new();
        ctx.stdin.read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?
    };
    parse_family(&text, false)
}

fn emit_family(ctx: &mut Ctx, f: &FunctionClass, out: &Option<String>) -> Result<()> {
    let text = write_family(f);
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{path}: {e}")))?,
        None => ctx.out.push_str(&text),
    }
    Ok(())
}

fn report_rows(ctx: &mut Ctx, reports: &[BoundReport]) -> Result<()> {
    match ctx.cli.format {
        Format::Json => push_json(ctx, reports)?,
        Format::Csv => {
            ctx.out
                .push_str("bound,value,log2_value,preconditions_met,notes\n");
            for r in reports {
                let _ = writeln!(
                    ctx.out,
                    "{},{},{},{},{}",
                    r.name.as_str(),
                    r.value_f64().map(fmt_sig).unwrap_or_default(),
                    r.log2_value().map(fmt_sig).unwrap_or_default(),
                    r.preconditions_met,
                    r.notes.join("; ").replace(',', ";"),
                );
            }
        }
        Format::Plain => {
            for r in reports {
                let v = match r.value_f64() {
                    Some(v) => fmt_sig(v),
                    None => "n/a".into(),
                };
                let _ = write!(ctx.out, "{}: {v}", r.name.as_str());
                if !r.notes.is_empty() {
                    let _ = write!(ctx.out, " ({})", r.notes.join("; "));
                }
                ctx.out.push('\n');
            }
        }
    }
    Ok(())
}

fn cmd_bounds(ctx: &mut Ctx, a: &BoundsArgs) -> Result<i32> {
    if !(a.gamma >= 0.0 && a.gamma < 1.0) {
        return Err(Error::domain(format!("gamma = {} outside [0, 1)", a.gamma)));
    }
    let b = Bounds::new(ctx.cli.precision_bits);
    let eps = gamma_to_eps(a.gamma);
    let mut reports = vec![
        b.haussler_upper(eps, a.d)?,
        b.entropy_rate_upper(a.gamma, a.d, a.n)?,
        b.haussler_lower(eps, a.d, a.n)?,
    ];
    if let Some(n) = a.n {
        reports.push(b.sauer_upper(n, a.d)?);
        reports.push(b.roth_seroussi(n, a.gamma)?);
        if let Some(k) = a.k {
            reports.push(b.kary_upper(a.gamma, k, a.d, n)?);
            reports.push(b.generalized_sauer(n, a.d, k)?);
        }
        if let Some(md) = a.min_dist {
            reports.push(b.gv_lower(n, md)?);
        }
    } else if a.k.is_some() || a.min_dist.is_some() {
        return Err(Error::precondition("--k and --min-dist need --n"));
    }
    report_rows(ctx, &reports)?;
    Ok(0)
}

fn parse_constant(s: &str) -> Result<num_rational::BigRational> {
    let q = parse_rational(s)?;
    if *q.numer() <= 0 {
        return Err(Error::domain("lemma constant must be positive"));
    }
    Ok(num_rational::BigRational::new(
        (*q.numer()).into(),
        (*q.denom()).into(),
    ))
}

fn cmd_verify(ctx: &mut Ctx, a: &VerifyArgs) -> Result<i32> {
    let mut opts = SweepOptions::default().with_precision(ctx.cli.precision_bits);
    let probing = a.constant.is_some() || a.kary_constant.is_some();
    if let Some(c) = &a.constant {
        opts.binary.constant = parse_constant(c)?;
    }
    if let Some(c) = &a.kary_constant {
        opts.kary.constant = parse_constant(c)?;
    }
    let report = lemma_sweep_with(a.n_max, &a.k, &opts)?;
    write_sweep(ctx, &report)?;
    if report.counterexamples() > 0 && !probing {
        let _ = writeln!(
            ctx.err,
            "error: {}",
            Error::TheoremViolation(format!(
                "{} lemma counterexamples",
                report.counterexamples()
            ))
        );
        return Ok(4);
    }
    let insufficient = report.binary.precision_insufficient
        + report
            .kary
            .iter()
            .map(|s| s.precision_insufficient)
            .sum::<usize>();
    if insufficient > 0 {
        let _ = writeln!(
            ctx.err,
            "error: {insufficient} checks undecided at the precision ceiling"
        );
        return Ok(3);
    }
    Ok(0)
}

fn write_sweep(ctx: &mut Ctx, r: &LemmaSweepReport) -> Result<()> {
    let rows: Vec<_> = std::iter::once(&r.binary).chain(&r.kary).collect();
    match ctx.cli.format {
        Format::Json => push_json(ctx, r)?,
        Format::Csv => {
            ctx.out.push_str("lemma,checks,verified,counterexamples,precision_insufficient,tightest_n,tightest_d,tightest_ratio\n");
            for s in rows {
                let (tn, td, tr) = s
                    .tightest
                    .as_ref()
                    .map(|t| (t.n.to_string(), t.d.to_string(), fmt_sig(t.ratio)))
                    .unwrap_or_default();
                let name =
                    s.k.map(|k| format!("k={k}"))
                        .unwrap_or_else(|| "binary".into());
                let _ = writeln!(
                    ctx.out,
                    "{name},{},{},{},{},{tn},{td},{tr}",
                    s.checks, s.verified, s.counterexamples, s.precision_insufficient
                );
            }
        }
        Format::Plain => {
            for s in rows {
                let name =
                    s.k.map(|k| format!("k={k}"))
                        .unwrap_or_else(|| "binary".into());
                let _ = write!(
                    ctx.out,
                    "{name}: {} checks, {} verified, {} counterexamples, {} undecided",
                    s.checks, s.verified, s.counterexamples, s.precision_insufficient
                );
                if let Some(t) = &s.tightest {
                    let _ = write!(
                        ctx.out,
                        "; tightest (n={}, d={}) ratio {}",
                        t.n,
                        t.d,
                        fmt_sig(t.ratio)
                    );
                }
                ctx.out.push('\n');
                for f in &s.failures {
                    let _ = writeln!(ctx.out, "  {:?} at n={} d={}", f.verdict, f.n, f.d);
                }
            }
            let _ = writeln!(
                ctx.out,
                "result: {}",
                if r.all_verified() {
                    "Verified"
                } else {
                    "NOT verified"
                }
            );
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct FamilyStats {
    k: u32,
    n: usize,
    m: usize,
    min_disagreements: Option<usize>,
    max_disagreements: Option<usize>,
    gamma: String,
    vc_dimension: Option<String>,
    natarajan: String,
    graph: String,
    pollard: String,
}

fn range_text(lo: usize, hi: usize) -> String {
    if lo == hi {
        lo.to_string()
    } else {
        format!("[{lo}, {hi}]")
    }
}

fn gamma_text(f: &FunctionClass) -> Result<String> {
    let g = if f.is_binary() {
        gamma_orth(f)?
    } else {
        gamma_orth_k(f)
    };
    Ok(g.to_string())
}

fn cmd_family(ctx: &mut Ctx, op: &FamilyOp) -> Result<i32> {
    let budget = Some(ctx.cli.budget);
    match op {
        FamilyOp::Stats { file } => {
            let f = read_family(ctx, file)?;
            let dims: Vec<String> = GeneralizedDimension::ALL
                .iter()
                .map(|&kind| {
                    let r = generalized_dimension(&f, kind, budget);
                    range_text(r.lower, r.upper)
                })
                .collect();
            let vc = if f.is_binary() {
                let r = vc_dimension_bounded(&f, budget)?;
                Some(range_text(r.lower, r.upper))
            } else {
                None
            };
            let range = f.disagreement_range();
            let s = FamilyStats {
                k: f.k(),
                n: f.n(),
                m: f.len(),
                min_disagreements: range.map(|r| r.0),
                max_disagreements: range.map(|r| r.1),
                gamma: gamma_text(&f)?,
                vc_dimension: vc,
                natarajan: dims[0].clone(),
                graph: dims[1].clone(),
                pollard: dims[2].clone(),
            };
            kv_output(ctx, &s)?;
        }
        FamilyOp::Vcdim { file } => {
            let f = read_family(ctx, file)?;
            let r = vc_dimension_bounded(&f, budget)?;
            match ctx.cli.format {
                Format::Json => push_json(ctx, &r)?,
                Format::Csv => {
                    let _ = writeln!(ctx.out, "lower,upper\n{},{}", r.lower, r.upper);
                }
                Format::Plain => {
                    let _ = writeln!(ctx.out, "{}", range_text(r.lower, r.upper));
                }
            }
            if r.lower != r.upper {
                let _ = writeln!(
                    ctx.err,
                    "search budget reached: dimension in [{}, {}]",
                    r.lower, r.upper
                );
                return Ok(3);
            }
        }
        FamilyOp::Gamma { file } => {
            let f = read_family(ctx, file)?;
            let g = gamma_text(&f)?;
            match ctx.cli.format {
                Format::Json => push_json(ctx, &serde_json::json!({ "gamma": g }))?,
                Format::Csv => {
                    let _ = writeln!(ctx.out, "gamma\n{g}");
                }
                Format::Plain => {
                    let _ = writeln!(ctx.out, "{g}");
                }
            }
        }
        FamilyOp::Packing { eps, file } => {
            let eps = parse_rational(eps)?;
            let f = read_family(ctx, file)?;
            let p = packing_number_bounded(&f, eps, budget)?;
            match ctx.cli.format {
                Format::Json => push_json(ctx, &p)?,
                Format::Csv => {
                    let w: Vec<String> = p.witness.iter().map(|i| i.to_string()).collect();
                    let _ = writeln!(
                        ctx.out,
                        "eps,size,exact,witness\n{},{},{},{}",
                        p.eps,
                        p.size,
                        p.exact,
                        w.join(" ")
                    );
                }
                Format::Plain => {
                    let w: Vec<String> = p.witness.iter().map(|i| i.to_string()).collect();
                    let _ = writeln!(ctx.out, "{}\nwitness: {}", p.size, w.join(" "));
                }
            }
            if !p.exact {
                let _ = writeln!(
                    ctx.err,
                    "search budget reached: packing number >= {}",
                    p.size
                );
                return Ok(3);
            }
        }
        FamilyOp::Dims { file } => {
            let f = read_family(ctx, file)?;
            let mut rows = Vec::new();
            for kind in GeneralizedDimension::ALL {
                let r = generalized_dimension(&f, kind, budget);
                rows.push((kind.name(), r));
            }
            match ctx.cli.format {
                Format::Json => {
                    let m: serde_json::Map<String, serde_json::Value> = rows
                        .iter()
                        .map(|(k, r)| (k.to_string(), serde_json::to_value(r).unwrap_or_default()))
                        .collect();
                    push_json(ctx, &m)?;
                }
                Format::Csv => {
                    ctx.out.push_str("dimension,lower,upper\n");
                    for (k, r) in &rows {
                        let _ = writeln!(ctx.out, "{k},{},{}", r.lower, r.upper);
                    }
                }
                Format::Plain => {
                    for (k, r) in &rows {
                        let _ = writeln!(ctx.out, "{k}: {}", range_text(r.lower, r.upper));
                    }
                }
            }
        }
        FamilyOp::Audit { samples, file } => {
            let f = read_family(ctx, file)?;
            let opts = AuditOptions {
                samples: *samples,
                seed: ctx.cli.seed,
                dimension_budget: budget,
            };
            let a = sauer_audit_with(&f, &opts)?;
            match ctx.cli.format {
                Format::Json => push_json(ctx, &a)?,
                _ => {
                    let _ = writeln!(ctx.out, "checks: {}\npassed: {}", a.checks, a.passed);
                    for c in &a.generalized {
                        let _ = writeln!(
                            ctx.out,
                            "{}: dimension {}, |F| = {} <= {}: {}",
                            c.kind, c.dimension, c.size, c.bound, c.holds
                        );
                    }
                }
            }
            if let Some(v) = &a.violation {
                // the k^i sum is a theorem for the binary, graph and Pollard cases
                if v.kind != GeneralizedDimension::Natarajan.name() {
                    let _ = writeln!(
                        ctx.err,
                        "error: {}",
                        Error::TheoremViolation(format!(
                            "{} bound: {} > {}",
                            v.kind, v.size, v.bound
                        ))
                    );
                    return Ok(4);
                }
            }
        }
    }
    Ok(0)
}

fn kv_output<T: Serialize>(ctx: &mut Ctx, v: &T) -> Result<()> {
    let value = serde_json::to_value(v).map_err(|e| Error::Io(e.to_string()))?;
    match ctx.cli.format {
        Format::Json => push_json(ctx, &value)?,
        Format::Csv | Format::Plain => {
            let obj = value.as_object().cloned().unwrap_or_default();
            let text = |v: &serde_json::Value| match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Null => String::new(),
                other => other.to_string(),
            };
            if ctx.cli.format == Format::Csv {
                let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
                let vals: Vec<String> = obj.values().map(|v| text(v).replace(',', ";")).collect();
                let _ = writeln!(ctx.out, "{}\n{}", keys.join(","), vals.join(","));
            } else {
                for (k, v) in &obj {
                    let _ = writeln!(ctx.out, "{k}: {}", text(v));
                }
            }
        }
    }
    Ok(())
}

fn cmd_construct(ctx: &mut Ctx, op: &ConstructOp) -> Result<i32> {
    match op {
        ConstructOp::Hadamard { n, out } => {
            let h = sylvester_hadamard(*n)?;
            emit_family(ctx, &h, out)?;
        }
        ConstructOp::Random {
            n,
            gamma,
            m,
            max_attempts,
            out,
        } => {
            let mut spec =
                RandomFamilySpec::new(*n, *gamma, ctx.cli.seed).with_max_attempts(*max_attempts);
            spec.dimension_budget = Some(ctx.cli.budget.min(1_000_000));
            if let Some(m) = m {
                spec = spec.with_m_target(*m);
            }
            let rep = random_orthogonal_family(&spec)?;
            match &rep.family {
                Some(fam) => {
                    let _ = writeln!(
                        ctx.err,
                        "accepted: attempt {} of {}, m = {}, gamma_orth = {}, vc dimension {}",
                        fam.attempt + 1,
                        spec.max_attempts,
                        fam.class.len(),
                        fam.gamma_measured,
                        range_text(fam.vc.lower, fam.vc.upper)
                    );
                    emit_family(ctx, &fam.class, out)?;
                }
                None => {
                    let _ = writeln!(
                        ctx.err,
                        "error: no acceptable family in {} attempts ({} with repeated rows, {} above gamma)",
                        rep.stats.attempts, rep.stats.duplicate_rejections, rep.stats.gamma_rejections
                    );
                    return Ok(3);
                }
            }
        }
        ConstructOp::Greedy {
            n,
            eps,
            stall_limit,
            out,
        } => {
            let eps = parse_rational(eps)?;
            let opts = GreedyOptions {
                stall_limit: *stall_limit,
                ..GreedyOptions::default()
            };
            let f = greedy_packing(*n, eps, ctx.cli.seed, &opts)?;
            emit_family(ctx, &f, out)?;
        }
    }
    Ok(0)
}

fn audit_lines(ctx: &mut Ctx, name: &str, s: &AuditSummary) {
    let _ = writeln!(
        ctx.out,
        "{name}: {} classes, {} checks, {} violations",
        s.classes,
        s.checks,
        s.violations.len()
    );
    for v in &s.violations {
        let _ = writeln!(
            ctx.out,
            "  class {} {}: {}",
            v.class_index, v.check, v.detail
        );
    }
}

fn cmd_experiment(ctx: &mut Ctx, op: &ExperimentOp) -> Result<i32> {
    match op {
        ExperimentOp::Projection {
            r,
            exhaustive: _,
            trials,
            file,
        } => {
            let f = read_family(ctx, file)?;
            let mode = match trials {
                Some(t) => CollisionMode::Sampled {
                    trials: *t,
                    seed: ctx.cli.seed,
                },
                None => CollisionMode::Exhaustive {
                    budget: ctx.cli.budget,
                },
            };
            let s = projection_collision(&f, *r, mode)?;
            kv_output(ctx, &s)?;
            if !s.in_range {
                let _ = writeln!(
                    ctx.err,
                    "warning: r = {} outside [2d, n] with d = {}",
                    s.r, s.d
                );
            }
            if s.within_envelopes == Some(false) {
                let _ = writeln!(
                    ctx.err,
                    "error: {}",
                    Error::TheoremViolation("collision probability outside its envelopes".into())
                );
                return Ok(4);
            }
        }
        ExperimentOp::KeyInequality { r, file } => {
            let f = read_family(ctx, file)?;
            let k = key_inequality_check(&f, *r)?;
            kv_output(ctx, &k)?;
            if !k.holds {
                let _ = writeln!(
                    ctx.err,
                    "error: {}",
                    Error::TheoremViolation("key inequality failed".into())
                );
                return Ok(4);
            }
        }
        ExperimentOp::Floor { indices, file } => {
            let f = read_family(ctx, file)?;
            let c = collision_floor_check(&f, indices)?;
            kv_output(ctx, &c)?;
            if !c.holds {
                let _ = writeln!(
                    ctx.err,
                    "error: {}",
                    Error::TheoremViolation("collision floor failed".into())
                );
                return Ok(4);
            }
        }
        ExperimentOp::Rstar { gamma, d } => {
            let r = rstar_choice_with(*gamma, *d, ctx.cli.precision_bits)?;
            kv_output(ctx, &r)?;
            if !r.holds {
                let _ = writeln!(
                    ctx.err,
                    "error: {}",
                    Error::TheoremViolation("r* entropy check failed".into())
                );
                return Ok(4);
            }
        }
        ExperimentOp::Audit {
            classes,
            n_max,
            m_max,
        } => {
            let seed = ctx.cli.seed;
            let corpus = random_corpus(*classes, *n_max, *m_max, seed)?;
            let mechanics = proof_mechanics_audit(&corpus, ctx.cli.budget)?;
            let mut all = corpus;
            all.extend(cube3_subsets());
            let sauer = sauer_corpus_audit(&all, 16, seed)?;
            match ctx.cli.format {
                Format::Json => push_json(
                    ctx,
                    &serde_json::json!({ "proof_mechanics": mechanics, "sauer": sauer }),
                )?,
                _ => {
                    audit_lines(ctx, "proof mechanics", &mechanics);
                    audit_lines(ctx, "sauer", &sauer);
                }
            }
            if !(mechanics.passed() && sauer.passed()) {
                let n = mechanics.violations.len() + sauer.violations.len();
                let _ = writeln!(
                    ctx.err,
                    "error: {}",
                    Error::TheoremViolation(format!("{n} audit violations"))
                );
                return Ok(4);
            }
        }
        ExperimentOp::Vclb { a, n, seeds } => {
            let seeds = if seeds.is_empty() {
                vec![ctx.cli.seed]
            } else {
                seeds.clone()
            };
            let opts = VclbOptions {
                dimension_budget: Some(ctx.cli.budget.min(200_000)),
                ..VclbOptions::default()
            };
            let rows = vclb_curve(*a, n, &seeds, &opts)?;
            match ctx.cli.format {
                Format::Json => push_json(ctx, &rows)?,
                _ => ctx.out.push_str(&vclb_csv(&rows)),
            }
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], input: &str) -> (i32, String, String) {
        let mut stdin = input.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("vcpack").chain(args.iter().copied());
        let code = run(argv, &mut stdin, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/2").unwrap(), Rational64::new(1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), Rational64::new(1, 4));
        assert_eq!(parse_rational("1").unwrap(), Rational64::new(1, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn beta_plain() {
        assert_eq!(
            call(&["beta", "--gamma", "0"], ""),
            (0, "2.0\n".into(), String::new())
        );
        let (code, _, err) = call(&["beta", "--gamma", "1"], "");
        assert_eq!(code, 2);
        assert!(err.contains("divergent"));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(call(&["nonsense"], "").0, 1);
        assert_eq!(call(&["figures", "--which", "3"], "").0, 1);
        assert_eq!(call(&["--help"], "").0, 0);
    }

    #[test]
    fn hadamard_pipeline() {
        let (code, text, _) = call(&["construct", "hadamard", "--n", "2"], "");
        assert_eq!(code, 0);
        assert_eq!(
            call(&["family", "vcdim", "-"], &text),
            (0, "2\n".into(), String::new())
        );
        assert_eq!(call(&["family", "gamma", "-"], &text).1, "0\n");
        assert!(call(&["family", "packing", "--eps", "1/2", "-"], &text)
            .1
            .starts_with("4\n"));
    }

    #[test]
    fn figures_csv() {
        let (code, out, _) = call(&["figures", "--which", "2", "--grid", "0:0.05:0.25"], "");
        assert_eq!(code, 0);
        assert!(out.starts_with("gamma,beta\n0,2.0"));
        assert_eq!(out.lines().count(), 7);
    }

    #[test]
    fn precondition_exit_code() {
        let (code, _, _) = call(&["construct", "hadamard", "--n", "2"], "");
        assert_eq!(code, 0);
        let cube = "2 2 4\n0 0\n0 1\n1 0\n1 1\n";
        assert_eq!(
            call(&["experiment", "key-inequality", "--r", "2", "-"], cube).0,
            2
        );
        assert_eq!(call(&["family", "vcdim", "-"], "2 2 1\n0 3\n").0, 2);
    }

    #[test]
    fn lemma_counterexample_is_only_fatal_for_the_proven_constant() {
        assert_eq!(call(&["verify-lemmas", "--n-max", "12"], "").0, 0);
        assert_eq!(
            call(&["verify-lemmas", "--n-max", "12", "--constant", "1/2"], "").0,
            0
        );
    }
}
