//! Command-line driver behind the `bipp` binary.
//!
//! Every number in the output is an exact decimal integer or `p/q` string.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::cache;
use crate::complexity::{
    expected_bounds, expected_boxes, lambda_upper_bound, observed_generations, simulate_branching, ComplexityInput, MAX_EXACT_K,
};
use crate::error::{Error, Result};
use crate::index::{MultiDegree, MultiIndex};
use crate::oracle::brute_force;
use crate::parse::parse_user_problem;
use crate::problem::{canonicalize, initial_system, CanonicalProblem};
use crate::rational::{parse_rational, Integer, Rational, Theta};
use crate::solver::{solve, solve_parallel, solve_raw, SolveOutcome, SolverConfig};
use crate::subdivision::{Side, SubdivisionBasis};

/// Environment variable holding the largest per-axis degree accepted without
/// an explicit `--degree`.
pub const DEGREE_CAP_ENV: &str = "BERNSTEIN_IPP_DEGREE_CAP";
pub const DEFAULT_DEGREE_CAP: u32 = 64;

#[derive(Debug, Parser)]
#[command(name = "bipp", version, about = "Exact integer polynomial programming by Bernstein subdivision")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a problem file and print the result as JSON.
    Solve {
        file: PathBuf,
        /// Bernstein multi-degree, e.g. 2,1. Defaults to the system's multi-degree.
        #[arg(long, value_delimiter = ',')]
        degree: Option<Vec<u32>>,
        /// Add per-generation box counts and complexity estimates.
        #[arg(long)]
        stats: bool,
        /// Write one JSON record per visited box to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Treat every bound [a,b] as the dyadic box [a, a+2^k] without padding.
        #[arg(long)]
        raw_box: bool,
        /// Worker threads; results are identical, counters may vary.
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Solve a problem file and compare against exhaustive enumeration.
    Check {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        degree: Option<Vec<u32>>,
    },
    /// Expected number of boxes for complexity number LAMBDA and K = sum k_i.
    Expect {
        #[arg(long)]
        lambda: String,
        #[arg(long = "K")]
        k: u32,
        /// Number of branching-process trials to simulate.
        #[arg(long)]
        simulate: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print or store the halving matrices for a multi-degree.
    Matrices {
        #[arg(long, value_delimiter = ',', required = true)]
        degree: Vec<u32>,
        /// Write the binary basis file here instead of printing JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs the driver on `args` (program name first) and returns the exit code:
/// 0 on success, 1 when `check` finds a mismatch, 2 on any error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Solve { file, degree, stats, trace, raw_box, threads } => {
            let cp = load(&file, raw_box)?;
            let d = choose_degree(&cp, degree)?;
            let config = SolverConfig { trace: stats || trace.is_some(), ..Default::default() };
            let outcome = if raw_box {
                let system = initial_system(&cp, &d)?;
                let mut o = solve_raw(&cp.anchor, &cp.exponents, &system, &config)?;
                o.theta = o.internal_theta.finite().map(|t| cp.theta_transform.to_user(t));
                o
            } else if threads > 1 {
                solve_parallel(&cp, &d, &config, threads)?
            } else {
                solve(&cp, &d, &config)?
            };
            if let Some(path) = trace {
                let mut buf = String::new();
                for record in &outcome.trace {
                    buf.push_str(&serde_json::to_string(record).expect("trace record serializes"));
                    buf.push('\n');
                }
                fs::write(path, buf)?;
            }
            let mut result = outcome_json(&outcome);
            if stats {
                result["stats"] = stats_json(&cp, &d, &outcome)?;
            }
            print_json(out, &result)?;
            Ok(0)
        }
        Command::Check { file, degree } => {
            let cp = load(&file, false)?;
            let d = choose_degree(&cp, degree)?;
            let solved = solve(&cp, &d, &SolverConfig::default())?;
            let oracle = brute_force(&cp)?;
            if solved.theta == oracle.theta && solved.solutions == oracle.solutions {
                writeln!(out, "MATCH")?;
                Ok(0)
            } else {
                let diff = json!({
                    "mismatch": true,
                    "solver": { "theta": opt_rational(&solved.theta), "solutions": solutions_json(&solved.solutions) },
                    "oracle": {
                        "theta": opt_rational(&oracle.theta),
                        "solutions": solutions_json(&oracle.solutions),
                        "pointsScanned": oracle.points_scanned,
                    },
                });
                print_json(out, &diff)?;
                Ok(1)
            }
        }
        Command::Expect { lambda, k, simulate, seed } => {
            let ci = ComplexityInput::new(parse_rational(&lambda)?, k)?;
            let (lo, hi) = expected_bounds(&ci);
            let mut result = json!({
                "lambda": ci.lambda().to_string(),
                "K": k,
                "expectedBoxes": expected_boxes(&ci).to_string(),
                "bounds": [lo.to_string(), hi.to_string()],
                "generationLambdas": ci.generation_lambdas().iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            });
            if let Some(trials) = simulate {
                let s = simulate_branching(&ci, trials, seed)?;
                result["simulation"] = json!({
                    "trials": s.trials,
                    "seed": s.seed,
                    "mean": s.mean.to_string(),
                    "variance": s.variance.to_string(),
                    "min": s.min,
                    "max": s.max,
                    "within3StandardErrors": s.within_standard_errors(&expected_boxes(&ci), 3),
                });
            }
            print_json(out, &result)?;
            Ok(0)
        }
        Command::Matrices { degree, out: path } => {
            let basis = SubdivisionBasis::new(&MultiDegree::new(degree));
            match path {
                Some(p) => cache::write_file(&basis, &p)?,
                None => print_json(out, &basis_json(&basis))?,
            }
            Ok(0)
        }
    }
}

fn load(file: &PathBuf, raw_box: bool) -> Result<CanonicalProblem> {
    let text = fs::read_to_string(file).map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
    let up = parse_user_problem(&text)?;
    let cp = canonicalize(&up)?;
    if !raw_box {
        return Ok(cp);
    }
    // anchor a, side 2^k, no padding: the leaves' lower corners are exactly the candidates
    let mut k = Vec::with_capacity(up.nvars());
    for (name, b) in up.var_names.iter().zip(&up.bounds) {
        let (lo, hi) = (b.lo.clone().unwrap_or_default(), b.hi.clone().unwrap_or_default());
        let width = &hi - &lo;
        let not_dyadic = || Error::NotDyadic { name: name.clone(), lo: lo.to_string(), hi: hi.to_string() };
        if !width.is_positive() || !(&width & (&width - BigInt::one())).is_zero() {
            return Err(not_dyadic());
        }
        k.push(width.bits() as u32 - 1);
    }
    let mut raw = CanonicalProblem::on_dyadic_box(cp.var_names.clone(), cp.q.clone(), cp.anchor.clone(), MultiIndex::new(k))?;
    raw.theta_transform = cp.theta_transform;
    Ok(raw)
}

fn choose_degree(cp: &CanonicalProblem, requested: Option<Vec<u32>>) -> Result<MultiDegree> {
    match requested {
        Some(d) => {
            let d = MultiDegree::new(d);
            d.check_nvars(cp.nvars())?;
            Ok(d)
        }
        None => {
            let d = cp.default_degree();
            let cap = degree_cap()?;
            if let Some((axis, &degree)) = d.as_slice().iter().enumerate().find(|(_, &di)| di > cap) {
                return Err(Error::DegreeCapExceeded { axis, degree, cap });
            }
            Ok(d)
        }
    }
}

fn degree_cap() -> Result<u32> {
    match std::env::var(DEGREE_CAP_ENV) {
        Ok(v) => {
            v.trim().parse().map_err(|_| Error::InvalidArgument(format!("{DEGREE_CAP_ENV} must be a non-negative integer, got {v:?}")))
        }
        Err(_) => Ok(DEFAULT_DEGREE_CAP),
    }
}

fn outcome_json(o: &SolveOutcome) -> Value {
    json!({
        "status": o.status,
        "theta": opt_rational(&o.theta),
        "solutions": solutions_json(&o.solutions),
        "counters": o.counters,
    })
}

fn stats_json(cp: &CanonicalProblem, d: &MultiDegree, o: &SolveOutcome) -> Result<Value> {
    let k_total = cp.total_exponent();
    let theta = match &o.theta {
        Some(t) => Theta::Finite(t.clone()),
        None => Theta::NegInfinity,
    };
    let lambda = lambda_upper_bound(cp, &theta, d)?;
    let mut stats = json!({
        "degree": d.as_slice(),
        "K": k_total,
        "observedBoxesPerGeneration": observed_generations(&o.trace, k_total),
        "lambdaEstimate": lambda.to_string(),
        "expectedBoxes": Value::Null,
        "expectedBounds": Value::Null,
    });
    if k_total <= MAX_EXACT_K as u64 {
        let ci = ComplexityInput::new(lambda, k_total as u32)?;
        let (lo, hi) = expected_bounds(&ci);
        stats["expectedBoxes"] = json!(expected_boxes(&ci).to_string());
        stats["expectedBounds"] = json!([lo.to_string(), hi.to_string()]);
    }
    Ok(stats)
}

fn basis_json(basis: &SubdivisionBasis) -> Value {
    let matrix = |axis, side| -> Vec<Vec<String>> {
        basis.factor(axis, side).to_rows().into_iter().map(|row| row.iter().map(Rational::to_string).collect()).collect()
    };
    let axes: Vec<Value> =
        (0..basis.degree().nvars()).map(|axis| json!({ "left": matrix(axis, Side::Left), "right": matrix(axis, Side::Right) })).collect();
    json!({ "degree": basis.degree().as_slice(), "axes": axes })
}

fn opt_rational(v: &Option<Rational>) -> Value {
    v.as_ref().map_or(Value::Null, |t| json!(t.to_string()))
}

fn solutions_json(s: &std::collections::BTreeSet<Vec<Integer>>) -> Value {
    json!(s.iter().map(|z| z.iter().map(Integer::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json value serializes"))?;
    Ok(())
}

/// Convenience wrapper for tests and examples: runs with captured output.
pub fn run_captured<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(args, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}
