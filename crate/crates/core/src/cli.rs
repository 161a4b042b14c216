//! Command-line front end. Exit codes: 0 success, 1 a mathematical check
//! failed (or a computation raised an error), 2 usage error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{self, EntryReport};
use crate::classify;
use crate::error::{Error, Result};
use crate::forms::FormId;
use crate::frobenius;
use crate::json;
use crate::numeric::{self, EvalConfig};
use crate::qseries::{Exponent, QSeries};
use crate::schwarzian::verify_schwarz_eq;
use crate::selftest;

#[derive(Parser, Debug)]
#[command(
    name = "modschwarz",
    version,
    about = "Exact q-expansions and the Schwarzian equation {h, tau} = s E4"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the q-expansion of a form below a given order.
    Expand {
        #[arg(long)]
        form: FormId,
        #[arg(long, default_value = "10")]
        order: Exponent,
    },
    /// Check sigma(h) = -(r^2/2) E4 for a form or a catalog entry.
    SchwarzCheck(SchwarzArgs),
    /// Frobenius solution of D^2 y = (r^2/4) E4 y at the cusp.
    Frobenius {
        #[arg(long)]
        r: Ratio<i64>,
        #[arg(long, default_value_t = frobenius::DEFAULT_TERMS)]
        terms: usize,
        /// Logarithmic second solution (integral r).
        #[arg(long)]
        log: bool,
        /// Use the smaller indicial root -r/2 instead of r/2.
        #[arg(long, conflicts_with = "log")]
        small_root: bool,
    },
    /// Verify catalog entries (all of them unless --entry is given).
    VerifyCatalog {
        #[arg(long, value_parser = parse_triple)]
        entry: Option<(i64, i64, i64)>,
        #[arg(long, default_value = "8")]
        order: Exponent,
    },
    /// Admissibility of s = 2 pi^2 r^2.
    Classify {
        #[arg(long, required_unless_present = "list_degree1")]
        r: Option<Ratio<i64>>,
        #[arg(long, conflicts_with = "r")]
        list_degree1: bool,
    },
    /// Evaluate a form numerically at tau.
    Eval {
        #[arg(long)]
        form: FormId,
        #[arg(long, value_parser = parse_tau, allow_hyphen_values = true)]
        tau: Complex64,
        /// Exact expansion order used before evaluation.
        #[arg(long, default_value = "40")]
        order: Exponent,
        #[arg(long, default_value_t = EvalConfig::default().terms)]
        terms: usize,
    },
    /// Check the transformation laws of lambda or of the (2,3,4) solution.
    Laws {
        #[arg(long, value_enum)]
        which: Which,
        /// Defaults to the three built-in sample points.
        #[arg(long, value_parser = parse_tau, allow_hyphen_values = true)]
        tau: Option<Complex64>,
        #[arg(long, default_value_t = EvalConfig::default().tol)]
        tol: f64,
        #[arg(long, default_value_t = EvalConfig::default().terms)]
        terms: usize,
    },
    /// Run the full verification battery.
    Selftest {
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct SchwarzArgs {
    #[arg(long, required_unless_present = "entry", conflicts_with = "entry")]
    form: Option<FormId>,
    #[arg(long, value_parser = parse_triple)]
    entry: Option<(i64, i64, i64)>,
    /// Required with --form; defaults to n/m with --entry.
    #[arg(long)]
    r: Option<Ratio<i64>>,
    #[arg(long, default_value = "10")]
    order: Exponent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    Lambda,
    H234,
}

fn parse_triple(s: &str) -> std::result::Result<(i64, i64, i64), String> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match parts[..] {
        [m, n, d] => Ok((m, n, d)),
        _ => Err(format!("expected m,n,d, got {s:?}")),
    }
}

fn parse_tau(s: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected a,b, got {s:?}"))?;
    let re: f64 = re.trim().parse().map_err(|e| format!("{re:?}: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("{im:?}: {e}"))?;
    Ok(Complex64::new(re, im))
}

/// What a subcommand produced: a JSON value, a text rendering and whether
/// every check passed.
struct Outcome {
    json: serde_json::Value,
    text: String,
    ok: bool,
}

impl Outcome {
    fn new<T: Serialize>(value: &T, text: String, ok: bool) -> Outcome {
        Outcome {
            json: serde_json::to_value(value).expect("reports serialize"),
            text,
            ok,
        }
    }
}

/// Parse `args` (including the program name) and execute. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(outcome) => {
            let written = match cli.format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&outcome.json).expect("json values print")
                ),
                Format::Text => write!(out, "{}", outcome.text),
            };
            if written.is_err() {
                return 1;
            }
            if outcome.ok {
                0
            } else {
                1
            }
        }
        Err(Error::InvalidArgument(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Expand { form, order } => {
            let s = form.expand(order);
            Ok(Outcome::new(&s, format!("{form} = {s}\n"), true))
        }
        Command::SchwarzCheck(args) => schwarz_check(args),
        Command::Frobenius {
            r,
            terms,
            log,
            small_root,
        } => frobenius_cmd(r, terms, log, small_root),
        Command::VerifyCatalog { entry, order } => verify_catalog(entry, order),
        Command::Classify { r, list_degree1 } => {
            if list_degree1 {
                let levels = classify::degree1_levels();
                let text = levels
                    .iter()
                    .map(|(m, nu)| format!("m = {m}  nu_inf = {nu}\n"))
                    .collect();
                return Ok(Outcome::new(&levels, text, true));
            }
            let r = r.expect("clap enforces --r");
            if r < Ratio::from_integer(0) {
                return Err(Error::InvalidArgument(format!("r must be >= 0, got {r}")));
            }
            let a = classify::admissible(r);
            let text = format!(
                "r = {r}: {} ({:?})\n",
                if a.admissible {
                    "admissible"
                } else {
                    "not admissible"
                },
                a.reason
            );
            Ok(Outcome::new(&a, text, true))
        }
        Command::Eval {
            form,
            tau,
            order,
            terms,
        } => {
            let cfg = EvalConfig {
                terms,
                ..EvalConfig::default()
            };
            cfg.validate()?;
            let e = numeric::eval_series(&form.expand(order), tau, &cfg)?;
            #[derive(Serialize)]
            struct EvalOut {
                form: FormId,
                #[serde(serialize_with = "numeric::complex_pair")]
                tau: Complex64,
                #[serde(flatten)]
                eval: numeric::Evaluation,
            }
            let text = format!("{form}({tau}) = {} (tail {:.3e})\n", e.value, e.tail);
            Ok(Outcome::new(&EvalOut { form, tau, eval: e }, text, true))
        }
        Command::Laws {
            which,
            tau,
            tol,
            terms,
        } => {
            let cfg = EvalConfig {
                terms,
                tol,
                ..EvalConfig::default()
            };
            cfg.validate()?;
            let points = match tau {
                Some(t) => vec![t],
                None => numeric::sample_points(),
            };
            let reports = points
                .into_iter()
                .map(|t| match which {
                    Which::Lambda => numeric::lambda_laws(t, &cfg),
                    Which::H234 => numeric::h_laws(t, &cfg),
                })
                .collect::<Result<Vec<_>>>()?;
            let mut text = String::new();
            for rep in &reports {
                text += &format!("tau = {}\n", rep.tau);
                for c in &rep.checks {
                    text += &format!(
                        "  {:<4} {:.3e}  {}\n",
                        if c.ok { "ok" } else { "FAIL" },
                        c.deviation,
                        c.name
                    );
                }
            }
            let ok = reports.iter().all(|r| r.ok);
            Ok(Outcome::new(&reports, text, ok))
        }
        Command::Selftest { jobs } => {
            if jobs == Some(0) {
                return Err(Error::InvalidArgument("--jobs must be positive".into()));
            }
            let results = selftest::run(jobs)?;
            let passed = results.iter().filter(|c| c.ok).count();
            let mut text = String::new();
            for c in &results {
                let line = format!(
                    "{:<4} {}  {}",
                    if c.ok { "ok" } else { "FAIL" },
                    c.name,
                    c.detail
                );
                text += line.trim_end();
                text.push('\n');
            }
            text += &format!("{passed}/{} checks passed\n", results.len());
            #[derive(Serialize)]
            struct Summary<'a> {
                passed: usize,
                total: usize,
                checks: &'a [selftest::CheckResult],
            }
            let summary = Summary {
                passed,
                total: results.len(),
                checks: &results,
            };
            Ok(Outcome::new(&summary, text, passed == results.len()))
        }
    }
}

/// Expand `build` at increasing orders until the Schwarzian is justified
/// through `order`.
fn expand_for_schwarzian(
    build: impl Fn(Exponent) -> Result<QSeries>,
    order: Exponent,
) -> Result<QSeries> {
    let mut inner = order + Exponent::integer(1);
    for _ in 0..64 {
        let h = build(inner)?;
        let val = h.valuation().ok_or(Error::ZeroSeries)?;
        if h.trunc() - val >= order {
            return Ok(h);
        }
        inner = inner + Exponent::integer(1);
    }
    Err(Error::InsufficientPrecision {
        requested: order,
        available: inner,
    })
}

fn schwarz_check(args: SchwarzArgs) -> Result<Outcome> {
    let (h, r, label) = match (args.form, args.entry) {
        (Some(form), None) => {
            let r = args
                .r
                .ok_or_else(|| Error::InvalidArgument("--r is required with --form".into()))?;
            let h = expand_for_schwarzian(|o| Ok(form.expand(o)), args.order)?;
            (h, r, form.to_string())
        }
        (None, Some((m, n, d))) => {
            let e = catalog::find(m, n, d).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            let h = expand_for_schwarzian(|o| catalog::build_h(&e, o), args.order)?;
            (h, args.r.unwrap_or(e.r()), format!("entry ({m},{n},{d})"))
        }
        _ => unreachable!("clap enforces exactly one of --form and --entry"),
    };
    let rep = verify_schwarz_eq(&h, r, Some(args.order))?;
    let text = format!(
        "{label}, r = {r}: {} through q^{}\n",
        if rep.ok { "ok" } else { "FAIL" },
        rep.checked_order
    );
    let ok = rep.ok;
    Ok(Outcome::new(&rep, text, ok))
}

#[derive(Serialize)]
struct FrobeniusOut {
    #[serde(serialize_with = "json::ratio_str")]
    rho: Ratio<i64>,
    #[serde(serialize_with = "json::rat_vec_str")]
    coeffs: Vec<crate::qseries::Rat>,
    #[serde(serialize_with = "json::rat_str")]
    log_coeff: crate::qseries::Rat,
    #[serde(serialize_with = "json::exponent_str")]
    residual_order: Exponent,
    residual_zero: bool,
}

fn frobenius_cmd(r: Ratio<i64>, terms: usize, log: bool, small_root: bool) -> Result<Outcome> {
    if r < Ratio::from_integer(0) {
        return Err(Error::InvalidArgument(format!("r must be >= 0, got {r}")));
    }
    let (sol, residual_zero) = if log {
        if !r.is_integer() || r.to_integer() < 1 {
            return Err(Error::InvalidArgument(format!(
                "--log needs a positive integer r, got {r}"
            )));
        }
        let s = frobenius::solve_log(r.to_integer(), terms)?;
        let res = frobenius::ode_residual_log(&s.log_series(), r, s.trunc())?;
        let zero = res.power.is_zero() && res.log.is_zero();
        (s, zero)
    } else {
        let (big, small) = frobenius::indicial_roots(r);
        let rho = if small_root { small } else { big };
        let s = frobenius::solve_power(rho, r, terms)?;
        let zero = frobenius::ode_residual(&s.power_series(), r, s.trunc())?.is_zero();
        (s, zero)
    };
    let out = FrobeniusOut {
        rho: sol.rho,
        residual_order: sol.trunc(),
        coeffs: sol.coeffs,
        log_coeff: sol.log_coeff,
        residual_zero,
    };
    let mut text = format!("rho = {}\n", out.rho);
    for (k, c) in out.coeffs.iter().enumerate() {
        text += &format!("c_{k} = {c}\n");
    }
    text += &format!(
        "k_log = {}\nresidual {} below q^{}\n",
        out.log_coeff,
        if residual_zero { "zero" } else { "NONZERO" },
        out.residual_order
    );
    Ok(Outcome::new(&out, text, residual_zero))
}

fn verify_catalog(entry: Option<(i64, i64, i64)>, order: Exponent) -> Result<Outcome> {
    let entries = match entry {
        Some((m, n, d)) => {
            vec![catalog::find(m, n, d).map_err(|e| Error::InvalidArgument(e.to_string()))?]
        }
        None => catalog::entries(),
    };
    let reports: Vec<EntryReport> = entries
        .par_iter()
        .map(|e| catalog::verify_entry(e, order))
        .collect::<Result<_>>()?;
    let mut text = String::new();
    for r in &reports {
        text += &format!(
            "{:<4} ({},{},{})  t = {}*{}  leading {}*q^{}  degree {} = {}\n",
            if r.ok { "ok" } else { "FAIL" },
            r.m,
            r.n,
            r.d,
            r.hauptmodul_scale,
            r.hauptmodul,
            r.leading_coefficient,
            r.vanishing_order,
            r.degree_lhs,
            r.degree_rhs
        );
    }
    let ok = reports.iter().all(|r| r.ok);
    Ok(Outcome::new(&reports, text, ok))
}

/// Convenience for tests: run with string arguments and capture both streams.
pub fn run_captured(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("modschwarz").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).expect("utf-8 output"),
        String::from_utf8(err).expect("utf-8 output"),
    )
}
