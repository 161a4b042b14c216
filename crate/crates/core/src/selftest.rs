//! The full verification battery behind `modschwarz selftest`.

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog;
use crate::classify;
use crate::error::{Error, Result};
use crate::forms;
use crate::frobenius;
use crate::numeric::{self, EvalConfig};
use crate::qseries::{Exponent, QSeries};
use crate::schwarzian::verify_schwarz_eq;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

type Check = (
    String,
    Box<dyn Fn() -> Result<(bool, String)> + Send + Sync>,
);

fn ex(n: i64) -> Exponent {
    Exponent::integer(n)
}

fn zero_or(s: &QSeries) -> (bool, String) {
    if s.is_zero() {
        (true, "exact zero".into())
    } else {
        (false, format!("residual {s}"))
    }
}

fn checks() -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    out.push((
        "schwarzian of lambda, r = 1/2".into(),
        Box::new(|| {
            let rep = verify_schwarz_eq(&forms::lambda(ex(12)), Ratio::new(1, 2), Some(ex(10)))?;
            Ok(zero_or(&rep.residual))
        }),
    ));
    for m in 2..=5 {
        out.push((
            format!("schwarzian of f_{m}, r = 1/{m}"),
            Box::new(move || {
                let e = catalog::find(m, 1, 1)?;
                Ok(zero_or(
                    &catalog::verify_entry(&e, ex(10))?.schwarz.residual,
                ))
            }),
        ));
    }
    for e in catalog::entries().into_iter().filter(|e| e.d > 1) {
        let (m, n, d) = e.triple();
        out.push((
            format!("catalog entry ({m},{n},{d})"),
            Box::new(move || {
                let rep = catalog::verify_entry(&e, ex(8))?;
                Ok((
                    rep.ok,
                    format!(
                        "leading {}*q^{}",
                        rep.leading_coefficient, rep.vanishing_order
                    ),
                ))
            }),
        ));
    }
    out.push((
        "theta quotients solve the ODE at r = 1/2".into(),
        Box::new(|| {
            let (y1, y2, y3) = catalog::theta_ode_solutions(ex(11));
            let r = Ratio::new(1, 2);
            let mut ok = y2.sub(&y1) == y3;
            for y in [&y1, &y2, &y3] {
                ok &= frobenius::ode_residual(y, r, ex(10))?.is_zero();
            }
            Ok((ok, "y1, y2, y2 - y1".into()))
        }),
    ));
    out.push((
        "weight-2 lambda identities".into(),
        Box::new(|| {
            let rep = catalog::weight2_lambda_identities(ex(10));
            Ok((rep.ok, String::new()))
        }),
    ));
    out.push((
        "Jacobi and eta-quotient identities".into(),
        Box::new(|| {
            let o = ex(20);
            let t: Vec<QSeries> = (2..=4)
                .map(|j| forms::theta(j, o).pow_int(4))
                .collect::<Result<_>>()?;
            let mut ok = t[1] == t[0].add(&t[2]);
            for j in 2..=4u8 {
                ok &= forms::theta(j, o).substitute_power(Ratio::from_integer(2))
                    == forms::theta_eta_quotient(j, o);
            }
            Ok((ok, "through q^20".into()))
        }),
    ));
    for (p, q) in [(1, 2), (1, 3), (2, 3), (3, 2), (2, 5)] {
        out.push((
            format!("Frobenius r = {p}/{q}"),
            Box::new(move || {
                let r = Ratio::new(p, q);
                let (a, b) = frobenius::indicial_roots(r);
                let mut ok = true;
                for rho in [a, b] {
                    let s = frobenius::solve_power(rho, r, frobenius::DEFAULT_TERMS)?;
                    ok &= frobenius::ode_residual(&s.power_series(), r, s.trunc())?.is_zero();
                }
                let h = frobenius::ratio_solution(r, frobenius::DEFAULT_TERMS)?;
                ok &= verify_schwarz_eq(&h, r, None)?.ok;
                Ok((ok, String::new()))
            }),
        ));
    }
    for r in [1, 2] {
        out.push((
            format!("Frobenius log case r = {r}"),
            Box::new(move || {
                let s = frobenius::solve_log(r, frobenius::DEFAULT_TERMS)?;
                let res = frobenius::ode_residual_log(
                    &s.log_series(),
                    Ratio::from_integer(r),
                    s.trunc(),
                )?;
                Ok((
                    res.power.is_zero() && res.log.is_zero(),
                    format!("k_log = {}", s.log_coeff),
                ))
            }),
        ));
    }
    out.push((
        "classification for n, m <= 30".into(),
        Box::new(|| {
            let mut ok = true;
            for m in 1..=30i64 {
                for n in 1..=30i64 {
                    let g = n.gcd(&m);
                    let level = m / g;
                    let expect = (2..=5).contains(&level);
                    let a = classify::admissible(Ratio::new(n, m));
                    ok &= a.admissible == expect && (a.reason == classify::Reason::OK) == expect;
                }
            }
            ok &= classify::degree1_levels() == vec![(2, 3), (3, 4), (4, 6), (5, 12)];
            ok &= classify::commutator_rh_consistent();
            Ok((ok, String::new()))
        }),
    ));
    for (i, (re, im)) in numeric::SAMPLE_POINTS.into_iter().enumerate() {
        out.push((
            format!("transformation laws at sample point {}", i + 1),
            Box::new(move || {
                let cfg = EvalConfig::default();
                let tau = Complex64::new(re, im);
                let a = numeric::lambda_laws(tau, &cfg)?;
                let b = numeric::h_laws(tau, &cfg)?;
                let worst = a
                    .checks
                    .iter()
                    .chain(&b.checks)
                    .map(|c| c.deviation)
                    .fold(0.0, f64::max);
                Ok((a.ok && b.ok, format!("max deviation {worst:.2e}")))
            }),
        ));
    }
    out.push((
        "finite-difference Schwarzian of lambda".into(),
        Box::new(|| {
            let cfg = EvalConfig::default();
            let l = numeric::lambda_series(200);
            let tau = Complex64::new(0.0, 1.3);
            let a = numeric::schwarzian_fd(&l, Ratio::new(1, 2), tau, 1e-3, &cfg)?;
            let b = numeric::schwarzian_fd(&l, Ratio::new(1, 2), tau, 5e-4, &cfg)?;
            let ratio = a.deviation / b.deviation;
            Ok((
                a.deviation < 1e-5 && (3.5..4.5).contains(&ratio),
                format!("deviation {:.2e}, halving ratio {ratio:.2}", a.deviation),
            ))
        }),
    ));
    out
}

/// Run every check, using `jobs` worker threads when given.
pub fn run(jobs: Option<usize>) -> Result<Vec<CheckResult>> {
    let battery = checks();
    let exec = || {
        battery
            .par_iter()
            .map(|(name, check)| match check() {
                Ok((ok, detail)) => CheckResult {
                    name: name.clone(),
                    ok,
                    detail,
                },
                Err(e) => CheckResult {
                    name: name.clone(),
                    ok: false,
                    detail: e.to_string(),
                },
            })
            .collect::<Vec<_>>()
    };
    match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            Ok(pool.install(exec))
        }
        None => Ok(exec()),
    }
}
