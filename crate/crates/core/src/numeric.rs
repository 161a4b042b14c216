//! Floating-point evaluation of truncated series on the upper half-plane,
//! used to corroborate transformation laws that formal series cannot express.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::catalog;
use crate::error::{Error, Result};
use crate::forms;
use crate::qseries::{rat_to_f64, Exponent, QSeries};

/// Sample points for the law checks. Every transformed point has `Im >= 0.32`.
pub const SAMPLE_POINTS: [(f64, f64); 3] = [(0.1, 1.2), (-0.37, 0.9), (0.5, 2.0)];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EvalConfig {
    pub terms: usize,
    pub tol: f64,
    pub min_im: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            terms: 400,
            tol: 1e-8,
            min_im: 0.3,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan()
            || self.tol <= 0.0
            || self.min_im.is_nan()
            || self.min_im <= 0.0
            || self.terms == 0
        {
            return Err(Error::InvalidArgument(format!(
                "need terms > 0, tol > 0 and min_im > 0, got {self:?}"
            )));
        }
        Ok(())
    }

    fn check_domain(&self, tau: Complex64) -> Result<()> {
        if tau.im.is_nan() || tau.im < self.min_im {
            return Err(Error::DomainError(format!(
                "Im(tau) = {} is below min_im = {}",
                tau.im, self.min_im
            )));
        }
        Ok(())
    }
}

pub fn complex_pair<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq([z.re, z.im])
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Evaluation {
    #[serde(serialize_with = "complex_pair")]
    pub value: Complex64,
    /// `|c q^e|` for the last term included.
    pub tail: f64,
}

/// `q^e = exp(2 pi i tau e)`.
pub fn q_power(tau: Complex64, e: Exponent) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI * e.to_f64()) * tau).exp()
}

/// Sum of the first `cfg.terms` stored terms at `tau`.
pub fn eval_series(a: &QSeries, tau: Complex64, cfg: &EvalConfig) -> Result<Evaluation> {
    cfg.check_domain(tau)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut tail = 0.0;
    for (e, c) in a.terms().take(cfg.terms) {
        let term = q_power(tau, e) * rat_to_f64(c);
        value += term;
        tail = term.norm();
    }
    Ok(Evaluation { value, tail })
}

/// `tau -> (a tau + b)/(c tau + d)`.
pub fn act(g: [i64; 4], tau: Complex64) -> Complex64 {
    let [a, b, c, d] = g.map(|x| x as f64);
    (tau * a + b) / (tau * c + d)
}

/// One law `f(g tau) = rhs(f(tau))`.
#[derive(Clone, Copy)]
pub struct Law {
    pub name: &'static str,
    pub gamma: [i64; 4],
    pub rhs: fn(Complex64) -> Complex64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawCheck {
    pub name: &'static str,
    #[serde(serialize_with = "complex_pair")]
    pub point: Complex64,
    #[serde(serialize_with = "complex_pair")]
    pub lhs: Complex64,
    #[serde(serialize_with = "complex_pair")]
    pub rhs: Complex64,
    pub deviation: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawsReport {
    pub which: &'static str,
    #[serde(serialize_with = "complex_pair")]
    pub tau: Complex64,
    pub tol: f64,
    pub checks: Vec<LawCheck>,
    pub ok: bool,
}

/// Evaluate both sides of each law with `f`, after checking every point
/// against `cfg.min_im`.
pub fn check_laws(
    which: &'static str,
    laws: &[Law],
    f: impl Fn(Complex64) -> Result<Complex64>,
    tau: Complex64,
    cfg: &EvalConfig,
) -> Result<LawsReport> {
    cfg.check_domain(tau)?;
    for law in laws {
        cfg.check_domain(act(law.gamma, tau))?;
    }
    let base = f(tau)?;
    let mut checks = Vec::with_capacity(laws.len());
    for law in laws {
        let point = act(law.gamma, tau);
        let lhs = f(point)?;
        let rhs = (law.rhs)(base);
        let deviation = (lhs - rhs).norm();
        checks.push(LawCheck {
            name: law.name,
            point,
            lhs,
            rhs,
            deviation,
            ok: deviation < cfg.tol,
        });
    }
    let ok = checks.iter().all(|c| c.ok);
    Ok(LawsReport {
        which,
        tau,
        tol: cfg.tol,
        checks,
        ok,
    })
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

pub const LAMBDA_LAWS: [Law; 5] = [
    Law {
        name: "lambda(tau+1) = lambda/(lambda-1)",
        gamma: [1, 1, 0, 1],
        rhs: |l| l / (l - 1.0),
    },
    Law {
        name: "lambda(-1/tau) = 1-lambda",
        gamma: [0, -1, 1, 0],
        rhs: |l| one() - l,
    },
    Law {
        name: "lambda(tau/(tau+1)) = 1/lambda",
        gamma: [1, 0, 1, 1],
        rhs: |l| one() / l,
    },
    Law {
        name: "lambda(-1/(tau+1)) = 1/(1-lambda)",
        gamma: [0, -1, 1, 1],
        rhs: |l| one() / (one() - l),
    },
    Law {
        name: "lambda((1+tau)/(-tau)) = 1-1/lambda",
        gamma: [1, 1, -1, 0],
        rhs: |l| one() - one() / l,
    },
];

pub const H234_LAWS: [Law; 5] = [
    Law {
        name: "h(tau+1) = -h",
        gamma: [1, 1, 0, 1],
        rhs: |h| -h,
    },
    Law {
        name: "h(-1/tau) = (h+1)/(3h-1)",
        gamma: [0, -1, 1, 0],
        rhs: |h| (h + 1.0) / (h * 3.0 - 1.0),
    },
    Law {
        name: "h(tau/(tau+1)) = (-h+1)/(3h+1)",
        gamma: [1, 0, 1, 1],
        rhs: |h| (one() - h) / (h * 3.0 + 1.0),
    },
    Law {
        name: "h(-1/(tau+1)) = (h-1)/(3h+1)",
        gamma: [0, -1, 1, 1],
        rhs: |h| (h - 1.0) / (h * 3.0 + 1.0),
    },
    Law {
        name: "h((1+tau)/(-tau)) = (h+1)/(-3h+1)",
        gamma: [1, 1, -1, 0],
        rhs: |h| (h + 1.0) / (one() - h * 3.0),
    },
];

/// Exact `lambda` with at least `terms` stored terms, shared between callers.
pub fn lambda_series(terms: usize) -> Arc<QSeries> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QSeries>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("cache lock").get(&terms) {
        return s.clone();
    }
    // lambda lives on grid 2 with every half-integral exponent from 1/2 on
    let order = Exponent::integer((terms as i64 + 1) / 2 + 1);
    let series = Arc::new(forms::lambda(order));
    cache
        .lock()
        .expect("cache lock")
        .entry(terms)
        .or_insert(series)
        .clone()
}

pub fn lambda_laws(tau: Complex64, cfg: &EvalConfig) -> Result<LawsReport> {
    cfg.validate()?;
    lambda_laws_with(&lambda_series(cfg.terms), tau, cfg)
}

/// The lambda laws evaluated on a caller-supplied series (negative controls).
pub fn lambda_laws_with(series: &QSeries, tau: Complex64, cfg: &EvalConfig) -> Result<LawsReport> {
    check_laws(
        "lambda",
        &LAMBDA_LAWS,
        |z| Ok(eval_series(series, z, cfg)?.value),
        tau,
        cfg,
    )
}

/// `h = P(lambda)/Q(lambda)` for the `(2,3,4)` entry, evaluated through the
/// numerical value of `lambda`; the series of `h` itself has poles in the disc.
pub fn h234(tau: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    let entry = catalog::find(2, 3, 4)?;
    let l = eval_series(&lambda_series(cfg.terms), tau, cfg)?.value;
    Ok(entry.map.eval_complex(l))
}

pub fn h_laws(tau: Complex64, cfg: &EvalConfig) -> Result<LawsReport> {
    cfg.validate()?;
    let entry = catalog::find(2, 3, 4)?;
    let series = lambda_series(cfg.terms);
    let f = |z| Ok(entry.map.eval_complex(eval_series(&series, z, cfg)?.value));
    check_laws("h234", &H234_LAWS, f, tau, cfg)
}

/// `|eval(twist_half(a), tau) - eval(a, tau + 1)|`.
pub fn twist_deviation(a: &QSeries, tau: Complex64, cfg: &EvalConfig) -> Result<f64> {
    let twisted = a.twist_half()?;
    let lhs = eval_series(&twisted, tau, cfg)?.value;
    let rhs = eval_series(a, tau + 1.0, cfg)?.value;
    Ok((lhs - rhs).norm())
}

#[derive(Clone, Debug, Serialize)]
pub struct FdReport {
    pub step: f64,
    #[serde(serialize_with = "complex_pair")]
    pub schwarzian: Complex64,
    #[serde(serialize_with = "complex_pair")]
    pub target: Complex64,
    /// `|fd - target| / |target|`.
    pub deviation: f64,
}

/// Central-difference Schwarzian `{a, tau}` compared with `2 pi^2 r^2 E_4(tau)`.
pub fn schwarzian_fd(
    a: &QSeries,
    r: Ratio<i64>,
    tau: Complex64,
    step: f64,
    cfg: &EvalConfig,
) -> Result<FdReport> {
    if step.is_nan() || step <= 0.0 || step * 4.0 >= tau.im {
        return Err(Error::DomainError(format!(
            "step {step} is not small relative to Im(tau) = {}",
            tau.im
        )));
    }
    let f = |k: f64| eval_series(a, tau + step * k, cfg).map(|e| e.value);
    let (m2, m1, z, p1, p2) = (f(-2.0)?, f(-1.0)?, f(0.0)?, f(1.0)?, f(2.0)?);
    let d1 = (p1 - m1) / (2.0 * step);
    let d2 = (p1 - z * 2.0 + m1) / (step * step);
    let d3 = (p2 - p1 * 2.0 + m1 * 2.0 - m2) / (2.0 * step.powi(3));
    let schwarzian = d3 / d1 - (d2 / d1).powi(2) * 1.5;

    let r = *r.numer() as f64 / *r.denom() as f64;
    let e4 = forms::eisenstein_e4(Exponent::integer(cfg.terms.min(60) as i64));
    let target = eval_series(&e4, tau, cfg)?.value * (2.0 * PI * PI * r * r);
    Ok(FdReport {
        step,
        schwarzian,
        target,
        deviation: (schwarzian - target).norm() / target.norm(),
    })
}

pub fn sample_points() -> Vec<Complex64> {
    SAMPLE_POINTS
        .iter()
        .map(|&(re, im)| Complex64::new(re, im))
        .collect()
}
