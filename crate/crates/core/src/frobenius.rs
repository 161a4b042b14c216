//! Frobenius solutions at the cusp for `y'' + (s/2) E_4 y = 0`.
//!
//! In the `D = q d/dq` frame with `s = 2 pi^2 r^2` the equation reads
//! `D^2 y = (r^2/4) E_4 y`. Its indicial roots are `+-r/2`. For `y =
//! q^rho sum c_k q^k` the coefficients satisfy
//!
//! ```text
//! [(rho + k)^2 + alpha_0] c_k + sum_{i<k} alpha_{k-i} c_i = 0,
//! alpha_n = -(r^2/4) * [q^n] E_4.
//! ```
//!
//! When `r` is a positive integer the smaller root is resonant at `k = r` and
//! the second solution carries a `log q` term. Logarithms are handled as a
//! formal symbol `X` with `D X = 1`.

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{eisenstein_e4, sigma_k};
use crate::json;
use crate::qseries::{rint, Exponent, QSeries, Rat};
use crate::schwarzian::ratio_to_rat;

/// Default number of recurrence coefficients.
pub const DEFAULT_TERMS: usize = 40;

/// The coefficients of `-(r^2/4) E_4 = sum alpha_n q^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaSeries {
    pub alphas: Vec<Rat>,
}

impl AlphaSeries {
    pub fn new(r: Ratio<i64>, len: usize) -> Self {
        let quarter_r2 = ratio_to_rat(r * r) / rint(4);
        let alphas = (0..len)
            .map(|n| {
                if n == 0 {
                    -quarter_r2.clone()
                } else {
                    let s3 = Rat::from_integer((240 * sigma_k(3, n as u64)).into());
                    -(&quarter_r2 * s3)
                }
            })
            .collect();
        AlphaSeries { alphas }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusSolution {
    #[serde(serialize_with = "json::ratio_str")]
    pub rho: Ratio<i64>,
    #[serde(serialize_with = "json::ratio_str")]
    pub r: Ratio<i64>,
    #[serde(serialize_with = "json::rat_vec_str")]
    pub coeffs: Vec<Rat>,
    #[serde(serialize_with = "json::rat_str")]
    pub log_coeff: Rat,
    #[serde(skip)]
    pub log_partner: Option<Box<FrobeniusSolution>>,
}

impl FrobeniusSolution {
    /// Exponent below which the coefficients are known: `rho + K + 1`.
    pub fn trunc(&self) -> Exponent {
        Exponent::from_ratio(self.rho) + Exponent::integer(self.coeffs.len() as i64)
    }

    /// The power part `q^rho sum c_k q^k`.
    pub fn power_series(&self) -> QSeries {
        let rho = Exponent::from_ratio(self.rho);
        QSeries::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (rho + Exponent::integer(k as i64), c.clone())),
            self.trunc(),
        )
    }

    /// `(power part, coefficient of log q)` as a pair of series.
    pub fn log_series(&self) -> LogSeries {
        let log = match &self.log_partner {
            Some(p) if !self.log_coeff.is_zero() => p.power_series().scale(&self.log_coeff),
            _ => QSeries::zero(self.trunc()),
        };
        LogSeries {
            power: self.power_series(),
            log,
        }
    }
}

/// A formal `power + X * log` with `X = log q`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries {
    pub power: QSeries,
    pub log: QSeries,
}

impl LogSeries {
    /// `D(P + X L) = (DP + L) + X DL`.
    pub fn d_op(&self) -> LogSeries {
        LogSeries {
            power: self.power.d_op().add(&self.log),
            log: self.log.d_op(),
        }
    }
}

/// `(r/2, -r/2)`.
pub fn indicial_roots(r: Ratio<i64>) -> (Ratio<i64>, Ratio<i64>) {
    let half = r / 2;
    (half, -half)
}

fn exponent_coefficient(rho: Ratio<i64>, k: usize, alpha0: &Rat) -> Rat {
    let e = ratio_to_rat(rho) + rint(k as i64);
    &e * &e + alpha0
}

/// Power solution `q^rho sum_{k<=K} c_k q^k` with `c_0 = 1`.
pub fn solve_power(rho: Ratio<i64>, r: Ratio<i64>, terms: usize) -> Result<FrobeniusSolution> {
    let alpha = AlphaSeries::new(r, terms + 1);
    let mut coeffs: Vec<Rat> = vec![Rat::one()];
    for k in 1..=terms {
        let lead = exponent_coefficient(rho, k, &alpha.alphas[0]);
        if lead.is_zero() {
            return Err(Error::Resonance(k));
        }
        let tail: Rat = (0..k).map(|i| &alpha.alphas[k - i] * &coeffs[i]).sum();
        coeffs.push(-(tail / lead));
    }
    Ok(FrobeniusSolution {
        rho,
        r,
        coeffs,
        log_coeff: Rat::zero(),
        log_partner: None,
    })
}

/// Second solution for integral `r >= 1`:
/// `y_2 = k_log log(q) y_1 + q^{-r/2} sum C_n q^n`, with `C_0 = 1` and the
/// gauge `C_r = 0`.
pub fn solve_log(r: i64, terms: usize) -> Result<FrobeniusSolution> {
    if r < 1 {
        return Err(Error::InvalidArgument(format!(
            "solve_log needs r >= 1, got {r}"
        )));
    }
    let rr = Ratio::from_integer(r);
    let (big, small) = indicial_roots(rr);
    let y1 = solve_power(big, rr, terms)?;
    let alpha = AlphaSeries::new(rr, terms + 1);
    let ru = r as usize;
    // Inhomogeneous term from D^2(X y1): 2 D y1, sitting at q^{-r/2 + n} for n >= r.
    let dy1 = |n: usize| -> Rat {
        let j = n - ru;
        (ratio_to_rat(big) + rint(j as i64)) * &y1.coeffs[j] * rint(2)
    };
    let mut c: Vec<Rat> = vec![Rat::one()];
    let mut k_log = Rat::zero();
    for n in 1..=terms {
        let tail: Rat = (0..n).map(|i| &alpha.alphas[n - i] * &c[i]).sum();
        if n == ru {
            // 0 * C_r + tail = -k_log * 2 (r/2) c_0
            k_log = -tail / (rint(2) * ratio_to_rat(big));
            c.push(Rat::zero());
            continue;
        }
        let lead = exponent_coefficient(small, n, &alpha.alphas[0]);
        let forcing = if n > ru { &k_log * dy1(n) } else { Rat::zero() };
        c.push(-(tail + forcing) / lead);
    }
    Ok(FrobeniusSolution {
        rho: small,
        r: rr,
        coeffs: c,
        log_coeff: k_log,
        log_partner: Some(Box::new(y1)),
    })
}

/// Solution of the Schwarzian equation `h = q^r (1 + ...)` as the ratio of
/// the two power solutions, for rational non-integral `r > 0`.
pub fn ratio_solution(r: Ratio<i64>, terms: usize) -> Result<QSeries> {
    if r <= Ratio::zero() || r.is_integer() {
        return Err(Error::InvalidArgument(format!(
            "ratio_solution needs r in Q_{{>0}} \\ Z, got {r}"
        )));
    }
    let (big, small) = indicial_roots(r);
    let y1 = solve_power(big, r, terms)?.power_series();
    let y2 = solve_power(small, r, terms)?.power_series();
    y1.div(&y2)
}

/// `(h / sqrt(Dh), 1 / sqrt(Dh))` up to the constant `sqrt(a_0)`.
pub fn pair_from_h(h: &QSeries) -> Result<(QSeries, QSeries)> {
    let dh = h.d_op();
    let (root, _lead, half) = dh.sqrt_monic()?;
    let y2 = root.inverse()?.shift(-half);
    let y1 = h.mul(&y2);
    Ok((y1, y2))
}

fn e4_for(y_val: Exponent, order: Exponent) -> QSeries {
    // E_4 * y is known below E4.trunc + val(y); ask for enough of E_4.
    eisenstein_e4((order - y_val).max(Exponent::ZERO) + Exponent::integer(1))
}

/// `D^2 y - (r^2/4) E_4 y`, cut at `order`.
pub fn ode_residual(y: &QSeries, r: Ratio<i64>, order: Exponent) -> Result<QSeries> {
    let quarter_r2 = ratio_to_rat(r * r) / rint(4);
    let val = y.valuation().unwrap_or(y.trunc());
    let e4 = e4_for(val, order);
    let res = y.d_op().d_op().sub(&e4.mul(y).scale(&quarter_r2));
    if res.trunc() < order {
        return Err(Error::InsufficientPrecision {
            requested: order,
            available: res.trunc(),
        });
    }
    Ok(res.truncate(order))
}

/// Residual of a log-carrying solution, split into its `log`-free and `log`
/// components.
pub fn ode_residual_log(y: &LogSeries, r: Ratio<i64>, order: Exponent) -> Result<LogSeries> {
    let quarter_r2 = ratio_to_rat(r * r) / rint(4);
    let d2 = y.d_op().d_op();
    let component = |d2y: &QSeries, part: &QSeries| -> Result<QSeries> {
        let val = part.valuation().unwrap_or(part.trunc());
        let e4 = e4_for(val, order);
        let res = d2y.sub(&e4.mul(part).scale(&quarter_r2));
        if res.trunc() < order {
            return Err(Error::InsufficientPrecision {
                requested: order,
                available: res.trunc(),
            });
        }
        Ok(res.truncate(order))
    };
    Ok(LogSeries {
        power: component(&d2.power, &y.power)?,
        log: component(&d2.log, &y.log)?,
    })
}

/// True when every exponent of `h` lies in `r + Z_{>=0}`.
pub fn exponents_in_progression(h: &QSeries, r: Ratio<i64>) -> bool {
    h.terms().all(|(e, _)| {
        let d = e.ratio() - r;
        d.is_integer() && d >= Ratio::zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::lambda;
    use crate::qseries::rat;
    use crate::schwarzian::verify_schwarz_eq;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn indicial_examples() {
        assert_eq!(indicial_roots(r(1, 2)), (r(1, 4), r(-1, 4)));
        assert_eq!(indicial_roots(r(0, 1)), (r(0, 1), r(0, 1)));
        assert_eq!(indicial_roots(r(3, 1)), (r(3, 2), r(-3, 2)));
    }

    #[test]
    fn alpha_series_values() {
        let a = AlphaSeries::new(r(1, 2), 3);
        assert_eq!(a.alphas[0], rat(-1, 16));
        assert_eq!(a.alphas[1], rint(-15));
        assert_eq!(a.alphas[2], rint(-135));
    }

    /// Solve for `c_1` from the first nontrivial coefficient of the ODE
    /// residual, which is affine in `c_1`: evaluate at `c_1 = 0` and `c_1 = 1`.
    fn first_coefficient_oracle(rho: Ratio<i64>, rr: Ratio<i64>) -> Rat {
        let e = Exponent::from_ratio(rho);
        let order = e + Exponent::integer(2);
        let trial = |c1: Rat| {
            let y = QSeries::from_terms([(e, rint(1)), (e + Exponent::integer(1), c1)], order);
            ode_residual(&y, rr, order)
                .unwrap()
                .coeff(e + Exponent::integer(1))
                .unwrap()
        };
        let f0 = trial(Rat::zero());
        let f1 = trial(Rat::one());
        -f0.clone() / (f1 - f0)
    }

    #[test]
    fn first_coefficient_matches_oracle() {
        let sol = solve_power(r(1, 4), r(1, 2), 3).unwrap();
        assert_eq!(sol.coeffs[0], rint(1));
        assert_eq!(sol.coeffs[1], first_coefficient_oracle(r(1, 4), r(1, 2)));
        assert_eq!(sol.coeffs[1], rint(10));
        for (rho, rr) in [(r(-1, 3), r(2, 3)), (r(3, 4), r(3, 2)), (r(-1, 5), r(2, 5))] {
            let sol = solve_power(rho, rr, 2).unwrap();
            assert_eq!(sol.coeffs[1], first_coefficient_oracle(rho, rr));
        }
    }

    #[test]
    fn resonance_is_reported() {
        assert_eq!(
            solve_power(r(-1, 2), r(1, 1), 5).unwrap_err(),
            Error::Resonance(1)
        );
        assert_eq!(
            solve_power(r(-3, 2), r(3, 1), 5).unwrap_err(),
            Error::Resonance(3)
        );
        assert!(solve_power(r(1, 2), r(1, 1), 5).is_ok());
    }

    #[test]
    fn power_solutions_have_zero_residual() {
        for rr in [r(1, 2), r(1, 3), r(3, 2), r(5, 7)] {
            let (a, b) = indicial_roots(rr);
            for rho in [a, b] {
                let sol = solve_power(rho, rr, 20).unwrap();
                let y = sol.power_series();
                let res = ode_residual(&y, rr, y.trunc()).unwrap();
                assert!(res.is_zero(), "r = {rr}, rho = {rho}: {res}");
            }
        }
    }

    #[test]
    fn log_solution_r1() {
        let sol = solve_log(1, 12).unwrap();
        // k_log = -alpha_1 C_0 = 60
        assert_eq!(sol.log_coeff, rint(60));
        assert_eq!(sol.coeffs[1], rint(0));
        let ls = sol.log_series();
        let res = ode_residual_log(&ls, r(1, 1), sol.trunc()).unwrap();
        assert!(res.power.is_zero(), "{}", res.power);
        assert!(res.log.is_zero(), "{}", res.log);
    }

    #[test]
    fn log_gauge_changes_by_multiple_of_y1() {
        let sol = solve_log(2, 10).unwrap();
        let mut gauged = sol.clone();
        // re-solve the tail with C_r = 5
        let alpha = AlphaSeries::new(r(2, 1), 11);
        gauged.coeffs[2] = rint(5);
        let y1 = sol.log_partner.as_ref().unwrap();
        for n in 3..gauged.coeffs.len() {
            let tail: Rat = (0..n)
                .map(|i| &alpha.alphas[n - i] * &gauged.coeffs[i])
                .sum();
            let lead = exponent_coefficient(r(-1, 1), n, &alpha.alphas[0]);
            let j = n - 2;
            let forcing = &sol.log_coeff * (rint(1) + rint(j as i64)) * &y1.coeffs[j] * rint(2);
            gauged.coeffs[n] = -(tail + forcing) / lead;
        }
        let diff = gauged.power_series().sub(&sol.power_series());
        let expected = y1.power_series().scale(&rint(5)).truncate(diff.trunc());
        assert_eq!(diff, expected);
    }

    #[test]
    fn ratio_solution_shapes() {
        let h = ratio_solution(r(1, 2), 20).unwrap();
        assert_eq!(h.leading().unwrap(), (Exponent::new(1, 2), rint(1)));
        assert!(verify_schwarz_eq(&h, r(1, 2), None).unwrap().ok);
        let h = ratio_solution(r(2, 3), 20).unwrap();
        assert!(verify_schwarz_eq(&h, r(2, 3), None).unwrap().ok);
        assert!(exponents_in_progression(&h, r(2, 3)));
        assert!(ratio_solution(r(2, 1), 5).is_err());
    }

    #[test]
    fn ratio_solution_is_mobius_of_lambda() {
        // Both solve the same equation, so h = lambda/16 up to a Moebius map;
        // concretely both residuals vanish.
        let h = ratio_solution(r(1, 2), 24).unwrap();
        let l = lambda(Exponent::integer(12));
        assert!(verify_schwarz_eq(&l, r(1, 2), None).unwrap().ok);
        assert!(verify_schwarz_eq(&h, r(1, 2), None).unwrap().ok);
    }

    #[test]
    fn pair_from_lambda_solves_ode() {
        let l = lambda(Exponent::integer(12));
        let (y1, y2) = pair_from_h(&l).unwrap();
        let order = Exponent::integer(8);
        assert!(ode_residual(&y1, r(1, 2), order).unwrap().is_zero());
        assert!(ode_residual(&y2, r(1, 2), order).unwrap().is_zero());
        // Wronskian is constant
        let w = y1.mul(&y2.d_op()).sub(&y2.mul(&y1.d_op())).truncate(order);
        assert_eq!(w.len(), 1);
        assert_eq!(w.leading().unwrap().0, Exponent::ZERO);
    }

    #[test]
    fn pair_from_q_is_not_a_solution() {
        let q = QSeries::monomial(rint(1), Exponent::integer(1), Exponent::integer(10));
        let (y1, y2) = pair_from_h(&q).unwrap();
        assert_eq!(y1.leading().unwrap().0, Exponent::new(1, 2));
        assert_eq!(y2.leading().unwrap().0, Exponent::new(-1, 2));
        let res = ode_residual(&y1, r(0, 1), Exponent::integer(3)).unwrap();
        assert_eq!(res.leading().unwrap(), (Exponent::new(1, 2), rat(1, 4)));
    }
}
