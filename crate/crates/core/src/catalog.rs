//! Modular solutions of `{h, tau} = 2 pi^2 (n/m)^2 E_4`: the four Hauptmoduln
//! (degree one) and the ramified rational maps of Hauptmoduln.
//!
//! Each [`CatalogEntry`] stores the rational map `h = P(t)/Q(t)` together with
//! the normalisation of the Hauptmodul it is written in: `t = scale * f_m`.
//! The maps for levels 3 and 4 are written in `3 f_3` and `4 f_4`; with the
//! bare `f_m` their Schwarzian residual is nonzero (see the tests).

use num_rational::Ratio;
use serde::Serialize;

use crate::classify::{cusp_number, degree_for};
use crate::error::{Error, Result};
use crate::forms::{self, FormId};
use crate::json;
use crate::qseries::{compose_rational, rint, Exponent, QSeries, Rat};
use crate::schwarzian::{verify_schwarz_eq, SchwarzReport};

/// `P(t)/Q(t)` with integer coefficients in ascending powers of `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalMap {
    pub numerator: Vec<i64>,
    pub denominator: Vec<i64>,
}

impl RationalMap {
    pub fn new(numerator: Vec<i64>, denominator: Vec<i64>) -> Self {
        assert!(
            denominator.iter().any(|c| *c != 0),
            "denominator must not vanish identically"
        );
        RationalMap {
            numerator,
            denominator,
        }
    }

    pub fn identity() -> Self {
        RationalMap::new(vec![0, 1], vec![1])
    }

    pub fn is_identity(&self) -> bool {
        *self == RationalMap::identity()
    }

    /// Numerical evaluation at a complex point.
    pub fn eval_complex(&self, t: num_complex::Complex64) -> num_complex::Complex64 {
        let horner = |c: &[i64]| {
            c.iter()
                .rev()
                .fold(num_complex::Complex64::new(0.0, 0.0), |acc, &k| {
                    acc * t + k as f64
                })
        };
        horner(&self.numerator) / horner(&self.denominator)
    }
}

/// Product of integer polynomials in ascending order.
fn pmul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn ppow(a: &[i64], k: u32) -> Vec<i64> {
    (0..k).fold(vec![1], |acc, _| pmul(&acc, a))
}

fn monomial(k: usize) -> Vec<i64> {
    let mut v = vec![0; k + 1];
    v[k] = 1;
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub m: i64,
    pub n: i64,
    pub d: i64,
    pub map: RationalMap,
    pub hauptmodul: FormId,
    /// The map's variable is `t = hauptmodul_scale * f_m`.
    pub hauptmodul_scale: i64,
}

impl CatalogEntry {
    pub fn triple(&self) -> (i64, i64, i64) {
        (self.m, self.n, self.d)
    }

    pub fn r(&self) -> Ratio<i64> {
        Ratio::new(self.n, self.m)
    }
}

fn entry(m: i64, n: i64, d: i64, num: Vec<i64>, den: Vec<i64>) -> CatalogEntry {
    CatalogEntry {
        m,
        n,
        d,
        map: RationalMap::new(num, den),
        hauptmodul: FormId::hauptmodul(m).expect("catalog levels are 2..=5"),
        // the identity map solves the equation for any scaling of f_m
        hauptmodul_scale: if d == 1 { 1 } else { hauptmodul_scale(m) },
    }
}

/// Normalisation `t = c f_m` used by the tabulated maps.
pub fn hauptmodul_scale(m: i64) -> i64 {
    match m {
        3 => 3,
        4 => 4,
        _ => 1,
    }
}

/// The twelve known solutions: `(m, 1, 1)` for `m = 2..5` and eight ramified maps.
pub fn entries() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = (2..=5)
        .map(|m| {
            let id = RationalMap::identity();
            entry(m, 1, 1, id.numerator, id.denominator)
        })
        .collect();

    // t^3 (t - 2) / (t^4 - 2t^3 + 4t - 2)
    out.push(entry(
        2,
        3,
        4,
        pmul(&monomial(3), &[-2, 1]),
        vec![-2, 4, 0, -2, 1],
    ));
    // t^5 (2t^2 - 7t + 7) / ((t - 2)(2t^6 - 3t^5 + t^4 + 2t^3 + 4t^2 - 6t + 2))
    out.push(entry(
        2,
        5,
        7,
        pmul(&monomial(5), &[7, -7, 2]),
        pmul(&[-2, 1], &[2, -6, 4, 2, 1, -3, 2]),
    ));
    // t^2 (t + 1) / (26t^3 + 26t^2 + 27t + 9)
    out.push(entry(
        3,
        2,
        3,
        pmul(&monomial(2), &[1, 1]),
        vec![9, 27, 26, 26],
    ));
    // t^4 (9t^3 + 21t^2 + 21t + 7) / ((t + 1)(27t^6 + 36t^5 + 27t^4 - 6t^3 - 15t^2 - 6t - 1))
    out.push(entry(
        3,
        4,
        7,
        pmul(&monomial(4), &[7, 21, 21, 9]),
        pmul(&[1, 1], &[-1, -6, -15, -6, 27, 36, 27]),
    ));
    // t^3 (t^4 + 7t^3 + 21t^2 + 28t + 14) / ((t^4 + t^3 + 3t^2 + 4t + 2)(t + 2)^3)
    out.push(entry(
        4,
        3,
        7,
        pmul(&monomial(3), &[14, 28, 21, 7, 1]),
        pmul(&[2, 4, 3, 1, 1], &ppow(&[2, 1], 3)),
    ));
    // t^5 (t^8 + 13t^7 + 78t^6 + 286t^5 + 689t^4 + 1092t^3 + 1092t^2 + 624t + 156)
    //   / ((t + 2)^5 (t^8 + 3t^7 + 8t^6 + 6t^5 - 11t^4 - 28t^3 - 28t^2 - 16t - 4))
    out.push(entry(
        4,
        5,
        13,
        pmul(&monomial(5), &[156, 624, 1092, 1092, 689, 286, 78, 13, 1]),
        pmul(&ppow(&[2, 1], 5), &[-4, -16, -28, -28, -11, 6, 8, 3, 1]),
    ));
    // t^2 (t^5 - 7) / (7t^5 + 1)
    out.push(entry(
        5,
        2,
        7,
        pmul(&monomial(2), &[-7, 0, 0, 0, 0, 1]),
        vec![1, 0, 0, 0, 0, 7],
    ));
    // t^3 (t^10 - 39t^5 - 26) / (26t^10 - 39t^5 - 1)
    out.push(entry(
        5,
        3,
        13,
        pmul(&monomial(3), &[-26, 0, 0, 0, 0, -39, 0, 0, 0, 0, 1]),
        vec![-1, 0, 0, 0, 0, -39, 0, 0, 0, 0, 26],
    ));
    out
}

/// Look up an entry by its triple.
pub fn find(m: i64, n: i64, d: i64) -> Result<CatalogEntry> {
    entries()
        .into_iter()
        .find(|e| e.triple() == (m, n, d))
        .ok_or_else(|| Error::InvalidArgument(format!("no catalog entry ({m},{n},{d})")))
}

/// The normalised Hauptmodul `t = scale * f_m` to the given order.
pub fn hauptmodul_variable(e: &CatalogEntry, order: Exponent) -> QSeries {
    forms::hauptmodul(e.m, order)
        .expect("catalog levels are 2..=5")
        .scale(&rint(e.hauptmodul_scale))
}

/// `h = P(t)/Q(t)` truncated at `order`.
pub fn build_h(e: &CatalogEntry, order: Exponent) -> Result<QSeries> {
    let t = hauptmodul_variable(e, order);
    Ok(compose_rational(&e.map, &t)?.truncate(order))
}

/// `h` with enough precision that its Schwarzian is justified through `order`.
fn build_h_for_schwarzian(e: &CatalogEntry, order: Exponent) -> Result<QSeries> {
    // sigma(h) costs val(h) of precision
    let mut inner = order + Exponent::from_ratio(e.r()) + Exponent::integer(1);
    loop {
        let h = build_h(e, inner)?;
        let val = h.valuation().ok_or(Error::ZeroSeries)?;
        if h.trunc() - val >= order {
            return Ok(h);
        }
        inner = inner + Exponent::integer(1);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub m: i64,
    pub n: i64,
    pub d: i64,
    pub hauptmodul: FormId,
    pub hauptmodul_scale: i64,
    #[serde(serialize_with = "json::exponent_str")]
    pub vanishing_order: Exponent,
    #[serde(serialize_with = "json::rat_str")]
    pub leading_coefficient: Rat,
    pub vanishing_ok: bool,
    pub schwarz: SchwarzReport,
    pub degree_lhs: i64,
    pub degree_rhs: i64,
    pub degree_ok: bool,
    pub degree_formula_d: Option<i64>,
    pub twist_ok: Option<bool>,
    pub ok: bool,
}

/// Run every check on one entry, with the Schwarzian equation checked at
/// `r = n/m`.
pub fn verify_entry(e: &CatalogEntry, order: Exponent) -> Result<EntryReport> {
    verify_entry_with_r(e, e.r(), order)
}

/// As [`verify_entry`] but with an explicit `r` (negative controls).
pub fn verify_entry_with_r(
    e: &CatalogEntry,
    r: Ratio<i64>,
    order: Exponent,
) -> Result<EntryReport> {
    let h = build_h_for_schwarzian(e, order)?;
    let (vanishing_order, leading_coefficient) = h.leading()?;
    let vanishing_ok = vanishing_order.ratio() == e.r();
    let schwarz = verify_schwarz_eq(&h, r, Some(order))?;

    let nu = cusp_number(e.m)?;
    let degree_lhs = (6 * e.n - e.m) * nu;
    let degree_rhs = 12 * e.d;
    let degree_ok = degree_lhs == degree_rhs;
    let degree_formula_d = degree_for(e.m, e.n).ok();

    let twist_ok = match (e.m, e.d) {
        // lambda(tau + 1) = lambda / (lambda - 1)
        (2, 1) => Some(h.twist_half()? == h.div(&h.add_scalar(&rint(-1)))?),
        // h(tau + 1) = -h(tau)
        (2, _) => Some(h.twist_half()? == h.neg()),
        _ => None,
    };

    let ok = vanishing_ok
        && schwarz.ok
        && degree_ok
        && degree_formula_d == Some(e.d)
        && twist_ok.unwrap_or(true);
    Ok(EntryReport {
        m: e.m,
        n: e.n,
        d: e.d,
        hauptmodul: e.hauptmodul,
        hauptmodul_scale: e.hauptmodul_scale,
        vanishing_order,
        leading_coefficient,
        vanishing_ok,
        schwarz,
        degree_lhs,
        degree_rhs,
        degree_ok,
        degree_formula_d,
        twist_ok,
        ok,
    })
}

/// `y_1 = theta_2^2/(theta_3^2 theta_4^2)`, `y_2 = theta_3^2/(theta_2^2 theta_4^2)`
/// and `theta_4^2/(theta_2^2 theta_3^2)`, which equals `y_2 - y_1`.
pub fn theta_ode_solutions(order: Exponent) -> (QSeries, QSeries, QSeries) {
    // y_2 has valuation -1/4 and each quotient loses a little precision
    let inner = order + Exponent::integer(1);
    let t2 = forms::theta(2, inner).pow_int(2).expect("power");
    let t3 = forms::theta(3, inner).pow_int(2).expect("power");
    let t4 = forms::theta(4, inner).pow_int(2).expect("power");
    let quotient = |num: &QSeries, a: &QSeries, b: &QSeries| {
        num.div(&a.mul(b))
            .expect("theta products are nonzero")
            .truncate(order)
    };
    (
        quotient(&t2, &t3, &t4),
        quotient(&t3, &t2, &t4),
        quotient(&t4, &t2, &t3),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct Weight2Report {
    /// `theta_2^4 (1 - lambda) - 2 D lambda`
    pub theta2_residual: QSeries,
    /// `theta_3^4 lambda (1 - lambda) - 2 D lambda`
    pub theta3_residual: QSeries,
    /// `theta_4^4 lambda - 2 D lambda`
    pub theta4_residual: QSeries,
    pub ok: bool,
}

/// The weight-2 identities `theta_2^4 = 2 D lambda/(1 - lambda)`,
/// `theta_3^4 = 2 D lambda/(lambda (1 - lambda))`, `theta_4^4 = 2 D lambda/lambda`,
/// checked in cleared-denominator form.
pub fn weight2_lambda_identities(order: Exponent) -> Weight2Report {
    let inner = order + Exponent::integer(1);
    let lambda = forms::lambda(inner);
    let one_minus = lambda.neg().add_scalar(&rint(1));
    let two_dl = lambda.d_op().scale(&rint(2));
    let th = |j| forms::theta(j, inner).pow_int(4).expect("power");
    let theta2_residual = th(2).mul(&one_minus).sub(&two_dl).truncate(order);
    let theta3_residual = th(3)
        .mul(&lambda)
        .mul(&one_minus)
        .sub(&two_dl)
        .truncate(order);
    let theta4_residual = th(4).mul(&lambda).sub(&two_dl).truncate(order);
    let ok = [&theta2_residual, &theta3_residual, &theta4_residual]
        .iter()
        .all(|s| s.is_zero() && s.trunc() >= order);
    Weight2Report {
        theta2_residual,
        theta3_residual,
        theta4_residual,
        ok,
    }
}
