//! The Schwarzian derivative in the `D = q d/dq` frame.
//!
//! With `q = exp(2 pi i tau)` we have `d/dtau = 2 pi i D`, so
//! `{h, tau} = (2 pi i)^2 sigma(h)` where
//! `sigma(h) = D^3h/Dh - 3/2 (D^2h/Dh)^2`. Writing `s = 2 pi^2 r^2`, the
//! equation `{h, tau} = s E_4` becomes the rational identity
//! `sigma(h) = -(r^2/2) E_4`.

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::eisenstein_e4;
use crate::json;
use crate::qseries::{rat, Exponent, QSeries, Rat};

/// Default residual order when the caller does not ask for one.
pub const DEFAULT_ORDER: i64 = 10;

#[derive(Clone, Debug, Serialize)]
pub struct SchwarzReport {
    #[serde(serialize_with = "json::ratio_str")]
    pub r: Ratio<i64>,
    pub residual: QSeries,
    pub ok: bool,
    #[serde(serialize_with = "json::exponent_str")]
    pub checked_order: Exponent,
}

pub fn ratio_to_rat(r: Ratio<i64>) -> Rat {
    rat(*r.numer(), *r.denom())
}

/// `sigma(h) = D^3h/Dh - (3/2)(D^2h/Dh)^2`.
pub fn normalized_schwarzian(h: &QSeries) -> Result<QSeries> {
    let d1 = h.d_op();
    if d1.is_zero() {
        return Err(Error::DivisionByZeroSeries);
    }
    let d2 = d1.d_op();
    let d3 = d2.d_op();
    let inv = d1.inverse()?;
    let a = d3.mul(&inv);
    let b = d2.mul(&inv);
    Ok(a.sub(&b.mul(&b).scale(&rat(3, 2))))
}

/// Check `sigma(h) + (r^2/2) E_4 = 0` below `order` (default: the smaller of
/// the justified truncation and `q^10`).
pub fn verify_schwarz_eq(
    h: &QSeries,
    r: Ratio<i64>,
    order: Option<Exponent>,
) -> Result<SchwarzReport> {
    let sigma = normalized_schwarzian(h)?;
    let available = sigma.trunc();
    let order = match order {
        Some(o) if o > available => {
            return Err(Error::InsufficientPrecision {
                requested: o,
                available,
            })
        }
        Some(o) => o,
        None => available.min(Exponent::integer(DEFAULT_ORDER)),
    };
    let r2 = ratio_to_rat(r * r);
    let target = eisenstein_e4(order).scale(&(r2 / Rat::from_integer(2.into())));
    let residual = sigma.add(&target).truncate(order);
    Ok(SchwarzReport {
        r,
        ok: residual.is_zero(),
        residual,
        checked_order: order,
    })
}

/// `(a h + b) / (c h + d)`.
pub fn mobius_apply(coeffs: &[Rat; 4], h: &QSeries) -> Result<QSeries> {
    let [a, b, c, d] = coeffs;
    if (a * d - b * c).is_zero() {
        return Err(Error::DegenerateMobius);
    }
    let num = h.scale(a).add_scalar(b);
    if c.is_zero() {
        return Ok(num.scale(&d.recip()));
    }
    let den = h.scale(c).add_scalar(d);
    num.div(&den)
}

/// Identity Moebius coefficients, handy for tests and callers.
pub fn mobius_identity() -> [Rat; 4] {
    [Rat::one(), Rat::zero(), Rat::zero(), Rat::one()]
}
