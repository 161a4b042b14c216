//! q-expansions of the classical forms: Eisenstein series, eta, Delta, the
//! Jacobi thetas, lambda, j and the Hauptmoduln `f_2 .. f_5` of `Gamma(m)`.
//!
//! Every constructor takes a truncation order `N` and returns a series whose
//! `trunc` is exactly `N`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::{rint, Exponent, QSeries, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormId {
    E2,
    E4,
    Eta,
    Delta,
    Theta2,
    Theta3,
    Theta4,
    Lambda,
    J,
    F2,
    F3,
    F4,
    F5,
}

impl FormId {
    pub const ALL: [FormId; 13] = [
        FormId::E2,
        FormId::E4,
        FormId::Eta,
        FormId::Delta,
        FormId::Theta2,
        FormId::Theta3,
        FormId::Theta4,
        FormId::Lambda,
        FormId::J,
        FormId::F2,
        FormId::F3,
        FormId::F4,
        FormId::F5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormId::E2 => "E2",
            FormId::E4 => "E4",
            FormId::Eta => "eta",
            FormId::Delta => "Delta",
            FormId::Theta2 => "theta2",
            FormId::Theta3 => "theta3",
            FormId::Theta4 => "theta4",
            FormId::Lambda => "lambda",
            FormId::J => "j",
            FormId::F2 => "f2",
            FormId::F3 => "f3",
            FormId::F4 => "f4",
            FormId::F5 => "f5",
        }
    }

    /// The Hauptmodul `f_m` id for a level.
    pub fn hauptmodul(m: i64) -> Result<FormId> {
        match m {
            2 => Ok(FormId::F2),
            3 => Ok(FormId::F3),
            4 => Ok(FormId::F4),
            5 => Ok(FormId::F5),
            _ => Err(Error::LevelOutOfRange(m)),
        }
    }

    pub fn expand(self, order: Exponent) -> QSeries {
        match self {
            FormId::E2 => eisenstein_e2(order),
            FormId::E4 => eisenstein_e4(order),
            FormId::Eta => eta(order),
            FormId::Delta => delta(order),
            FormId::Theta2 => theta(2, order),
            FormId::Theta3 => theta(3, order),
            FormId::Theta4 => theta(4, order),
            FormId::Lambda | FormId::F2 => lambda(order),
            FormId::J => j_invariant(order),
            FormId::F3 => hauptmodul(3, order).expect("level 3"),
            FormId::F4 => hauptmodul(4, order).expect("level 4"),
            FormId::F5 => hauptmodul(5, order).expect("level 5"),
        }
    }
}

impl fmt::Display for FormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        FormId::ALL
            .into_iter()
            .find(|id| id.name().to_ascii_lowercase() == lower)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown form {s:?}")))
    }
}

impl Serialize for FormId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for FormId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `sum_{d | n} d^k`.
pub fn sigma_k(k: u32, n: u64) -> u128 {
    assert!(n >= 1, "sigma_k needs n >= 1");
    let mut total: u128 = 0;
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += (d as u128).pow(k);
            let other = n / d;
            if other != d {
                total += (other as u128).pow(k);
            }
        }
        d += 1;
    }
    total
}

/// Integer exponents `0 <= n < order`.
fn integer_range(order: Exponent) -> std::ops::Range<u64> {
    0..order.ceil().max(0) as u64
}

fn divisor_series(order: Exponent, k: u32, scale: i64) -> QSeries {
    let terms = integer_range(order).map(|n| {
        let c = if n == 0 {
            Rat::from_integer(BigInt::from(1))
        } else {
            Rat::from_integer(BigInt::from(scale) * BigInt::from(sigma_k(k, n)))
        };
        (Exponent::integer(n as i64), c)
    });
    QSeries::from_terms(terms, order)
}

/// `E_4 = 1 + 240 sum sigma_3(n) q^n`.
pub fn eisenstein_e4(order: Exponent) -> QSeries {
    divisor_series(order, 3, 240)
}

/// `E_2 = 1 - 24 sum sigma_1(n) q^n`.
pub fn eisenstein_e2(order: Exponent) -> QSeries {
    divisor_series(order, 1, -24)
}

/// Coefficients of `prod_{n >= 1} (1 - q^n)^{a(n)}` modulo `q^len`.
fn euler_product(len: usize, power: impl Fn(usize) -> i64) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); len];
    if len == 0 {
        return c;
    }
    c[0] = BigInt::from(1);
    for n in 1..len {
        let a = power(n);
        for _ in 0..a.unsigned_abs() {
            if a > 0 {
                for i in (n..len).rev() {
                    let t = c[i - n].clone();
                    c[i] -= t;
                }
            } else {
                for i in n..len {
                    let t = c[i - n].clone();
                    c[i] += t;
                }
            }
        }
    }
    c
}

/// `q^offset * sum c_k q^k + O(q^order)` from integer coefficients.
fn shifted_product(offset: Exponent, coeffs: Vec<BigInt>, order: Exponent, grid: u64) -> QSeries {
    let terms = coeffs
        .into_iter()
        .enumerate()
        .map(|(k, c)| (offset + Exponent::integer(k as i64), Rat::from_integer(c)));
    QSeries::with_grid(grid, terms, order)
}

/// Number of integer steps needed so that `offset + len >= order`.
fn product_len(offset: Exponent, order: Exponent) -> usize {
    (order - offset).ceil().max(0) as usize
}

/// `eta = q^{1/24} prod (1 - q^n)`, via the pentagonal-number theorem.
pub fn eta(order: Exponent) -> QSeries {
    let offset = Exponent::new(1, 24);
    let len = product_len(offset, order);
    let mut coeffs = vec![BigInt::zero(); len];
    // prod (1 - q^n) = sum_k (-1)^k q^{k(3k-1)/2}, k over all integers
    let mut k: i64 = 0;
    loop {
        let mut placed = false;
        for kk in [k, -k] {
            let p = kk * (3 * kk - 1) / 2;
            if (p as usize) < len {
                placed = true;
                let sign = if kk.rem_euclid(2) == 0 { 1 } else { -1 };
                coeffs[p as usize] = BigInt::from(sign);
            }
            if k == 0 {
                break;
            }
        }
        if !placed && k > 0 {
            break;
        }
        k += 1;
    }
    shifted_product(offset, coeffs, order, 24)
}

/// `Delta = q prod (1 - q^n)^24`, expanded directly.
pub fn delta(order: Exponent) -> QSeries {
    let offset = Exponent::integer(1);
    let coeffs = euler_product(product_len(offset, order), |_| 24);
    shifted_product(offset, coeffs, order, 1)
}

/// Jacobi theta null values in `q = t^2`:
/// `theta_2 = 2 sum_{n>=0} q^{(2n+1)^2/8}`, `theta_3 = 1 + 2 sum_{n>=1} q^{n^2/2}`,
/// `theta_4 = 1 + 2 sum_{n>=1} (-1)^n q^{n^2/2}`.
pub fn theta(j: u8, order: Exponent) -> QSeries {
    let two = rint(2);
    let mut terms: Vec<(Exponent, Rat)> = Vec::new();
    match j {
        2 => {
            let mut n = 0i64;
            loop {
                let e = Exponent::new((2 * n + 1) * (2 * n + 1), 8);
                if e >= order {
                    break;
                }
                terms.push((e, two.clone()));
                n += 1;
            }
        }
        3 | 4 => {
            terms.push((Exponent::ZERO, rint(1)));
            let mut n = 1i64;
            loop {
                let e = Exponent::new(n * n, 2);
                if e >= order {
                    break;
                }
                let c = if j == 4 && n % 2 == 1 {
                    -two.clone()
                } else {
                    two.clone()
                };
                terms.push((e, c));
                n += 1;
            }
        }
        _ => panic!("theta index must be 2, 3 or 4"),
    }
    QSeries::with_grid(8, terms, order)
}

/// Build a series with `trunc >= order` by retrying with larger internal
/// orders, then cut it to `order` exactly.
fn at_order(order: Exponent, mut build: impl FnMut(Exponent) -> QSeries) -> QSeries {
    let mut internal = order + Exponent::integer(1);
    loop {
        let s = build(internal);
        if s.trunc() >= order {
            return s.truncate(order);
        }
        internal = internal + (order - s.trunc()) + Exponent::integer(1);
    }
}

/// `eta(c tau)` for a positive rational scale `c`.
pub fn eta_scaled(c: Ratio<i64>, order: Exponent) -> QSeries {
    at_order(order, |inner| eta(inner * c.recip()).substitute_power(c))
}

/// `lambda = theta_2^4 / theta_3^4`.
pub fn lambda(order: Exponent) -> QSeries {
    at_order(order, |inner| {
        let t2 = theta(2, inner).pow_int(4).expect("positive power");
        let t3 = theta(3, inner).pow_int(4).expect("positive power");
        t2.div(&t3).expect("theta_3 is a unit")
    })
}

/// `j = E_4^3 / Delta`.
pub fn j_invariant(order: Exponent) -> QSeries {
    at_order(order, |inner| {
        let e4 = eisenstein_e4(inner).pow_int(3).expect("positive power");
        e4.div(&delta(inner + Exponent::integer(1)))
            .expect("Delta is nonzero")
    })
}

/// Legendre symbol `(n / 5)`.
pub fn legendre_5(n: i64) -> i8 {
    match n.rem_euclid(5) {
        0 => 0,
        1 | 4 => 1,
        _ => -1,
    }
}

fn eta_quotient(factors: &[(Ratio<i64>, i64)], order: Exponent) -> QSeries {
    at_order(order, |inner| {
        let wide = inner * Ratio::from_integer(2);
        let mut num: Option<QSeries> = None;
        let mut den: Option<QSeries> = None;
        for &(c, p) in factors {
            let f = eta_scaled(c, wide)
                .pow_int(p.abs())
                .expect("positive power");
            let slot = if p > 0 { &mut num } else { &mut den };
            *slot = Some(match slot.take() {
                None => f,
                Some(acc) => acc.mul(&f),
            });
        }
        let num = num.unwrap_or_else(|| QSeries::one(wide));
        match den {
            None => num,
            Some(d) => num.div(&d).expect("eta products are units"),
        }
    })
}

/// Hauptmodul `f_m` of `Gamma(m)`:
/// `f_2 = lambda`, `f_3 = (eta(3t)/eta(t/3))^3`,
/// `f_4 = eta(t/2) eta(4t)^2 / (eta(t/4)^2 eta(2t))`,
/// `f_5 = q^{1/5} prod (1 - q^n)^{(n/5)}`.
pub fn hauptmodul(m: i64, order: Exponent) -> Result<QSeries> {
    let r = |n, d| Ratio::new(n, d);
    match m {
        2 => Ok(lambda(order)),
        3 => Ok(eta_quotient(&[(r(3, 1), 3), (r(1, 3), -3)], order)),
        4 => Ok(eta_quotient(
            &[(r(1, 2), 1), (r(4, 1), 2), (r(1, 4), -2), (r(2, 1), -1)],
            order,
        )),
        5 => {
            let offset = Exponent::new(1, 5);
            let coeffs = euler_product(product_len(offset, order), |n| legendre_5(n as i64) as i64);
            Ok(shifted_product(offset, coeffs, order, 5))
        }
        _ => Err(Error::LevelOutOfRange(m)),
    }
}

/// The eta-quotient expressions `2 eta(4t)^2/eta(2t)`,
/// `eta(2t)^5/(eta(t)^2 eta(4t)^2)` and `eta(t)^2/eta(2t)`. In the
/// convention `q = t^2` used by [`theta`] these equal `theta_j(2 tau)`.
pub fn theta_eta_quotient(j: u8, order: Exponent) -> QSeries {
    let r = |n| Ratio::from_integer(n);
    match j {
        2 => eta_quotient(&[(r(4), 2), (r(2), -1)], order).scale(&rint(2)),
        3 => eta_quotient(&[(r(2), 5), (r(1), -2), (r(4), -2)], order),
        4 => eta_quotient(&[(r(1), 2), (r(2), -1)], order),
        _ => panic!("theta index must be 2, 3 or 4"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(n: i64) -> Exponent {
        Exponent::integer(n)
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma_k(3, 1), 1);
        assert_eq!(sigma_k(3, 2), 9);
        assert_eq!(sigma_k(1, 6), 12);
        assert_eq!(sigma_k(1, 9), 13);
    }

    #[test]
    fn eisenstein_coefficients() {
        let e4 = eisenstein_e4(ex(5));
        assert_eq!(e4.coeff(ex(0)), Some(rint(1)));
        assert_eq!(e4.coeff(ex(1)), Some(rint(240)));
        assert_eq!(e4.coeff(ex(2)), Some(rint(2160)));
        assert_eq!(e4.trunc(), ex(5));
        let e2 = eisenstein_e2(ex(5));
        assert_eq!(e2.coeff(ex(0)), Some(rint(1)));
        assert_eq!(e2.coeff(ex(1)), Some(rint(-24)));
        assert_eq!(e2.coeff(ex(3)), Some(rint(-96)));
    }

    #[test]
    fn eta_pentagonal() {
        let h = eta(ex(8));
        assert_eq!(h.leading().unwrap(), (Exponent::new(1, 24), rint(1)));
        let p = h.shift(-Exponent::new(1, 24));
        assert_eq!(p.coeff(ex(1)), Some(rint(-1)));
        assert_eq!(p.coeff(ex(2)), Some(rint(-1)));
        assert_eq!(p.coeff(ex(3)), Some(rint(0)));
        assert_eq!(p.coeff(ex(5)), Some(rint(1)));
        assert_eq!(p.coeff(ex(7)), Some(rint(1)));
        assert_eq!(h.grid(), 24);
    }

    #[test]
    fn eta_matches_naive_product() {
        let order = ex(12);
        let mut naive = QSeries::monomial(rint(1), Exponent::new(1, 24), order);
        for n in 1..12 {
            let factor = QSeries::from_terms([(ex(0), rint(1)), (ex(n), rint(-1))], order);
            naive = naive.mul(&factor);
        }
        assert_eq!(eta(order), naive);
    }

    #[test]
    fn theta_expansions() {
        let t2 = theta(2, ex(3));
        assert_eq!(t2.leading().unwrap(), (Exponent::new(1, 8), rint(2)));
        let t3 = theta(3, ex(5));
        let expected = QSeries::from_terms(
            [
                (ex(0), rint(1)),
                (Exponent::new(1, 2), rint(2)),
                (ex(2), rint(2)),
                (Exponent::new(9, 2), rint(2)),
            ],
            ex(5),
        );
        assert_eq!(t3, expected);
        let t4 = theta(4, ex(5));
        assert_eq!(t4.coeff(Exponent::new(1, 2)), Some(rint(-2)));
        assert_eq!(t4.coeff(ex(2)), Some(rint(2)));
        assert_eq!(t4.coeff(Exponent::new(9, 2)), Some(rint(-2)));
        assert_eq!(t2.grid(), 8);
    }

    #[test]
    fn lambda_leading_coefficients() {
        let l = lambda(ex(3));
        assert_eq!(l.coeff(Exponent::new(1, 2)), Some(rint(16)));
        assert_eq!(l.coeff(ex(1)), Some(rint(-128)));
        assert_eq!(l.coeff(Exponent::new(3, 2)), Some(rint(704)));
        assert_eq!(l.trunc(), ex(3));
    }

    #[test]
    fn hauptmodul_leading_terms() {
        for m in 2..=5 {
            let f = hauptmodul(m, ex(3)).unwrap();
            // lambda = 16 q^{1/2} + ..., the eta products are monic
            let lead = if m == 2 { rint(16) } else { rint(1) };
            assert_eq!(f.leading().unwrap(), (Exponent::new(1, m), lead));
            assert_eq!(f.trunc(), ex(3));
        }
        assert_eq!(hauptmodul(6, ex(3)).unwrap_err(), Error::LevelOutOfRange(6));
    }

    #[test]
    fn legendre_symbol() {
        assert_eq!(legendre_5(1), 1);
        assert_eq!(legendre_5(10), 0);
        assert_eq!(legendre_5(3), -1);
        assert_eq!(legendre_5(-1), 1);
        assert_eq!(legendre_5(7), -1);
    }

    #[test]
    fn j_expansion() {
        let j = j_invariant(ex(3));
        assert_eq!(j.leading().unwrap(), (ex(-1), rint(1)));
        assert_eq!(j.coeff(ex(0)), Some(rint(744)));
        assert_eq!(j.coeff(ex(1)), Some(rint(196884)));
        assert_eq!(j.coeff(ex(2)), Some(rint(21493760)));
        assert_eq!(j.trunc(), ex(3));
    }

    #[test]
    fn form_ids_round_trip() {
        for id in FormId::ALL {
            assert_eq!(id.name().parse::<FormId>().unwrap(), id);
        }
        assert_eq!("THETA3".parse::<FormId>().unwrap(), FormId::Theta3);
        assert!("f6".parse::<FormId>().is_err());
        assert_eq!(FormId::F2.expand(ex(4)), FormId::Lambda.expand(ex(4)));
    }
}
