//! Which parameters `s = 2 pi^2 r^2` admit modular solutions, and the
//! Riemann-Hurwitz bookkeeping behind the answer.
//!
//! The group-theoretic inputs are constants: the admissible levels are
//! `2..=5` (the genus-zero, torsion-free principal congruence subgroups), the
//! groups are torsion free (`e_2 = e_3 = 0`), and the commutator subgroup has
//! index 6, level 6, one cusp and genus 1.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::json;
use crate::qseries::{rat, Rat};

pub const MIN_LEVEL: i64 = 2;
pub const MAX_LEVEL: i64 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reason {
    NotRationalSquareForm,
    IntegerR,
    LevelOutOfRange,
    GcdViolation,
    OK,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub m: Option<i64>,
    pub n: Option<i64>,
    pub nu_inf: Option<i64>,
    pub d: Option<i64>,
    pub reason: Reason,
}

impl Admissibility {
    fn rejected(reason: Reason, m: Option<i64>, n: Option<i64>) -> Self {
        Admissibility {
            admissible: false,
            m,
            n,
            nu_inf: None,
            d: None,
            reason,
        }
    }
}

/// Verdict for `s = 2 pi^2 r^2` with rational `r >= 0`.
pub fn admissible(r: Ratio<i64>) -> Admissibility {
    let r = r.abs();
    admissible_pair(*r.denom(), *r.numer())
}

/// Verdict for an explicit level/index pair `r = n/m` (not reduced first).
pub fn admissible_pair(m: i64, n: i64) -> Admissibility {
    if m <= 0 || n < 0 {
        return Admissibility::rejected(Reason::NotRationalSquareForm, Some(m), Some(n));
    }
    if m == 1 || n == 0 {
        return Admissibility::rejected(Reason::IntegerR, Some(m), Some(n));
    }
    if n.gcd(&m) != 1 {
        return Admissibility::rejected(Reason::GcdViolation, Some(m), Some(n));
    }
    if !(MIN_LEVEL..=MAX_LEVEL).contains(&m) {
        return Admissibility::rejected(Reason::LevelOutOfRange, Some(m), Some(n));
    }
    let nu = cusp_number(m).expect("level in range");
    let d = degree_for(m, n).expect("admissible pairs have integral degree");
    Admissibility {
        admissible: true,
        m: Some(m),
        n: Some(n),
        nu_inf: Some(nu),
        d: Some(d),
        reason: Reason::OK,
    }
}

/// Verdict when only `r^2 = s / (2 pi^2)` is known.
pub fn admissible_r_squared(r2: &Rat) -> Admissibility {
    if r2.is_negative() {
        return Admissibility::rejected(Reason::NotRationalSquareForm, None, None);
    }
    match (r2.numer().sqrt(), r2.denom().sqrt()) {
        (a, b) if &(&a * &a) == r2.numer() && &(&b * &b) == r2.denom() => {
            let to_i64 = |x: &num_bigint::BigInt| i64::try_from(x.clone()).ok();
            match (to_i64(&a), to_i64(&b)) {
                (Some(n), Some(m)) => admissible(Ratio::new(n, m)),
                _ => Admissibility::rejected(Reason::LevelOutOfRange, None, None),
            }
        }
        _ => Admissibility::rejected(Reason::NotRationalSquareForm, None, None),
    }
}

/// Number of cusps of `Gamma(m)`: `(m^2/2) prod_{p | m} (1 - 1/p^2)` for
/// `m >= 3`, and 3 for `m = 2` (where `-I` lies in the group).
pub fn cusp_number(m: i64) -> Result<i64> {
    if !(MIN_LEVEL..=MAX_LEVEL).contains(&m) {
        return Err(Error::LevelOutOfRange(m));
    }
    if m == 2 {
        return Ok(3);
    }
    let mut value = Ratio::new(m * m, 2);
    for p in prime_divisors(m) {
        value *= Ratio::new(p * p - 1, p * p);
    }
    debug_assert!(value.is_integer());
    Ok(value.to_integer())
}

fn prime_divisors(mut m: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Covering degree `d = (6n - m) nu / 12`.
pub fn degree_for(m: i64, n: i64) -> Result<i64> {
    if n < 1 || n.gcd(&m) != 1 {
        return Err(Error::InvalidArgument(format!(
            "degree_for needs n >= 1 coprime to m, got m = {m}, n = {n}"
        )));
    }
    let total = (6 * n - m) * cusp_number(m)?;
    if total % 12 != 0 {
        return Err(Error::NonIntegralDegree { m, n });
    }
    Ok(total / 12)
}

/// `g = 1 + mu/12 - e_2/4 - e_3/3 - nu/2`.
pub fn genus_rh(mu: i64, e2: i64, e3: i64, nu: i64) -> Rat {
    rat(1, 1) + rat(mu, 12) - rat(e2, 4) - rat(e3, 3) - rat(nu, 2)
}

/// All `(m, nu)` with `m >= 2` and `(6 - m) nu = 12`.
pub fn degree1_levels() -> Vec<(i64, i64)> {
    (2..=12)
        .filter_map(|m| {
            let k = 6 - m;
            (k > 0 && 12 % k == 0).then(|| (m, 12 / k))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionWitness {
    pub d: i64,
    pub n: i64,
    pub contradiction: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub index: i64,
    pub level: i64,
    pub nu_inf: i64,
    pub genus: i64,
    #[serde(serialize_with = "json::rat_str")]
    pub genus_from_rh: Rat,
    pub witnesses: Vec<ObstructionWitness>,
}

/// The commutator subgroup case: equating `2g - 2 + nu = -2d + n nu` and
/// `mu/6 = 2g - 2 + nu` with `(mu, m, nu, g) = (6, 6, 1, 1)` forces
/// `n = 2d + 1`, which contradicts `d >= n`.
pub fn reducible_obstruction() -> Obstruction {
    let (index, level, genus) = (6, 6, 1);
    let nu_inf = index / level;
    let witnesses = (1..=10)
        .map(|d| {
            // n nu = 2g - 2 + nu + 2d
            let n = (2 * genus - 2 + nu_inf + 2 * d) / nu_inf;
            ObstructionWitness {
                d,
                n,
                contradiction: n > d,
            }
        })
        .collect();
    Obstruction {
        index,
        level,
        nu_inf,
        genus,
        genus_from_rh: genus_rh(index, 0, 0, nu_inf),
        witnesses,
    }
}

/// Check `mu/6 = 2g - 2 + nu` for the commutator data; used in tests.
pub fn commutator_rh_consistent() -> bool {
    let o = reducible_obstruction();
    Ratio::new(o.index, 6) == Ratio::from_integer(2 * o.genus - 2 + o.nu_inf)
        && genus_rh(o.index, 0, 0, o.nu_inf) == rat(o.genus, 1)
        && !o.witnesses.is_empty()
        && o.witnesses.iter().all(|w| w.contradiction)
}
