//! Truncated Puiseux series in `q` with exact rational coefficients.
//!
//! A [`QSeries`] stores the nonzero coefficients of `q^e` for rational
//! exponents `e` below a truncation order `trunc`; everything at or above
//! `trunc` is unknown. Every operation propagates `trunc` pessimistically so
//! that a zero residual computed from these series is a real zero.
//!
//! Arithmetic is carried out on the integer lattice `(1/M)Z` where `M` is the
//! common grid of the operands (including the denominators of their
//! truncation orders).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::catalog::RationalMap;
use crate::error::{Error, Result};

/// Exact rational coefficient.
pub type Rat = BigRational;

/// Build a rational coefficient from a small fraction.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Build an integral rational coefficient.
pub fn rint(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// A rational exponent of `q`, always in lowest terms with positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Exponent(Ratio<i64>);

impl Exponent {
    pub const ZERO: Exponent = Exponent(Ratio::new_raw(0, 1));

    pub fn new(numer: i64, denom: i64) -> Self {
        Exponent(Ratio::new(numer, denom))
    }

    pub fn integer(n: i64) -> Self {
        Exponent(Ratio::from_integer(n))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Self {
        Exponent(r)
    }

    pub fn ratio(self) -> Ratio<i64> {
        self.0
    }

    pub fn numer(self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(self) -> bool {
        self.0.is_integer()
    }

    pub fn floor(self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn ceil(self) -> i64 {
        self.0.ceil().to_integer()
    }

    pub fn to_f64(self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn to_rat(self) -> Rat {
        rat(self.numer(), self.denom())
    }

    /// Index of this exponent on the lattice `(1/grid)Z`; `None` if it is not on it.
    fn index_on(self, grid: u64) -> Option<i64> {
        let scaled = self.0 * Ratio::from_integer(grid as i64);
        scaled.is_integer().then(|| scaled.to_integer())
    }

    fn from_index(index: i64, grid: u64) -> Self {
        Exponent::new(index, grid as i64)
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 + rhs.0)
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 - rhs.0)
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-self.0)
    }
}

impl Mul<Ratio<i64>> for Exponent {
    type Output = Exponent;
    fn mul(self, rhs: Ratio<i64>) -> Exponent {
        Exponent(self.0 * rhs)
    }
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent::integer(n)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_ratio_i64(s).map(Exponent)
    }
}

fn parse_ratio_i64(s: &str) -> Result<Ratio<i64>> {
    let bad = || Error::InvalidArgument(format!("expected p/q, got {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(p, q))
        }
        None => s.parse::<i64>().map(Ratio::from_integer).map_err(|_| bad()),
    }
}

/// Parse an exact rational in `p/q` (or integer) form.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::InvalidArgument(format!("expected p/q, got {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => s
            .parse::<BigInt>()
            .map(BigRational::from_integer)
            .map_err(|_| bad()),
    }
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// A truncated Puiseux series `sum c_e q^e + O(q^trunc)`.
#[derive(Clone, Debug)]
pub struct QSeries {
    grid: u64,
    terms: BTreeMap<Exponent, Rat>,
    trunc: Exponent,
}

impl QSeries {
    /// Build from arbitrary `(exponent, coefficient)` pairs. Repeated exponents
    /// are summed; terms at or above `trunc` and zero coefficients are dropped.
    /// The grid is the lcm of all exponent denominators.
    pub fn from_terms<I>(terms: I, trunc: Exponent) -> Self
    where
        I: IntoIterator<Item = (Exponent, Rat)>,
    {
        let mut map: BTreeMap<Exponent, Rat> = BTreeMap::new();
        for (e, c) in terms {
            if e >= trunc {
                continue;
            }
            *map.entry(e).or_insert_with(Rat::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        let grid = map.keys().fold(1u64, |g, e| lcm_u64(g, e.denom() as u64));
        QSeries {
            grid,
            terms: map,
            trunc,
        }
    }

    /// Like [`QSeries::from_terms`] but with an explicit grid, which must be a
    /// multiple of every exponent denominator.
    pub fn with_grid<I>(grid: u64, terms: I, trunc: Exponent) -> Self
    where
        I: IntoIterator<Item = (Exponent, Rat)>,
    {
        let mut s = Self::from_terms(terms, trunc);
        assert!(
            grid.is_multiple_of(s.grid),
            "grid {grid} is not a multiple of the exponent denominators ({})",
            s.grid
        );
        s.grid = grid;
        s
    }

    /// Coefficients `coeffs[i]` of `q^{(start + i)/grid}`.
    pub fn from_dense(grid: u64, start: i64, coeffs: Vec<Rat>, trunc: Exponent) -> Self {
        let terms = coeffs
            .into_iter()
            .enumerate()
            .map(|(i, c)| (Exponent::from_index(start + i as i64, grid), c));
        Self::with_grid(grid, terms, trunc)
    }

    pub fn zero(trunc: Exponent) -> Self {
        QSeries {
            grid: 1,
            terms: BTreeMap::new(),
            trunc,
        }
    }

    pub fn constant(c: Rat, trunc: Exponent) -> Self {
        Self::from_terms([(Exponent::ZERO, c)], trunc)
    }

    pub fn one(trunc: Exponent) -> Self {
        Self::constant(Rat::one(), trunc)
    }

    pub fn monomial(c: Rat, e: Exponent, trunc: Exponent) -> Self {
        Self::from_terms([(e, c)], trunc)
    }

    pub fn grid(&self) -> u64 {
        self.grid
    }

    pub fn trunc(&self) -> Exponent {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &Rat)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `q^e`, or `None` when `e` is beyond the truncation.
    pub fn coeff(&self, e: Exponent) -> Option<Rat> {
        if e >= self.trunc {
            return None;
        }
        Some(self.terms.get(&e).cloned().unwrap_or_else(Rat::zero))
    }

    /// Least exponent carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<Exponent> {
        self.terms.keys().next().copied()
    }

    /// Valuation with the convention `val(0) = trunc`.
    fn val_or_trunc(&self) -> Exponent {
        self.valuation().unwrap_or(self.trunc)
    }

    /// The smallest grid on which every stored exponent lies.
    pub fn effective_grid(&self) -> u64 {
        self.terms
            .keys()
            .fold(1u64, |g, e| lcm_u64(g, e.denom() as u64))
    }

    /// Re-express on a finer grid. `grid` must be a multiple of the current one.
    pub fn refine(&self, grid: u64) -> Self {
        assert!(
            grid.is_multiple_of(self.grid),
            "refine: {grid} is not a multiple of {}",
            self.grid
        );
        let mut s = self.clone();
        s.grid = grid;
        s
    }

    /// Drop every term at or above `order` and lower `trunc` accordingly.
    pub fn truncate(&self, order: Exponent) -> Self {
        let trunc = self.trunc.min(order);
        QSeries {
            grid: self.grid,
            terms: self
                .terms
                .range(..trunc)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            trunc,
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return QSeries {
                grid: self.grid,
                terms: BTreeMap::new(),
                trunc: self.trunc,
            };
        }
        QSeries {
            grid: self.grid,
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
            trunc: self.trunc,
        }
    }

    /// Multiply by the exact monomial `q^e`.
    pub fn shift(&self, e: Exponent) -> Self {
        let grid = lcm_u64(self.grid, e.denom() as u64);
        QSeries {
            grid,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k + e, v.clone()))
                .collect(),
            trunc: self.trunc + e,
        }
    }

    /// Add an exact constant.
    pub fn add_scalar(&self, c: &Rat) -> Self {
        let mut terms = self.terms.clone();
        if Exponent::ZERO < self.trunc {
            let slot = terms.entry(Exponent::ZERO).or_insert_with(Rat::zero);
            *slot += c;
            if slot.is_zero() {
                terms.remove(&Exponent::ZERO);
            }
        }
        QSeries {
            grid: self.grid,
            terms,
            trunc: self.trunc,
        }
    }

    /// Common lattice for two series, including their truncation denominators.
    fn common_grid(&self, other: &QSeries) -> u64 {
        [self.trunc, other.trunc]
            .iter()
            .fold(lcm_u64(self.grid, other.grid), |g, t| {
                lcm_u64(g, t.denom() as u64)
            })
    }

    fn indexed(&self, grid: u64) -> Vec<(i64, &Rat)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.index_on(grid).expect("exponent off grid"), c))
            .collect()
    }

    /// Termwise sum; `trunc = min`.
    pub fn add(&self, other: &QSeries) -> QSeries {
        let trunc = self.trunc.min(other.trunc);
        let grid = lcm_u64(self.grid, other.grid);
        let mut terms: BTreeMap<Exponent, Rat> = self
            .terms
            .range(..trunc)
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        for (e, c) in other.terms.range(..trunc) {
            match terms.get_mut(e) {
                Some(v) => {
                    *v += c;
                    if v.is_zero() {
                        terms.remove(e);
                    }
                }
                None => {
                    terms.insert(*e, c.clone());
                }
            }
        }
        QSeries { grid, terms, trunc }
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            grid: self.grid,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.neg())
    }

    /// Cauchy product with `trunc = min(a.trunc + val(b), b.trunc + val(a))`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let trunc = (self.trunc + other.val_or_trunc()).min(other.trunc + self.val_or_trunc());
        let grid = lcm_u64(self.grid, other.grid);
        let work = lcm_u64(self.common_grid(other), trunc.denom() as u64);
        let limit = trunc.index_on(work).expect("trunc on common grid");
        let a = self.indexed(work);
        let b = other.indexed(work);
        let mut acc: HashMap<i64, Rat> = HashMap::new();
        for (i, x) in &a {
            for (j, y) in &b {
                let k = i + j;
                if k >= limit {
                    // b is ascending, later j only grow
                    break;
                }
                let p = *x * *y;
                match acc.get_mut(&k) {
                    Some(v) => *v += p,
                    None => {
                        acc.insert(k, p);
                    }
                }
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (Exponent::from_index(k, work), c))
            .collect();
        QSeries { grid, terms, trunc }
    }

    /// Leading term `(val, coefficient)`.
    pub fn leading(&self) -> Result<(Exponent, Rat)> {
        self.terms
            .iter()
            .next()
            .map(|(e, c)| (*e, c.clone()))
            .ok_or(Error::ZeroSeries)
    }

    /// Multiplicative inverse. With `b = b0 q^v (1 + beta)` known below
    /// `b.trunc`, the inverse is known below `b.trunc - 2v`.
    pub fn inverse(&self) -> Result<QSeries> {
        let (v, b0) = self.leading().map_err(|_| Error::DivisionByZeroSeries)?;
        let work = lcm_u64(self.grid, self.trunc.denom() as u64);
        let v_idx = v.index_on(work).expect("valuation on grid");
        let rel: Vec<(i64, &Rat)> = self
            .indexed(work)
            .into_iter()
            .map(|(k, c)| (k - v_idx, c))
            .collect();
        let precision = self.trunc.index_on(work).expect("trunc on grid") - v_idx;
        let step = rel.iter().skip(1).fold(0i64, |g, (k, _)| g.gcd(k)).max(1);
        let n = ((precision + step - 1) / step).max(0) as usize;
        let inv_b0 = b0.recip();
        let mut w: Vec<Rat> = Vec::with_capacity(n);
        for j in 0..n {
            if j == 0 {
                w.push(inv_b0.clone());
                continue;
            }
            let mut s = Rat::zero();
            for (k, c) in rel.iter().skip(1) {
                let off = (k / step) as usize;
                if off > j {
                    break;
                }
                let prev = &w[j - off];
                if !prev.is_zero() {
                    s += *c * prev;
                }
            }
            w.push(-(s * &inv_b0));
        }
        let trunc = self.trunc - v - v;
        let terms = w
            .into_iter()
            .enumerate()
            .map(|(j, c)| (Exponent::from_index(j as i64 * step - v_idx, work), c));
        Ok(QSeries::with_grid(lcm_u64(self.grid, work), terms, trunc).regrid(self.grid.max(1)))
    }

    /// Put the series back on `grid` when all its exponents fit, else on the
    /// lcm of `grid` and its effective grid.
    fn regrid(mut self, grid: u64) -> QSeries {
        self.grid = lcm_u64(grid, self.effective_grid());
        self
    }

    /// `a / b = a * b^{-1}`; the truncation is
    /// `min(a.trunc - val(b), val(a) + b.trunc - 2 val(b))`.
    pub fn div(&self, other: &QSeries) -> Result<QSeries> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Power by repeated squaring; negative `k` inverts first.
    pub fn pow_int(&self, k: i64) -> Result<QSeries> {
        if k < 0 {
            return self.inverse()?.pow_int(-k);
        }
        if k == 0 {
            let rel = self.trunc - self.val_or_trunc();
            return Ok(QSeries::one(rel).refine_to(self.grid));
        }
        let mut base = self.clone();
        let mut result: Option<QSeries> = None;
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result.expect("k > 0"))
    }

    fn refine_to(mut self, grid: u64) -> QSeries {
        self.grid = lcm_u64(self.grid, grid);
        self
    }

    /// Formal substitution `q -> q^c` for positive rational `c`.
    pub fn substitute_power(&self, c: Ratio<i64>) -> QSeries {
        assert!(c > Ratio::zero(), "substitute_power needs c > 0");
        let mq = self.grid as i64 * c.denom();
        let grid = (mq / c.numer().gcd(&mq)) as u64;
        QSeries {
            grid,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (*e * c, v.clone()))
                .collect(),
            trunc: self.trunc * c,
        }
    }

    /// `q^e -> (-1)^{2e} q^e`, i.e. `tau -> tau + 1` on series in `q^{1/2}`.
    pub fn twist_half(&self) -> Result<QSeries> {
        let eff = self.effective_grid();
        if 2 % eff != 0 {
            return Err(Error::UnsupportedGrid(eff));
        }
        Ok(QSeries {
            grid: self.grid,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    if e.is_integer() {
                        (*e, c.clone())
                    } else {
                        (*e, -c)
                    }
                })
                .collect(),
            trunc: self.trunc,
        })
    }

    /// The derivation `D = q d/dq`.
    pub fn d_op(&self) -> QSeries {
        QSeries {
            grid: self.grid,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| **e != Exponent::ZERO)
                .map(|(e, c)| (*e, c * e.to_rat()))
                .collect(),
            trunc: self.trunc,
        }
    }

    /// Monic square root: returns `(u, a0, v/2)` with `u^2 = a / (a0 q^v)`.
    pub fn sqrt_monic(&self) -> Result<(QSeries, Rat, Exponent)> {
        let (v, a0) = self.leading().map_err(|_| Error::DivisionByZeroSeries)?;
        let work = lcm_u64(self.grid, self.trunc.denom() as u64);
        let v_idx = v.index_on(work).expect("valuation on grid");
        let inv_a0 = a0.recip();
        let rel: Vec<(i64, Rat)> = self
            .indexed(work)
            .into_iter()
            .map(|(k, c)| (k - v_idx, c * &inv_a0))
            .collect();
        let precision = self.trunc.index_on(work).expect("trunc on grid") - v_idx;
        let step = rel.iter().skip(1).fold(0i64, |g, (k, _)| g.gcd(k)).max(1);
        let n = ((precision + step - 1) / step).max(0) as usize;
        let mut beta = vec![Rat::zero(); n];
        for (k, c) in rel.into_iter().skip(1) {
            let j = (k / step) as usize;
            if j < n {
                beta[j] = c;
            }
        }
        // (1 + u1 x + ...)^2 = 1 + beta: 2 u_j = beta_j - sum_{0<i<j} u_i u_{j-i}
        let half = rat(1, 2);
        let mut u: Vec<Rat> = Vec::with_capacity(n);
        for j in 0..n {
            if j == 0 {
                u.push(Rat::one());
                continue;
            }
            let mut s = beta[j].clone();
            for i in 1..j {
                if !u[i].is_zero() && !u[j - i].is_zero() {
                    s -= &u[i] * &u[j - i];
                }
            }
            u.push(s * &half);
        }
        let trunc = self.trunc - v;
        let terms = u
            .into_iter()
            .enumerate()
            .map(|(j, c)| (Exponent::from_index(j as i64 * step, work), c));
        let root = QSeries::with_grid(work, terms, trunc).regrid(self.grid);
        Ok((root, a0, v * Ratio::new(1, 2)))
    }

    /// Evaluate a rational map `P(t)/Q(t)` at `t = self`.
    pub fn compose_rational(&self, map: &RationalMap) -> Result<QSeries> {
        compose_rational(map, self)
    }
}

/// Horner evaluation of a polynomial with integer coefficients (ascending) at
/// `t`. Constants are exact, so they never lower the truncation.
pub fn eval_poly(coeffs: &[i64], t: &QSeries) -> QSeries {
    enum Acc {
        Scalar(Rat),
        Series(QSeries),
    }
    let mut acc = Acc::Scalar(Rat::zero());
    for &c in coeffs.iter().rev() {
        let c = rint(c);
        acc = match acc {
            Acc::Scalar(k) if k.is_zero() => Acc::Scalar(c),
            Acc::Scalar(k) => Acc::Series(t.scale(&k).add_scalar(&c)),
            Acc::Series(r) => Acc::Series(r.mul(t).add_scalar(&c)),
        };
    }
    match acc {
        Acc::Series(r) => r,
        // constant polynomial: carry the relative precision of t
        Acc::Scalar(k) => QSeries::constant(k, t.trunc() - t.val_or_trunc()).refine_to(t.grid()),
    }
}

/// `P(t)/Q(t)` as a series.
pub fn compose_rational(map: &RationalMap, t: &QSeries) -> Result<QSeries> {
    let p = eval_poly(&map.numerator, t);
    let q = eval_poly(&map.denominator, t);
    p.div(&q)
}

pub fn add(a: &QSeries, b: &QSeries) -> QSeries {
    a.add(b)
}

pub fn mul(a: &QSeries, b: &QSeries) -> QSeries {
    a.mul(b)
}

pub fn div(a: &QSeries, b: &QSeries) -> Result<QSeries> {
    a.div(b)
}

pub fn pow_int(a: &QSeries, k: i64) -> Result<QSeries> {
    a.pow_int(k)
}

pub fn substitute_power(a: &QSeries, c: Ratio<i64>) -> QSeries {
    a.substitute_power(c)
}

pub fn twist_half(a: &QSeries) -> Result<QSeries> {
    a.twist_half()
}

pub fn d_op(a: &QSeries) -> QSeries {
    a.d_op()
}

pub fn sqrt_monic(a: &QSeries) -> Result<(QSeries, Rat, Exponent)> {
    a.sqrt_monic()
}

pub fn leading(a: &QSeries) -> Result<(Exponent, Rat)> {
    a.leading()
}

impl PartialEq for QSeries {
    /// Equal when the term maps agree below the smaller truncation.
    fn eq(&self, other: &Self) -> bool {
        let t = self.trunc.min(other.trunc);
        self.terms.range(..t).eq(other.terms.range(..t))
    }
}

impl<'a> Add<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn add(self, rhs: &'a QSeries) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl<'a> Sub<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &'a QSeries) -> QSeries {
        QSeries::sub(self, rhs)
    }
}

impl<'a> Mul<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &'a QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::neg(self)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (e.cmp(&Exponent::ZERO), mag.is_one()) {
                (Ordering::Equal, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}*q^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.trunc)
    }
}

/// Wire form: `{"grid": M, "trunc": "p/q", "terms": [["p/q", "num/den"], ...]}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct QSeriesJson {
    pub grid: u64,
    pub trunc: String,
    pub terms: Vec<(String, String)>,
}

impl From<&QSeries> for QSeriesJson {
    fn from(s: &QSeries) -> Self {
        QSeriesJson {
            grid: s.grid,
            trunc: s.trunc.to_string(),
            terms: s
                .terms
                .iter()
                .map(|(e, c)| (e.to_string(), c.to_string()))
                .collect(),
        }
    }
}

impl TryFrom<QSeriesJson> for QSeries {
    type Error = Error;
    fn try_from(j: QSeriesJson) -> Result<Self> {
        let trunc: Exponent = j.trunc.parse()?;
        let terms = j
            .terms
            .iter()
            .map(|(e, c)| Ok((e.parse::<Exponent>()?, parse_rat(c)?)))
            .collect::<Result<Vec<_>>>()?;
        let s = QSeries::from_terms(terms, trunc);
        if j.grid == 0 || !j.grid.is_multiple_of(s.grid) {
            return Err(Error::InvalidArgument(format!(
                "grid {} does not cover the exponents (needs a multiple of {})",
                j.grid, s.grid
            )));
        }
        Ok(s.refine(j.grid))
    }
}

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        QSeriesJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let j = QSeriesJson::deserialize(deserializer)?;
        QSeries::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Convert an exact coefficient to `f64` (used by the numeric layer).
pub fn rat_to_f64(c: &Rat) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        // huge numerator/denominator: go through the integer parts separately
        let n = c.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = c.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}
