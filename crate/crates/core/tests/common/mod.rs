//! Strategies and property bodies shared by the property suite and the
//! acceptance run.
#![allow(dead_code)]

use num_rational::Ratio;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use modschwarz::qseries::{rat, rint, Exponent, QSeries, Rat};
use modschwarz::schwarzian::{mobius_apply, normalized_schwarzian};

pub type Outcome = Result<(), TestCaseError>;

pub fn grid() -> impl Strategy<Value = u64> {
    prop_oneof![Just(1u64), Just(2), Just(3), Just(4), Just(6)]
}

pub fn coeff() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Dense series on a random grid with a random start and some slack between
/// the last stored term and the truncation.
pub fn series() -> impl Strategy<Value = QSeries> {
    (
        grid(),
        -4i64..4,
        prop::collection::vec(coeff(), 1..8),
        0i64..5,
    )
        .prop_map(|(g, start, cs, slack)| {
            let end = start + cs.len() as i64 + slack;
            QSeries::from_dense(g, start, cs, Exponent::new(end, g as i64))
        })
}

pub fn nonzero_series() -> impl Strategy<Value = QSeries> {
    series().prop_filter("nonzero", |s| !s.is_zero())
}

/// `q^v (1 + ...)` with `v > 0`, so that `D h` does not vanish.
pub fn positive_series() -> impl Strategy<Value = QSeries> {
    (grid(), 1i64..4, prop::collection::vec(coeff(), 1..7)).prop_map(|(g, v, cs)| {
        let mut all = vec![rint(1)];
        all.extend(cs);
        let end = v + all.len() as i64;
        QSeries::from_dense(g, v, all, Exponent::new(end, g as i64))
    })
}

pub fn positive_ratio() -> impl Strategy<Value = Ratio<i64>> {
    (1i64..5, 1i64..4).prop_map(|(n, d)| Ratio::new(n, d))
}

/// Integer Moebius coefficients with nonzero determinant.
pub fn mobius() -> impl Strategy<Value = [i64; 4]> {
    prop::array::uniform4(-6i64..=6).prop_filter("invertible", |m| m[0] * m[3] - m[1] * m[2] != 0)
}

fn one() -> QSeries {
    QSeries::one(Exponent::integer(60))
}

fn to_rat(c: Ratio<i64>) -> Rat {
    rat(*c.numer(), *c.denom())
}

pub fn ring_axioms(a: &QSeries, b: &QSeries, c: &QSeries) -> Outcome {
    prop_assert_eq!(a.add(b), b.add(a));
    prop_assert_eq!(a.add(b).add(c), a.add(&b.add(c)));
    prop_assert!(a.sub(a).is_zero());
    prop_assert_eq!(a.add(&QSeries::zero(a.trunc())), a.clone());
    prop_assert_eq!(a.mul(b), b.mul(a));
    prop_assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
    prop_assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
    prop_assert_eq!(a.mul(&one()), a.clone());
    Ok(())
}

pub fn division_round_trip(a: &QSeries, b: &QSeries) -> Outcome {
    prop_assert_eq!(a.div(b).unwrap().mul(b), a.clone());
    prop_assert_eq!(b.inverse().unwrap().mul(b), one());
    Ok(())
}

/// Results computed from shortened inputs agree with the full ones below
/// their own, smaller, truncation order.
pub fn truncation_is_sound(a: &QSeries, b: &QSeries, cut_a: i64, cut_b: i64) -> Outcome {
    let shorten = |s: &QSeries, k: i64| {
        let v = s.valuation().unwrap_or(s.trunc());
        s.truncate((v + Exponent::new(k + 1, s.grid() as i64)).min(s.trunc()))
    };
    let (sa, sb) = (shorten(a, cut_a), shorten(b, cut_b));
    prop_assert_eq!(sa.mul(&sb), a.mul(b));
    prop_assert_eq!(sa.div(&sb).unwrap(), a.div(b).unwrap());
    Ok(())
}

pub fn powers(a: &QSeries, k: i64) -> Outcome {
    let direct = (0..k).fold(one(), |acc, _| acc.mul(a));
    prop_assert_eq!(a.pow_int(k).unwrap(), direct);
    prop_assert_eq!(a.pow_int(-k).unwrap().mul(&a.pow_int(k).unwrap()), one());
    Ok(())
}

pub fn derivation(a: &QSeries, b: &QSeries) -> Outcome {
    prop_assert_eq!(a.mul(b).d_op(), a.d_op().mul(b).add(&a.mul(&b.d_op())));
    Ok(())
}

pub fn substitution_homomorphism(a: &QSeries, b: &QSeries, c: Ratio<i64>) -> Outcome {
    prop_assert_eq!(
        a.mul(b).substitute_power(c),
        a.substitute_power(c).mul(&b.substitute_power(c))
    );
    prop_assert_eq!(
        a.add(b).substitute_power(c),
        a.substitute_power(c).add(&b.substitute_power(c))
    );
    // D(a o q^c) = c (Da) o q^c
    prop_assert_eq!(
        a.substitute_power(c).d_op(),
        a.d_op().substitute_power(c).scale(&to_rat(c))
    );
    Ok(())
}

pub fn twist_involution(a: &QSeries, b: &QSeries) -> Outcome {
    let a2 = a.substitute_power(Ratio::new(1, 2));
    let b2 = b.substitute_power(Ratio::new(1, 2));
    if a2.effective_grid() <= 2 && b2.effective_grid() <= 2 {
        let t = |s: &QSeries| s.twist_half().unwrap();
        prop_assert_eq!(t(&t(&a2)), a2.clone());
        prop_assert_eq!(t(&a2.mul(&b2)), t(&a2).mul(&t(&b2)));
    }
    Ok(())
}

pub fn sqrt_round_trip(a: &QSeries) -> Outcome {
    let (u, a0, half) = a.sqrt_monic().unwrap();
    prop_assert_eq!(u.mul(&u).scale(&a0).shift(half + half), a.clone());
    prop_assert_eq!(u.leading().unwrap(), (Exponent::ZERO, rint(1)));
    Ok(())
}

/// `sigma(h o q^c) = c^2 sigma(h) o q^c`.
pub fn schwarzian_cocycle(h: &QSeries, c: Ratio<i64>) -> Outcome {
    let lhs = normalized_schwarzian(&h.substitute_power(c)).unwrap();
    let c2 = to_rat(c * c);
    let rhs = normalized_schwarzian(h)
        .unwrap()
        .substitute_power(c)
        .scale(&c2);
    prop_assert!(lhs.trunc() > Exponent::ZERO);
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn projective_invariance(h: &QSeries, m: [i64; 4]) -> Outcome {
    let g = mobius_apply(&m.map(rint), h).unwrap();
    let (a, b) = (
        normalized_schwarzian(&g).unwrap(),
        normalized_schwarzian(h).unwrap(),
    );
    prop_assert!(a.trunc() > Exponent::ZERO);
    prop_assert_eq!(a, b);
    Ok(())
}
