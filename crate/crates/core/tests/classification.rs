use num_integer::Integer;
use num_rational::Ratio;
use proptest::prelude::*;

use modschwarz::catalog::{entries, verify_entry};
use modschwarz::classify::{
    admissible, admissible_pair, cusp_number, degree1_levels, degree_for, genus_rh,
    reducible_obstruction, Reason,
};
use modschwarz::qseries::{rat, Exponent};

#[test]
fn admissible_exactly_for_levels_two_to_five() {
    for m in 1..=30i64 {
        for n in 0..=30i64 {
            let a = admissible(Ratio::new(n, m));
            let g = n.gcd(&m);
            let (n0, m0) = (n / g, m / g);
            let expect = n0 >= 1 && (2..=5).contains(&m0);
            assert_eq!(a.admissible, expect, "r = {n}/{m}");
            assert_eq!(a.reason == Reason::OK, expect);
            if expect {
                assert_eq!((a.m, a.n), (Some(m0), Some(n0)));
                assert_eq!(a.d, Some((6 * n0 - m0) * cusp_number(m0).unwrap() / 12));
            } else if n0 == 0 || m0 == 1 {
                assert_eq!(a.reason, Reason::IntegerR);
            } else {
                assert_eq!(a.reason, Reason::LevelOutOfRange);
            }
        }
    }
}

#[test]
fn degrees_are_integral_for_admissible_pairs() {
    for m in 2..=5 {
        for n in (1..=60).filter(|n: &i64| n.gcd(&m) == 1) {
            let d = degree_for(m, n).unwrap();
            assert!(d >= 1);
            assert_eq!((6 * n - m) * cusp_number(m).unwrap(), 12 * d);
        }
    }
}

#[test]
fn catalog_degrees_match_the_formula() {
    for e in entries() {
        let a = admissible_pair(e.m, e.n);
        assert!(a.admissible);
        let rep = verify_entry(&e, Exponent::integer(4)).unwrap();
        assert_eq!(Some(rep.d), a.d);
        assert_eq!(rep.degree_formula_d, a.d);
    }
}

#[test]
fn zero_genus_levels() {
    for m in 2..=5 {
        let nu = cusp_number(m).unwrap();
        assert_eq!(genus_rh(m * nu, 0, 0, nu), rat(0, 1));
        assert_eq!(m * nu, 6 * (nu - 2));
    }
    assert_eq!(degree1_levels(), vec![(2, 3), (3, 4), (4, 6), (5, 12)]);
}

#[test]
fn commutator_obstruction() {
    let o = reducible_obstruction();
    assert_eq!((o.index, o.level, o.nu_inf, o.genus), (6, 6, 1, 1));
    assert_eq!(o.genus_from_rh, rat(1, 1));
    let ds: Vec<i64> = o.witnesses.iter().map(|w| w.d).collect();
    assert_eq!(ds, (1..=10).collect::<Vec<_>>());
    for w in &o.witnesses {
        assert_eq!(w.n, 2 * w.d + 1);
        assert!(w.contradiction);
    }
}

proptest! {
    #[test]
    fn verdict_depends_only_on_the_reduced_fraction(n in 0i64..200, m in 1i64..200, k in 1i64..20) {
        prop_assert_eq!(admissible(Ratio::new(n, m)), admissible(Ratio::new(k * n, k * m)));
    }
}
