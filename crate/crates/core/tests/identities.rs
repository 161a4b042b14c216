use num_rational::Ratio;

use modschwarz::catalog::{self, build_h, entries, theta_ode_solutions};
use modschwarz::forms::{self, delta, eisenstein_e2, theta, theta_eta_quotient};
use modschwarz::frobenius::{
    exponents_in_progression, ode_residual, pair_from_h, ratio_solution, solve_power,
};
use modschwarz::qseries::{rint, Exponent, QSeries};
use modschwarz::schwarzian::verify_schwarz_eq;

fn ex(n: i64) -> Exponent {
    Exponent::integer(n)
}

fn r(n: i64, d: i64) -> Ratio<i64> {
    Ratio::new(n, d)
}

#[test]
fn jacobi_identity_through_q20() {
    let t: Vec<QSeries> = (2..=4)
        .map(|j| theta(j, ex(20)).pow_int(4).unwrap())
        .collect();
    assert_eq!(t[1], t[0].add(&t[2]));
    assert!(t[1].trunc() >= ex(20));
}

#[test]
fn eta_quotients_are_thetas_at_twice_tau() {
    for j in 2..=4u8 {
        let lhs = theta(j, ex(20)).substitute_power(r(2, 1));
        let rhs = theta_eta_quotient(j, ex(20));
        assert_eq!(lhs, rhs, "theta_{j}");
        assert!(lhs.trunc().min(rhs.trunc()) >= ex(20));
    }
}

#[test]
fn lambda_from_eta_quotients() {
    // theta_j(2 tau) from eta quotients gives lambda(2 tau)
    let q = |j| theta_eta_quotient(j, ex(16)).pow_int(4).unwrap();
    let from_eta = q(2).div(&q(3)).unwrap();
    let direct = forms::lambda(ex(16)).substitute_power(r(2, 1));
    assert_eq!(from_eta, direct);
}

#[test]
fn delta_log_derivative_is_e2() {
    let d = delta(ex(15));
    assert_eq!(d.d_op(), eisenstein_e2(ex(15)).mul(&d));
}

#[test]
fn hauptmoduln_lead_with_q_to_one_over_m() {
    for m in 3..=5 {
        let f = forms::hauptmodul(m, ex(4)).unwrap();
        assert_eq!(f.leading().unwrap(), (Exponent::new(1, m), rint(1)));
    }
    assert_eq!(
        forms::lambda(ex(4)).leading().unwrap(),
        (Exponent::new(1, 2), rint(16))
    );
}

#[test]
fn theta_solutions_and_their_difference() {
    let (y1, y2, y3) = theta_ode_solutions(ex(11));
    for y in [&y1, &y2, &y3] {
        assert!(ode_residual(y, r(1, 2), ex(10)).unwrap().is_zero());
    }
    assert_eq!(y2.sub(&y1), y3);
    assert_eq!(y1.leading().unwrap(), (Exponent::new(1, 4), rint(4)));
    assert_eq!(
        y2.leading().unwrap(),
        (Exponent::new(-1, 4), Ratio::new(1.into(), 4.into()))
    );
}

#[test]
fn power_solutions_up_to_sixty_terms() {
    for (p, q) in [(1, 2), (1, 3), (3, 4), (5, 2)] {
        let rr = r(p, q);
        for rho in [rr / 2, -rr / 2] {
            let s = solve_power(rho, rr, 60).unwrap();
            assert!(ode_residual(&s.power_series(), rr, s.trunc())
                .unwrap()
                .is_zero());
        }
    }
}

#[test]
fn linear_combinations_of_solutions() {
    let rr = r(2, 3);
    let a = solve_power(rr / 2, rr, 20).unwrap().power_series();
    let b = solve_power(-rr / 2, rr, 20).unwrap().power_series();
    let y = a
        .scale(&rint(7))
        .sub(&b.scale(&Ratio::new(2.into(), 5.into())));
    assert!(ode_residual(&y, rr, y.trunc()).unwrap().is_zero());
}

#[test]
fn ratio_solutions_satisfy_the_schwarzian_equation() {
    for (p, q) in [
        (1, 2),
        (1, 3),
        (2, 3),
        (1, 4),
        (3, 4),
        (1, 5),
        (2, 5),
        (3, 2),
    ] {
        let rr = r(p, q);
        let h = ratio_solution(rr, 30).unwrap();
        assert_eq!(h.leading().unwrap(), (Exponent::from_ratio(rr), rint(1)));
        assert!(verify_schwarz_eq(&h, rr, None).unwrap().ok, "r = {rr}");
        assert!(exponents_in_progression(&h, rr), "r = {rr}");
        assert_eq!(h.effective_grid() as i64, q);
    }
}

#[test]
fn ratio_solution_at_one_half_is_twist_odd() {
    let h = ratio_solution(r(1, 2), 30).unwrap();
    assert_eq!(h.twist_half().unwrap(), h.neg());
}

#[test]
fn exponent_progression_in_the_cusp_variable() {
    // in x = q^{1/m}, h = x^n (1 + sum a_j x^{j m})
    for (m, n) in [(2, 1), (3, 1), (4, 1), (5, 1), (2, 3)] {
        let h = ratio_solution(r(n, m), 30).unwrap();
        let x = h.substitute_power(r(m, 1));
        for (e, _) in x.terms() {
            assert!(e.is_integer());
            let k = e.numer() - n;
            assert!(k >= 0 && k % m == 0, "(m, n) = ({m}, {n}): exponent {e}");
        }
    }
}

#[test]
fn pairs_from_every_catalog_entry_solve_the_ode() {
    for e in entries() {
        let h = build_h(&e, ex(8) + Exponent::from_ratio(e.r())).unwrap();
        let (y1, y2) = pair_from_h(&h).unwrap();
        for y in [&y1, &y2] {
            let order = y.trunc();
            assert!(
                ode_residual(y, e.r(), order).unwrap().is_zero(),
                "{:?}",
                e.triple()
            );
        }
    }
}

#[test]
fn degree_relations_by_level() {
    for e in entries().iter().filter(|e| e.d > 1) {
        let (m, n, d) = e.triple();
        let holds = match m {
            2 => 2 * d + 1 == 3 * n,
            3 => d + 1 == 2 * n,
            4 => d + 2 == 3 * n,
            5 => d + 5 == 6 * n,
            _ => unreachable!(),
        };
        assert!(holds, "({m},{n},{d})");
    }
}

#[test]
fn all_entries_pass_at_order_ten() {
    for e in entries() {
        let rep = catalog::verify_entry(&e, ex(10)).unwrap();
        assert!(rep.ok, "{:?}", e.triple());
        assert_eq!(rep.vanishing_order, Exponent::from_ratio(e.r()));
    }
}
