mod common;

use proptest::prelude::*;
use wallcross_core::genfun::*;
use wallcross_core::lattice::SidedRational;
use wallcross_core::rational::{q_frac, q_int};

fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-4i64..=4, -3i64..=3, 1i64..=3), 0..5)
        .prop_map(|t| LaurentPoly::from_coeffs(t.into_iter().map(|(e, n, d)| (e, q_frac(n, d)))))
}

fn arb_rational() -> impl Strategy<Value = LaurentRational> {
    (arb_poly(), prop::collection::vec(1u32..=3, 0..3)).prop_map(|(num, ks)| {
        ks.into_iter()
            .fold(LaurentRational::from(num), |acc, k| acc.mul(&LaurentRational::geometric(k)))
    })
}

proptest! {
    #[test]
    fn theta_is_a_derivation(f in arb_rational(), g in arb_rational()) {
        let lhs = f.mul(&g).theta();
        let rhs = f.theta().mul(&g).add(&f.mul(&g.theta()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inversion_is_an_involution(f in arb_rational()) {
        prop_assert_eq!(f.invert_q().invert_q(), f);
    }

    #[test]
    fn expansion_is_multiplicative(f in arb_rational(), g in arb_rational()) {
        let top = 8;
        let prod = f.mul(&g).expand_ascending(top);
        let (a, b) = (f.expand_ascending(top + 10), g.expand_ascending(top + 10));
        let direct = a.mul(&b);
        for e in prod.min_exp().unwrap_or(0).min(direct.min_exp().unwrap_or(0))..=top {
            prop_assert_eq!(prod.coeff(e), direct.coeff(e));
        }
    }

    #[test]
    fn reduce_preserves_value(f in arb_rational()) {
        prop_assert_eq!(f.reduce(), f);
    }
}

#[test]
fn f_matches_truncated_direct_sum() {
    for theory in common::standard_theories() {
        let g = theory.genus;
        for r in 1..=3 {
            for a in [q_int(-2), q_frac(1, 2), q_int(3)] {
                let s = f_series(&theory, r, &a).unwrap().expand_ascending(30);
                for e in -10..=30 + r * (g - 1) {
                    let chi = e - r * (g - 1);
                    if chi > 30 {
                        continue;
                    }
                    let expected = if q_int(e) >= a {
                        let sign = if chi.rem_euclid(2) == 0 { 1 } else { -1 };
                        q_int(sign * chi) * theory.higgs_value(r, e)
                    } else {
                        q_int(0)
                    };
                    assert_eq!(s.coeff(chi), expected, "r={r} e={e}");
                }
            }
        }
    }
}

#[test]
fn vanishing_higgs_leaves_the_window_polynomial() {
    let theory = common::zero_higgs_theory(1, 3, -1, 5);
    for r in 1..=3 {
        let z0: LaurentRational = z_zero_minus(&theory, r).unwrap().into();
        assert_eq!(z_infty(&theory, r).unwrap(), z0);
        assert_eq!(z_delta(&theory, r, &SidedRational::plus(q_int(2))).unwrap(), z0);
    }
}

#[test]
fn exact_parameters_with_small_denominators_are_rejected() {
    let theory = &common::standard_theories()[0];
    assert!(z_delta(theory, 3, &SidedRational::exact(q_frac(3, 2))).is_err());
    assert!(z_delta(theory, 2, &SidedRational::exact(q_frac(3, 2))).is_ok());
    assert!(z_delta(theory, 2, &SidedRational::minus(q_int(0))).is_err());
}

#[test]
fn json_shape() {
    let f = LaurentRational::geometric(1).mul_poly(&LaurentPoly::monomial(2, q_frac(1, 3)));
    let v = f.to_json();
    assert_eq!(v["num"]["2"], "1/3");
    assert_eq!(v["den"]["0"], "1/1");
    assert_eq!(v["den"]["1"], "1/1");
}
