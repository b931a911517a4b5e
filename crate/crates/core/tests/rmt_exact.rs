use std::f64::consts::{PI, TAU};

use approx::assert_relative_eq;
use proptest::prelude::*;

use dismo::rmt_exact::*;
use dismo::specfun::log_gamma;

/// `(N, k, M_N(2k))` from the Gamma product at 30 digits.
const MOMENTS: [(u32, f64, f64); 5] = [
    (1, 1.0, 2.0),
    (3, 0.5, 1.5656567115660458),
    (7, 1.5, 55.20482190350447),
    (20, 2.0, 19481.0),
    (50, 0.25, 1.3551558162671),
];

#[test]
fn moment_reference_values() {
    for (n, k, want) in MOMENTS {
        assert_relative_eq!(moment_mn(n, k).unwrap(), want, max_relative = 1e-12);
    }
}

#[test]
fn closed_shape_functions_need_integer_k() {
    assert!(f_k(1.5, 1.0, FkMethod::Closed).is_err());
    assert!(f_k(4.0, 1.0, FkMethod::Closed).is_err());
    assert!(f_k(-0.5, 1.0, FkMethod::Series).is_err());
}

#[test]
fn displaced_leading_respects_domain() {
    assert!(displaced_moment_leading(3, 1.0, 3.0 * PI).is_err());
    assert!(displaced_moment_leading(3, 1.0, 3.0 * PI - 1e-9).is_ok());
}

#[test]
fn factorization_singular_for_negative_k_at_zero() {
    assert!(factorization_rhs(4, -0.25, 0.0).is_err());
    assert_eq!(factorization_rhs(4, 0.5, 0.0).unwrap(), 0.0);
    assert!(factorization_rhs(1, 1.0, 0.3).is_err());
}

proptest! {
    #[test]
    fn moment_product_step(n in 1u32..80, k in -0.45f64..4.0) {
        let step = log_moment_mn(n + 1, k).unwrap() - log_moment_mn(n, k).unwrap();
        let j = (n + 1) as f64;
        let want = log_gamma(j).unwrap() + log_gamma(j + 2.0 * k).unwrap() - 2.0 * log_gamma(j + k).unwrap();
        prop_assert!((step - want).abs() <= 1e-11 * want.abs().max(1.0));
    }

    #[test]
    fn joint_exact_matches_trig(n in 1u32..8, k in -0.4f64..3.0, beta in -7.0f64..7.0) {
        let e = joint_moment_exact(n, k, beta).unwrap();
        let t = joint_moment_trig_form(n, k, beta).unwrap();
        prop_assert!((e - t).abs() <= 1e-9 * e.abs(), "{e} vs {t}");
    }

    #[test]
    fn joint_is_even_and_periodic(n in 1u32..12, k in 0.0f64..3.0, beta in 0.01f64..3.1) {
        let a = joint_moment_exact(n, k, beta).unwrap();
        prop_assert!((a - joint_moment_exact(n, k, -beta).unwrap()).abs() <= 1e-12 * a);
        prop_assert!((a - joint_moment_exact(n, k, beta + TAU).unwrap()).abs() <= 1e-9 * a);
    }

    #[test]
    fn joint_at_k0_is_second_moment(n in 1u32..30, beta in -3.0f64..3.0) {
        let v = joint_moment_exact(n, 0.0, beta).unwrap();
        prop_assert!((v - (n as f64 + 1.0)).abs() <= 1e-12 * v);
    }

    #[test]
    fn displaced_k0_is_one(n in 2u32..30, beta in -3.0f64..3.0) {
        prop_assert!((factorization_rhs(n, 0.0, beta).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn shape_series_matches_bessel(k in 0.3f64..3.5, x in 0.05f64..15.0) {
        let s = f_k(k, x, FkMethod::Series).unwrap();
        let b = f_k(k, x, FkMethod::Bessel).unwrap();
        prop_assert!((s - b).abs() <= 1e-10, "{s} vs {b}");
    }

    #[test]
    fn shape_is_non_negative(k in 0.0f64..4.0, x in 0.0f64..60.0) {
        prop_assert!(f_k_best(k, x).unwrap() >= -1e-12);
    }

    #[test]
    fn wz_sum_is_one(k in 0.1f64..6.0, p in 0u32..40) {
        prop_assert!((wz_check(k, p).unwrap() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn leading_coeff_is_small_y_limit(k in 0.2f64..3.0) {
        let y = 1e-4;
        let ratio = f_k(k, 0.5 * y, FkMethod::Series).unwrap() / y.powf(2.0 * k);
        prop_assert!((ratio / shape_leading_coeff(k).unwrap() - 1.0).abs() <= 1e-7);
    }
}
