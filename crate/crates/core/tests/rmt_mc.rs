use std::f64::consts::PI;

use dismo::rmt_exact::{displaced_moment_leading, factorization_rhs, joint_moment_exact};
use dismo::rmt_mc::*;
use dismo::Error;
use num_complex::Complex64;

fn within_3se(e: &McEstimate, target: f64) -> bool {
    e.z_score(target) <= 3.0
}

/// Mean and standard error of a plain sample.
fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

#[test]
fn haar_trace_moments() {
    for (i, n) in [2usize, 5, 10].into_iter().enumerate() {
        let mut rng = RngStream::new(11, i as u64).rng();
        let mut re = Vec::new();
        let mut im = Vec::new();
        let mut sq = Vec::new();
        for _ in 0..100_000 {
            let s = sample_haar_eigenangles_with(n, &mut rng).unwrap();
            let tr: Complex64 = s.angles().iter().map(|&a| Complex64::from_polar(1.0, a)).sum();
            re.push(tr.re);
            im.push(tr.im);
            sq.push(tr.norm_sqr());
        }
        for (name, xs, want) in [("Re Tr", &re, 0.0), ("Im Tr", &im, 0.0), ("|Tr|^2", &sq, 1.0)] {
            let (m, se) = mean_se(xs);
            assert!((m - want).abs() <= 3.0 * se, "N = {n}, {name}: {m} +- {se}");
        }
    }
}

#[test]
fn unit_circle_phase_is_uniform() {
    let mut rng = RngStream::new(12, 0).rng();
    let mut xs: Vec<f64> = (0..100_000)
        .map(|_| sample_haar_eigenangles_with(1, &mut rng).unwrap().angles()[0])
        .collect();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = (x + PI) / (2.0 * PI);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    // Asymptotic 1% critical value of the Kolmogorov statistic.
    assert!(d * n.sqrt() < 1.628, "D = {d}");
}

#[test]
fn arc_of_mean_spacing_holds_one_angle() {
    for n in [3usize, 8] {
        let mut rng = RngStream::new(13, n as u64).rng();
        let arc = 2.0 * PI / n as f64;
        let counts: Vec<f64> = (0..100_000)
            .map(|_| {
                let s = sample_haar_eigenangles_with(n, &mut rng).unwrap();
                s.angles().iter().filter(|&&a| a > 0.3 && a <= 0.3 + arc).count() as f64
            })
            .collect();
        let (m, se) = mean_se(&counts);
        assert!((m - 1.0).abs() <= 3.0 * se, "N = {n}: {m} +- {se}");
    }
}

#[test]
fn two_point_chord_moment() {
    // E|e^{ia} - e^{ib}|^2 = 2 - 2 E cos(a - b), and E|Tr U|^2 = 1 forces
    // E cos(a - b) = -1/2 at N = 2.
    let mut rng = RngStream::new(14, 0).rng();
    let xs: Vec<f64> = (0..100_000)
        .map(|_| {
            let s = sample_haar_eigenangles_with(2, &mut rng).unwrap();
            let a = s.angles();
            (Complex64::from_polar(1.0, a[0]) - Complex64::from_polar(1.0, a[1])).norm_sqr()
        })
        .collect();
    let (m, se) = mean_se(&xs);
    assert!((m - 3.0).abs() <= 3.0 * se, "{m} +- {se}");
}

#[test]
fn displaced_examples() {
    let s = RngStream::new(21, 0);
    for x in [0.3, 1.0, 2.5] {
        let e = mc_displaced_moment(1, 1.0, x, 1000, &s).unwrap();
        assert!((e.mean - 4.0 * x.sin().powi(2)).abs() < 1e-13);
        assert!(e.std_error < 1e-13);
    }
    let e = mc_displaced_moment(10, 1.0, 0.5, 50_000, &s).unwrap();
    assert!(within_3se(&e, factorization_rhs(10, 1.0, 0.1).unwrap()), "{e:?}");
    let e = mc_displaced_moment(7, 0.0, 0.8, 1000, &s).unwrap();
    assert_eq!((e.mean, e.std_error), (1.0, 0.0));
}

#[test]
fn joint_examples() {
    let s = RngStream::new(22, 0);
    for beta in [0.0, 1.0, 2.5] {
        let e = mc_joint_moment(1, 1.0, beta, 20_000, &s).unwrap();
        assert!(within_3se(&e, 4.0 + 2.0 * beta.cos()), "beta = {beta}: {e:?}");
    }
    let e = mc_joint_moment(2, 1.0, 0.0, 50_000, &s).unwrap();
    assert!(within_3se(&e, 20.0), "{e:?}");
    let e = mc_joint_moment(5, 0.0, 0.9, 50_000, &s).unwrap();
    assert!(within_3se(&e, 6.0), "{e:?}");
}

#[test]
fn reproducible_and_stream_separated() {
    let a = mc_joint_moment(4, 0.5, 0.7, 5000, &RngStream::new(31, 2)).unwrap();
    let b = mc_joint_moment(4, 0.5, 0.7, 5000, &RngStream::new(31, 2)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    assert_eq!(a.seed, 31);
    assert_eq!(a.n_samples, 5000);
    let c = mc_joint_moment(4, 0.5, 0.7, 5000, &RngStream::new(31, 3)).unwrap();
    assert_ne!(a.mean, c.mean);
    // Distinct streams are independent draws of the same law.
    let pooled = ((a.std_error.powi(2) + c.std_error.powi(2)) as f64).sqrt();
    assert!((a.mean - c.mean).abs() < 4.0 * pooled);

    let s = RngStream::new(32, 0);
    assert_eq!(sample_haar_eigenangles(6, &s).unwrap(), sample_haar_eigenangles(6, &s).unwrap());
}

#[test]
fn batch_matches_single_observables() {
    let s = RngStream::new(33, 0);
    let plan = McPlan {
        matrix_size: 3,
        ks: vec![0.5, 1.0],
        joint_betas: vec![0.4],
        displaced_xs: vec![0.9],
        anchor: Anchor::All,
    };
    let batch = mc_batch(&plan, 3000, &s).unwrap();
    assert_eq!(batch.joint[1][0], mc_joint_moment(3, 1.0, 0.4, 3000, &s).unwrap());
    assert_eq!(batch.displaced[0][0], mc_displaced_moment(3, 0.5, 0.9, 3000, &s).unwrap());
}

#[test]
fn anchor_choice() {
    // A uniformly chosen eigenangle and the all-anchor average estimate the
    // same quantity; a fixed sorted position does not.
    let s = RngStream::new(41, 0);
    let target = factorization_rhs(5, 1.0, 0.6).unwrap();
    for a in [Anchor::All, Anchor::Uniform] {
        let e = mc_displaced_moment_anchored(5, 1.0, 1.5, 50_000, &s, a).unwrap();
        assert!(within_3se(&e, target), "{a:?}: {e:?} vs {target}");
    }
    let target = factorization_rhs(2, 1.0, 1.5).unwrap();
    let e = mc_displaced_moment_anchored(2, 1.0, 1.5, 20_000, &s, Anchor::Sorted(0)).unwrap();
    assert!(e.z_score(target) > 20.0, "{e:?} vs {target}");
}

#[test]
fn leading_order_at_moderate_size() {
    let lead = displaced_moment_leading(50, 1.0, 3.0).unwrap();
    let e = mc_displaced_moment(50, 1.0, 3.0, 6000, &RngStream::new(51, 0)).unwrap();
    assert!((e.mean / lead - 1.0).abs() < 0.10, "{e:?} vs {lead}");
}

#[test]
fn weyl_quadrature_tracks_exact() {
    for (n, tol) in [(1usize, 1e-8), (2, 1e-8), (3, 1e-6)] {
        for k in [0.5, 1.0, 1.5] {
            for beta in [0.0, 1.1] {
                let q = weyl_quadrature_moment(n, k, beta, 1024).unwrap();
                let e = joint_moment_exact(n as u32, k, beta).unwrap();
                assert!((q / e - 1.0).abs() < tol, "N = {n}, k = {k}, beta = {beta}: {q} vs {e}");
            }
        }
    }
    let v = weyl_quadrature_moment(1, 2.0, 0.0, 2048).unwrap();
    assert!((v - 20.0).abs() < 1e-8 * 20.0);
}

#[test]
fn rejects_bad_input() {
    let s = RngStream::new(1, 0);
    assert!(matches!(mc_joint_moment(3, -0.3, 0.1, 2000, &s), Err(Error::Domain { .. })));
    assert!(matches!(mc_joint_moment(3, 1.0, 0.1, 999, &s), Err(Error::Domain { .. })));
    assert!(mc_displaced_moment(0, 1.0, 0.1, 2000, &s).is_err());
    assert!(mc_joint_moment(3, 1.0, f64::NAN, 2000, &s).is_err());
    assert!(EigenangleSample::new(vec![-PI]).is_err());
    assert!(EigenangleSample::new(vec![]).is_err());
    // Heavy-tailed but admissible.
    assert!(mc_joint_moment(2, -0.2, 0.5, 1000, &s).is_ok());
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn samples_are_sorted_in_range(n in 1usize..40, seed in any::<u64>(), idx in 0u64..1000) {
            let s = sample_haar_eigenangles(n, &RngStream::new(seed, idx)).unwrap();
            prop_assert_eq!(s.len(), n);
            let a = s.angles();
            prop_assert!(a.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(a.iter().all(|&t| t > -PI && t <= PI));
            prop_assert_eq!(&s, &sample_haar_eigenangles(n, &RngStream::new(seed, idx)).unwrap());
        }

        #[test]
        fn char_poly_is_product_of_chords(
            angles in prop::collection::vec(-3.1f64..3.1, 1..12),
            theta in -3.0f64..3.0,
            two_k in 0.0f64..6.0,
        ) {
            let s = EigenangleSample::new(angles.clone()).unwrap();
            let direct: f64 = angles.iter().map(|&a| (2.0 * (0.5 * (a - theta)).sin()).abs().powf(two_k)).product();
            let got = char_poly_abs_pow(&s, theta, two_k).unwrap();
            prop_assert!((got - direct).abs() <= 1e-11 * direct.max(1e-300), "{got} vs {direct}");
        }
    }
}
