use approx::{assert_abs_diff_eq, assert_relative_eq};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::*;

fn h1() -> HeisConfig {
    HeisConfig::standard_h1()
}

fn pt(t: f64, z: &[f64]) -> HeisPoint {
    HeisPoint::new(t, z.to_vec()).unwrap()
}

fn random_point(rng: &mut impl Rng, d: usize, scale: f64) -> HeisPoint {
    let z = (0..d).map(|_| rng.gen_range(-scale..scale)).collect();
    HeisPoint::new(rng.gen_range(-scale..scale), z).unwrap()
}

// --- group law -------------------------------------------------------------

#[test]
fn mul_identity_right() {
    let cfg = h1();
    let x = pt(0.7, &[1.0, -2.0]);
    let e = HeisPoint::identity(2);
    assert_eq!(group_mul(&x, &e, &cfg).unwrap(), x);
    assert_eq!(group_mul(&e, &x, &cfg).unwrap(), x);
}

#[test]
fn mul_of_horizontal_points() {
    // (0, z) · (0, z') = (½ L(z, z'), z + z').
    let cfg = h1();
    let x = pt(0.0, &[1.0, 0.0]);
    let y = pt(0.0, &[0.0, 1.0]);
    let p = group_mul(&x, &y, &cfg).unwrap();
    assert_eq!(p.t, 0.5); // ½ L((1,0),(0,1)) = ½·L₁₂ = ½
    assert_eq!(p.z, vec![1.0, 1.0]);
}

#[test]
fn inverse_axiom() {
    let cfg = h1();
    let x = pt(-0.3, &[2.0, 5.0]);
    let p = group_mul(&x, &group_inv(&x), &cfg).unwrap();
    assert_eq!(p, HeisPoint::identity(2));
}

#[test]
fn inverse_is_negation_and_involution() {
    let x = pt(1.5, &[-1.0, 2.0]);
    let ix = group_inv(&x);
    assert_eq!(ix, pt(-1.5, &[1.0, -2.0]));
    assert_eq!(group_inv(&group_inv(&x)), x);
    assert_eq!(group_inv(&HeisPoint::identity(2)), HeisPoint::identity(2));
}

#[test]
fn associativity_random_triples() {
    let cfg = h1();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let (x, y, z) = (
            random_point(&mut rng, 2, 3.0),
            random_point(&mut rng, 2, 3.0),
            random_point(&mut rng, 2, 3.0),
        );
        let a = group_mul(&group_mul(&x, &y, &cfg).unwrap(), &z, &cfg).unwrap();
        let b = group_mul(&x, &group_mul(&y, &z, &cfg).unwrap(), &cfg).unwrap();
        assert_relative_eq!(a.t, b.t, max_relative = 1e-12, epsilon = 1e-12);
        for (u, v) in a.z.iter().zip(&b.z) {
            assert_relative_eq!(u, v, max_relative = 1e-12, epsilon = 1e-12);
        }
    }
}

#[test]
fn mul_rejects_dimension_mismatch() {
    let cfg = h1();
    let x = pt(0.0, &[1.0, 0.0]);
    let y = pt(0.0, &[1.0, 0.0, 0.0]);
    assert!(matches!(
        group_mul(&x, &y, &cfg),
        Err(HeisError::DimensionMismatch { .. })
    ));
}

// --- dilations -------------------------------------------------------------

#[test]
fn dilate_examples() {
    let x = pt(1.0, &[3.0, -1.0]);
    let y = dilate(2.0, &x).unwrap();
    assert_eq!(y, pt(4.0, &[6.0, -2.0]));
    assert_eq!(dilate(1.0, &x).unwrap(), x);
    assert!(matches!(dilate(0.0, &x), Err(HeisError::BadScale(_))));
    assert!(matches!(dilate(-2.0, &x), Err(HeisError::BadScale(_))));
}

#[test]
fn dilate_is_group_morphism() {
    let cfg = h1();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let x = random_point(&mut rng, 2, 2.0);
        let y = random_point(&mut rng, 2, 2.0);
        let lambda = rng.gen_range(0.1..5.0);
        let lhs = dilate(lambda, &group_mul(&x, &y, &cfg).unwrap()).unwrap();
        let rhs = group_mul(
            &dilate(lambda, &x).unwrap(),
            &dilate(lambda, &y).unwrap(),
            &cfg,
        )
        .unwrap();
        assert_relative_eq!(lhs.t, rhs.t, max_relative = 1e-12, epsilon = 1e-13);
        for (u, v) in lhs.z.iter().zip(&rhs.z) {
            assert_relative_eq!(u, v, max_relative = 1e-12, epsilon = 1e-13);
        }
    }
}

// --- gauge -----------------------------------------------------------------

#[test]
fn gauge_examples() {
    assert_eq!(koranyi_gauge(&pt(1.0, &[0.0, 0.0])), 1.0);
    let z = [3.0, 4.0];
    assert_relative_eq!(
        koranyi_gauge(&pt(0.0, &z)),
        5.0,
        max_relative = 1e-14
    );
}

#[test]
fn gauge_homogeneity() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let x = random_point(&mut rng, 2, 4.0);
        for lambda in [0.5, 2.0, 7.3] {
            let lhs = koranyi_gauge(&dilate(lambda, &x).unwrap());
            let rhs = lambda * koranyi_gauge(&x);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }
}

// --- quasi-metrics ---------------------------------------------------------

#[test]
fn quasi_metric_examples() {
    let cfg = h1();
    let x = pt(0.4, &[1.0, 2.0]);
    assert_eq!(quasi_metric(QuasiMetricKind::Koranyi, &x, &x, &cfg).unwrap(), 0.0);
    let e = HeisPoint::identity(2);
    let y = pt(1.0, &[0.0, 0.0]);
    assert_eq!(
        quasi_metric(QuasiMetricKind::Anisotropic, &e, &y, &cfg).unwrap(),
        1.0
    );
}

#[test]
fn koranyi_metric_is_left_invariant() {
    let cfg = h1();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let g = random_point(&mut rng, 2, 3.0);
        let x = random_point(&mut rng, 2, 3.0);
        let y = random_point(&mut rng, 2, 3.0);
        let gx = group_mul(&g, &x, &cfg).unwrap();
        let gy = group_mul(&g, &y, &cfg).unwrap();
        let d1 = quasi_metric(QuasiMetricKind::Koranyi, &x, &y, &cfg).unwrap();
        let d2 = quasi_metric(QuasiMetricKind::Koranyi, &gx, &gy, &cfg).unwrap();
        assert_relative_eq!(d1, d2, max_relative = 1e-12, epsilon = 1e-13);
    }
}

#[test]
fn quasi_triangle_inequality_has_bounded_constant() {
    let cfg = h1();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let x = random_point(&mut rng, 2, 2.0);
        let y = random_point(&mut rng, 2, 2.0);
        let z = random_point(&mut rng, 2, 2.0);
        let dxz = quasi_metric(QuasiMetricKind::Koranyi, &x, &z, &cfg).unwrap();
        let dxy = quasi_metric(QuasiMetricKind::Koranyi, &x, &y, &cfg).unwrap();
        let dyz = quasi_metric(QuasiMetricKind::Koranyi, &y, &z, &cfg).unwrap();
        if dxy + dyz > 0.0 {
            worst = worst.max(dxz / (dxy + dyz));
        }
    }
    // The Koranyi gauge satisfies a quasi-triangle inequality with a modest
    // constant; record that the sampled constant stays small.
    assert!(worst < 4.0, "sampled quasi-triangle constant {worst}");
    assert!(worst > 0.5);
}

#[test]
fn koranyi_vs_anisotropic_ratio_bounded() {
    // The two quasi-metrics are equivalent: the ratio over random pairs in the
    // unit Koranyi ball stays inside a two-sided band.
    let cfg = h1();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    let mut kept = 0;
    while kept < 10_000 {
        let x = random_point(&mut rng, 2, 1.0);
        let y = random_point(&mut rng, 2, 1.0);
        if koranyi_gauge(&x) > 1.0 || koranyi_gauge(&y) > 1.0 || x == y {
            continue;
        }
        kept += 1;
        let dk = quasi_metric(QuasiMetricKind::Koranyi, &x, &y, &cfg).unwrap();
        let da = quasi_metric(QuasiMetricKind::Anisotropic, &x, &y, &cfg).unwrap();
        let r = dk / da;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    assert!(lo > 0.0 && hi.is_finite());
    assert!(hi / lo < 10.0, "ratio band [{lo}, {hi}] too wide");
}

// --- frame -----------------------------------------------------------------

#[test]
fn frame_is_euclidean_at_origin() {
    let cfg = h1();
    let fc = frame_coefficients(&cfg, &HeisPoint::identity(2)).unwrap();
    assert_eq!(fc.horizontal, vec![1.0, 1.0]);
    assert_eq!(fc.vertical, vec![0.0, 0.0]);
}

#[test]
fn frame_vertical_coefficient_h1() {
    // Left-invariant convention: c_j(z) = ½ Σ_k L_{kj} z_k, so at z = (0, 1)
    // the first field has vertical coefficient ½ L_{21} = −½ and the second
    // has ½ L_{12}·0 = 0.
    let cfg = h1();
    let fc = frame_coefficients(&cfg, &pt(0.0, &[0.0, 1.0])).unwrap();
    assert_abs_diff_eq!(fc.vertical[0], -0.5);
    assert_abs_diff_eq!(fc.vertical[1], 0.0);
}

#[test]
fn frame_vertical_is_linear_in_z() {
    let cfg = h1();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let a = random_point(&mut rng, 2, 2.0);
        let b = random_point(&mut rng, 2, 2.0);
        let sum = pt(0.0, &[a.z[0] + b.z[0], a.z[1] + b.z[1]]);
        let fa = frame_coefficients(&cfg, &a).unwrap();
        let fb = frame_coefficients(&cfg, &b).unwrap();
        let fs = frame_coefficients(&cfg, &sum).unwrap();
        for j in 0..2 {
            assert_relative_eq!(
                fs.vertical[j],
                fa.vertical[j] + fb.vertical[j],
                max_relative = 1e-13,
                epsilon = 1e-14
            );
        }
    }
}

#[test]
fn commutators_h1() {
    let report = check_frame_commutators(&h1());
    assert!(report.ok);
    assert_eq!(report.worst_defect, 0.0);
    assert_eq!(report.pairs, vec![(0, 1, 0.0)]);
}

#[test]
fn commutators_d4_block_diagonal() {
    // Two symplectic blocks; all 6 pairwise relations must hold exactly.
    let l = vec![
        vec![0.0, 1.0, 0.0, 0.0],
        vec![-1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 2.5],
        vec![0.0, 0.0, -2.5, 0.0],
    ];
    let cfg = HeisConfig::new(4, &l).unwrap();
    let report = check_frame_commutators(&cfg);
    assert!(report.ok);
    assert_eq!(report.pairs.len(), 6);
    assert!(report.pairs.iter().all(|&(_, _, d)| d == 0.0));
}

// --- config validation & serialization -------------------------------------

#[test]
fn config_rejects_bad_forms() {
    assert!(matches!(
        HeisConfig::new(2, &[vec![0.0, 1.0], vec![1.0, 0.0]]),
        Err(HeisError::NotAntisymmetric { .. })
    ));
    assert!(matches!(
        HeisConfig::new(2, &[vec![0.0, 0.0], vec![0.0, 0.0]]),
        Err(HeisError::ZeroForm)
    ));
    assert!(matches!(
        HeisConfig::new(1, &[vec![0.0]]),
        Err(HeisError::DimensionTooSmall(1))
    ));
    assert!(matches!(
        HeisConfig::new(2, &[vec![0.0, 1.0]]),
        Err(HeisError::MalformedForm { .. })
    ));
}

#[test]
fn config_json_round_trip() {
    let cfg = h1();
    let json = serde_json::to_string(&cfg).unwrap();
    let back: HeisConfig = serde_json::from_str(&json).unwrap();
    assert_eq!(back.d(), 2);
    assert_eq!(back.form_entry(0, 1), 1.0);
    assert_eq!(back.form_entry(1, 0), -1.0);
}

#[test]
fn config_json_rejects_non_antisymmetric() {
    let bad = r#"{"d": 2, "L": [[0.0, 1.0], [-0.5, 0.0]]}"#;
    assert!(serde_json::from_str::<HeisConfig>(bad).is_err());
}

#[test]
fn point_rejects_non_finite() {
    assert!(HeisPoint::new(f64::NAN, vec![0.0, 0.0]).is_err());
    assert!(HeisPoint::new(0.0, vec![f64::INFINITY, 0.0]).is_err());
}

// --- property tests --------------------------------------------------------

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn arb_point() -> impl Strategy<Value = HeisPoint> {
        (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64)
            .prop_map(|(t, a, b)| HeisPoint::new(t, vec![a, b]).unwrap())
    }

    proptest! {
        #[test]
        fn gauge_vanishes_only_at_identity(x in arb_point()) {
            let g = koranyi_gauge(&x);
            prop_assert!(g >= 0.0);
            let is_identity = x.t == 0.0 && x.z.iter().all(|&v| v == 0.0);
            prop_assert_eq!(g == 0.0, is_identity);
        }

        #[test]
        fn gauge_symmetric_under_inversion(x in arb_point()) {
            prop_assert_eq!(koranyi_gauge(&x), koranyi_gauge(&group_inv(&x)));
        }

        #[test]
        fn mul_then_inverse_cancels(x in arb_point(), y in arb_point()) {
            let cfg = HeisConfig::standard_h1();
            let p = group_mul(&x, &y, &cfg).unwrap();
            let back = group_mul(&p, &group_inv(&y), &cfg).unwrap();
            prop_assert!((back.t - x.t).abs() <= 1e-10 * (1.0 + x.t.abs()));
            for (u, v) in back.z.iter().zip(&x.z) {
                prop_assert!((u - v).abs() <= 1e-12 * (1.0 + v.abs()));
            }
        }
    }
}
