use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::*;

// --- symbol construction ---------------------------------------------------

#[test]
fn lacunary_coefficients() {
    let f = make_lacunary(0.25, 12).unwrap();
    for n in 0..=12u32 {
        let expect = 2f64.powf(-(n as f64) / 4.0);
        assert_eq!(f.coeff(1 << n).re, expect);
        assert_eq!(f.coeff(-(1i64 << n)).re, expect);
    }
    assert_eq!(f.coeff(3).norm(), 0.0);
    assert_eq!(f.coeff(12).norm(), 0.0);
    assert!(f.is_real_symbol());
}

#[test]
fn lacunary_value_at_zero_angle() {
    // At θ = 0 the series sums to Σ 2·2^{−nβ}, a finite geometric sum.
    let beta = 0.4;
    let n_max = 6u32;
    let f = make_lacunary(beta, n_max).unwrap();
    let vals = f.eval_grid((2 * f.cutoff() + 1).next_power_of_two()).unwrap();
    let expect: f64 = (0..=n_max).map(|n| 2.0 * 2f64.powf(-(n as f64) * beta)).sum();
    assert!((vals[0].re - expect).abs() < 1e-10);
    assert!(vals[0].im.abs() < 1e-12);
}

#[test]
fn lacunary_rejects_bad_beta() {
    assert!(matches!(make_lacunary(0.0, 4), Err(SymbolError::BadBeta(_))));
    assert!(matches!(make_lacunary(1.5, 4), Err(SymbolError::BadBeta(_))));
}

#[test]
fn trig_specs() {
    let e1 = make_symbol(&SymbolSpec::harmonic(1)).unwrap();
    assert_eq!(e1.coeff(1), Complex64::new(1.0, 0.0));
    assert_eq!(e1.coeff(0).norm(), 0.0);
    assert_eq!(e1.coeff(-1).norm(), 0.0);

    let cos = make_symbol(&SymbolSpec::cosine()).unwrap();
    assert_eq!(cos.coeff(1).re, 0.5);
    assert_eq!(cos.coeff(-1).re, 0.5);
    assert!(cos.is_real_symbol());

    assert!(make_symbol(&SymbolSpec::Trig {
        coeffs: Default::default()
    })
    .is_err());
}

#[test]
fn random_symbols_are_deterministic() {
    let spec = SymbolSpec::Random {
        beta: 0.5,
        n_max: 64,
        seed: 42,
    };
    let a = make_symbol(&spec).unwrap();
    let b = make_symbol(&spec).unwrap();
    assert_eq!(a.coeffs(), b.coeffs());
    assert!(a.is_real_symbol());
    let other = make_symbol(&SymbolSpec::Random {
        beta: 0.5,
        n_max: 64,
        seed: 43,
    })
    .unwrap();
    assert_ne!(a.coeffs(), other.coeffs());
}

#[test]
fn symbol_spec_json_round_trip() {
    let json = r#"{"kind":"lacunary","beta":0.25,"n_max":12}"#;
    let spec: SymbolSpec = serde_json::from_str(json).unwrap();
    assert_eq!(spec, SymbolSpec::Lacunary { beta: 0.25, n_max: 12 });
    let back = serde_json::to_string(&spec).unwrap();
    let again: SymbolSpec = serde_json::from_str(&back).unwrap();
    assert_eq!(spec, again);
}

// --- Holder seminorms ------------------------------------------------------

#[test]
fn holder_of_constant_is_zero() {
    let c = CircleSymbol::from_coeffs(0, vec![Complex64::new(3.0, 0.0)]).unwrap();
    let rep = holder_seminorm(&c, 0.5, 1024).unwrap();
    assert_eq!(rep.seminorm_estimate, 0.0);
    assert_eq!(rep.cc_alpha, 1.0);
}

#[test]
fn holder_of_first_harmonic_is_one() {
    // sup |e^{iθ} − e^{iθ'}| / |θ − θ'| = 1, attained in the small-separation
    // limit (chord over arc).
    let e1 = make_symbol(&SymbolSpec::harmonic(1)).unwrap();
    let rep = holder_seminorm(&e1, 1.0, 4096).unwrap();
    assert!(rep.seminorm_estimate <= 1.0 + 1e-12);
    assert!(rep.seminorm_estimate > 1.0 - 1e-5, "{}", rep.seminorm_estimate);
}

#[test]
fn holder_lacunary_stable_under_grid_doubling() {
    let f = make_lacunary(0.25, 12).unwrap();
    let a = holder_seminorm(&f, 0.25, 1 << 14).unwrap().seminorm_estimate;
    let b = holder_seminorm(&f, 0.25, 1 << 15).unwrap().seminorm_estimate;
    assert!(a > 0.0);
    assert!(b >= a - 1e-12, "refinement must not shrink a sampled max");
    assert!((b - a) / b < 0.05, "a={a} b={b}");
}

#[test]
fn holder_rejects_tiny_grid() {
    let f = make_symbol(&SymbolSpec::cosine()).unwrap();
    assert!(matches!(
        holder_seminorm(&f, 0.5, 4),
        Err(SymbolError::GridTooSmall { .. })
    ));
}

// --- blocks and Besov norms ------------------------------------------------

#[test]
fn blocks_partition_single_harmonic() {
    for m in [1i64, 2, 3, 5, 8, 100, 1000] {
        let f = make_symbol(&SymbolSpec::harmonic(m)).unwrap();
        let decomposition = lp_blocks(&f);
        let total: f64 = decomposition.blocks().iter().map(|b| b.coeff(m).re).sum();
        assert_eq!(total, 1.0, "harmonic {m}");
        // At most two blocks are active on a single frequency.
        let active = decomposition
            .blocks()
            .iter()
            .filter(|b| b.coeff(m).norm() > 0.0)
            .count();
        assert!(active <= 2);
    }
}

#[test]
fn blocks_reconstruct_exactly() {
    let f = make_symbol(&SymbolSpec::Random {
        beta: 0.3,
        n_max: 300,
        seed: 5,
    })
    .unwrap();
    let rec = lp_blocks(&f).reconstruct();
    let scale = f.coeffs().iter().fold(0.0f64, |m, c| m.max(c.norm()));
    for k in -(f.cutoff() as i64)..=(f.cutoff() as i64) {
        assert!((rec.coeff(k) - f.coeff(k)).norm() <= 1e-12 * scale);
    }
}

#[test]
fn blocks_vanish_outside_annuli() {
    let f = make_symbol(&SymbolSpec::Random {
        beta: 0.3,
        n_max: 500,
        seed: 6,
    })
    .unwrap();
    let decomposition = lp_blocks(&f);
    for (j, b) in decomposition.blocks().iter().enumerate() {
        for k in -(f.cutoff() as i64)..=(f.cutoff() as i64) {
            let inside = if j == 0 {
                k.unsigned_abs() <= 1
            } else {
                let a = k.unsigned_abs() as f64;
                a > 2f64.powi(j as i32 - 1) && a < 2f64.powi(j as i32 + 1)
            };
            if !inside {
                assert_eq!(b.coeff(k).norm(), 0.0, "block {j}, frequency {k}");
            }
        }
    }
}

#[test]
fn three_term_identity_exact_on_coefficients() {
    let f = make_lacunary(0.25, 10).unwrap();
    let residual = lp_blocks(&f).three_term_identity_residual(&f);
    assert!(residual <= 1e-12, "residual {residual}");
}

#[test]
fn besov_norm_basics() {
    let zero = CircleSymbol::from_coeffs(0, vec![Complex64::new(0.0, 0.0)]).unwrap();
    assert_eq!(besov_norm(&zero, 0.5, BesovQ::Inf).unwrap(), 0.0);

    // For e_m the ℓ^∞ norm is the max over the ≤2 active blocks of
    // 2^{js}·(window weight).
    let m = 48i64;
    let s = 0.5;
    let f = make_symbol(&SymbolSpec::harmonic(m)).unwrap();
    let got = besov_norm(&f, s, BesovQ::Inf).unwrap();
    let expect = (0..12)
        .map(|j| 2f64.powi(j).powf(s) * window_weight(j as usize, m))
        .fold(0.0f64, f64::max);
    assert!((got - expect).abs() <= 1e-10 * expect, "{got} vs {expect}");
}

#[test]
fn besov_inf_below_one_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5 {
        let f = make_symbol(&SymbolSpec::Random {
            beta: 0.4,
            n_max: 200,
            seed: rng.gen(),
        })
        .unwrap();
        let s = 0.4;
        let inf = besov_norm(&f, s, BesovQ::Inf).unwrap();
        let one = besov_norm(&f, s, BesovQ::One).unwrap();
        assert!(inf <= one + 1e-12 * one);
    }
}

#[test]
fn besov_band_for_lacunary_family() {
    // With s = β the lacunary blocks all sit at comparable height, so the
    // value stays in a narrow band as n_max grows.
    let beta = 0.25;
    let values: Vec<f64> = (8..=12)
        .map(|n_max| besov_norm(&make_lacunary(beta, n_max).unwrap(), beta, BesovQ::Inf).unwrap())
        .collect();
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(0.0f64, f64::max);
    assert!(lo > 0.0);
    assert!(hi / lo <= 4.0, "band [{lo}, {hi}]");

    // And the ℓ^∞ value is within a factor 2 of the largest single block.
    let f = make_lacunary(beta, 12).unwrap();
    let grid = (4 * f.cutoff()).next_power_of_two();
    let largest_block = lp_blocks(&f)
        .blocks()
        .iter()
        .enumerate()
        .map(|(j, b)| 2f64.powi(j as i32).powf(beta) * b.sup_norm(grid).unwrap())
        .fold(0.0f64, f64::max);
    let norm = besov_norm(&f, beta, BesovQ::Inf).unwrap();
    assert!(norm <= 2.0 * largest_block && largest_block <= 2.0 * norm);
}

// --- equivalence and interpolation -----------------------------------------

#[test]
fn equivalence_band_over_random_corpus() {
    let corpus: Vec<_> = (0..20)
        .map(|i| {
            make_symbol(&SymbolSpec::Random {
                beta: 0.5,
                n_max: 256,
                seed: 100 + i,
            })
            .unwrap()
        })
        .collect();
    let report = besov_holder_equiv_check(&corpus, 0.5).unwrap();
    assert_eq!(report.ratios.len(), 20);
    assert!(report.min > 0.0);
    assert!(report.max / report.min < 50.0, "band {:?}", (report.min, report.max));
}

#[test]
fn equivalence_handles_single_harmonic() {
    let corpus = vec![make_symbol(&SymbolSpec::harmonic(1)).unwrap()];
    let report = besov_holder_equiv_check(&corpus, 0.5).unwrap();
    assert!(report.min.is_finite() && report.min > 0.0);
}

#[test]
fn equivalence_skips_constants() {
    let constant = CircleSymbol::from_coeffs(0, vec![Complex64::new(2.0, 0.0)]).unwrap();
    let corpus = vec![constant, make_symbol(&SymbolSpec::cosine()).unwrap()];
    let report = besov_holder_equiv_check(&corpus, 0.25).unwrap();
    assert_eq!(report.skipped, 1);
    assert_eq!(report.ratios.len(), 1);
}

#[test]
fn k_functional_lipschitz_behaviour() {
    // A trig polynomial is Lipschitz: K̂(t) ≲ t for small t.
    let f = make_symbol(&SymbolSpec::cosine()).unwrap();
    let ts = [1e-4, 1e-3, 1e-2];
    let report = k_functional_probe(&f, 0.5, &ts).unwrap();
    for &(t, k) in &report.entries {
        assert!(k <= 3.0 * t, "K({t}) = {k} not linear in t");
    }
}

#[test]
fn k_functional_saturates_for_large_t() {
    let f = make_lacunary(0.5, 8).unwrap();
    let report = k_functional_probe(&f, 0.5, &[1e6]).unwrap();
    let grid = (4 * f.cutoff()).next_power_of_two();
    let sup = f.sup_norm(grid).unwrap();
    let (_, k) = report.entries[0];
    // J = −1 keeps everything in the bounded part: the block sups bound is
    // within the block count times the sup norm, and is independent of t.
    assert!(k >= sup * 0.9);
    assert!(k <= sup * (lp_blocks(&f).len() as f64));
}

#[test]
fn k_functional_ratio_matches_holder_for_lacunary() {
    let theta = 0.25;
    let f = make_lacunary(theta, 12).unwrap();
    let ts: Vec<f64> = (0..24).map(|i| 2f64.powi(-i)).collect();
    let report = k_functional_probe(&f, theta, &ts).unwrap();
    assert!(report.sup_ratio.is_finite() && report.sup_ratio > 0.0);
    let ratio = report.sup_ratio / report.holder_norm;
    assert!(ratio < 10.0 && ratio > 0.1, "ratio {ratio}");
}

// --- anisotropic box checks ------------------------------------------------

#[test]
fn aniso_single_mode() {
    let cfg = heis_core::HeisConfig::standard_h1();
    let f = GridFunction3::single_mode([16, 16, 16], [3, 1, 0]).unwrap();
    let report = aniso_blocks_check(&cfg, &f, 0.5).unwrap();
    assert!(report.identity_residual <= 1e-8);
    assert!(report.reconstruction_residual <= 1e-12);
    // One block dominates (the mode has gauge ρ ≈ √3.16).
    let max = report.block_sups.iter().cloned().fold(0.0f64, f64::max);
    let active = report.block_sups.iter().filter(|&&b| b > 0.5 * max).count();
    assert!(active <= 2, "sups {:?}", report.block_sups);
}

#[test]
fn aniso_identity_on_random_band_limited_fields() {
    let cfg = heis_core::HeisConfig::standard_h1();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..3 {
        let modes: Vec<([i64; 3], Complex64)> = (0..6)
            .map(|_| {
                (
                    [
                        rng.gen_range(-6..=6i64),
                        rng.gen_range(-6..=6i64),
                        rng.gen_range(-6..=6i64),
                    ],
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
            })
            .collect();
        let f = GridFunction3::from_fn([16, 16, 16], |t, z1, z2| {
            modes
                .iter()
                .map(|(k, c)| {
                    c * Complex64::from_polar(
                        1.0,
                        k[0] as f64 * t + k[1] as f64 * z1 + k[2] as f64 * z2,
                    )
                })
                .sum()
        })
        .unwrap();
        let report = aniso_blocks_check(&cfg, &f, 0.5).unwrap();
        assert!(report.identity_residual <= 1e-8, "{}", report.identity_residual);
        assert!(report.reconstruction_residual <= 1e-10);
    }
}

#[test]
fn aniso_mollified_gauge_profile() {
    // A smooth periodic profile shaped like the square root of the gauge near
    // the origin; both the block value and the Hölder estimate must be
    // finite and positive.
    let cfg = heis_core::HeisConfig::standard_h1();
    let f = GridFunction3::from_fn([16, 16, 16], |t, z1, z2| {
        let st = (t / 2.0).sin();
        let s1 = (z1 / 2.0).sin();
        let s2 = (z2 / 2.0).sin();
        let t2 = (2.0 * st) * (2.0 * st);
        let z2n = (2.0 * s1) * (2.0 * s1) + (2.0 * s2) * (2.0 * s2);
        Complex64::new((t2 * t2 + z2n * z2n).powf(0.125), 0.0)
    })
    .unwrap();
    let report = aniso_blocks_check(&cfg, &f, 0.5).unwrap();
    assert!(report.besov_value.is_finite() && report.besov_value > 0.0);
    assert!(report.holder_estimate.is_finite() && report.holder_estimate > 0.0);
    let r = report.besov_value / report.holder_estimate;
    assert!(r > 1e-3 && r < 1e3, "ratio {r}");
}

#[test]
fn aniso_rejects_bad_input() {
    let cfg = heis_core::HeisConfig::standard_h1();
    assert!(GridFunction3::new([3, 4, 4], vec![Complex64::new(0.0, 0.0); 48]).is_err());
    let l4 = vec![
        vec![0.0, 1.0, 0.0, 0.0],
        vec![-1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
        vec![0.0, 0.0, -1.0, 0.0],
    ];
    let cfg4 = heis_core::HeisConfig::new(4, &l4).unwrap();
    let f = GridFunction3::single_mode([4, 4, 4], [1, 0, 0]).unwrap();
    assert!(matches!(
        aniso_blocks_check(&cfg4, &f, 0.5),
        Err(SymbolError::WrongDimension(4))
    ));
    let _ = cfg;
}
