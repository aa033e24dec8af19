//! Acceptance gate: one test per top-level criterion, each printing a single
//! PASS/FAIL line with the measured quantities before asserting.
//!
//! Criteria 2 and 3 contain claimed closed forms / inequalities that the
//! implemented definitions do not satisfy; those sub-checks are evaluated
//! faithfully and allowed to fail with the measured values on record.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cc_geodesic::{cc_distance, SolverOptions};
use dixmier_func::{
    bound_report, gamma_lattice_sum, pgl_matrix_oracle, xi2_lacunary_series, xi_diagonal_estimate,
    BoundReportOptions,
};
use hardy_spectra::{
    calderon_norm_probe, commutator_p, decay_fit, hankel_op, singular_values, szego_project,
    FitWindow,
};
use heis_core::{
    check_frame_commutators, dilate, group_inv, group_mul, koranyi_gauge, HeisConfig, HeisPoint,
};
use symbol_lab::{
    lp_blocks, make_lacunary, make_symbol, num_blocks, window_weight, SymbolSpec,
};
use xcli::runner::{aniso_identity_residual, block_config};
use xcli::{standard_corpus, triangle_symbol};

fn report(criterion: u32, pass: bool, detail: &str) -> bool {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[criterion {criterion}] {tag}: {detail}");
    pass
}

#[test]
fn criterion_1_lattice_sum_matches_matrix_oracle() {
    let mut worst = 0.0f64;
    for l in 1..=64u64 {
        let lattice = gamma_lattice_sum(l, 0.25, 14).unwrap().value;
        let oracle = pgl_matrix_oracle(l, 0.25, 14).unwrap();
        worst = worst.max((lattice - oracle).abs() / lattice.max(oracle));
    }
    let pass = worst <= 1e-12;
    assert!(report(
        1,
        pass,
        &format!("dual-path lattice identity, worst relative gap {worst:.3e} (tol 1e-12)"),
    ));
}

#[test]
fn criterion_2_doubling_law_and_closed_forms() {
    // Doubling value(2l) = value(l)/2: the exact lattice identity pairs the
    // truncation depths n_max and n_max − 1 under (n, m) → (n+1, m+1).
    let mut worst = 0.0f64;
    for l in 1..=512u64 {
        let twice = gamma_lattice_sum(2 * l, 0.25, 40).unwrap().value;
        let half = gamma_lattice_sum(l, 0.25, 39).unwrap().value / 2.0;
        worst = worst.max((twice - half).abs() / half);
    }
    let doubling_ok = worst <= 1e-12;

    let sqrt2 = std::f64::consts::SQRT_2;
    let g0 = gamma_lattice_sum(0, 0.25, 18).unwrap();
    let c = 2.0 + sqrt2;
    let g0_claim = c * c + sqrt2 * c;
    let g0_ok = (g0.value - g0_claim).abs() <= g0.tail_bound;

    let g1 = gamma_lattice_sum(1, 0.25, 18).unwrap();
    let g1_claim = 1.0 + sqrt2;
    let g1_ok = (g1.value - g1_claim).abs() <= g1.tail_bound;

    let pass = doubling_ok && g0_ok && g1_ok;
    assert!(report(
        2,
        pass,
        &format!(
            "doubling worst gap {worst:.3e} ({}), l=0 closed form value {:.12} vs {:.12} ({}), \
             l=1 closed form value {:.12} vs claimed {:.12} ({})",
            if doubling_ok { "ok" } else { "violated" },
            g0.value,
            g0_claim,
            if g0_ok { "ok" } else { "violated" },
            g1.value,
            g1_claim,
            if g1_ok { "ok" } else { "violated" },
        ),
    ));
}

#[test]
fn criterion_3_bound_chain_report() {
    let opts = BoundReportOptions::default(); // beta 1/4, tails enforced at 1e-8
    let report_rows = bound_report(4096, 80, opts).unwrap();
    let exact_fail = report_rows.exact_subsum_failures;
    let pair_fail = report_rows.subsum_integral_failures;
    let first_pair_fail = report_rows
        .rows
        .iter()
        .find(|r| !r.flags.subsum_ge_integral)
        .map(|r| r.l);
    // Comparison against the claimed constants is recorded, not asserted.
    let ge_two = report_rows
        .rows
        .iter()
        .filter(|r| r.flags.exact_ge_two_over_llog2)
        .count();
    let ge_sqrt6 = report_rows
        .rows
        .iter()
        .filter(|r| r.flags.exact_ge_sqrt6_over_llog2)
        .count();
    let pass = exact_fail == 0 && pair_fail == 0;
    assert!(report(
        3,
        pass,
        &format!(
            "l in [1,4096]: exact>=subsum failures {exact_fail}, subsum>=integral failures \
             {pair_fail} (first at l={first_pair_fail:?}); recorded: exact >= 2/(l log2) for \
             {ge_two}/4096 rows, exact >= sqrt6/(l log2) for {ge_sqrt6}/4096 rows",
        ),
    ));
}

#[test]
fn criterion_4_nonvanishing_vs_vanishing_diagonals() {
    let n = 1 << 16;
    let lacunary = xi2_lacunary_series(0.25, 40, n, &[n]).unwrap();
    let lambda_w = lacunary.partials.points.last().unwrap().value;

    let n_smooth = 1 << 14;
    let a = make_symbol(&SymbolSpec::Trig {
        coeffs: [(1i64, (0.25, 0.0)), (-1i64, (0.25, 0.0))]
            .into_iter()
            .collect(),
    })
    .unwrap();
    let smooth = xi_diagonal_estimate(
        &[a.clone(), a.clone(), a.clone(), a],
        n_smooth,
        &[n_smooth],
    )
    .unwrap();
    let lambda_smooth = smooth.partials.points.last().unwrap().value;

    let pass = lambda_w >= 0.1 && lambda_smooth <= 1e-3;
    assert!(report(
        4,
        pass,
        &format!(
            "lacunary Lambda_{{2^16}} = {lambda_w:.4} (needs >= 0.1), trig tuple \
             Lambda_{{2^14}} = {lambda_smooth:.3e} (needs <= 1e-3)"
        ),
    ));
}

#[test]
fn criterion_5_hankel_decay_exponents() {
    let window = 1 << 12;
    let fit_window = FitWindow { k_min: 16, k_max: 512 };
    let mut pass = true;
    let mut detail = String::new();
    for beta in [0.25, 0.5] {
        let a = make_lacunary(beta, 12).unwrap();
        let op = hankel_op(&a, window);
        let spectrum = singular_values(&op, 520).unwrap();
        let fit = decay_fit(&spectrum, fit_window).unwrap();
        let ok = (fit.decay_exponent - beta).abs() <= 0.1;
        pass &= ok;
        detail.push_str(&format!(
            "beta={beta}: fitted decay {:.3} (target {beta} +- 0.1); ",
            fit.decay_exponent
        ));
    }
    assert!(report(5, pass, detail.trim_end_matches("; ")));
}

#[test]
fn criterion_6_calderon_plateau_and_growth() {
    let levels: Vec<usize> = (8..=13).map(|j| 1usize << j).collect();

    let tri = triangle_symbol(1024);
    let tri_probe = calderon_norm_probe(&tri, &levels, 0).unwrap();
    let n1 = tri_probe.entries[levels.len() - 2].norm;
    let n2 = tri_probe.entries[levels.len() - 1].norm;
    let variation = (n2 - n1).abs() / n1.max(n2);
    let plateau_ok = variation < 0.05;

    let w = make_lacunary(0.5, 13).unwrap();
    let w_probe = calderon_norm_probe(&w, &levels, 0).unwrap();
    let growth = w_probe.growth_exponent.unwrap();
    let growth_ok = (growth - 0.5).abs() <= 0.15;

    let pass = plateau_ok && growth_ok;
    assert!(report(
        6,
        pass,
        &format!(
            "triangle-wave norms at top two N vary {:.2}% (needs < 5%), W_1/2 growth \
             exponent {growth:.3} (target 0.5 +- 0.15)",
            100.0 * variation
        ),
    ));
}

#[test]
fn criterion_7_cc_distances() {
    let cfg = HeisConfig::standard_h1();
    let e = HeisPoint::identity(2);
    let opts = SolverOptions { seed: 7, ..Default::default() };

    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut worst_flat = 0.0f64;
    for _ in 0..20 {
        let z: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let norm = (z[0] * z[0] + z[1] * z[1]).sqrt();
        if norm < 0.2 {
            continue;
        }
        let y = HeisPoint::new(0.0, z).unwrap();
        let d = cc_distance(&e, &y, &cfg, &opts).unwrap().value;
        worst_flat = worst_flat.max((d - norm).abs() / norm);
    }
    let flat_ok = worst_flat <= 1e-3;

    let mut worst_vert = 0.0f64;
    for t in [0.1, 1.0, 4.0] {
        let y = HeisPoint::new(t, vec![0.0, 0.0]).unwrap();
        let d = cc_distance(&e, &y, &cfg, &opts).unwrap().value;
        let exact = 2.0 * (std::f64::consts::PI * t).sqrt();
        worst_vert = worst_vert.max((d - exact).abs() / exact);
    }
    let vert_ok = worst_vert <= 1e-2;

    let y = HeisPoint::new(0.3, vec![0.7, -0.2]).unwrap();
    let lambda = 1.7;
    let d1 = cc_distance(&e, &y, &cfg, &opts).unwrap().value;
    let d2 = cc_distance(&e, &dilate(lambda, &y).unwrap(), &cfg, &opts)
        .unwrap()
        .value;
    let dil_gap = (d2 - lambda * d1).abs() / (lambda * d1);
    let dil_ok = dil_gap <= 1e-3;

    let pass = flat_ok && vert_ok && dil_ok;
    assert!(report(
        7,
        pass,
        &format!(
            "horizontal rel err {worst_flat:.2e} (tol 1e-3), vertical rel err {worst_vert:.2e} \
             (tol 1e-2), dilation rel err {dil_gap:.2e} (tol 1e-3)"
        ),
    ));
}

#[test]
fn criterion_8_besov_holder_equivalence_and_block_identity() {
    let corpus = standard_corpus(11, 20);
    let mut pass = true;
    let mut detail = String::new();
    for s in [0.25, 0.5] {
        let eq = symbol_lab::besov_holder_equiv_check(&corpus, s).unwrap();
        let band = eq.max / eq.min;
        let ok = band < 50.0;
        pass &= ok;
        detail.push_str(&format!("s={s}: ratio band {band:.2} (needs < 50); "));
    }

    let mut worst_identity = 0.0f64;
    for f in &corpus {
        worst_identity = worst_identity.max(lp_blocks(f).three_term_identity_residual(f));
    }
    let aniso = aniso_identity_residual([64, 64, 64], 0.5).unwrap();
    let identity_ok = worst_identity <= 1e-8 && aniso <= 1e-8;
    pass &= identity_ok;
    detail.push_str(&format!(
        "block identity residual {worst_identity:.2e} on S^1, {aniso:.2e} anisotropic 64^3 \
         (tol 1e-8)"
    ));
    assert!(report(8, pass, &detail));
}

#[test]
fn criterion_9_structural_invariants() {
    let mut failures: Vec<String> = Vec::new();

    // Group axioms and gauge homogeneity, d = 2 and d = 4.
    for d in [2usize, 4] {
        let cfg = block_config(d).unwrap();
        if !check_frame_commutators(&cfg).ok {
            failures.push(format!("frame relations d={d}"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let e = HeisPoint::identity(d);
        for _ in 0..100 {
            let sample = |rng: &mut ChaCha8Rng| HeisPoint {
                t: rng.gen_range(-2.0..2.0),
                z: (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect(),
            };
            let (x, y, z) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
            let a = group_mul(&group_mul(&x, &y, &cfg).unwrap(), &z, &cfg).unwrap();
            let b = group_mul(&x, &group_mul(&y, &z, &cfg).unwrap(), &cfg).unwrap();
            let gap = (a.t - b.t).abs()
                + a.z.iter().zip(&b.z).map(|(u, v)| (u - v).abs()).sum::<f64>();
            if gap > 1e-12 {
                failures.push(format!("associativity d={d} gap {gap:.2e}"));
                break;
            }
            let inv = group_mul(&x, &group_inv(&x), &cfg).unwrap();
            if inv.t.abs() + inv.z.iter().map(|v| v.abs()).sum::<f64>() > 1e-12 {
                failures.push(format!("inverse d={d}"));
                break;
            }
            let lambda = rng.gen_range(0.2..3.0);
            let hom = (koranyi_gauge(&dilate(lambda, &x).unwrap())
                - lambda * koranyi_gauge(&x))
            .abs();
            if hom > 1e-10 {
                failures.push(format!("gauge homogeneity d={d} gap {hom:.2e}"));
                break;
            }
        }
        let _ = e;
    }

    // Partition of unity: block windows sum to one on covered frequencies.
    let top = 4096i64;
    let blocks = num_blocks(top as usize);
    for k in -top..=top {
        let total: f64 = (0..blocks).map(|j| window_weight(j, k)).sum();
        if (total - 1.0).abs() > 1e-12 {
            failures.push(format!("partition of unity at k={k}"));
            break;
        }
    }

    // Szegő idempotency on a random vector.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let v: Vec<Complex64> = (0..257)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let once = szego_project(&v);
    let twice = szego_project(&once);
    let idem = once
        .iter()
        .zip(&twice)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if idem > 1e-14 {
        failures.push(format!("szego idempotency gap {idem:.2e}"));
    }

    // Commutator constant-invariance: [P, a] and [P, a + c] coincide.
    let a = make_lacunary(0.5, 5).unwrap();
    let mut coeffs = a.coeffs().to_vec();
    coeffs[a.cutoff()] += Complex64::new(3.5, -1.25);
    let shifted = symbol_lab::CircleSymbol::from_coeffs(a.cutoff(), coeffs).unwrap();
    let ca = commutator_p(&a, 48).to_dense();
    let cb = commutator_p(&shifted, 48).to_dense();
    let const_gap = ca
        .iter()
        .zip(cb.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    if const_gap > 1e-14 {
        failures.push(format!("commutator constant-invariance gap {const_gap:.2e}"));
    }

    // Singular values grow monotonically with the truncation window.
    let sym = make_lacunary(0.25, 6).unwrap();
    let mut prev = 0.0f64;
    for n in [64usize, 128, 256] {
        let top_sv = singular_values(&hankel_op(&sym, n), 1).unwrap().values[0];
        if top_sv + 1e-12 < prev {
            failures.push(format!("truncation monotonicity at N={n}"));
        }
        prev = top_sv;
    }

    let pass = failures.is_empty();
    assert!(report(
        9,
        pass,
        &if pass {
            "group axioms, gauge homogeneity, partition of unity, szego idempotency, \
             constant-invariance, truncation monotonicity all within tolerance"
                .to_string()
        } else {
            format!("violations: {}", failures.join(", "))
        },
    ));
}
