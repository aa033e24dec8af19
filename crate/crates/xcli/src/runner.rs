use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use cc_geodesic::{cc_distance, gauge_comparison_scan, DistanceRecord, SolverOptions};
use dixmier_func::{
    bound_report, xi2_lacunary_series, xi_diagonal_estimate, zeta_estimate, BoundReportOptions,
    XiEstimate,
};
use hardy_spectra::{
    calderon_norm_probe, decay_fit, hankel_op, singular_values, FitWindow, SingularSpectrum,
    TruncatedOperator,
};
use heis_core::{
    check_frame_commutators, dilate, group_inv, group_mul, koranyi_gauge, quasi_metric,
    HeisConfig, HeisPoint, QuasiMetricKind,
};
use symbol_lab::{
    aniso_blocks_check, besov_holder_equiv_check, holder_seminorm, k_functional_probe,
    make_lacunary, make_symbol, CircleSymbol, GridFunction3, SymbolSpec,
};

use crate::config::{
    short_hash, CalderonSymbol, CcDistParams, CcScanParams, DixmierBoundsParams, DixmierXiParams,
    DixmierZetaParams, ExperimentConfig, HardyCalderonParams, HardyFitParams, HardyHankelParams,
    HeisCheckParams, SymbolsBesovParams, SymbolsHolderParams, SymbolsKfunParams, TaskConfig,
    XiTuple,
};
use crate::manifest::{load_manifest, write_manifest, RunManifest, TaskStatus};
use crate::plot::{render_gnuplot, render_svg, PlotSpec};
use crate::RunError;

/// A finished run: the manifest and where it was written.
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub manifest_path: PathBuf,
}

fn numeric<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Numeric(e.to_string())
}

struct Ctx<'a> {
    out: &'a Path,
    name: &'static str,
    hash: String,
    cache: bool,
    seed: u64,
    artifacts: Vec<String>,
}

impl Ctx<'_> {
    fn write(&mut self, suffix: &str, content: &str) -> Result<PathBuf, RunError> {
        let file = format!("{}-{}-{}", self.name, self.hash, suffix);
        let path = self.out.join(&file);
        fs::write(&path, content)?;
        self.artifacts.push(file);
        Ok(path)
    }

    fn write_json<T: Serialize>(&mut self, suffix: &str, value: &T) -> Result<PathBuf, RunError> {
        let json = serde_json::to_string_pretty(value).map_err(numeric)?;
        self.write(suffix, &(json + "\n"))
    }
}

/// Execute one experiment and persist its artifacts and manifest.
///
/// The manifest is written last so that every listed artifact exists; on a
/// task failure the manifest records the failure and the error is returned
/// for the exit-code contract.
pub fn run(config: &ExperimentConfig, out_dir: &Path) -> Result<RunOutcome, RunError> {
    fs::create_dir_all(out_dir)?;
    let mut manifest = RunManifest::new(config.clone(), crate::config::config_hash(config));
    let mut ctx = Ctx {
        out: out_dir,
        name: config.task.name(),
        hash: short_hash(config),
        cache: config.cache,
        seed: config.seed,
        artifacts: Vec::new(),
    };
    let start = Instant::now();
    let result = dispatch(&config.task, &mut ctx);
    let seconds = start.elapsed().as_secs_f64();
    manifest.tasks.push(TaskStatus {
        name: ctx.name.to_string(),
        status: match &result {
            Ok(()) => "ok".to_string(),
            Err(e) => format!("failed: {e}"),
        },
        seconds,
    });
    manifest.artifacts = ctx.artifacts.clone();
    let manifest_path = write_manifest(out_dir, &manifest)?;
    result.map(|()| RunOutcome {
        manifest,
        manifest_path,
    })
}

fn dispatch(task: &TaskConfig, ctx: &mut Ctx) -> Result<(), RunError> {
    match task {
        TaskConfig::HeisCheck(p) => heis_check(p, ctx),
        TaskConfig::CcDist(p) => cc_dist(p, ctx),
        TaskConfig::CcScan(p) => cc_scan(p, ctx),
        TaskConfig::SymbolsHolder(p) => symbols_holder(p, ctx),
        TaskConfig::SymbolsBesov(p) => symbols_besov(p, ctx),
        TaskConfig::SymbolsKfun(p) => symbols_kfun(p, ctx),
        TaskConfig::HardyHankel(p) => hardy_hankel(p, ctx),
        TaskConfig::HardyCalderon(p) => hardy_calderon(p, ctx),
        TaskConfig::HardyFit(p) => hardy_fit(p, ctx),
        TaskConfig::DixmierXi(p) => dixmier_xi(p, ctx),
        TaskConfig::DixmierZeta(p) => dixmier_zeta(p, ctx),
        TaskConfig::DixmierBounds(p) => dixmier_bounds(p, ctx),
    }
}

/// The block-diagonal symplectic form on ℝ^d (d even); d = 2 is the
/// standard Heisenberg configuration.
pub fn block_config(d: usize) -> Result<HeisConfig, RunError> {
    if d < 2 || d % 2 != 0 {
        return Err(RunError::Usage(format!(
            "horizontal dimension must be even and at least 2, got {d}"
        )));
    }
    let mut l = vec![vec![0.0; d]; d];
    for b in 0..d / 2 {
        l[2 * b][2 * b + 1] = 1.0;
        l[2 * b + 1][2 * b] = -1.0;
    }
    HeisConfig::new(d, &l).map_err(numeric)
}

// ---------------------------------------------------------------------------
// heis check
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct HeisCheckReport {
    d: usize,
    samples: usize,
    frame_ok: bool,
    frame_worst_defect: f64,
    worst_associativity: f64,
    worst_identity: f64,
    worst_inverse: f64,
    worst_homogeneity: f64,
    /// Empirical quasi-triangle constant max d(x,z)/(d(x,y)+d(y,z)).
    triangle_constant: f64,
    ok: bool,
}

fn random_point(rng: &mut ChaCha8Rng, d: usize) -> HeisPoint {
    HeisPoint {
        t: rng.gen_range(-2.0..2.0),
        z: (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect(),
    }
}

fn point_dist(a: &HeisPoint, b: &HeisPoint) -> f64 {
    let mut s = (a.t - b.t).powi(2);
    for (x, y) in a.z.iter().zip(&b.z) {
        s += (x - y).powi(2);
    }
    s.sqrt()
}

fn heis_check(p: &HeisCheckParams, ctx: &mut Ctx) -> Result<(), RunError> {
    if p.samples == 0 {
        return Err(RunError::Usage("samples must be at least 1".into()));
    }
    let cfg = block_config(p.d)?;
    let frame = check_frame_commutators(&cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let e = HeisPoint::identity(p.d);
    let (mut wa, mut wid, mut winv, mut whom, mut tri) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..p.samples {
        let x = random_point(&mut rng, p.d);
        let y = random_point(&mut rng, p.d);
        let z = random_point(&mut rng, p.d);
        let xy_z = group_mul(&group_mul(&x, &y, &cfg).map_err(numeric)?, &z, &cfg)
            .map_err(numeric)?;
        let x_yz = group_mul(&x, &group_mul(&y, &z, &cfg).map_err(numeric)?, &cfg)
            .map_err(numeric)?;
        wa = wa.max(point_dist(&xy_z, &x_yz));
        wid = wid.max(point_dist(&group_mul(&x, &e, &cfg).map_err(numeric)?, &x));
        winv = winv.max(point_dist(
            &group_mul(&x, &group_inv(&x), &cfg).map_err(numeric)?,
            &e,
        ));
        let lambda = rng.gen_range(0.2..3.0);
        let scaled = dilate(lambda, &x).map_err(numeric)?;
        whom = whom.max((koranyi_gauge(&scaled) - lambda * koranyi_gauge(&x)).abs());
        let dxz = quasi_metric(QuasiMetricKind::Koranyi, &x, &z, &cfg).map_err(numeric)?;
        let dxy = quasi_metric(QuasiMetricKind::Koranyi, &x, &y, &cfg).map_err(numeric)?;
        let dyz = quasi_metric(QuasiMetricKind::Koranyi, &y, &z, &cfg).map_err(numeric)?;
        if dxy + dyz > 0.0 {
            tri = tri.max(dxz / (dxy + dyz));
        }
    }
    let ok = frame.ok && wa <= 1e-12 && wid <= 1e-12 && winv <= 1e-12 && whom <= 1e-10;
    let report = HeisCheckReport {
        d: p.d,
        samples: p.samples,
        frame_ok: frame.ok,
        frame_worst_defect: frame.worst_defect,
        worst_associativity: wa,
        worst_identity: wid,
        worst_inverse: winv,
        worst_homogeneity: whom,
        triangle_constant: tri,
        ok,
    };
    ctx.write_json("report.json", &report)?;
    if !ok {
        return Err(RunError::Numeric(format!(
            "structural check failed (assoc {wa:.2e}, id {wid:.2e}, inv {winv:.2e}, hom {whom:.2e})"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// cc
// ---------------------------------------------------------------------------

fn cc_dist(p: &CcDistParams, ctx: &mut Ctx) -> Result<(), RunError> {
    let cfg = block_config(p.z.len())?;
    let x = HeisPoint::identity(cfg.d());
    let y = HeisPoint::new(p.t, p.z.clone()).map_err(numeric)?;
    let opts = SolverOptions {
        seed: ctx.seed,
        m_max: p.m_max,
        ..Default::default()
    };
    let res = cc_distance(&x, &y, &cfg, &opts).map_err(numeric)?;
    let record = DistanceRecord {
        x,
        y,
        value: res.value,
        energy: res.energy,
        residual: res.constraint_residual,
        m: res.m,
        seed: opts.seed,
    };
    ctx.write_json("record.json", &record)?;
    ctx.write("path.csv", &res.path.to_csv(&cfg).map_err(numeric)?)?;
    Ok(())
}

fn cc_scan(p: &CcScanParams, ctx: &mut Ctx) -> Result<(), RunError> {
    let cfg = HeisConfig::standard_h1();
    let opts = SolverOptions {
        seed: ctx.seed,
        ..Default::default()
    };
    let report = gauge_comparison_scan(&cfg, p.samples, p.radius, &opts).map_err(numeric)?;

    let mut jsonl = String::new();
    let mut csv = String::from("gauge,ratio\n");
    let mut pts = Vec::new();
    for s in &report.samples {
        jsonl.push_str(&serde_json::to_string(s).map_err(numeric)?);
        jsonl.push('\n');
        let _ = writeln!(csv, "{},{}", s.gauge, s.ratio);
        pts.push((s.gauge, s.ratio));
    }
    ctx.write("samples.jsonl", &jsonl)?;
    ctx.write("ratios.csv", &csv)?;
    let svg = render_svg(
        &pts,
        &PlotSpec {
            title: "CC distance vs Koranyi gauge".into(),
            x_label: "|y|_H".into(),
            y_label: "d_CC(e,y) / |y|_H".into(),
            log_x: false,
            log_y: false,
            scatter: true,
            annotation: Some(format!("band [{:.3}, {:.3}]", report.min, report.max)),
        },
    );
    ctx.write("ratios.svg", &svg)?;

    #[derive(Serialize)]
    struct ScanSummary {
        samples: usize,
        failures: usize,
        min: f64,
        max: f64,
        band: f64,
    }
    ctx.write_json(
        "report.json",
        &ScanSummary {
            samples: report.samples.len(),
            failures: report.failures,
            min: report.min,
            max: report.max,
            band: report.max / report.min,
        },
    )?;
    Ok(())
}

// ---------------------------------------------------------------------------
// symbols
// ---------------------------------------------------------------------------

/// Deterministic mixed corpus: lacunary symbols at two exponents, seeded
/// random decaying symbols, and small trig polynomials.
pub fn standard_corpus(seed: u64, count: usize) -> Vec<CircleSymbol> {
    (0..count)
        .map(|i| {
            let spec = match i % 4 {
                0 => SymbolSpec::Lacunary {
                    beta: 0.25,
                    n_max: 4 + (i as u32 / 4) % 6,
                },
                1 => SymbolSpec::Lacunary {
                    beta: 0.5,
                    n_max: 4 + (i as u32 / 4) % 6,
                },
                2 => SymbolSpec::Random {
                    beta: 0.3 + 0.1 * ((i / 4) % 4) as f64,
                    n_max: 5,
                    seed: seed.wrapping_add(i as u64),
                },
                _ => {
                    let k = 1 + (i as i64 / 4) % 3;
                    SymbolSpec::Trig {
                        coeffs: [(k, (0.5, 0.0)), (-k, (0.5, 0.0)), (1, (0.0, 0.25 / k as f64)), (-1, (0.0, -0.25 / k as f64))]
                            .into_iter()
                            .collect(),
                    }
                }
            };
            make_symbol(&spec).expect("corpus spec is valid")
        })
        .collect()
}

fn symbols_holder(p: &SymbolsHolderParams, ctx: &mut Ctx) -> Result<(), RunError> {
    let f = make_symbol(&p.spec).map_err(numeric)?;
    let report = holder_seminorm(&f, p.alpha, p.grid).map_err(numeric)?;
    ctx.write_json("report.json", &report)?;
    Ok(())
}

fn symbols_besov(p: &SymbolsBesovParams, ctx: &mut Ctx) -> Result<(), RunError> {
    let corpus = standard_corpus(ctx.seed, p.corpus);
    let report = besov_holder_equiv_check(&corpus, p.s).map_err(numeric)?;
    let mut csv = String::from("index,ratio\n");
    for (i, r) in report.ratios.iter().enumerate() {
        let _ = writeln!(csv, "{i},{r}");
    }
    ctx.write("ratios.csv", &csv)?;
    ctx.write_json("report.json", &report)?;
    Ok(())
}

fn symbols_kfun(p: &SymbolsKfunParams, ctx: &mut Ctx) -> Result<(), RunError> {
    let f = make_symbol(&p.spec).map_err(numeric)?;
    let t_grid: Vec<f64> = (0..=12).map(|j| 2f64.powi(-j)).collect();
    let report = k_functional_probe(&f, p.theta, &t_grid).map_err(numeric)?;
    let mut csv = String::from("t,k_hat\n");
    for (t, k) in &report.entries {
        let _ = writeln!(csv, "{t},{k}");
    }
    ctx.write("kfun.csv", &csv)?;
    ctx.write_json("report.json", &report)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// hardy
// ---------------------------------------------------------------------------

/// Fourier truncation of the triangle wave |θ| on [−π, π]: coefficient
/// −2/(πk²) at odd k, π/2 at zero.  Lipschitz, so commutator norms plateau.
pub fn triangle_symbol(cutoff: usize) -> CircleSymbol {
    let n = cutoff;
    let coeffs: Vec<Complex64> = (-(n as i64)..=(n as i64))
        .map(|k| {
            if k == 0 {
                Complex64::new(std::f64::consts::FRAC_PI_2, 0.0)
            } else if k.rem_euclid(2) == 1 || k.rem_euclid(2) == -1 {
                Complex64::new(-2.0 / (std::f64::consts::PI * (k * k) as f64), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    CircleSymbol::from_coeffs(n, coeffs).expect("triangle coefficients well formed")
}

/// Singular spectrum with optional caching keyed by the construction hash.
fn spectrum_cached(
    ctx: &mut Ctx,
    construction: &str,
    op: &TruncatedOperator,
    k: usize,
) -> Result<SingularSpectrum, RunError> {
    if !ctx.cache {
        return singular_values(op, k).map_err(numeric);
    }
    let digest = Sha256::digest(format!("{construction}|window={}|k={k}", op.window()).as_bytes());
    let key: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
    let dir = ctx.out.join("cache");
    fs::create_dir_all(&dir)?;
    let path = dir.join(format!("{key}.json"));
    if path.exists() {
        let text = fs::read_to_string(&path)?;
        let cached: SingularSpectrum = serde_json::from_str(&text)
            .map_err(|e| RunError::Numeric(format!("corrupt cache entry {key}: {e}")))?;
        return Ok(cached);
    }
    let fresh = singular_values(op, k).map_err(numeric)?;
    fs::write(&path, serde_json::to_string(&fresh).map_err(numeric)?)?;
    Ok(fresh)
}

fn spectrum_csv(s: &SingularSpectrum) -> String {
    let mut csv = String::from("index,sigma\n");
    for (i, v) in s.values.iter().enumerate() {
        let _ = writeln!(csv, "{i},{v}");
    }
    csv
}

fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| x > 0.0 && y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

fn spectrum_svg(s: &SingularSpectrum, title: &str) -> String {
    let pts: Vec<(f64, f64)> = s
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as f64 + 1.0, v))
        .collect();
    let slope = loglog_slope(&pts);
    render_svg(
        &pts,
        &PlotSpec {
            title: title.into(),
            x_label: "k+1".into(),
            y_label: "sigma_k".into(),
            log_x: true,
            log_y: true,
            scatter: false,
            annotation: slope.map(|s| format!("log-log slope {s:.3}")),
        },
    )
}

fn hardy_hankel(p: &HardyHankelParams, ctx: &mut Ctx) -> Result<(), RunError> {
    let a = make_lacunary(p.beta, p.n_max).map_err(numeric)?;
    let op = hankel_op(&a, p.window);
    let construction = format!("hankel|lacunary|beta={}|n_max={}", p.beta, p.n_max);
    let spectrum = spectrum_cached(ctx, &construction, &op, p.top_k)?;
    ctx.write("spectrum.csv", &spectrum_csv(&spectrum))?;
    ctx.write(
        "spectrum.svg",
        &spectrum_svg(&spectrum, &format!("Hankel spectrum, beta={}", p.beta)),
    )?;
    ctx.write_json("report.json", &spectrum)?;
    Ok(())
}

fn hardy_fit(p: &HardyFitParams, ctx: &mut Ctx) -> Result<(), RunError> {
    let a = make_lacunary(p.beta, p.n_max).map_err(numeric)?;
    let op = hankel_op(&a, p.window);
    let construction = format!("hankel|lacunary|beta={}|n_max={}", p.beta, p.n_max);
    let spectrum = spectrum_cached(ctx, &construction, &op, p.top_k)?;
    let fit = decay_fit(
        &spectrum,
        FitWindow {
            k_min: p.k_min,
            k_max: p.k_max,
        },
    )
    .map_err(numeric)?;
    ctx.write("spectrum.csv", &spectrum_csv(&spectrum))?;
    let pts: Vec<(f64, f64)> = spectrum
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as f64 + 1.0, v))
        .collect();
    ctx.write(
        "spectrum.svg",
        &render_svg(
            &pts,
            &PlotSpec {
                title: format!("Hankel decay fit, beta={}", p.beta),
                x_label: "k+1".into(),
                y_label: "sigma_k".into(),
                log_x: true,
                log_y: true,
                scatter: false,
                annotation: Some(format!(
                    "decay {:.3}, p_hat {:.3} on [{}, {}]",
                    fit.decay_exponent, fit.p_hat, p.k_min, p.k_max
                )),
            },
        ),
    )?;
    ctx.write_json("fit.json", &fit)?;
    Ok(())
}

fn hardy_calderon(p: &HardyCalderonParams, ctx: &mut Ctx) -> Result<(), RunError> {
    let f = match &p.symbol {
        CalderonSymbol::Triangle => triangle_symbol(1024),
        CalderonSymbol::Lacunary { beta, n_max } => {
            make_lacunary(*beta, *n_max).map_err(numeric)?
        }
    };
    let report = calderon_norm_probe(&f, &p.levels, ctx.seed).map_err(numeric)?;
    let mut csv = String::from("window,norm,iterations\n");
    let mut pts = Vec::new();
    for e in &report.entries {
        let _ = writeln!(csv, "{},{},{}", e.n, e.norm, e.iterations);
        pts.push((e.n as f64, e.norm));
    }
    ctx.write("norms.csv", &csv)?;
    ctx.write(
        "norms.svg",
        &render_svg(
            &pts,
            &PlotSpec {
                title: "commutator norm vs truncation".into(),
                x_label: "window N".into(),
                y_label: "operator norm".into(),
                log_x: true,
                log_y: true,
                scatter: false,
                annotation: report
                    .growth_exponent
                    .map(|g| format!("growth exponent {g:.3}")),
            },
        ),
    )?;
    ctx.write_json("report.json", &report)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// dixmier
// ---------------------------------------------------------------------------

/// Dyadic partial-list 2⁶, 2⁷, …, ≤ n, always including n itself.
fn dyadic_list(n: usize) -> Vec<usize> {
    let mut list: Vec<usize> = (6..)
        .map(|j| 1usize << j)
        .take_while(|&v| v < n)
        .collect();
    list.retain(|&v| v <= n);
    list.push(n);
    list
}

#[derive(Serialize)]
struct XiSummary<'a> {
    k: usize,
    truncation: usize,
    symbols: &'a [String],
    max_imag: f64,
    partials_min: f64,
    partials_max: f64,
    validation_residual: Option<f64>,
}

fn write_xi_artifacts(est: &XiEstimate, ctx: &mut Ctx) -> Result<(), RunError> {
    let mut csv = String::from("n,lambda\n");
    let mut pts = Vec::new();
    for p in &est.partials.points {
        let _ = writeln!(csv, "{},{}", p.n, p.value);
        pts.push((p.n as f64, p.value));
    }
    ctx.write("cesaro.csv", &csv)?;
    ctx.write(
        "cesaro.svg",
        &render_svg(
            &pts,
            &PlotSpec {
                title: format!("log-Cesaro partials, {}", est.partials.source),
                x_label: "N".into(),
                y_label: "Lambda_N".into(),
                log_x: true,
                log_y: false,
                scatter: false,
                annotation: None,
            },
        ),
    )?;
    let mut diag = String::from("l,d_l\n");
    for (l, d) in est.diagonal.iter().enumerate() {
        let _ = writeln!(diag, "{l},{d}");
    }
    ctx.write("diagonal.csv", &diag)?;
    let (lo, hi) = est.partials.range().unwrap_or((f64::NAN, f64::NAN));
    ctx.write_json(
        "report.json",
        &XiSummary {
            k: est.k,
            truncation: est.truncation,
            symbols: &est.symbols,
            max_imag: est.max_imag,
            partials_min: lo,
            partials_max: hi,
            validation_residual: est.validation_residual,
        },
    )?;
    Ok(())
}

fn dixmier_xi(p: &DixmierXiParams, ctx: &mut Ctx) -> Result<(), RunError> {
    let n_list = dyadic_list(p.n);
    let est = match &p.tuple {
        XiTuple::Lacunary { beta, n_max } => {
            xi2_lacunary_series(*beta, *n_max, p.n, &n_list).map_err(numeric)?
        }
        XiTuple::HalfCosine => {
            let a = make_symbol(&SymbolSpec::Trig {
                coeffs: [(1i64, (0.25, 0.0)), (-1i64, (0.25, 0.0))]
                    .into_iter()
                    .collect(),
            })
            .map_err(numeric)?;
            xi_diagonal_estimate(&[a.clone(), a.clone(), a.clone(), a], p.n, &n_list)
                .map_err(numeric)?
        }
    };
    write_xi_artifacts(&est, ctx)
}

fn dixmier_zeta(p: &DixmierZetaParams, ctx: &mut Ctx) -> Result<(), RunError> {
    let tuple: Vec<CircleSymbol> = (0..4)
        .map(|i| {
            make_symbol(&SymbolSpec::Random {
                beta: 0.5,
                n_max: p.spread,
                seed: ctx.seed.wrapping_add(i),
            })
        })
        .collect::<Result<_, _>>()
        .map_err(numeric)?;
    let est = zeta_estimate(&tuple, p.n, &dyadic_list(p.n)).map_err(numeric)?;
    write_xi_artifacts(&est, ctx)?;
    if est.validation_residual.is_some_and(|r| r > 1e-8) {
        return Err(RunError::Numeric(format!(
            "alternating-sum validation residual {:.3e} exceeds 1e-8",
            est.validation_residual.unwrap()
        )));
    }
    Ok(())
}

fn dixmier_bounds(p: &DixmierBoundsParams, ctx: &mut Ctx) -> Result<(), RunError> {
    let opts = BoundReportOptions {
        enforce_tail: !p.relaxed_tail,
        ..Default::default()
    };
    let report = bound_report(p.l_max, p.n_max, opts).map_err(numeric)?;
    let mut jsonl = String::new();
    for row in &report.rows {
        jsonl.push_str(&serde_json::to_string(row).map_err(numeric)?);
        jsonl.push('\n');
    }
    ctx.write("rows.jsonl", &jsonl)?;
    #[derive(Serialize)]
    struct BoundSummary {
        l_max: u64,
        n_max: u32,
        subsum_integral_failures: usize,
        exact_subsum_failures: usize,
    }
    ctx.write_json(
        "summary.json",
        &BoundSummary {
            l_max: p.l_max,
            n_max: p.n_max,
            subsum_integral_failures: report.subsum_integral_failures,
            exact_subsum_failures: report.exact_subsum_failures,
        },
    )?;
    Ok(())
}

// ---------------------------------------------------------------------------
// anisotropic helper reused by tests and the acceptance suite
// ---------------------------------------------------------------------------

/// Build the periodic-box sample used by the anisotropic block check: a
/// small sum of Koranyi-localized modes.
pub fn standard_aniso_sample(dims: [usize; 3]) -> Result<GridFunction3, symbol_lab::SymbolError> {
    GridFunction3::from_fn(dims, |t, z1, z2| {
        let v = (2.0 * t).sin() + 0.5 * (z1 + z2).cos() + 0.25 * (3.0 * z1 - t).sin();
        Complex64::new(v, 0.0)
    })
}

/// Run the anisotropic three-term identity check at the given resolution.
pub fn aniso_identity_residual(dims: [usize; 3], s: f64) -> Result<f64, RunError> {
    let cfg = HeisConfig::standard_h1();
    let f = standard_aniso_sample(dims).map_err(numeric)?;
    let report = aniso_blocks_check(&cfg, &f, s).map_err(numeric)?;
    Ok(report.identity_residual.max(report.reconstruction_residual))
}

// ---------------------------------------------------------------------------
// plots from manifests
// ---------------------------------------------------------------------------

/// Render a plot from an existing run's artifacts.
///
/// `what` selects the artifact family: "spectrum" (log-log singular values),
/// "cesaro" (Λ_N convergence), or "ratios" (scan scatter).  With `gnuplot`
/// set, a .gp script referencing the CSV is emitted instead of an SVG.
pub fn plot_from_manifest(
    manifest_path: &Path,
    what: &str,
    gnuplot: bool,
) -> Result<PathBuf, RunError> {
    let manifest = load_manifest(manifest_path)?;
    let dir = manifest_path.parent().unwrap_or_else(|| Path::new("."));
    let (needle, spec) = match what {
        "spectrum" => (
            "spectrum.csv",
            PlotSpec {
                title: "singular values".into(),
                x_label: "k+1".into(),
                y_label: "sigma_k".into(),
                log_x: true,
                log_y: true,
                scatter: false,
                annotation: None,
            },
        ),
        "cesaro" => (
            "cesaro.csv",
            PlotSpec {
                title: "log-Cesaro partials".into(),
                x_label: "N".into(),
                y_label: "Lambda_N".into(),
                log_x: true,
                log_y: false,
                scatter: false,
                annotation: None,
            },
        ),
        "ratios" => (
            "ratios.csv",
            PlotSpec {
                title: "ratio scan".into(),
                x_label: "x".into(),
                y_label: "ratio".into(),
                log_x: false,
                log_y: false,
                scatter: true,
                annotation: None,
            },
        ),
        other => {
            return Err(RunError::Usage(format!(
                "unknown plot kind '{other}' (expected spectrum, cesaro, or ratios)"
            )))
        }
    };
    let artifact = manifest
        .artifacts
        .iter()
        .find(|a| a.ends_with(needle))
        .ok_or_else(|| {
            RunError::Numeric(format!(
                "manifest {} has no {needle} artifact",
                manifest_path.display()
            ))
        })?;
    let csv_path = dir.join(artifact);
    let text = fs::read_to_string(&csv_path)?;
    let mut points = Vec::new();
    let mut slope_pts = Vec::new();
    for line in text.lines().skip(1) {
        let mut cols = line.split(',');
        let (Some(a), Some(b)) = (cols.next(), cols.next()) else {
            continue;
        };
        let (Ok(x), Ok(y)) = (a.parse::<f64>(), b.parse::<f64>()) else {
            continue;
        };
        let x = if what == "spectrum" { x + 1.0 } else { x };
        points.push((x, y));
        slope_pts.push((x, y));
    }
    if points.is_empty() {
        return Err(RunError::Numeric(format!(
            "artifact {} contains no data rows",
            csv_path.display()
        )));
    }
    let mut spec = spec;
    if what == "spectrum" {
        spec.annotation = loglog_slope(&slope_pts).map(|s| format!("log-log slope {s:.3}"));
    }
    let out = if gnuplot {
        let path = csv_path.with_extension("gp");
        fs::write(&path, render_gnuplot(&csv_path.to_string_lossy(), &spec))?;
        path
    } else {
        let path = csv_path.with_extension("svg");
        fs::write(&path, render_svg(&points, &spec))?;
        path
    };
    Ok(out)
}
