use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use xcli::config::{
    CalderonSymbol, CcDistParams, CcScanParams, DixmierBoundsParams, DixmierXiParams,
    DixmierZetaParams, HardyCalderonParams, HardyFitParams, HardyHankelParams, HeisCheckParams,
    SymbolsBesovParams, SymbolsHolderParams, SymbolsKfunParams, XiTuple,
};
use xcli::{manifest_query, plot_from_manifest, run, ExperimentConfig, RunError, TaskConfig};

/// Numerical laboratory for Heisenberg-group geometry, Hardy-space
/// commutators, and singular-trace functionals.
#[derive(Parser)]
#[command(name = "heislab", version, arg_required_else_help = true)]
struct Cli {
    /// Base RNG seed for all randomized components.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory for artifacts and manifests.
    #[arg(long, global = true, default_value = "heislab-out")]
    out: PathBuf,
    /// Worker threads (defaults to all cores; never affects results).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Cache computed spectra keyed by their construction.
    #[arg(long, global = true)]
    cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group-structure checks and metric probes.
    #[command(subcommand)]
    Heis(HeisCmd),
    /// Carnot–Carathéodory distance solver.
    #[command(subcommand)]
    Cc(CcCmd),
    /// Symbol smoothness diagnostics.
    #[command(subcommand)]
    Symbols(SymbolsCmd),
    /// Hardy-space commutator spectra.
    #[command(subcommand)]
    Hardy(HardyCmd),
    /// Singular-trace diagonal functionals.
    #[command(subcommand)]
    Dixmier(DixmierCmd),
    /// Run an experiment described by a JSON config file.
    Run {
        /// Path to the JSON experiment config.
        #[arg(long)]
        config: PathBuf,
    },
    /// Re-render a plot from a previous run's artifacts.
    Plot {
        /// Path to the run manifest.
        #[arg(long)]
        manifest: PathBuf,
        /// Which artifact family: spectrum, cesaro, or ratios.
        #[arg(long)]
        what: String,
        /// Emit a gnuplot script referencing the CSV instead of an SVG.
        #[arg(long)]
        gnuplot: bool,
    },
    /// List recorded runs in the output directory.
    Runs {
        /// Directory to scan (defaults to --out).
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Only show runs of this command (e.g. hardy-hankel).
        #[arg(long)]
        command: Option<String>,
    },
}

#[derive(Subcommand)]
enum HeisCmd {
    /// Verify group axioms, frame relations, and gauge homogeneity.
    Check(HeisCheckArgs),
}

#[derive(Args)]
struct HeisCheckArgs {
    /// Horizontal dimension (even).
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Random samples per axiom.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Subcommand)]
enum CcCmd {
    /// Distance from the identity to one point.
    Dist(CcDistArgs),
    /// Ratio scan of CC distance against the Koranyi gauge.
    Scan(CcScanArgs),
}

#[derive(Args)]
struct CcDistArgs {
    /// Vertical coordinate of the target.
    #[arg(long, default_value_t = 0.0)]
    t: f64,
    /// Horizontal coordinates, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,0")]
    z: Vec<f64>,
    /// Mesh ceiling for refinement.
    #[arg(long, default_value_t = 256)]
    m_max: usize,
}

#[derive(Args)]
struct CcScanArgs {
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Koranyi radius of the sampling ball.
    #[arg(long, default_value_t = 2.0)]
    radius: f64,
}

#[derive(Subcommand)]
enum SymbolsCmd {
    /// Sampled Hölder seminorm of a symbol.
    Holder(SymbolsHolderArgs),
    /// Besov vs Hölder norm comparison over a generated corpus.
    Besov(SymbolsBesovArgs),
    /// Discrete K-functional probe of a symbol.
    Kfun(SymbolsKfunArgs),
}

#[derive(Args)]
struct SymbolsHolderArgs {
    /// Symbol spec as JSON, e.g. '{"kind":"lacunary","beta":0.5,"n_max":8}'.
    #[arg(long)]
    spec: String,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 4096)]
    grid: usize,
}

#[derive(Args)]
struct SymbolsBesovArgs {
    /// Smoothness exponent.
    #[arg(long, default_value_t = 0.5)]
    s: f64,
    /// Corpus size.
    #[arg(long, default_value_t = 20)]
    corpus: usize,
}

#[derive(Args)]
struct SymbolsKfunArgs {
    /// Symbol spec as JSON.
    #[arg(long)]
    spec: String,
    #[arg(long, default_value_t = 0.5)]
    theta: f64,
}

#[derive(Subcommand)]
enum HardyCmd {
    /// Hankel singular spectrum of a lacunary symbol.
    Hankel(HardyHankelArgs),
    /// First-order commutator norm across truncations.
    Calderon(HardyCalderonArgs),
    /// Power-law fit of Hankel singular-value decay.
    Fit(HardyFitArgs),
}

#[derive(Args)]
struct HardyHankelArgs {
    #[arg(long, default_value_t = 0.25)]
    beta: f64,
    #[arg(long, default_value_t = 10)]
    n_max: u32,
    /// Window half-width N.
    #[arg(long, default_value_t = 2048)]
    window: usize,
    #[arg(long, default_value_t = 256)]
    top_k: usize,
}

#[derive(Args)]
struct HardyCalderonArgs {
    /// Symbol: "triangle" or "lacunary:BETA:NMAX".
    #[arg(long, default_value = "triangle")]
    symbol: String,
    /// Window sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "256,512,1024,2048,4096,8192")]
    levels: Vec<usize>,
}

#[derive(Args)]
struct HardyFitArgs {
    #[arg(long, default_value_t = 0.25)]
    beta: f64,
    #[arg(long, default_value_t = 10)]
    n_max: u32,
    #[arg(long, default_value_t = 4096)]
    window: usize,
    #[arg(long, default_value_t = 512)]
    top_k: usize,
    #[arg(long, default_value_t = 16)]
    k_min: usize,
    #[arg(long, default_value_t = 512)]
    k_max: usize,
}

#[derive(Subcommand)]
enum DixmierCmd {
    /// Order-2 diagonal functional and its log-Cesàro partials.
    Xi(DixmierXiArgs),
    /// Product-of-commutators functional with expansion validation.
    Zeta(DixmierZetaArgs),
    /// Lattice values against claimed closed forms and integral bounds.
    Bounds(DixmierBoundsArgs),
}

#[derive(Args)]
struct DixmierXiArgs {
    /// Tuple: "lacunary:BETA:NMAX" or "half-cosine".
    #[arg(long, default_value = "lacunary:0.25:40")]
    tuple: String,
    /// Diagonal truncation N.
    #[arg(long, default_value_t = 65536)]
    n: usize,
}

#[derive(Args)]
struct DixmierZetaArgs {
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Frequency cutoff exponent of the random tuple.
    #[arg(long, default_value_t = 2)]
    spread: u32,
}

#[derive(Args)]
struct DixmierBoundsArgs {
    #[arg(long, default_value_t = 64)]
    l_max: u64,
    #[arg(long, default_value_t = 40)]
    n_max: u32,
    /// Flag oversized tails instead of refusing.
    #[arg(long)]
    relaxed_tail: bool,
}

fn parse_spec(text: &str) -> Result<symbol_lab::SymbolSpec, RunError> {
    serde_json::from_str(text).map_err(|e| RunError::Usage(format!("bad symbol spec: {e}")))
}

fn parse_calderon_symbol(text: &str) -> Result<CalderonSymbol, RunError> {
    if text == "triangle" {
        return Ok(CalderonSymbol::Triangle);
    }
    if let Some(rest) = text.strip_prefix("lacunary:") {
        let mut it = rest.split(':');
        if let (Some(b), Some(n), None) = (it.next(), it.next(), it.next()) {
            if let (Ok(beta), Ok(n_max)) = (b.parse(), n.parse()) {
                return Ok(CalderonSymbol::Lacunary { beta, n_max });
            }
        }
    }
    Err(RunError::Usage(format!(
        "bad symbol '{text}' (expected 'triangle' or 'lacunary:BETA:NMAX')"
    )))
}

fn parse_tuple(text: &str) -> Result<XiTuple, RunError> {
    if text == "half-cosine" {
        return Ok(XiTuple::HalfCosine);
    }
    if let Some(rest) = text.strip_prefix("lacunary:") {
        let mut it = rest.split(':');
        if let (Some(b), Some(n), None) = (it.next(), it.next(), it.next()) {
            if let (Ok(beta), Ok(n_max)) = (b.parse(), n.parse()) {
                return Ok(XiTuple::Lacunary { beta, n_max });
            }
        }
    }
    Err(RunError::Usage(format!(
        "bad tuple '{text}' (expected 'half-cosine' or 'lacunary:BETA:NMAX')"
    )))
}

fn task_from_command(command: &Command) -> Result<Option<TaskConfig>, RunError> {
    Ok(Some(match command {
        Command::Heis(HeisCmd::Check(a)) => TaskConfig::HeisCheck(HeisCheckParams {
            d: a.d,
            samples: a.samples,
        }),
        Command::Cc(CcCmd::Dist(a)) => TaskConfig::CcDist(CcDistParams {
            t: a.t,
            z: a.z.clone(),
            m_max: a.m_max,
        }),
        Command::Cc(CcCmd::Scan(a)) => TaskConfig::CcScan(CcScanParams {
            samples: a.samples,
            radius: a.radius,
        }),
        Command::Symbols(SymbolsCmd::Holder(a)) => TaskConfig::SymbolsHolder(SymbolsHolderParams {
            spec: parse_spec(&a.spec)?,
            alpha: a.alpha,
            grid: a.grid,
        }),
        Command::Symbols(SymbolsCmd::Besov(a)) => TaskConfig::SymbolsBesov(SymbolsBesovParams {
            s: a.s,
            corpus: a.corpus,
        }),
        Command::Symbols(SymbolsCmd::Kfun(a)) => TaskConfig::SymbolsKfun(SymbolsKfunParams {
            spec: parse_spec(&a.spec)?,
            theta: a.theta,
        }),
        Command::Hardy(HardyCmd::Hankel(a)) => TaskConfig::HardyHankel(HardyHankelParams {
            beta: a.beta,
            n_max: a.n_max,
            window: a.window,
            top_k: a.top_k,
        }),
        Command::Hardy(HardyCmd::Calderon(a)) => TaskConfig::HardyCalderon(HardyCalderonParams {
            symbol: parse_calderon_symbol(&a.symbol)?,
            levels: a.levels.clone(),
        }),
        Command::Hardy(HardyCmd::Fit(a)) => TaskConfig::HardyFit(HardyFitParams {
            beta: a.beta,
            n_max: a.n_max,
            window: a.window,
            top_k: a.top_k,
            k_min: a.k_min,
            k_max: a.k_max,
        }),
        Command::Dixmier(DixmierCmd::Xi(a)) => TaskConfig::DixmierXi(DixmierXiParams {
            tuple: parse_tuple(&a.tuple)?,
            n: a.n,
        }),
        Command::Dixmier(DixmierCmd::Zeta(a)) => TaskConfig::DixmierZeta(DixmierZetaParams {
            n: a.n,
            spread: a.spread,
        }),
        Command::Dixmier(DixmierCmd::Bounds(a)) => TaskConfig::DixmierBounds(DixmierBoundsParams {
            l_max: a.l_max,
            n_max: a.n_max,
            relaxed_tail: a.relaxed_tail,
        }),
        Command::Run { .. } | Command::Plot { .. } | Command::Runs { .. } => return Ok(None),
    }))
}

fn real_main(cli: &Cli) -> Result<(), RunError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(RunError::Usage("--jobs must be at least 1".into()));
        }
        // Ignore the error if a global pool already exists (e.g. in tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }

    match &cli.command {
        Command::Plot {
            manifest,
            what,
            gnuplot,
        } => {
            let out = plot_from_manifest(manifest, what, *gnuplot)?;
            println!("wrote {}", out.display());
            return Ok(());
        }
        Command::Runs { dir, command } => {
            let dir = dir.as_ref().unwrap_or(&cli.out);
            let manifests = manifest_query(dir, command.as_deref())?;
            if manifests.is_empty() {
                println!("no recorded runs in {}", dir.display());
            }
            for m in manifests {
                let status = m
                    .tasks
                    .iter()
                    .map(|t| t.status.as_str())
                    .collect::<Vec<_>>()
                    .join("; ");
                println!(
                    "{}  {}  created={}  status={}  artifacts={}",
                    &m.config_hash[..12],
                    m.command,
                    m.created_unix,
                    status,
                    m.artifacts.len()
                );
            }
            return Ok(());
        }
        Command::Run { config } => {
            let text = std::fs::read_to_string(config)?;
            let parsed: ExperimentConfig = serde_json::from_str(&text)
                .map_err(|e| RunError::Usage(format!("bad config {}: {e}", config.display())))?;
            let outcome = run(&parsed, &cli.out)?;
            println!("wrote {}", outcome.manifest_path.display());
            return Ok(());
        }
        _ => {}
    }

    let task = task_from_command(&cli.command)?.expect("non-task commands handled above");
    let config = ExperimentConfig {
        seed: cli.seed,
        jobs: cli.jobs,
        cache: cli.cache,
        task,
    };
    let outcome = run(&config, &cli.out)?;
    println!("wrote {}", outcome.manifest_path.display());
    for a in &outcome.manifest.artifacts {
        println!("  {}", cli.out.join(a).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
