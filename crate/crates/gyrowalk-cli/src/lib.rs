//! Command-line front end: simulation, verification, statistics reports,
//! and SVG rendering on top of the `gyrowalk` library.
//!
//! Exit codes: 0 on success, 1 on configuration or precondition errors
//! (including unknown flags), 2 when the verification suite reports
//! failures.

mod config;
mod reports;

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use gyrowalk::analysis::{
    clt_report, escape_rate, lil_report, oscillation_check, step_law_moments,
    uniform_escape_rate, z_rate_report, LilNormalizer,
};
use gyrowalk::disk::{DiskPoint, Pole};
use gyrowalk::io::{read_trajectory_path, write_trajectory_path, TrajectoryFormat};
use gyrowalk::render::{render_to_path, RenderStyle};
use gyrowalk::verify::run_identity_suite;
use gyrowalk::walk::{
    run_ensemble, CdfTable, EnsembleConfig, StepLaw, VarsigmaInit, WalkKind,
};

use config::ConfigMap;

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

#[derive(Parser)]
#[command(
    name = "gyrowalk",
    version,
    about = "Random motion on the Poincaré disk: simulation, verification, statistics, rendering"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate the one-arc walk and write trajectory records
    SimulateU(SimArgs),
    /// Simulate the alternating two-pencil walk and write trajectory records
    SimulateZ(SimArgs),
    /// Run the exact-identity suite and report per-check results
    Verify(VerifyArgs),
    /// Escape-rate report for a drifting step law
    Rates(RatesArgs),
    /// Distributional (CLT) tail report for a centered step law
    Clt(CltArgs),
    /// Iterated-logarithm running-sup report for a centered step law
    Lil(LilArgs),
    /// Oscillation (range) report for a centered step law
    Oscillation(OscArgs),
    /// Render a trajectory file to an SVG point cloud
    Render(RenderArgs),
}

#[derive(Args)]
struct SimArgs {
    /// Step law: uniform | paper-triangular | table:FILE
    #[arg(long)]
    law: Option<String>,
    /// Number of steps per trajectory
    #[arg(long)]
    steps: Option<u64>,
    /// RNG seed (required; there is no wall-clock default)
    #[arg(long)]
    seed: Option<u64>,
    /// Number of independent trajectories
    #[arg(long)]
    trajectories: Option<u64>,
    /// Record every STRIDE steps (the final step is always recorded)
    #[arg(long)]
    stride: Option<u64>,
    /// Translate probability of the two-pencil walk, in (0, 1]
    #[arg(long)]
    p: Option<f64>,
    /// Initial tau coordinate
    #[arg(long)]
    tau0: Option<f64>,
    /// Initial angular coordinate: "uniform" or a number in [-pi/2, pi/2]
    #[arg(long)]
    varsigma0: Option<String>,
    /// Pole angle in radians (the pole is exp(i*alpha))
    #[arg(long)]
    alpha: Option<f64>,
    /// Output path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv | jsonl (default: by file extension)
    #[arg(long)]
    format: Option<String>,
    /// Flat key-value JSON config; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the run summary as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Number of sampled start/path trials
    #[arg(long)]
    trials: Option<u64>,
    /// RNG seed
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the report as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RatesArgs {
    /// Which walk: u | z
    #[arg(long)]
    walk: Option<String>,
    #[arg(long)]
    law: Option<String>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Translate probability (two-pencil walk only)
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    tau0: Option<f64>,
    /// Initial angular coordinate: "uniform" or a number
    #[arg(long)]
    varsigma0: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Pole neighborhood radius for the uniform (grid) rate
    #[arg(long)]
    delta: Option<f64>,
    /// Minimum grid size for the uniform rate
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CltArgs {
    #[arg(long)]
    law: Option<String>,
    /// Walk length n
    #[arg(long)]
    steps: Option<u64>,
    /// Number of independent replicas
    #[arg(long)]
    replicas: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated positive thresholds
    #[arg(long)]
    thresholds: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LilArgs {
    #[arg(long)]
    law: Option<String>,
    /// Maximum walk length
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Normalizer: standard | with-pi
    #[arg(long)]
    normalizer: Option<String>,
    /// Start point, bipolar coordinates
    #[arg(long)]
    tau0: Option<f64>,
    #[arg(long)]
    varsigma0: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OscArgs {
    #[arg(long)]
    law: Option<String>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Pass threshold for both extremes (default 0.2 * sigma * sqrt(n))
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RenderArgs {
    /// Trajectory file written by simulate-u / simulate-z
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output SVG path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Input format: csv | jsonl (default: by file extension)
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Title annotation
    #[arg(long)]
    title: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_law(spec: &str) -> CliResult<StepLaw> {
    match spec {
        "uniform" => Ok(StepLaw::UniformX),
        "paper-triangular" | "triangular" => Ok(StepLaw::Triangular),
        other => {
            if let Some(path) = other.strip_prefix("table:") {
                let text = std::fs::read_to_string(path)?;
                let knots: Vec<(f64, f64)> = serde_json::from_str(&text)?;
                Ok(StepLaw::InverseCdfTable(CdfTable::new(knots)?))
            } else {
                Err(format!(
                    "unknown law {other:?}; expected uniform, paper-triangular, or table:FILE"
                )
                .into())
            }
        }
    }
}

fn parse_varsigma0(spec: &str) -> CliResult<VarsigmaInit> {
    if spec == "uniform" {
        return Ok(VarsigmaInit::UniformHalfPi);
    }
    let v: f64 = spec
        .parse()
        .map_err(|_| format!("varsigma0 must be \"uniform\" or a number, got {spec:?}"))?;
    Ok(VarsigmaInit::Fixed(v))
}

fn parse_format(spec: Option<&str>, path: &std::path::Path) -> CliResult<TrajectoryFormat> {
    match spec {
        None => Ok(TrajectoryFormat::from_path(path)),
        Some("csv") => Ok(TrajectoryFormat::Csv),
        Some("jsonl") => Ok(TrajectoryFormat::Jsonl),
        Some(other) => Err(format!("unknown format {other:?}; expected csv or jsonl").into()),
    }
}

fn fixed_start(varsigma0: &VarsigmaInit, tau0: f64, pole: Pole) -> CliResult<DiskPoint> {
    let v = match varsigma0 {
        VarsigmaInit::Fixed(v) => *v,
        VarsigmaInit::UniformHalfPi => {
            return Err("this report needs a fixed varsigma0".into());
        }
    };
    let b = gyrowalk::disk::BipolarPoint::new(v, tau0, pole)?;
    Ok(gyrowalk::disk::from_bipolar(&b)?)
}

fn simulate(args: SimArgs, kind: WalkKind) -> CliResult<i32> {
    let mut cfg = ConfigMap::load(args.config.as_deref())?;
    let law_spec = cfg.resolve_string("law", args.law)?.ok_or("missing --law")?;
    let steps = cfg.resolve_u64("steps", args.steps)?.ok_or("missing --steps")?;
    let seed = cfg.resolve_u64("seed", args.seed)?.ok_or("missing --seed")?;
    let trajectories = cfg.resolve_u64("trajectories", args.trajectories)?.unwrap_or(1);
    let stride = cfg.resolve_u64("stride", args.stride)?.unwrap_or(1);
    let p = cfg.resolve_f64("p", args.p)?;
    let tau0 = cfg.resolve_f64("tau0", args.tau0)?.unwrap_or(0.0);
    let varsigma0 = cfg
        .resolve_string("varsigma0", args.varsigma0)?
        .unwrap_or_else(|| "uniform".to_string());
    let alpha = cfg.resolve_f64("alpha", args.alpha)?.unwrap_or(0.0);
    let out = cfg
        .resolve_path("out", args.out)?
        .ok_or("missing --out")?;
    let format = cfg.resolve_string("format", args.format)?;
    cfg.finish()?;

    let p = match (kind, p) {
        (WalkKind::Z, Some(p)) => p,
        (WalkKind::Z, None) => return Err("missing --p for the two-pencil walk".into()),
        (WalkKind::U, _) => 1.0,
    };
    let ensemble = EnsembleConfig {
        trajectories,
        steps,
        seed,
        record_stride: stride,
        law: parse_law(&law_spec)?,
        p,
        tau0,
        varsigma0: parse_varsigma0(&varsigma0)?,
        pole: Pole::from_angle(alpha),
    };
    let records = run_ensemble(&ensemble, kind)?;
    let format = parse_format(format.as_deref(), &out)?;
    let written = write_trajectory_path(&records, &out, format)?;

    if args.json {
        println!(
            "{{\"records\":{written},\"trajectories\":{trajectories},\"steps\":{steps},\"out\":{}}}",
            serde_json::to_string(&out.display().to_string())?
        );
    } else {
        println!("wrote {written} records to {}", out.display());
    }
    Ok(0)
}

fn verify(args: VerifyArgs) -> CliResult<i32> {
    let mut cfg = ConfigMap::load(args.config.as_deref())?;
    let trials = cfg.resolve_u64("trials", args.trials)?.unwrap_or(1000);
    let seed = cfg.resolve_u64("seed", args.seed)?.ok_or("missing --seed")?;
    cfg.finish()?;

    let report = run_identity_suite(trials, seed);
    if args.json {
        println!("{}", reports::verify_json(&report));
    } else {
        println!("identity suite: {} trials, seed {}", report.trials, report.seed);
        for check in &report.checks {
            println!(
                "  {:<22} {:>8} cases  {:>3} failures  worst {:.3e}",
                check.name, check.cases, check.failures, check.worst
            );
        }
        println!(
            "{}: {} checks, {} cases, {} failures",
            if report.passed() { "PASS" } else { "FAIL" },
            report.checks.len(),
            report.total_cases(),
            report.total_failures()
        );
    }
    Ok(if report.passed() { 0 } else { 2 })
}

fn rates(args: RatesArgs) -> CliResult<i32> {
    let mut cfg = ConfigMap::load(args.config.as_deref())?;
    let walk = cfg
        .resolve_string("walk", args.walk)?
        .unwrap_or_else(|| "u".to_string());
    let law_spec = cfg.resolve_string("law", args.law)?.ok_or("missing --law")?;
    let steps = cfg.resolve_u64("steps", args.steps)?.ok_or("missing --steps")?;
    let seed = cfg.resolve_u64("seed", args.seed)?.ok_or("missing --seed")?;
    let p = cfg.resolve_f64("p", args.p)?;
    let tau0 = cfg.resolve_f64("tau0", args.tau0)?.unwrap_or(0.0);
    let varsigma0 = cfg.resolve_string("varsigma0", args.varsigma0)?;
    let alpha = cfg.resolve_f64("alpha", args.alpha)?.unwrap_or(0.0);
    let delta = cfg.resolve_f64("delta", args.delta)?.unwrap_or(0.1);
    let grid = cfg.resolve_u64("grid", args.grid.map(|g| g as u64))?.unwrap_or(100) as usize;
    cfg.finish()?;

    let law = parse_law(&law_spec)?;
    let pole = Pole::from_angle(alpha);
    let moments = step_law_moments(&law)?;

    let (report, uniform_rate) = match walk.as_str() {
        "u" => {
            let varsigma0 = parse_varsigma0(&varsigma0.unwrap_or_else(|| "0".into()))?;
            let ensemble = EnsembleConfig {
                trajectories: 1,
                steps,
                seed,
                record_stride: steps,
                law: law.clone(),
                p: 1.0,
                tau0,
                varsigma0,
                pole,
            };
            let records = run_ensemble(&ensemble, WalkKind::U)?;
            let report = escape_rate(&records, &law, pole)?;
            let uniform = uniform_escape_rate(&law, delta, grid, steps, seed, pole)?;
            (report, Some(uniform))
        }
        "z" => {
            let p = p.ok_or("missing --p for the two-pencil walk")?;
            let varsigma0 = parse_varsigma0(&varsigma0.unwrap_or_else(|| "uniform".into()))?;
            let ensemble = EnsembleConfig {
                trajectories: 1,
                steps,
                seed,
                record_stride: steps,
                law: law.clone(),
                p,
                tau0,
                varsigma0,
                pole,
            };
            (z_rate_report(&ensemble)?, None)
        }
        other => return Err(format!("unknown walk {other:?}; expected u or z").into()),
    };

    if args.json {
        println!("{}", reports::rates_json(&report, &moments, uniform_rate)?);
    } else {
        println!("escape rates after {} steps (seed {seed}):", report.n);
        println!("  attracting pole sign   {:+}", report.epsilon_x);
        println!("  expected_rate          {:.6}", report.expected_rate);
        println!("  distance_rate          {:.6}", report.distance_rate);
        println!("  busemann_rate          {:.6}", report.busemann_rate);
        println!("  euclid_log_rate        {:.6}", report.euclid_log_rate);
        if let Some(u) = uniform_rate {
            println!("  uniform_escape_rate    {:.6}  (delta {delta}, grid >= {grid})", u);
        }
        println!(
            "  quadrature mean        {:.6} +/- {:.1e}",
            moments.mean_gamma, moments.error_bound
        );
    }
    Ok(0)
}

fn clt(args: CltArgs) -> CliResult<i32> {
    let mut cfg = ConfigMap::load(args.config.as_deref())?;
    let law_spec = cfg.resolve_string("law", args.law)?.ok_or("missing --law")?;
    let steps = cfg.resolve_u64("steps", args.steps)?.ok_or("missing --steps")?;
    let replicas = cfg
        .resolve_u64("replicas", args.replicas)?
        .ok_or("missing --replicas")?;
    let seed = cfg.resolve_u64("seed", args.seed)?.ok_or("missing --seed")?;
    let thresholds = cfg
        .resolve_string("thresholds", args.thresholds)?
        .unwrap_or_else(|| "1,2,3".to_string());
    cfg.finish()?;

    let thresholds: Vec<f64> = thresholds
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("bad --thresholds list {thresholds:?}"))?;
    let law = parse_law(&law_spec)?;
    let report = clt_report(&law, steps, replicas, &thresholds, seed)?;

    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!(
            "CLT report: n = {}, replicas = {}, sigma = {:.6}",
            report.n, report.replicas, report.sigma_hat
        );
        println!("  KS statistic vs Normal(0, sigma^2): {:.5}", report.ks_statistic);
        println!("  s      P(log|Z+a| < -s*sqrt(n))      P(log|Z-a| < -s*sqrt(n))");
        for row in &report.thresholds {
            println!(
                "  {:<5} {:.4} (limit {:.4})           {:.4} (limit {:.4})",
                row.s,
                row.emp_toward_minus,
                row.expected_toward_minus,
                row.emp_toward_plus,
                row.expected_toward_plus
            );
        }
    }
    Ok(0)
}

fn lil(args: LilArgs) -> CliResult<i32> {
    let mut cfg = ConfigMap::load(args.config.as_deref())?;
    let law_spec = cfg.resolve_string("law", args.law)?.ok_or("missing --law")?;
    let steps = cfg.resolve_u64("steps", args.steps)?.ok_or("missing --steps")?;
    let seed = cfg.resolve_u64("seed", args.seed)?.ok_or("missing --seed")?;
    let normalizer = cfg
        .resolve_string("normalizer", args.normalizer)?
        .unwrap_or_else(|| "standard".to_string());
    let tau0 = cfg.resolve_f64("tau0", args.tau0)?.unwrap_or(0.0);
    let varsigma0 = cfg
        .resolve_string("varsigma0", args.varsigma0)?
        .unwrap_or_else(|| "0".to_string());
    let alpha = cfg.resolve_f64("alpha", args.alpha)?.unwrap_or(0.0);
    cfg.finish()?;

    let normalizer = match normalizer.as_str() {
        "standard" => LilNormalizer::Standard,
        "with-pi" => LilNormalizer::WithPi,
        other => return Err(format!("unknown normalizer {other:?}").into()),
    };
    let law = parse_law(&law_spec)?;
    let pole = Pole::from_angle(alpha);
    let z0 = fixed_start(&parse_varsigma0(&varsigma0)?, tau0, pole)?;
    let report = lil_report(&law, steps, normalizer, z0, pole, seed)?;

    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!(
            "iterated-logarithm report: sigma = {:.6}, normalizer = {:?}",
            report.sigma, report.normalizer
        );
        println!("  n            sup B+/phi   sup B-/phi   sup d/phi    (ratio to sigma)");
        for c in &report.checkpoints {
            println!(
                "  {:<12} {:>10.4} {:>12.4} {:>12.4}    {:.4}",
                c.n,
                c.sup_busemann_plus,
                c.sup_busemann_minus,
                c.sup_dist,
                c.sup_dist / report.sigma
            );
        }
    }
    Ok(0)
}

fn oscillation(args: OscArgs) -> CliResult<i32> {
    let mut cfg = ConfigMap::load(args.config.as_deref())?;
    let law_spec = cfg.resolve_string("law", args.law)?.ok_or("missing --law")?;
    let steps = cfg.resolve_u64("steps", args.steps)?.ok_or("missing --steps")?;
    let seed = cfg.resolve_u64("seed", args.seed)?.ok_or("missing --seed")?;
    let threshold = cfg.resolve_f64("threshold", args.threshold)?;
    cfg.finish()?;

    let law = parse_law(&law_spec)?;
    let report = oscillation_check(&law, steps, threshold, seed)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("oscillation report after {} steps:", report.n);
        println!("  max omega     {:+.4}", report.max_omega);
        println!("  min omega     {:+.4}", report.min_omega);
        println!("  threshold     {:.4}", report.threshold);
        println!("  sign changes  {}", report.sign_changes);
        println!(
            "  straddles both sides: {}",
            if report.straddles { "yes" } else { "no" }
        );
    }
    Ok(0)
}

fn render(args: RenderArgs) -> CliResult<i32> {
    let mut cfg = ConfigMap::load(args.config.as_deref())?;
    let input = cfg
        .resolve_path("input", args.input)?
        .ok_or("missing --input")?;
    let out = cfg.resolve_path("out", args.out)?.ok_or("missing --out")?;
    let format = cfg.resolve_string("format", args.format)?;
    let alpha = cfg.resolve_f64("alpha", args.alpha)?.unwrap_or(0.0);
    let title = cfg.resolve_string("title", args.title)?;
    cfg.finish()?;

    let format = parse_format(format.as_deref(), &input)?;
    let records = read_trajectory_path(&input, format)?;
    let style = RenderStyle {
        title,
        ..RenderStyle::default()
    };
    render_to_path(&records, Pole::from_angle(alpha), &style, &out)?;
    println!("rendered {} records to {}", records.len(), out.display());
    Ok(0)
}

fn dispatch(cli: Cli) -> CliResult<i32> {
    match cli.cmd {
        Cmd::SimulateU(args) => simulate(args, WalkKind::U),
        Cmd::SimulateZ(args) => simulate(args, WalkKind::Z),
        Cmd::Verify(args) => verify(args),
        Cmd::Rates(args) => rates(args),
        Cmd::Clt(args) => clt(args),
        Cmd::Lil(args) => lil(args),
        Cmd::Oscillation(args) => oscillation(args),
        Cmd::Render(args) => render(args),
    }
}
