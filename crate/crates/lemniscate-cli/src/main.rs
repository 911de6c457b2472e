//! Command-line driver: single solve, continuation sweep, certification
//! of stored loops, and the collision-arc scaling probe.
//!
//! Exit codes: 0 on full success, 1 on solve/certification failure, 2 on
//! usage errors.  Failures print a machine-readable JSON object
//! `{"error": code, "detail": string}` to stderr.  Flags override values
//! from an optional TOML config file key-for-key (`--modes` ↔ `modes`,
//! `--quad-nodes` ↔ `quad_nodes`, and so on).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use lemniscate::error::Error;
use lemniscate::minimizer::SolverConfig;
use lemniscate::pipeline::{
    self, certify_existing, collision_scaling_probe, run_single, run_sweep, write_run_artifacts,
    PipelineConfig,
};
use lemniscate::{Result, SymmetricLoop};

#[derive(Parser)]
#[command(
    name = "lemniscate",
    version,
    about = "Variational solver for three-body figure-eight choreographies",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one choreography and write run artifacts
    Solve(SolveArgs),
    /// Warm-started continuation sweep over several exponents
    Sweep(SweepArgs),
    /// Re-certify a stored loop file
    Certify(CertifyArgs),
    /// Collision-arc action scaling probe
    Probe(ProbeArgs),
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Homogeneity degree of the potential, in the open interval (0, 2)
    #[arg(long)]
    alpha: Option<f64>,
    /// Fourier truncation half-order M [default: 16]
    #[arg(long)]
    modes: Option<usize>,
    /// Trapezoidal quadrature nodes over one period [default: 512]
    #[arg(long)]
    quad_nodes: Option<usize>,
    /// Common body mass [default: 1]
    #[arg(long)]
    mass: Option<f64>,
    /// Minimum admissible mutual distance [default: 1e-6]
    #[arg(long)]
    collision_floor: Option<f64>,
    /// Terminate when the projected gradient norm drops below this [default: 1e-8]
    #[arg(long)]
    grad_tol: Option<f64>,
    /// Iteration budget [default: 200000]
    #[arg(long)]
    max_iters: Option<usize>,
    /// Amplitude of the (sin 2t, sin t) seed curve [default: 1]
    #[arg(long)]
    seed_amplitude: Option<f64>,
    /// Pin the first y-harmonic to zero
    #[arg(long)]
    nc1: bool,
    /// Seed for the reproducible perturbation of the initial guess
    #[arg(long)]
    rng_seed: Option<u64>,
    /// Minimize F = K^p V^q directly instead of V^q on {K = 1}
    #[arg(long)]
    direct_f: bool,
    /// Trajectory samples per period, a multiple of 3 [default: 600]
    #[arg(long)]
    samples: Option<usize>,
    /// RK4 steps over one rescaled period [default: 100000]
    #[arg(long)]
    integration_steps: Option<usize>,
    /// Initial line-search trial step [default: 1]
    #[arg(long)]
    step_init: Option<f64>,
    /// Line-search backtracking factor in (0, 1) [default: 0.5]
    #[arg(long)]
    backtrack: Option<f64>,
    /// Armijo sufficient-decrease constant in (0, 1) [default: 1e-4]
    #[arg(long)]
    armijo: Option<f64>,
    /// Certificate gate: max |2K − αρV|/(2K) [default: 1e-6]
    #[arg(long)]
    max_virial_residual: Option<f64>,
    /// Certificate gate: max Newton sup-residual [default: 1e-4]
    #[arg(long)]
    max_newton_residual: Option<f64>,
    /// Certificate gate: max RK4 closure error [default: 1e-5]
    #[arg(long)]
    max_closure_error: Option<f64>,
    /// Certificate gate: max energy drift [default: 1e-8]
    #[arg(long)]
    max_energy_drift: Option<f64>,
    /// Certificate gate: required min distance as a multiple of the
    /// collision floor [default: 100]
    #[arg(long)]
    min_distance_factor: Option<f64>,
    /// Tolerance for the node/transversality/crossing flags [default: 1e-6]
    #[arg(long)]
    geometry_tol: Option<f64>,
    /// Sanity bound on adjacent-solution coefficient distance in a sweep
    /// [default: 1]
    #[arg(long)]
    sweep_continuity_bound: Option<f64>,
    /// Optional TOML config file; explicit flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print solver progress lines (repeat for every iteration)
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Output directory for the artifact bundle [default: run]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated increasing exponents, each in (0, 2)
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    /// Root output directory; one subdirectory per exponent [default: sweep]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Loop file written by `solve`
    #[arg(long = "loop")]
    loop_file: PathBuf,
    /// Optional directory to write the fresh certificate into
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated decreasing cutoff times
    #[arg(long, value_delimiter = ',')]
    epsilons: Option<Vec<f64>>,
}

/// Optional config file; keys mirror the long flags one-for-one.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    alpha: Option<f64>,
    alphas: Option<Vec<f64>>,
    modes: Option<usize>,
    quad_nodes: Option<usize>,
    mass: Option<f64>,
    collision_floor: Option<f64>,
    grad_tol: Option<f64>,
    max_iters: Option<usize>,
    seed_amplitude: Option<f64>,
    nc1: Option<bool>,
    rng_seed: Option<u64>,
    direct_f: Option<bool>,
    samples: Option<usize>,
    integration_steps: Option<usize>,
    step_init: Option<f64>,
    backtrack: Option<f64>,
    armijo: Option<f64>,
    max_virial_residual: Option<f64>,
    max_newton_residual: Option<f64>,
    max_closure_error: Option<f64>,
    max_energy_drift: Option<f64>,
    min_distance_factor: Option<f64>,
    geometry_tol: Option<f64>,
    sweep_continuity_bound: Option<f64>,
    epsilons: Option<Vec<f64>>,
    out: Option<PathBuf>,
}

impl FileConfig {
    fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(path) => {
                let text = fs::read_to_string(path)?;
                toml::from_str(&text).map_err(|e| {
                    Error::InvalidConfig(format!("config file {}: {e}", path.display()))
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Certify(args) => cmd_certify(args),
        Command::Probe(args) => cmd_probe(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (code, label) = classify(&err);
            eprintln!(
                "{}",
                serde_json::json!({ "error": label, "detail": err.to_string() })
            );
            ExitCode::from(code)
        }
    }
}

fn classify(err: &Error) -> (u8, &'static str) {
    match err {
        Error::InvalidConfig(_) => (2, "usage"),
        Error::SolveFailed { .. } => (1, "solve_failed"),
        Error::CertificationFailed { .. } => (1, "certification_failed"),
        Error::CollisionDetected { .. } => (1, "collision_detected"),
        Error::CollisionDuringIntegration { .. } => (1, "collision_during_integration"),
        Error::DegenerateLoop(_) => (1, "degenerate_loop"),
        Error::SweepBroken { .. } => (1, "sweep_broken"),
        Error::Io(_) => (1, "io"),
        Error::Json(_) => (1, "json"),
    }
}

/// Merge defaults, config file and flags into a pipeline configuration.
fn build_config(common: &CommonArgs, file: &FileConfig) -> Result<PipelineConfig> {
    let alpha = common
        .alpha
        .or(file.alpha)
        .ok_or_else(|| Error::InvalidConfig("--alpha is required".into()))?;
    let mut cfg = PipelineConfig::new(alpha)?;

    let modes = common.modes.or(file.modes).unwrap_or(16);
    cfg.solver = SolverConfig::new(modes);
    if let Some(v) = common.max_iters.or(file.max_iters) {
        cfg.solver = cfg.solver.with_max_iters(v);
    }
    if let Some(v) = common.grad_tol.or(file.grad_tol) {
        cfg.solver.grad_tol = v;
    }
    if let Some(v) = common.seed_amplitude.or(file.seed_amplitude) {
        cfg.solver.seed_amplitude = v;
    }
    cfg.solver.nc1 = common.nc1 || file.nc1.unwrap_or(false);
    cfg.solver.rng_seed = common.rng_seed.or(file.rng_seed);
    cfg.solver.renormalize_k = !(common.direct_f || file.direct_f.unwrap_or(false));

    if let Some(v) = common.quad_nodes.or(file.quad_nodes) {
        cfg.params.quad_nodes = v;
    }
    if let Some(v) = common.mass.or(file.mass) {
        cfg.params.mass = v;
    }
    if let Some(v) = common.collision_floor.or(file.collision_floor) {
        cfg.params.collision_floor = v;
    }
    if let Some(v) = common.samples.or(file.samples) {
        cfg.samples = v;
    }
    if let Some(v) = common.integration_steps.or(file.integration_steps) {
        cfg.certify.integration_steps = v;
    }
    if let Some(v) = common.step_init.or(file.step_init) {
        cfg.solver.step_init = v;
    }
    if let Some(v) = common.backtrack.or(file.backtrack) {
        cfg.solver.backtrack = v;
    }
    if let Some(v) = common.armijo.or(file.armijo) {
        cfg.solver.armijo = v;
    }
    if let Some(v) = common.max_virial_residual.or(file.max_virial_residual) {
        cfg.policy.max_virial_residual = v;
    }
    if let Some(v) = common.max_newton_residual.or(file.max_newton_residual) {
        cfg.policy.max_newton_residual = v;
    }
    if let Some(v) = common.max_closure_error.or(file.max_closure_error) {
        cfg.policy.max_closure_error = v;
    }
    if let Some(v) = common.max_energy_drift.or(file.max_energy_drift) {
        cfg.policy.max_energy_drift = v;
    }
    if let Some(v) = common.min_distance_factor.or(file.min_distance_factor) {
        cfg.policy.min_distance_floor_factor = v;
    }
    if let Some(v) = common.geometry_tol.or(file.geometry_tol) {
        cfg.certify.geometry_tol = v;
    }
    if let Some(v) = common
        .sweep_continuity_bound
        .or(file.sweep_continuity_bound)
    {
        cfg.sweep_continuity_bound = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_progress(log: &[String], verbose: u8) {
    if verbose == 0 {
        return;
    }
    let stride = if verbose >= 2 {
        1
    } else {
        100.max(log.len() / 20)
    };
    for (i, line) in log.iter().enumerate() {
        if i % stride == 0 || i + 1 == log.len() {
            println!("{line}");
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let cfg = build_config(&args.common, &file)?;
    let out_dir = args
        .out
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from("run"));

    let run = run_single(&cfg)?;
    print_progress(&run.log, args.common.verbose);
    write_run_artifacts(&out_dir, &run)?;

    let cert = &run.trajectory.certificate;
    println!(
        "converged in {} iterations: gnorm = {:.3e}, newton residual = {:.3e}, closure = {:.3e}",
        run.iterations, run.final_gnorm, cert.newton_residual_sup, cert.closure_error
    );
    println!("artifacts written to {}", out_dir.display());
    println!(
        "{}",
        serde_json::json!({
            "command": "solve",
            "alpha": cfg.params.alpha,
            "status": format!("{:?}", run.solver_status),
            "iterations": run.iterations,
            "gnorm": run.final_gnorm,
            "k": run.report.k,
            "v": run.report.v,
            "f": run.report.f,
            "rho": cert.rho,
            "out": out_dir,
        })
    );
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let alphas = args
        .alphas
        .or(file.alphas.clone())
        .ok_or_else(|| Error::InvalidConfig("--alphas is required".into()))?;
    let mut common = args.common.clone();
    if common.alpha.is_none() {
        common.alpha = alphas.first().copied();
    }
    let cfg = build_config(&common, &file)?;
    let out_root = args
        .out
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from("sweep"));

    let outcome = run_sweep(&alphas, &cfg)?;
    for (alpha, run) in outcome.alphas.iter().zip(&outcome.runs) {
        let dir = out_root.join(format!("alpha-{alpha:.4}"));
        write_run_artifacts(&dir, run)?;
        println!(
            "alpha = {alpha:.4}: {} iterations, gnorm = {:.3e}, F = {:.9}, newton residual = {:.3e} -> {}",
            run.iterations,
            run.final_gnorm,
            run.report.f,
            run.trajectory.certificate.newton_residual_sup,
            dir.display()
        );
    }
    println!(
        "{}",
        serde_json::json!({
            "command": "sweep",
            "completed": outcome.alphas,
            "coefficient_distances": outcome.coefficient_distances,
            "f_values": outcome.f_values,
            "out": out_root,
        })
    );
    if let Some(broken) = outcome.broken {
        return Err(Error::SweepBroken {
            alpha: broken.alpha,
            detail: broken.detail,
        });
    }
    Ok(())
}

fn cmd_certify(args: CertifyArgs) -> Result<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let text = fs::read_to_string(&args.loop_file)?;
    let curve = SymmetricLoop::from_json(&text)?;
    let cfg = build_config(&args.common, &file)?;
    if cfg.params.quad_nodes < 4 * curve.modes() {
        return Err(Error::InvalidConfig(format!(
            "loop has modes = {}; pass --quad-nodes >= {}",
            curve.modes(),
            4 * curve.modes()
        )));
    }

    let (cert, report) = certify_existing(&curve, &cfg.params, &cfg.certify, &cfg.policy)?;
    println!("{}", cert.to_json()?);

    // Compare against a stored certificate next to the loop file, if any.
    let stored_path = args
        .loop_file
        .parent()
        .map(|d| d.join("certificate.json"))
        .filter(|p| p.exists());
    let matches_stored = match &stored_path {
        Some(path) => {
            let stored =
                lemniscate::dynamics::OrbitCertificate::from_json(&fs::read_to_string(path)?)?;
            let close = |a: f64, b: f64, tol: f64| (a - b).abs() <= tol * (1.0 + a.abs());
            let ok = close(cert.rho, stored.rho, 1e-9)
                && close(cert.virial_residual, stored.virial_residual, 1e-9)
                && close(cert.newton_residual_sup, stored.newton_residual_sup, 1e-9)
                && close(cert.closure_error, stored.closure_error, 1e-9);
            println!(
                "stored certificate {}: {}",
                path.display(),
                if ok { "matches" } else { "DIFFERS" }
            );
            Some(ok)
        }
        None => None,
    };

    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        pipeline::atomic_write(&dir.join("certificate.json"), &cert.to_json()?)?;
    }
    println!(
        "{}",
        serde_json::json!({
            "command": "certify",
            "alpha": cfg.params.alpha,
            "k": report.k,
            "v": report.v,
            "f": report.f,
            "rho": cert.rho,
            "matches_stored": matches_stored,
        })
    );
    Ok(())
}

fn cmd_probe(args: ProbeArgs) -> Result<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let alpha = args
        .common
        .alpha
        .or(file.alpha)
        .ok_or_else(|| Error::InvalidConfig("--alpha is required".into()))?;
    let epsilons = args
        .epsilons
        .or(file.epsilons)
        .unwrap_or_else(|| vec![1e-1, 10f64.powf(-1.5), 1e-2, 10f64.powf(-2.5), 1e-3]);

    let probe = collision_scaling_probe(alpha, &epsilons)?;
    println!("epsilon\tK_eps\tV_eps\taction");
    for row in &probe.rows {
        println!(
            "{:.6e}\t{:.10e}\t{:.10e}\t{:.10e}",
            row.epsilon, row.kinetic, row.potential, row.action
        );
    }
    println!(
        "fitted V_eps exponent {:.6} vs (2-alpha)/(2+alpha) = {:.6}; integrand exponent {:.6}",
        probe.fitted_exponent, probe.predicted_exponent, probe.integrand_exponent
    );
    println!(
        "{}",
        serde_json::json!({
            "command": "probe",
            "alpha": alpha,
            "fitted_exponent": probe.fitted_exponent,
            "predicted_exponent": probe.predicted_exponent,
            "integrand_exponent": probe.integrand_exponent,
        })
    );
    Ok(())
}
