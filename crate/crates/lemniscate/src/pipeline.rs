//! End-to-end orchestration: seed → solve → certify → emit artifacts,
//! plus the continuation sweep over the potential exponent and the
//! binary-collision action-scaling probe.
//!
//! Every run directory is a self-contained reproducibility bundle:
//! loop.json, certificate.json, trajectory.csv, orbit.svg, log.txt.
//! Files are written atomically (temp file + rename).

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::dynamics::{certify_with_report, CertifyConfig, OrbitCertificate};
use crate::error::{Error, Result};
use crate::functionals::{FunctionalReport, ProblemParams};
use crate::loops::{SymmetricLoop, Vec2};
use crate::minimizer::{progress_line, Solver, SolverConfig, Status};

/// Bounds a certificate must satisfy before a trajectory is emitted.
#[derive(Debug, Clone)]
pub struct CertificationPolicy {
    pub max_virial_residual: f64,
    pub max_newton_residual: f64,
    pub max_closure_error: f64,
    pub max_energy_drift: f64,
    /// Required min mutual distance, as a multiple of the collision floor.
    pub min_distance_floor_factor: f64,
}

impl Default for CertificationPolicy {
    fn default() -> Self {
        Self {
            max_virial_residual: 1e-6,
            max_newton_residual: 1e-4,
            max_closure_error: 1e-5,
            max_energy_drift: 1e-8,
            min_distance_floor_factor: 100.0,
        }
    }
}

impl CertificationPolicy {
    /// First violated metric, if any.
    pub fn check(&self, cert: &OrbitCertificate, params: &ProblemParams) -> Result<()> {
        let fail = |metric: &str, value: f64, bound: f64| {
            Err(Error::CertificationFailed {
                metric: metric.into(),
                value,
                bound,
            })
        };
        if !cert.node_ok {
            return fail("node_ok", 0.0, 1.0);
        }
        if !cert.transversal_ok {
            return fail("transversal_ok", 0.0, 1.0);
        }
        if !cert.orthogonal_crossing_ok {
            return fail("orthogonal_crossing_ok", 0.0, 1.0);
        }
        if cert.virial_residual > self.max_virial_residual {
            return fail(
                "virial_residual",
                cert.virial_residual,
                self.max_virial_residual,
            );
        }
        if cert.newton_residual_sup > self.max_newton_residual {
            return fail(
                "newton_residual_sup",
                cert.newton_residual_sup,
                self.max_newton_residual,
            );
        }
        if cert.closure_error > self.max_closure_error {
            return fail("closure_error", cert.closure_error, self.max_closure_error);
        }
        if cert.energy_drift > self.max_energy_drift {
            return fail("energy_drift", cert.energy_drift, self.max_energy_drift);
        }
        let min_required = self.min_distance_floor_factor * params.collision_floor;
        if cert.min_mutual_distance < min_required {
            return fail(
                "min_mutual_distance",
                cert.min_mutual_distance,
                min_required,
            );
        }
        Ok(())
    }
}

/// Full configuration of one pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub params: ProblemParams,
    pub solver: SolverConfig,
    pub certify: CertifyConfig,
    pub policy: CertificationPolicy,
    /// Trajectory sample count; must be a multiple of 3 so the 2π/3 phase
    /// shift lands on grid points exactly.
    pub samples: usize,
    /// Loose sanity bound on adjacent-solution coefficient distance in a
    /// continuation sweep; actual distances are recorded in the outcome.
    pub sweep_continuity_bound: f64,
}

impl PipelineConfig {
    /// Defaults: truncation half-order 16 and 512 quadrature nodes, the
    /// resolution at which the certification policy bounds are calibrated
    /// (at coarser truncations the ODE closure error of a fully converged
    /// minimizer already exceeds the policy's 1e-5).
    pub fn new(alpha: f64) -> Result<Self> {
        Ok(Self {
            params: ProblemParams::new(alpha)?,
            solver: SolverConfig::new(16),
            certify: CertifyConfig::default(),
            policy: CertificationPolicy::default(),
            samples: 600,
            sweep_continuity_bound: 1.0,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.solver.validate()?;
        if self.samples == 0 || !self.samples.is_multiple_of(3) {
            return Err(Error::InvalidConfig(format!(
                "samples must be a positive multiple of 3, got {}",
                self.samples
            )));
        }
        Ok(())
    }
}

/// Sampled positions of the three bodies over one period, with the
/// certificate and the loop they were generated from.
#[derive(Debug, Clone)]
pub struct ChoreographyTrajectory {
    pub alpha: f64,
    pub mass: f64,
    pub samples: usize,
    pub body_paths: [Vec<Vec2>; 3],
    pub gamma_path: Vec<Vec2>,
    pub certificate: OrbitCertificate,
    pub curve: SymmetricLoop,
}

impl ChoreographyTrajectory {
    /// Build by sampling γ once and circularly shifting by samples/3, so
    /// the choreography identity is exact at the index level.
    pub fn from_parts(
        curve: SymmetricLoop,
        certificate: OrbitCertificate,
        params: &ProblemParams,
        samples: usize,
    ) -> Result<Self> {
        if samples == 0 || !samples.is_multiple_of(3) {
            return Err(Error::InvalidConfig(
                "trajectory samples must be a positive multiple of 3".into(),
            ));
        }
        let gamma_path: Vec<Vec2> = (0..samples)
            .map(|j| curve.evaluate(2.0 * PI * j as f64 / samples as f64))
            .collect();
        let shift = samples / 3;
        let body_paths = [0, 1, 2].map(|i| {
            (0..samples)
                .map(|j| gamma_path[(j + i * shift) % samples])
                .collect()
        });
        Ok(Self {
            alpha: params.alpha,
            mass: params.mass,
            samples,
            body_paths,
            gamma_path,
            certificate,
            curve,
        })
    }

    /// Sample time with the smallest triangle area spanned by the bodies;
    /// near-zero area marks the collinear instant of the motion.
    pub fn best_collinearity_time(&self) -> f64 {
        let mut best = (f64::INFINITY, 0.0);
        for j in 0..self.samples {
            let p0 = self.body_paths[0][j];
            let p1 = self.body_paths[1][j];
            let p2 = self.body_paths[2][j];
            let area =
                0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0])).abs();
            if area < best.0 {
                best = (area, 2.0 * PI * j as f64 / self.samples as f64);
            }
        }
        best.1
    }
}

/// Everything produced by one pipeline run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub trajectory: ChoreographyTrajectory,
    pub report: FunctionalReport,
    /// Tab-separated solver progress lines.
    pub log: Vec<String>,
    pub final_gnorm: f64,
    pub iterations: usize,
    pub solver_status: Status,
}

/// Seed → solve → certify → sample.  Fails loudly on any certificate
/// violation; a non-converged solve that still certifies is allowed
/// through only for the MaxIters status (the gate is the certificate).
pub fn run_single(config: &PipelineConfig) -> Result<RunOutput> {
    config.validate()?;
    let solver = Solver::new(&config.params, config.solver.clone())?;
    let mut state = solver.initial_state()?;
    run_from_state(config, &solver, &mut state)
}

/// Same pipeline from an explicit starting curve (continuation).
pub fn run_single_from(config: &PipelineConfig, start: SymmetricLoop) -> Result<RunOutput> {
    config.validate()?;
    let solver = Solver::new(&config.params, config.solver.clone())?;
    let mut state = solver.initial_state_from(start)?;
    run_from_state(config, &solver, &mut state)
}

fn run_from_state(
    config: &PipelineConfig,
    solver: &Solver,
    state: &mut crate::minimizer::SolverState,
) -> Result<RunOutput> {
    let mut log = Vec::new();
    solver.run(state, &mut |s| log.push(progress_line(s)))?;
    match state.status {
        Status::Converged | Status::MaxIters => {}
        status => {
            return Err(Error::SolveFailed {
                status,
                gnorm: state.gnorm(),
            })
        }
    }
    let certificate =
        certify_with_report(&state.curve, &state.report, &config.params, &config.certify)?;
    config.policy.check(&certificate, &config.params)?;
    if state.status == Status::MaxIters {
        // Certificate bounds are the gate, but an exhausted budget that
        // still fails the gradient tolerance must not pass silently.
        if state.gnorm() > config.solver.grad_tol {
            return Err(Error::SolveFailed {
                status: Status::MaxIters,
                gnorm: state.gnorm(),
            });
        }
    }
    let trajectory = ChoreographyTrajectory::from_parts(
        state.curve.clone(),
        certificate,
        &config.params,
        config.samples,
    )?;
    Ok(RunOutput {
        trajectory,
        report: state.report.clone(),
        log,
        final_gnorm: state.gnorm(),
        iterations: state.iter,
        solver_status: state.status,
    })
}

/// Re-certify an existing loop without solving.
pub fn certify_existing(
    curve: &SymmetricLoop,
    params: &ProblemParams,
    certify: &CertifyConfig,
    policy: &CertificationPolicy,
) -> Result<(OrbitCertificate, FunctionalReport)> {
    let evaluator = crate::functionals::Evaluator::new(params, curve.modes())?;
    let report = evaluator.report(curve)?;
    let cert = certify_with_report(curve, &report, params, certify)?;
    policy.check(&cert, params)?;
    Ok((cert, report))
}

/// Where and why a sweep stopped early.
#[derive(Debug, Clone)]
pub struct SweepBreak {
    pub alpha: f64,
    pub detail: String,
}

/// Completed runs plus continuity data; `broken` is set if some α failed.
#[derive(Debug)]
pub struct SweepOutcome {
    pub alphas: Vec<f64>,
    pub runs: Vec<RunOutput>,
    /// ‖c_{i+1} − c_i‖ between adjacent converged solutions.
    pub coefficient_distances: Vec<f64>,
    pub f_values: Vec<f64>,
    pub broken: Option<SweepBreak>,
}

impl SweepOutcome {
    pub fn all_green(&self) -> bool {
        self.broken.is_none()
    }
}

/// Continuation over the potential exponent: each α is warm-started from
/// the previous solution.  Stops at the first failure, returning the
/// partial results.
pub fn run_sweep(alphas: &[f64], template: &PipelineConfig) -> Result<SweepOutcome> {
    if alphas.is_empty() {
        return Err(Error::InvalidConfig(
            "sweep needs at least one alpha".into(),
        ));
    }
    for w in alphas.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidConfig(
                "alphas must be strictly increasing".into(),
            ));
        }
    }
    for &alpha in alphas {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::InvalidConfig(format!(
                "sweep alpha {alpha} outside the open interval (0, 2)"
            )));
        }
    }

    let mut outcome = SweepOutcome {
        alphas: Vec::new(),
        runs: Vec::new(),
        coefficient_distances: Vec::new(),
        f_values: Vec::new(),
        broken: None,
    };
    let mut warm_start: Option<SymmetricLoop> = None;
    for &alpha in alphas {
        let mut config = template.clone();
        config.params.alpha = alpha;
        let attempt = match warm_start.take() {
            Some(start) => run_single_from(&config, start),
            None => run_single(&config),
        };
        match attempt {
            Ok(run) => {
                if let Some(prev) = outcome.runs.last() {
                    let prev_c = prev.trajectory.curve.coefficient_vector();
                    let cur_c = run.trajectory.curve.coefficient_vector();
                    let dist: f64 = prev_c
                        .iter()
                        .zip(&cur_c)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt();
                    outcome.coefficient_distances.push(dist);
                    if dist > template.sweep_continuity_bound {
                        outcome.broken = Some(SweepBreak {
                            alpha,
                            detail: format!(
                                "adjacent coefficient distance {dist:.3e} exceeds continuity bound {:.3e}",
                                template.sweep_continuity_bound
                            ),
                        });
                        return Ok(outcome);
                    }
                }
                warm_start = Some(run.trajectory.curve.clone());
                outcome.f_values.push(run.report.f);
                outcome.alphas.push(alpha);
                outcome.runs.push(run);
            }
            Err(err) => {
                outcome.broken = Some(SweepBreak {
                    alpha,
                    detail: err.to_string(),
                });
                return Ok(outcome);
            }
        }
    }
    Ok(outcome)
}

/// One row of the collision-arc scaling table.
#[derive(Debug, Clone)]
pub struct ProbeRow {
    pub epsilon: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub action: f64,
}

/// Numerical illustration that a symmetric binary-collision arc has
/// finite action: along the model arc r(t) = c·t^{2/(2+α)} both the
/// kinetic and potential densities behave like t^{−2α/(2+α)}, so the
/// partial actions over (0, ε] stay finite and scale like ε^{(2−α)/(2+α)}.
#[derive(Debug, Clone)]
pub struct CollisionProbe {
    pub alpha: f64,
    pub rows: Vec<ProbeRow>,
    /// Log-log regression slope of V_ε against ε.
    pub fitted_exponent: f64,
    /// (2−α)/(2+α)
    pub predicted_exponent: f64,
    /// −2α/(2+α), the common local exponent of both action densities.
    pub integrand_exponent: f64,
}

/// Collision-arc scaling exponent (2−α)/(2+α) of the partial action.
pub fn collision_arc_exponent(alpha: f64) -> f64 {
    (2.0 - alpha) / (2.0 + alpha)
}

/// ∫₀^ε f(t) dt for integrands with an integrable power singularity at 0.
/// The substitution t = ε u^grade turns t^{−β} into a C¹ integrand when
/// grade·(1−β) ≥ 2; Simpson's rule then converges cleanly.
fn graded_integral(f: impl Fn(f64) -> f64, eps: f64, grade: f64, panels: usize) -> f64 {
    let n = 2 * panels; // even interval count for Simpson
    let h = 1.0 / n as f64;
    let transformed = |u: f64| -> f64 {
        if u == 0.0 {
            return 0.0;
        }
        let t = eps * u.powf(grade);
        f(t) * eps * grade * u.powf(grade - 1.0)
    };
    let mut sum = transformed(0.0) + transformed(1.0);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * transformed(i as f64 * h);
    }
    sum * h / 3.0
}

/// Evaluate the collision-arc model and fit the scaling exponent.
pub fn collision_scaling_probe(alpha: f64, epsilons: &[f64]) -> Result<CollisionProbe> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::InvalidConfig(format!(
            "alpha must lie in (0, 2), got {alpha}"
        )));
    }
    if epsilons.len() < 2 {
        return Err(Error::InvalidConfig(
            "probe needs at least two epsilons".into(),
        ));
    }
    for w in epsilons.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::InvalidConfig(
                "epsilons must be strictly decreasing".into(),
            ));
        }
    }
    if *epsilons.last().unwrap() <= 0.0 {
        return Err(Error::InvalidConfig("epsilons must be positive".into()));
    }

    let c = 1.0_f64;
    let beta = 2.0 * alpha / (2.0 + alpha);
    let grade = 3.0 / (1.0 - beta);
    let exponent = 2.0 / (2.0 + alpha);
    let r = move |t: f64| c * t.powf(exponent);
    let rdot = move |t: f64| c * exponent * t.powf(exponent - 1.0);

    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let kinetic = graded_integral(|t| rdot(t) * rdot(t), eps, grade, 2048);
        let potential = graded_integral(|t| r(t).powf(-alpha), eps, grade, 2048);
        rows.push(ProbeRow {
            epsilon: eps,
            kinetic,
            potential,
            action: kinetic + potential,
        });
    }

    // least-squares slope of ln V against ln ε
    let n = rows.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for row in &rows {
        let x = row.epsilon.ln();
        let y = row.potential.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    Ok(CollisionProbe {
        alpha,
        rows,
        fitted_exponent,
        predicted_exponent: collision_arc_exponent(alpha),
        integrand_exponent: -beta,
    })
}

/// Write `content` to `path` atomically (temp file in the same directory,
/// then rename).
pub fn atomic_write(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::InvalidConfig(format!("invalid artifact path {}", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        file_name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, content)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// trajectory.csv: header t,x0,y0,x1,y1,x2,y2 and one row per sample,
/// 17 significant digits.
pub fn trajectory_csv(traj: &ChoreographyTrajectory) -> String {
    let mut out = String::with_capacity(traj.samples * 160);
    out.push_str("t,x0,y0,x1,y1,x2,y2\n");
    for j in 0..traj.samples {
        let t = 2.0 * PI * j as f64 / traj.samples as f64;
        let _ = write!(out, "{t:.16e}");
        for path in &traj.body_paths {
            let _ = write!(out, ",{:.16e},{:.16e}", path[j][0], path[j][1]);
        }
        out.push('\n');
    }
    out
}

/// Static SVG of the loop trace with the three bodies marked at t = 0.
pub fn orbit_svg(traj: &ChoreographyTrajectory) -> String {
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in &traj.gamma_path {
        min_x = min_x.min(p[0]);
        max_x = max_x.max(p[0]);
        min_y = min_y.min(p[1]);
        max_y = max_y.max(p[1]);
    }
    let span = (max_x - min_x).max(max_y - min_y).max(1e-12);
    let margin = 0.1 * span;
    let width = 640.0;
    let scale = width / (span + 2.0 * margin);
    let to_px = |p: Vec2| -> (f64, f64) {
        // SVG y-axis points down
        (
            (p[0] - min_x + margin) * scale,
            (max_y - p[1] + margin) * scale,
        )
    };
    let height = (max_y - min_y + 2.0 * margin) * scale;

    let mut points = String::new();
    for p in traj.gamma_path.iter().chain(traj.gamma_path.first()) {
        let (px, py) = to_px(*p);
        let _ = write!(points, "{px:.2},{py:.2} ");
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width:.1} {height:.1}\">"
    );
    let _ = writeln!(
        svg,
        "  <title>three-body choreography, alpha = {}</title>",
        traj.alpha
    );
    let _ = writeln!(
        svg,
        "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>"
    );
    let _ = writeln!(
        svg,
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"#334\" stroke-width=\"1.5\"/>",
        points.trim_end()
    );
    let colors = ["#c33", "#383", "#36c"];
    for (i, color) in colors.iter().enumerate() {
        let (px, py) = to_px(traj.body_paths[i][0]);
        let _ = writeln!(
            svg,
            "  <circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"{:.2}\" fill=\"{color}\"/>",
            0.012 * width
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Emit the five run artifacts into `dir`.
pub fn write_run_artifacts(dir: &Path, run: &RunOutput) -> Result<()> {
    fs::create_dir_all(dir)?;
    atomic_write(&dir.join("loop.json"), &run.trajectory.curve.to_json()?)?;
    atomic_write(
        &dir.join("certificate.json"),
        &run.trajectory.certificate.to_json()?,
    )?;
    atomic_write(
        &dir.join("trajectory.csv"),
        &trajectory_csv(&run.trajectory),
    )?;
    atomic_write(&dir.join("orbit.svg"), &orbit_svg(&run.trajectory))?;

    let mut log = String::new();
    log.push_str("# iter\tf\tgnorm\tstep\tminDist\n");
    for line in &run.log {
        log.push_str(line);
        log.push('\n');
    }
    let _ = writeln!(
        log,
        "# status = {:?}, iterations = {}, final gnorm = {:.6e}",
        run.solver_status, run.iterations, run.final_gnorm
    );
    let _ = writeln!(
        log,
        "# best collinearity time t = {:.6e} (triangle-area minimum on the sample grid)",
        run.trajectory.best_collinearity_time()
    );
    atomic_write(&dir.join("log.txt"), &log)?;
    Ok(())
}
