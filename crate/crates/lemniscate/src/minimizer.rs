//! Descent of the scale-invariant functional over the symmetric
//! coefficient space.
//!
//! Two equivalent formulations are exposed.  With `renormalize_k` the
//! iterates live on the manifold {K = 1} and the objective is V^q; the
//! search direction is the tangential (projected) gradient and each
//! accepted step is retracted by the exact rescaling c ↦ c/√K.  Without
//! it the objective is F = K^p V^q directly, whose gradient is already
//! orthogonal to the radial direction.  Both use steepest descent with
//! Armijo backtracking; a collision during a trial simply counts as a
//! failed step and backtracks, so the potential blow-up acts as a
//! natural barrier.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::functionals::{dot, Evaluator, FunctionalReport, ProblemParams};
use crate::loops::SymmetricLoop;

/// Step size below which the line search gives up.
const STEP_UNDERFLOW: f64 = 1e-14;

/// Tolerance on |K − 1| maintained by the renormalizing path.
pub const MANIFOLD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Running,
    Converged,
    MaxIters,
    CollisionAbort,
    LineSearchFail,
}

/// Stopping, stepping and seeding policy for the descent loop.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub modes: usize,
    pub nc1: bool,
    pub max_iters: usize,
    /// Terminate when the projected gradient norm drops below this.
    pub grad_tol: f64,
    /// Decreasing quasi-minimization thresholds; the gradient norm
    /// recorded at iteration n is paired with the n-th entry.
    pub eps_schedule: Vec<f64>,
    /// Trial step at the first iteration.
    pub step_init: f64,
    /// Backtracking factor in (0, 1).
    pub backtrack: f64,
    /// Armijo sufficient-decrease constant in (0, 1).
    pub armijo: f64,
    /// Rescale to K = 1 after each accepted step and minimize V^q;
    /// otherwise minimize F directly.
    pub renormalize_k: bool,
    pub seed_amplitude: f64,
    pub rng_seed: Option<u64>,
}

impl SolverConfig {
    pub fn new(modes: usize) -> Self {
        let max_iters = 200_000;
        Self {
            modes,
            nc1: false,
            max_iters,
            grad_tol: 1e-8,
            eps_schedule: default_eps_schedule(max_iters),
            step_init: 1.0,
            backtrack: 0.5,
            armijo: 1e-4,
            renormalize_k: true,
            seed_amplitude: 1.0,
            rng_seed: None,
        }
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self.eps_schedule = default_eps_schedule(max_iters);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes == 0 {
            return Err(Error::InvalidConfig("modes must be >= 1".into()));
        }
        if self.grad_tol <= 0.0 {
            return Err(Error::InvalidConfig("grad_tol must be positive".into()));
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return Err(Error::InvalidConfig(
                "backtrack factor must lie in (0,1)".into(),
            ));
        }
        if !(self.armijo > 0.0 && self.armijo < 1.0) {
            return Err(Error::InvalidConfig(
                "armijo constant must lie in (0,1)".into(),
            ));
        }
        if self.step_init <= 0.0 {
            return Err(Error::InvalidConfig("step_init must be positive".into()));
        }
        if self.seed_amplitude <= 0.0 {
            return Err(Error::InvalidConfig(
                "seed_amplitude must be positive".into(),
            ));
        }
        if self.eps_schedule.is_empty() {
            return Err(Error::InvalidConfig("eps_schedule must be nonempty".into()));
        }
        for w in self.eps_schedule.windows(2) {
            if w[1] >= w[0] {
                return Err(Error::InvalidConfig(
                    "eps_schedule must be strictly decreasing".into(),
                ));
            }
        }
        if self.eps_schedule[0] <= 0.0 || *self.eps_schedule.last().unwrap() <= 0.0 {
            return Err(Error::InvalidConfig(
                "eps_schedule must stay positive".into(),
            ));
        }
        Ok(())
    }

    fn eps_at(&self, iter: usize) -> f64 {
        let idx = iter.min(self.eps_schedule.len() - 1);
        self.eps_schedule[idx]
    }
}

/// The 1/n quasi-minimization schedule, one entry per iteration.
pub fn default_eps_schedule(max_iters: usize) -> Vec<f64> {
    (0..max_iters.max(1))
        .map(|n| 1.0 / (n + 1) as f64)
        .collect()
}

/// Current iterate, histories and termination status.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub curve: SymmetricLoop,
    pub report: FunctionalReport,
    pub iter: usize,
    pub f_history: Vec<f64>,
    pub gnorm_history: Vec<f64>,
    /// eps_schedule value recorded alongside each gradient norm.
    pub eps_history: Vec<f64>,
    pub status: Status,
    /// Last accepted line-search step.
    pub last_step: f64,
    /// Constraint multiplier from the latest gradient projection.
    pub mu: f64,
    prev_coeffs: Option<Vec<f64>>,
    prev_grad: Option<Vec<f64>>,
}

impl SolverState {
    /// Objective value of the active formulation.
    pub fn objective(&self) -> f64 {
        *self.f_history.last().expect("history is never empty")
    }

    pub fn gnorm(&self) -> f64 {
        self.gnorm_history.last().copied().unwrap_or(f64::INFINITY)
    }
}

/// One machine-parseable progress line: iter, f, gnorm, step, minDist.
pub fn progress_line(state: &SolverState) -> String {
    format!(
        "{}\t{:.16e}\t{:.6e}\t{:.6e}\t{:.6e}",
        state.iter,
        state.objective(),
        state.gnorm(),
        state.last_step,
        state.report.min_distance
    )
}

/// Seed curve: the scaled figure-eight representative (sin 2t, sin t),
/// i.e. a_2 = b_1 = amplitude.  Under nc1 the first y-harmonic is not
/// available and the k = 3 harmonic makes all three bodies share their
/// y-coordinate at all times, so the y-seed moves to k = 5.  With
/// `rng_seed` every free coefficient receives a perturbation of at most
/// 1e-3·amplitude.
pub fn initial_guess(
    modes: usize,
    amplitude: f64,
    nc1: bool,
    rng_seed: Option<u64>,
) -> Result<SymmetricLoop> {
    if amplitude <= 0.0 {
        return Err(Error::InvalidConfig("amplitude must be positive".into()));
    }
    if nc1 && modes < 3 {
        return Err(Error::InvalidConfig(
            "nc1 seed needs modes >= 3 for the k = 5 harmonic".into(),
        ));
    }
    let mut curve = SymmetricLoop::zeros(modes, nc1)?;
    curve.set_a(0, amplitude);
    if nc1 {
        curve.set_b(2, amplitude);
    } else {
        curve.set_b(0, amplitude);
    }
    if let Some(seed) = rng_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = 1e-3 * amplitude;
        let mut c = curve.coefficient_vector();
        for v in c.iter_mut() {
            *v += scale * rng.gen_range(-1.0..1.0);
        }
        curve = curve.with_coefficient_vector(&c);
    }
    Ok(curve)
}

/// Tangential gradient of the active objective, plus the constraint
/// multiplier μ = ⟨qV^{q−1}∇V, ∇K⟩ / ⟨∇K, ∇K⟩.
///
/// On the renormalizing path this is g = qV^{q−1}∇V − μ∇K, orthogonal to
/// ∇K by construction; on the direct path it is ∇F, which is orthogonal
/// to the radial direction by scale invariance.
pub fn projected_gradient(
    report: &FunctionalReport,
    params: &ProblemParams,
    renormalize_k: bool,
) -> Result<(Vec<f64>, f64)> {
    let (_, q) = params.exponents();
    let gk_sq = dot(&report.grad_k, &report.grad_k);
    if gk_sq == 0.0 {
        return Err(Error::DegenerateLoop(
            "constraint gradient vanishes; K = 1 excludes this".into(),
        ));
    }
    let wv = q * report.v.powf(q - 1.0);
    let grad_obj: Vec<f64> = report.grad_v.iter().map(|g| wv * g).collect();
    let mu = dot(&grad_obj, &report.grad_k) / gk_sq;
    let g = if renormalize_k {
        grad_obj
            .iter()
            .zip(&report.grad_k)
            .map(|(go, gk)| go - mu * gk)
            .collect()
    } else {
        report.grad_f.clone()
    };
    Ok((g, mu))
}

/// Owns the evaluator tables and drives the descent.
pub struct Solver {
    evaluator: Evaluator,
    config: SolverConfig,
}

impl Solver {
    pub fn new(params: &ProblemParams, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let evaluator = Evaluator::new(params, config.modes)?;
        Ok(Self { evaluator, config })
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    fn params(&self) -> &ProblemParams {
        self.evaluator.params()
    }

    /// Exact retraction to {K = 1}: c ↦ c·K^{−1/2}.
    fn renormalized(&self, curve: &SymmetricLoop) -> Result<SymmetricLoop> {
        let k = self.evaluator.kinetic(curve);
        if k == 0.0 {
            return Err(Error::DegenerateLoop(
                "cannot renormalize a constant loop".into(),
            ));
        }
        Ok(curve.scaled(k.powf(-0.5)))
    }

    fn objective_of(&self, report: &FunctionalReport) -> f64 {
        if self.config.renormalize_k {
            let (_, q) = self.params().exponents();
            report.v.powf(q)
        } else {
            report.f
        }
    }

    /// Cheap objective for line-search trials (no gradients).
    fn trial_objective(&self, curve: &SymmetricLoop) -> Result<f64> {
        let (v, _) = self.evaluator.potential(curve)?;
        if self.config.renormalize_k {
            let (_, q) = self.params().exponents();
            Ok(v.powf(q))
        } else {
            let k = self.evaluator.kinetic(curve);
            let (p, q) = self.params().exponents();
            Ok(k.powf(p) * v.powf(q))
        }
    }

    /// State from the configured seed curve.
    pub fn initial_state(&self) -> Result<SolverState> {
        let seed = initial_guess(
            self.config.modes,
            self.config.seed_amplitude,
            self.config.nc1,
            self.config.rng_seed,
        )?;
        self.initial_state_from(seed)
    }

    /// State from an explicit starting curve (warm starts, continuation).
    pub fn initial_state_from(&self, curve: SymmetricLoop) -> Result<SolverState> {
        let curve = if self.config.renormalize_k {
            self.renormalized(&curve)?
        } else {
            curve
        };
        let report = self.evaluator.report(&curve)?;
        let f0 = self.objective_of(&report);
        Ok(SolverState {
            curve,
            report,
            iter: 0,
            f_history: vec![f0],
            gnorm_history: Vec::new(),
            eps_history: Vec::new(),
            status: Status::Running,
            last_step: self.config.step_init,
            mu: 0.0,
            prev_coeffs: None,
            prev_grad: None,
        })
    }

    /// One descent step: gradient, convergence test, backtracking line
    /// search (Barzilai–Borwein warm start), optional retraction to K = 1.
    pub fn step(&self, state: &mut SolverState) -> Result<()> {
        if state.status != Status::Running {
            return Ok(());
        }
        if state.iter >= self.config.max_iters {
            state.status = Status::MaxIters;
            return Ok(());
        }

        let (g, mu) = projected_gradient(&state.report, self.params(), self.config.renormalize_k)?;
        let gnorm = dot(&g, &g).sqrt();
        state.mu = mu;
        state.gnorm_history.push(gnorm);
        state.eps_history.push(self.config.eps_at(state.iter));
        if gnorm <= self.config.grad_tol {
            state.status = Status::Converged;
            return Ok(());
        }

        let c = state.curve.coefficient_vector();
        let f_cur = state.objective();

        // Barzilai-Borwein warm start for the trial step, safeguarded by
        // the Armijo backtracking below; descent direction stays -g.
        let mut step = match (&state.prev_coeffs, &state.prev_grad) {
            (Some(pc), Some(pg)) => {
                let dc: Vec<f64> = c.iter().zip(pc).map(|(a, b)| a - b).collect();
                let dg: Vec<f64> = g.iter().zip(pg).map(|(a, b)| a - b).collect();
                let dgdg = dot(&dg, &dg);
                let dcdg = dot(&dc, &dg);
                if dgdg > 0.0 && dcdg > 0.0 {
                    (dcdg / dgdg).clamp(STEP_UNDERFLOW * 10.0, 1e3)
                } else {
                    (state.last_step * 2.0).min(self.config.step_init.max(1.0))
                }
            }
            _ => self.config.step_init,
        };

        // Below this allowance the Armijo decrease s·‖g‖² is smaller than
        // the roundoff of evaluating f itself and cannot be certified;
        // steps that keep f within the noise floor are still accepted so
        // the descent can reach gradient norms far below √(ε·|f|).
        let noise_floor = 16.0 * f64::EPSILON * (1.0 + f_cur.abs());

        let mut all_collisions = true;
        loop {
            let trial_vec: Vec<f64> = c.iter().zip(&g).map(|(ci, gi)| ci - step * gi).collect();
            let mut trial = state.curve.with_coefficient_vector(&trial_vec);
            let mut ok = true;
            if self.config.renormalize_k {
                match self.renormalized(&trial) {
                    Ok(t) => trial = t,
                    Err(_) => ok = false,
                }
            }
            if ok {
                match self.trial_objective(&trial) {
                    Ok(f_trial) => {
                        all_collisions = false;
                        if f_trial
                            <= f_cur - self.config.armijo * step * gnorm * gnorm + noise_floor
                        {
                            let report = self.evaluator.report(&trial)?;
                            state.prev_coeffs = Some(c);
                            state.prev_grad = Some(g);
                            state.curve = trial;
                            state.report = report;
                            state.iter += 1;
                            state.f_history.push(f_trial);
                            state.last_step = step;
                            return Ok(());
                        }
                    }
                    Err(Error::CollisionDetected { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            step *= self.config.backtrack;
            if step < STEP_UNDERFLOW {
                state.status = if all_collisions {
                    Status::CollisionAbort
                } else {
                    Status::LineSearchFail
                };
                return Ok(());
            }
        }
    }

    /// Iterate until a terminal status, invoking the observer after every
    /// accepted step.
    pub fn run(
        &self,
        state: &mut SolverState,
        observer: &mut dyn FnMut(&SolverState),
    ) -> Result<()> {
        while state.status == Status::Running {
            let before = state.iter;
            self.step(state)?;
            if state.iter > before {
                observer(state);
            }
        }
        Ok(())
    }

    /// Seed, descend, return the final state.
    pub fn solve(&self) -> Result<SolverState> {
        let mut state = self.initial_state()?;
        self.run(&mut state, &mut |_| {})?;
        Ok(state)
    }

    /// Descend from an explicit starting curve.
    pub fn solve_from(&self, start: SymmetricLoop) -> Result<SolverState> {
        let mut state = self.initial_state_from(start)?;
        self.run(&mut state, &mut |_| {})?;
        Ok(state)
    }
}

/// End-to-end minimization with the given parameters and configuration.
pub fn solve(
    params: &ProblemParams,
    config: SolverConfig,
) -> Result<(SolverState, FunctionalReport)> {
    let solver = Solver::new(params, config)?;
    let state = solver.solve()?;
    let report = state.report.clone();
    Ok((state, report))
}
