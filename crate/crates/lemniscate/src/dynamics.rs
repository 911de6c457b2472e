//! Certification that a converged loop is, after time reparametrization,
//! a periodic collision-free solution of Newton's equations.
//!
//! The multiplier ρ is recovered from the constraint decomposition of the
//! gradient, the virial identity 2K = αρV is checked against it, the
//! residual of m ẍ_i = ρ ∇_{x_i}U is evaluated spectrally, and the orbit
//! is integrated independently over one rescaled period with a classical
//! fixed-step RK4.
//!
//! Sign conventions follow the variational setup: U = Σ m²|x_i − x_j|^{−α}
//! is positive, the reparametrized equation of motion is m x'' = +∇U (an
//! attractive force), and E = ½Σ m|x'|² − U is the conserved energy.  In
//! the usual attractive-gravity notation the potential energy is −U.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::functionals::{dot, Evaluator, FunctionalReport, ProblemParams, BODIES};
use crate::loops::{SymmetricLoop, Vec2};

/// Everything the pipeline needs to accept or reject a candidate orbit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitCertificate {
    /// Time-reparametrization multiplier recovered from the gradient
    /// decomposition (not from the virial formula, so the virial residual
    /// below is a genuine criticality metric).
    pub rho: f64,
    /// |2K − αρV| / (2K).
    pub virial_residual: f64,
    /// sup over quadrature nodes and bodies of |m ẍ_i − ρ∇_{x_i}U|.
    pub newton_residual_sup: f64,
    /// Period 2π√ρ in the rescaled time s.
    pub rescaled_period: f64,
    /// |phase-space state after one period − initial state| from RK4.
    pub closure_error: f64,
    /// max |E(s) − E(0)| along the integration.
    pub energy_drift: f64,
    pub min_mutual_distance: f64,
    pub node_ok: bool,
    pub transversal_ok: bool,
    pub orthogonal_crossing_ok: bool,
}

impl OrbitCertificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Multiplier from the virial identity: ρ = 2K/(αV).
pub fn virial_multiplier(report: &FunctionalReport, alpha: f64) -> Result<f64> {
    if report.v <= 0.0 {
        return Err(Error::DegenerateLoop(
            "potential functional vanishes".into(),
        ));
    }
    Ok(2.0 * report.k / (alpha * report.v))
}

/// Multiplier from the gradient decomposition: with μ the least-squares
/// coefficient of ∇K in qV^{q−1}∇V, the Euler–Lagrange system reads
/// m ẍ = (−qV^{q−1}/μ) ∇U, so ρ = −qV^{q−1}/μ.  Agrees with the virial
/// value exactly at a critical point and drifts linearly with the
/// projected gradient norm away from one.
pub fn gradient_multiplier(report: &FunctionalReport, params: &ProblemParams) -> Result<f64> {
    let (_, q) = params.exponents();
    let gk_sq = dot(&report.grad_k, &report.grad_k);
    if gk_sq == 0.0 {
        return Err(Error::DegenerateLoop("constraint gradient vanishes".into()));
    }
    let wv = q * report.v.powf(q - 1.0);
    let mu = wv * dot(&report.grad_v, &report.grad_k) / gk_sq;
    if mu >= 0.0 {
        return Err(Error::DegenerateLoop(format!(
            "constraint multiplier {mu:.3e} is not negative; curve is far from critical"
        )));
    }
    Ok(-wv / mu)
}

/// Spectral residual of the reparametrized Newton equation
/// m ẍ_i(t) = ρ ∇_{x_i}U(x(t)): sup norm and the per-node maxima.
pub fn newton_residual(
    curve: &SymmetricLoop,
    params: &ProblemParams,
    rho: f64,
) -> Result<(f64, Vec<f64>)> {
    params.validate()?;
    let nodes = params.quad_nodes;
    let mass = params.mass;
    let mut per_node = Vec::with_capacity(nodes);
    let mut sup: f64 = 0.0;
    for j in 0..nodes {
        let t = 2.0 * PI * j as f64 / nodes as f64;
        let mut positions = [[0.0; 2]; BODIES];
        let mut accelerations = [[0.0; 2]; BODIES];
        for i in 0..BODIES {
            let phase = t + 2.0 * PI * i as f64 / BODIES as f64;
            positions[i] = curve.evaluate(phase);
            accelerations[i] = curve.second_derivative(phase);
        }
        let grad = grad_potential(&positions, mass, params.alpha, params.collision_floor).map_err(
            |b| Error::CollisionDetected {
                min_distance: b.distance,
                floor: params.collision_floor,
            },
        )?;
        let mut node_worst: f64 = 0.0;
        for i in 0..BODIES {
            let rx = mass * accelerations[i][0] - rho * grad[i][0];
            let ry = mass * accelerations[i][1] - rho * grad[i][1];
            node_worst = node_worst.max((rx * rx + ry * ry).sqrt());
        }
        per_node.push(node_worst);
        sup = sup.max(node_worst);
    }
    Ok((sup, per_node))
}

/// The same orbit in the rescaled time s = √ρ t, in which the equation of
/// motion takes the standard form m d²x/ds² = ∇U.  The geometric trace is
/// unchanged; only the clock (and hence velocities) moves.
#[derive(Debug, Clone)]
pub struct RescaledOrbit {
    curve: SymmetricLoop,
    rho: f64,
}

impl RescaledOrbit {
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Period in s-time: 2π√ρ.
    pub fn period(&self) -> f64 {
        2.0 * PI * self.rho.sqrt()
    }

    pub fn position(&self, body: usize, s: f64) -> Vec2 {
        let t = s / self.rho.sqrt() + 2.0 * PI * body as f64 / BODIES as f64;
        self.curve.evaluate(t)
    }

    pub fn velocity(&self, body: usize, s: f64) -> Vec2 {
        let sqrt_rho = self.rho.sqrt();
        let t = s / sqrt_rho + 2.0 * PI * body as f64 / BODIES as f64;
        let v = self.curve.derivative(t);
        [v[0] / sqrt_rho, v[1] / sqrt_rho]
    }

    /// Phase-space state of the three bodies at rescaled time s.
    pub fn state_at(&self, s: f64) -> PhaseState {
        let positions = (0..BODIES).map(|i| self.position(i, s)).collect();
        let velocities = (0..BODIES).map(|i| self.velocity(i, s)).collect();
        PhaseState {
            positions,
            velocities,
        }
    }

    pub fn initial_state(&self) -> PhaseState {
        self.state_at(0.0)
    }
}

pub fn rescale_time(curve: &SymmetricLoop, rho: f64) -> Result<RescaledOrbit> {
    if rho <= 0.0 {
        return Err(Error::InvalidConfig("rho must be positive".into()));
    }
    Ok(RescaledOrbit {
        curve: curve.clone(),
        rho,
    })
}

/// Positions and velocities of an N-body configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    pub positions: Vec<Vec2>,
    pub velocities: Vec<Vec2>,
}

impl PhaseState {
    pub fn bodies(&self) -> usize {
        self.positions.len()
    }

    /// Euclidean distance in the full phase space.
    pub fn distance(&self, other: &PhaseState) -> f64 {
        let mut sq = 0.0;
        for (a, b) in self
            .positions
            .iter()
            .chain(&self.velocities)
            .zip(other.positions.iter().chain(&other.velocities))
        {
            sq += (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2);
        }
        sq.sqrt()
    }
}

/// U(x) = Σ_{i<j} m² |x_i − x_j|^{−α}.
pub fn potential_energy(positions: &[Vec2], mass: f64, alpha: f64) -> f64 {
    let m2 = mass * mass;
    let mut u = 0.0;
    for i in 0..positions.len() {
        for j in (i + 1)..positions.len() {
            let dx = positions[i][0] - positions[j][0];
            let dy = positions[i][1] - positions[j][1];
            u += m2 * (dx * dx + dy * dy).sqrt().powf(-alpha);
        }
    }
    u
}

/// A pairwise distance fell below the collision floor.
#[derive(Debug)]
struct BelowFloor {
    distance: f64,
}

/// Per-body gradient ∇_{x_i}U, guarding the collision floor.
fn grad_potential(
    positions: &[Vec2],
    mass: f64,
    alpha: f64,
    floor: f64,
) -> std::result::Result<Vec<Vec2>, BelowFloor> {
    let m2 = mass * mass;
    let n = positions.len();
    let mut grad = vec![[0.0; 2]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = positions[i][0] - positions[j][0];
            let dy = positions[i][1] - positions[j][1];
            let r2 = dx * dx + dy * dy;
            let r = r2.sqrt();
            if r < floor {
                return Err(BelowFloor { distance: r });
            }
            let coeff = -alpha * m2 * r2.powf(-0.5 * alpha - 1.0);
            grad[i][0] += coeff * dx;
            grad[i][1] += coeff * dy;
            grad[j][0] -= coeff * dx;
            grad[j][1] -= coeff * dy;
        }
    }
    Ok(grad)
}

/// Mechanical energy E = ½ Σ m|v|² − U in the rescaled time.
pub fn mechanical_energy(state: &PhaseState, mass: f64, alpha: f64) -> f64 {
    let kinetic: f64 = state
        .velocities
        .iter()
        .map(|v| 0.5 * mass * (v[0] * v[0] + v[1] * v[1]))
        .sum();
    kinetic - potential_energy(&state.positions, mass, alpha)
}

/// Outcome of one period of independent RK4 integration.
#[derive(Debug, Clone)]
pub struct IntegrationReport {
    pub closure_error: f64,
    pub energy_drift: f64,
    pub final_state: PhaseState,
    /// Decimated trajectory samples (at most ~2048 states).
    pub trajectory: Vec<PhaseState>,
}

/// Classical fixed-step RK4 on m x'' = ∇U(x) over [0, period].
pub fn integrate_newton(
    initial: &PhaseState,
    params: &ProblemParams,
    period: f64,
    steps: usize,
) -> Result<IntegrationReport> {
    if steps == 0 {
        return Err(Error::InvalidConfig("steps must be positive".into()));
    }
    if period <= 0.0 {
        return Err(Error::InvalidConfig("period must be positive".into()));
    }
    let n = initial.bodies();
    let mass = params.mass;
    let alpha = params.alpha;
    let floor = params.collision_floor;
    let h = period / steps as f64;

    // Flat state layout: positions then velocities.
    let mut y = Vec::with_capacity(4 * n);
    for p in &initial.positions {
        y.extend_from_slice(p);
    }
    for v in &initial.velocities {
        y.extend_from_slice(v);
    }

    let deriv = |y: &[f64], s: f64| -> Result<Vec<f64>> {
        let positions: Vec<Vec2> = (0..n).map(|i| [y[2 * i], y[2 * i + 1]]).collect();
        let grad = grad_potential(&positions, mass, alpha, floor).map_err(|b| {
            Error::CollisionDuringIntegration {
                time: s,
                distance: b.distance,
            }
        })?;
        let mut dy = vec![0.0; 4 * n];
        dy[..2 * n].copy_from_slice(&y[2 * n..]);
        for i in 0..n {
            dy[2 * n + 2 * i] = grad[i][0] / mass;
            dy[2 * n + 2 * i + 1] = grad[i][1] / mass;
        }
        Ok(dy)
    };

    let to_state = |y: &[f64]| -> PhaseState {
        PhaseState {
            positions: (0..n).map(|i| [y[2 * i], y[2 * i + 1]]).collect(),
            velocities: (0..n)
                .map(|i| [y[2 * n + 2 * i], y[2 * n + 2 * i + 1]])
                .collect(),
        }
    };

    let e0 = mechanical_energy(initial, mass, alpha);
    let mut energy_drift: f64 = 0.0;
    let stride = (steps / 2048).max(1);
    let mut trajectory = vec![initial.clone()];
    let mut scratch = vec![0.0; 4 * n];

    for step in 0..steps {
        let s = step as f64 * h;
        let k1 = deriv(&y, s)?;
        for i in 0..4 * n {
            scratch[i] = y[i] + 0.5 * h * k1[i];
        }
        let k2 = deriv(&scratch, s + 0.5 * h)?;
        for i in 0..4 * n {
            scratch[i] = y[i] + 0.5 * h * k2[i];
        }
        let k3 = deriv(&scratch, s + 0.5 * h)?;
        for i in 0..4 * n {
            scratch[i] = y[i] + h * k3[i];
        }
        let k4 = deriv(&scratch, s + h)?;
        for i in 0..4 * n {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let state = to_state(&y);
        energy_drift = energy_drift.max((mechanical_energy(&state, mass, alpha) - e0).abs());
        if (step + 1) % stride == 0 {
            trajectory.push(state);
        }
    }

    let final_state = to_state(&y);
    let closure_error = final_state.distance(initial);
    Ok(IntegrationReport {
        closure_error,
        energy_drift,
        final_state,
        trajectory,
    })
}

/// Node, transversality and orthogonal-crossing flags of the eight.
#[derive(Debug, Clone, Copy)]
pub struct GeometryFlags {
    pub node_ok: bool,
    pub transversal_ok: bool,
    pub orthogonal_crossing_ok: bool,
}

/// Checks the intrinsic geometry: γ(0) = γ(π) = 0 (node at the origin),
/// non-vanishing and non-parallel branch tangents there (transversality),
/// and the orthogonal crossing of the y-axis at t = π/2.
pub fn geometry_checks(curve: &SymmetricLoop, tol: f64) -> GeometryFlags {
    let g0 = curve.evaluate(0.0);
    let g_pi = curve.evaluate(PI);
    let node_ok = norm(g0) <= tol && norm(g_pi) <= tol;

    let v0 = curve.derivative(0.0);
    let v_pi = curve.derivative(PI);
    let cross = v0[0] * v_pi[1] - v0[1] * v_pi[0];
    let transversal_ok = norm(v0) >= tol && cross.abs() > tol;

    let mid = curve.evaluate(PI / 2.0);
    let mid_v = curve.derivative(PI / 2.0);
    let orthogonal_crossing_ok = mid[0].abs() <= tol && mid_v[1].abs() <= tol;

    GeometryFlags {
        node_ok,
        transversal_ok,
        orthogonal_crossing_ok,
    }
}

fn norm(v: Vec2) -> f64 {
    (v[0] * v[0] + v[1] * v[1]).sqrt()
}

/// Knobs for certificate construction.
#[derive(Debug, Clone)]
pub struct CertifyConfig {
    /// RK4 steps over one rescaled period.
    pub integration_steps: usize,
    /// Tolerance for the geometry flags.
    pub geometry_tol: f64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            integration_steps: 100_000,
            geometry_tol: 1e-6,
        }
    }
}

/// Build the full certificate for a candidate loop.
pub fn certify(
    curve: &SymmetricLoop,
    params: &ProblemParams,
    cfg: &CertifyConfig,
) -> Result<(OrbitCertificate, FunctionalReport)> {
    let evaluator = Evaluator::new(params, curve.modes())?;
    let report = evaluator.report(curve)?;
    certify_with_report(curve, &report, params, cfg).map(|cert| (cert, report))
}

/// Certificate from an already-computed functional report.
pub fn certify_with_report(
    curve: &SymmetricLoop,
    report: &FunctionalReport,
    params: &ProblemParams,
    cfg: &CertifyConfig,
) -> Result<OrbitCertificate> {
    let rho = gradient_multiplier(report, params)?;
    let virial_residual = (2.0 * report.k - params.alpha * rho * report.v).abs() / (2.0 * report.k);
    let (newton_residual_sup, _) = newton_residual(curve, params, rho)?;
    let orbit = rescale_time(curve, rho)?;
    let integration = integrate_newton(
        &orbit.initial_state(),
        params,
        orbit.period(),
        cfg.integration_steps,
    )?;
    let geometry = geometry_checks(curve, cfg.geometry_tol);
    Ok(OrbitCertificate {
        rho,
        virial_residual,
        newton_residual_sup,
        rescaled_period: orbit.period(),
        closure_error: integration.closure_error,
        energy_drift: integration.energy_drift,
        min_mutual_distance: report.min_distance,
        node_ok: geometry.node_ok,
        transversal_ok: geometry.transversal_ok,
        orthogonal_crossing_ok: geometry.orthogonal_crossing_ok,
    })
}
