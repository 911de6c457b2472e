//! Acceptance suite: one test per criterion, each printing a single
//! PASS line with the measured margins (run with `--nocapture` to see
//! them).  Tolerances are pinned in code next to each assertion.

use std::f64::consts::PI;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lemniscate::dynamics::{
    self, integrate_newton, newton_residual, virial_multiplier, PhaseState,
};
use lemniscate::functionals::Evaluator;
use lemniscate::loops::SymmetricLoop;
use lemniscate::minimizer::{Solver, SolverConfig, Status};
use lemniscate::pipeline::{
    collision_arc_exponent, collision_scaling_probe, run_sweep, PipelineConfig,
};
use lemniscate::ProblemParams;

fn pass(criterion: u32, name: &str, started: Instant, budget_s: f64, detail: &str) {
    let elapsed = started.elapsed().as_secs_f64();
    println!(
        "[acceptance] criterion {criterion} ({name}): PASS in {elapsed:.2}s (budget {budget_s}s) — {detail}"
    );
    assert!(
        elapsed < budget_s,
        "criterion {criterion} exceeded its runtime budget: {elapsed:.2}s >= {budget_s}s"
    );
}

/// Random loop with 1/k² coefficient decay, as a generic smooth member of
/// the symmetry class.
fn random_loop(rng: &mut ChaCha8Rng, modes: usize, scale: f64, nc1: bool) -> SymmetricLoop {
    let mut curve = SymmetricLoop::zeros(modes, nc1).unwrap();
    for m in 0..modes {
        let kx = SymmetricLoop::x_wavenumber(m);
        let ky = SymmetricLoop::y_wavenumber(m);
        curve.set_a(m, scale * rng.gen_range(-1.0..1.0) / (kx * kx));
        curve.set_b(m, scale * rng.gen_range(-1.0..1.0) / (ky * ky));
    }
    curve
}

/// Random loop whose three-body configuration stays comfortably clear of
/// the collision floor.
fn random_collision_free(
    rng: &mut ChaCha8Rng,
    modes: usize,
    evaluator: &Evaluator,
) -> SymmetricLoop {
    loop {
        let scale = rng.gen_range(0.5..1.5);
        let mut curve = random_loop(rng, modes, scale, false);
        // keep the dominant figure-eight harmonics alive so the bodies
        // stay separated
        curve.set_a(0, curve.a()[0] + 0.5 * scale);
        curve.set_b(0, curve.b()[0] + scale);
        if let Ok((_, min_dist)) = evaluator.potential(&curve) {
            if min_dist > 0.05 {
                return curve;
            }
        }
    }
}

#[test]
fn criterion_1_scale_invariance() {
    let started = Instant::now();
    let params = ProblemParams::new(1.0).unwrap();
    let modes = 6;
    let evaluator = Evaluator::new(&params, modes).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let curve = random_collision_free(&mut rng, modes, &evaluator);
        let f0 = evaluator.report(&curve).unwrap().f;
        for lambda in [0.1, 1.0, 3.0, 10.0] {
            let f_scaled = evaluator.report(&curve.scaled(lambda)).unwrap().f;
            let rel = (f_scaled - f0).abs() / f0;
            worst = worst.max(rel);
            assert!(
                rel <= 1e-10,
                "scale invariance violated: lambda = {lambda}, relative error {rel:.3e}"
            );
        }
    }
    pass(
        1,
        "scale invariance of F",
        started,
        5.0,
        &format!("200 loops x 4 scales, worst relative change {worst:.3e} <= 1e-10"),
    );
}

#[test]
fn criterion_2_envelope_identity() {
    let started = Instant::now();
    let modes = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let mut worst_identity: f64 = 0.0;
    for alpha in [0.5, 1.0, 1.5] {
        let params = ProblemParams::new(alpha).unwrap();
        let evaluator = Evaluator::new(&params, modes).unwrap();
        for i in 0..30 {
            let curve = random_collision_free(&mut rng, modes, &evaluator);
            let report = evaluator.report(&curve).unwrap();
            let target = report.c_alpha * report.f;
            let phi_star = evaluator
                .scale_envelope(&curve, report.lambda_star)
                .unwrap();
            let rel = (phi_star - target).abs() / target;
            worst_identity = worst_identity.max(rel);
            assert!(
                rel <= 1e-9,
                "envelope identity off by {rel:.3e} at alpha {alpha}"
            );

            // 2000-point log grid over lambda in [1e-3, 1e3] never dips
            // below the closed-form minimum (convexity of the envelope).
            if i < 5 {
                let (k, v) = (report.k, report.v);
                for g in 0..2000 {
                    let lambda = 10f64.powf(-3.0 + 6.0 * g as f64 / 1999.0);
                    let phi = lambda * lambda * k + lambda.powf(-alpha) * v;
                    assert!(
                        phi >= phi_star - 1e-9 * target,
                        "grid value below the envelope minimum at alpha {alpha}, lambda {lambda}"
                    );
                }
            }
        }
    }
    pass(
        2,
        "envelope identity min Phi = C_alpha F",
        started,
        10.0,
        &format!("3 alphas x 30 loops, worst identity error {worst_identity:.3e} <= 1e-9; 2000-point grids clean"),
    );
}

#[test]
fn criterion_3_reinforced_poincare() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    for _ in 0..1000 {
        let scale = rng.gen_range(0.1..3.0);
        let curve = random_loop(&mut rng, 8, scale, false);
        let rep = curve.poincare_check();
        assert!(
            rep.lhs <= rep.rhs + 1e-12,
            "total Poincare inequality failed"
        );
        assert!(
            rep.x_component.0 <= rep.x_component.1 + 1e-12,
            "x component bound 1/4 failed"
        );
        assert!(
            rep.y_component.0 <= rep.y_component.1 + 1e-12,
            "y component bound 1 failed"
        );
    }
    // Under (NC1) the y constant strengthens to 1/9.
    for _ in 0..1000 {
        let scale = rng.gen_range(0.1..3.0);
        let curve = random_loop(&mut rng, 8, scale, true);
        let rep = curve.poincare_check();
        assert!(
            rep.y_component.0 <= rep.y_component.1 / 9.0 + 1e-12,
            "nc1 y bound 1/9 failed"
        );
    }
    // Saturation on the lowest modes: k = 2 for x, k = 1 for y.
    let mut x_only = SymmetricLoop::zeros(4, false).unwrap();
    x_only.set_a(0, 1.3);
    let rep = x_only.poincare_check();
    assert!((rep.x_component.0 - rep.x_component.1).abs() <= 1e-12 * rep.x_component.1);
    let mut y_only = SymmetricLoop::zeros(4, false).unwrap();
    y_only.set_b(0, 0.7);
    let rep = y_only.poincare_check();
    assert!((rep.y_component.0 - rep.y_component.1).abs() <= 1e-12 * rep.y_component.1);
    pass(
        3,
        "reinforced Poincare inequality",
        started,
        5.0,
        "1000 loops + 1000 nc1 loops hold componentwise; k=2 and k=1 saturate",
    );
}

#[test]
fn criterion_4_gradient_correctness() {
    let started = Instant::now();
    let params = ProblemParams::new(1.0).unwrap();
    let modes = 5;
    let evaluator = Evaluator::new(&params, modes).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let h = 1e-6;
    let mut worst_rel: f64 = 0.0;
    let mut worst_radial: f64 = 0.0;
    for _ in 0..20 {
        let curve = random_collision_free(&mut rng, modes, &evaluator);
        let report = evaluator.report(&curve).unwrap();
        // Central differences carry an absolute cancellation floor of
        // about eps*|f|/h; entries are compared relatively above it.
        let fd_floor = 64.0 * f64::EPSILON * (1.0 + report.v.abs()) / (2.0 * h);
        let c = curve.coefficient_vector();
        for idx in 0..c.len() {
            let mut plus = c.clone();
            let mut minus = c.clone();
            plus[idx] += h;
            minus[idx] -= h;
            let curve_p = curve.with_coefficient_vector(&plus);
            let curve_m = curve.with_coefficient_vector(&minus);
            let fd_k = (evaluator.kinetic(&curve_p) - evaluator.kinetic(&curve_m)) / (2.0 * h);
            let fd_v = (evaluator.potential(&curve_p).unwrap().0
                - evaluator.potential(&curve_m).unwrap().0)
                / (2.0 * h);
            for (analytic, fd) in [(report.grad_k[idx], fd_k), (report.grad_v[idx], fd_v)] {
                let abs_err = (analytic - fd).abs();
                let rel = abs_err / analytic.abs().max(f64::MIN_POSITIVE);
                if analytic.abs() > fd_floor {
                    worst_rel = worst_rel.max(rel);
                }
                assert!(
                    rel <= 1e-6 || abs_err <= fd_floor,
                    "gradient entry {idx}: analytic {analytic:.6e} vs fd {fd:.6e} (rel {rel:.3e})"
                );
            }
        }
        // Euler homogeneity identities: <grad_K, c> = 2K, <grad_V, c> = -aV.
        let gk_c: f64 = report.grad_k.iter().zip(&c).map(|(g, x)| g * x).sum();
        let gv_c: f64 = report.grad_v.iter().zip(&c).map(|(g, x)| g * x).sum();
        let rel_k = (gk_c - 2.0 * report.k).abs() / (2.0 * report.k);
        let rel_v = (gv_c + params.alpha * report.v).abs() / (params.alpha * report.v);
        worst_radial = worst_radial.max(rel_k).max(rel_v);
        assert!(rel_k <= 1e-9, "radial K identity off by {rel_k:.3e}");
        assert!(rel_v <= 1e-9, "radial V identity off by {rel_v:.3e}");
        // differential consequence of scale invariance
        let gf_c: f64 = report.grad_f.iter().zip(&c).map(|(g, x)| g * x).sum();
        assert!(gf_c.abs() <= 1e-9 * report.f);
    }
    pass(
        4,
        "gradient correctness",
        started,
        30.0,
        &format!(
            "20 loops: worst FD relative error {worst_rel:.3e} <= 1e-6, worst radial identity error {worst_radial:.3e} <= 1e-9"
        ),
    );
}

/// Solve the figure-eight at the given alpha and truncation from the
/// plain (sin 2t, sin t) seed.
fn solve_eight(alpha: f64, modes: usize) -> (lemniscate::SolverState, ProblemParams) {
    let params = ProblemParams::new(alpha).unwrap();
    let config = SolverConfig::new(modes);
    let solver = Solver::new(&params, config).unwrap();
    let state = solver.solve().unwrap();
    (state, params)
}

#[test]
fn criterion_5_end_to_end_figure_eight() {
    let started = Instant::now();
    let (state, params) = solve_eight(1.0, 16);
    assert_eq!(state.status, Status::Converged, "solver did not converge");
    assert!(
        state.gnorm() <= 1e-8,
        "final projected gradient norm {} > 1e-8",
        state.gnorm()
    );

    let cert = dynamics::certify_with_report(
        &state.curve,
        &state.report,
        &params,
        &dynamics::CertifyConfig::default(),
    )
    .unwrap();
    assert!(
        cert.virial_residual <= 1e-6,
        "virial residual {} > 1e-6",
        cert.virial_residual
    );
    assert!(
        cert.newton_residual_sup <= 1e-4,
        "Newton sup-residual {} > 1e-4 at M = 16 / 512 nodes",
        cert.newton_residual_sup
    );
    assert!(
        cert.min_mutual_distance >= 100.0 * params.collision_floor,
        "min mutual distance {} too close to the collision floor",
        cert.min_mutual_distance
    );
    assert!(cert.node_ok && cert.transversal_ok && cert.orthogonal_crossing_ok);

    // The gradient-decomposition multiplier agrees with the virial value.
    let rho_virial = virial_multiplier(&state.report, params.alpha).unwrap();
    let rho_rel = (cert.rho - rho_virial).abs() / rho_virial;
    assert!(
        rho_rel <= 1e-6,
        "multiplier routes disagree by {rho_rel:.3e}"
    );

    pass(
        5,
        "end-to-end figure-eight at alpha = 1",
        started,
        120.0,
        &format!(
            "{} iterations, gnorm {:.2e}, virial {:.2e}, newton {:.2e}, minDist {:.3}, rho routes agree to {:.2e}",
            state.iter,
            state.gnorm(),
            cert.virial_residual,
            cert.newton_residual_sup,
            cert.min_mutual_distance,
            rho_rel
        ),
    );
}

#[test]
fn criterion_6_independent_ode_certification() {
    let started = Instant::now();

    // 4th-order convergence on the closed-form circular two-body oracle:
    // equal masses at distance d circle with m w^2 (d/2) = a m^2 d^{-a-1}.
    let params = ProblemParams::new(1.0).unwrap();
    let (alpha, mass, d) = (params.alpha, params.mass, 1.0_f64);
    let omega = (2.0 * alpha * mass * d.powf(-alpha - 2.0)).sqrt();
    let speed = omega * d / 2.0;
    let circular = PhaseState {
        positions: vec![[d / 2.0, 0.0], [-d / 2.0, 0.0]],
        velocities: vec![[0.0, speed], [0.0, -speed]],
    };
    let period = 2.0 * PI / omega;

    let fine = integrate_newton(&circular, &params, period, 100_000).unwrap();
    assert!(
        fine.closure_error <= 1e-8,
        "circular-orbit closure {} > 1e-8 at 1e5 steps",
        fine.closure_error
    );
    let coarse = integrate_newton(&circular, &params, period, 512).unwrap();
    let half = integrate_newton(&circular, &params, period, 1024).unwrap();
    let ratio = coarse.closure_error / half.closure_error;
    assert!(
        (ratio - 16.0).abs() <= 0.2 * 16.0,
        "step-halving error ratio {ratio:.2} outside 16 +/- 20%"
    );

    // Independent RK4 certification of the converged minimizer.
    let (state, params) = solve_eight(1.0, 16);
    let cert = dynamics::certify_with_report(
        &state.curve,
        &state.report,
        &params,
        &dynamics::CertifyConfig {
            integration_steps: 100_000,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(
        cert.closure_error <= 1e-5,
        "orbit closure error {} > 1e-5",
        cert.closure_error
    );
    assert!(
        cert.energy_drift <= 1e-8,
        "energy drift {} > 1e-8",
        cert.energy_drift
    );

    pass(
        6,
        "independent ODE certification",
        started,
        60.0,
        &format!(
            "oracle closure {:.2e}, halving ratio {ratio:.1}, orbit closure {:.2e}, drift {:.2e}",
            fine.closure_error, cert.closure_error, cert.energy_drift
        ),
    );
}

#[test]
fn criterion_7_alpha_continuation() {
    let started = Instant::now();
    let alphas = [0.5, 0.75, 1.0, 1.25, 1.5];
    let mut config = PipelineConfig::new(1.0).unwrap();
    config.solver = SolverConfig::new(20);
    let outcome = run_sweep(&alphas, &config).unwrap();
    assert!(outcome.all_green(), "sweep broke: {:?}", outcome.broken);
    assert_eq!(outcome.runs.len(), alphas.len());
    for run in &outcome.runs {
        assert_eq!(run.solver_status, Status::Converged);
    }
    let max_dist = outcome
        .coefficient_distances
        .iter()
        .cloned()
        .fold(0.0, f64::max);
    assert!(
        max_dist <= config.sweep_continuity_bound,
        "adjacent-solution coefficient distance {max_dist} above bound"
    );
    pass(
        7,
        "alpha continuation sweep",
        started,
        600.0,
        &format!(
            "5 certificates all green; adjacent coefficient distances {:?} (bound {})",
            outcome
                .coefficient_distances
                .iter()
                .map(|d| format!("{d:.3}"))
                .collect::<Vec<_>>(),
            config.sweep_continuity_bound
        ),
    );
}

#[test]
fn criterion_8_truncation_decay() {
    let started = Instant::now();
    let alpha = 1.0;
    let orders = [8usize, 12, 16, 24];
    // Quadrature floor: below this the residual is dominated by node-level
    // roundoff rather than truncation, so monotonicity is not required.
    let floor = 1e-9;
    let mut residuals = Vec::new();
    let mut warm: Option<SymmetricLoop> = None;
    for &modes in &orders {
        let params = ProblemParams::new(alpha).unwrap();
        let solver = Solver::new(&params, SolverConfig::new(modes)).unwrap();
        let state = match warm.take() {
            Some(prev) => solver.solve_from(prev.resized(modes).unwrap()).unwrap(),
            None => solver.solve().unwrap(),
        };
        assert_eq!(
            state.status,
            Status::Converged,
            "M = {modes} did not converge"
        );
        let rho = virial_multiplier(&state.report, alpha).unwrap();
        let (sup, _) = newton_residual(&state.curve, &params, rho).unwrap();
        residuals.push(sup);
        warm = Some(state.curve);
    }
    for (pair, orders) in residuals.windows(2).zip(orders.windows(2)) {
        assert!(
            pair[1] <= pair[0] || pair[1] <= floor,
            "Newton residual not decreasing from M = {} ({:.3e}) to M = {} ({:.3e})",
            orders[0],
            pair[0],
            orders[1],
            pair[1]
        );
    }
    pass(
        8,
        "truncation decay of the Newton residual",
        started,
        300.0,
        &format!(
            "residuals over M in {{8,12,16,24}}: {}",
            residuals
                .iter()
                .map(|r| format!("{r:.3e}"))
                .collect::<Vec<_>>()
                .join(" -> ")
        ),
    );
}

#[test]
fn criterion_9_collision_arc_scaling() {
    let started = Instant::now();
    let epsilons = [1e-1, 10f64.powf(-1.5), 1e-2, 10f64.powf(-2.5), 1e-3];
    let mut details = Vec::new();
    for alpha in [0.5, 1.0, 1.5] {
        let probe = collision_scaling_probe(alpha, &epsilons).unwrap();
        let predicted = collision_arc_exponent(alpha);
        let rel = (probe.fitted_exponent - predicted).abs() / predicted;
        assert!(
            rel <= 0.02,
            "alpha {alpha}: fitted exponent {:.5} vs (2-a)/(2+a) = {predicted:.5} (relative error {rel:.2e})",
            probe.fitted_exponent
        );
        for row in &probe.rows {
            assert!(
                row.action.is_finite(),
                "collision-arc action must be finite"
            );
        }
        details.push(format!(
            "alpha {alpha}: fitted {:.4} vs {predicted:.4}",
            probe.fitted_exponent
        ));
    }
    pass(
        9,
        "collision-arc action scaling",
        started,
        5.0,
        &details.join("; "),
    );
}
