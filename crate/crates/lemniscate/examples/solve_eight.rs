//! Minimal end-to-end run: solve the Newtonian figure-eight and print the
//! certificate.  `cargo run --example solve_eight [alpha] [modes]`

use lemniscate::minimizer::{Solver, SolverConfig};
use lemniscate::ProblemParams;
use std::time::Instant;

fn main() {
    let mut args = std::env::args().skip(1);
    let alpha: f64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(1.0);
    let modes: usize = args.next().map(|s| s.parse().unwrap()).unwrap_or(16);
    let direct = args.next().as_deref() == Some("direct");

    let params = ProblemParams::new(alpha).expect("valid alpha");
    let mut config = SolverConfig::new(modes);
    config.renormalize_k = !direct;
    let solver = Solver::new(&params, config).expect("valid config");

    let t0 = Instant::now();
    let mut state = solver.initial_state().expect("collision-free seed");
    let mut last_print = Instant::now();
    solver
        .run(&mut state, &mut |s| {
            if last_print.elapsed().as_millis() > 500 {
                println!("{}", lemniscate::minimizer::progress_line(s));
                last_print = Instant::now();
            }
        })
        .expect("descent");
    println!(
        "status {:?} after {} iterations in {:.2?} (f = {:.12}, gnorm = {:.3e})",
        state.status,
        state.iter,
        t0.elapsed(),
        state.objective(),
        state.gnorm()
    );

    let t1 = Instant::now();
    let (cert, report) = lemniscate::dynamics::certify(&state.curve, &params, &Default::default())
        .expect("certification");
    println!("certification in {:.2?}", t1.elapsed());
    println!(
        "K = {:.12}, V = {:.12}, F = {:.12}",
        report.k, report.v, report.f
    );
    println!("{}", cert.to_json().unwrap());
    println!("leading coefficients:");
    for (m, (a, b)) in state.curve.a().iter().zip(state.curve.b()).enumerate() {
        println!(
            "  k_x = {:2}: a = {a:+.3e}    k_y = {:2}: b = {b:+.3e}",
            2 * m + 2,
            2 * m + 1
        );
    }
}
