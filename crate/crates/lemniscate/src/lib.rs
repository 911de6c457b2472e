//! Variational solver for collision-free periodic three-body
//! choreographies of figure-eight type.
//!
//! For a homogeneous potential of degree −α (0 < α < 2) the solver
//! minimizes the scale-invariant functional F = K^{α/(α+2)} V^{2/(α+2)}
//! over a symmetry-constrained space of Fourier loops, then certifies the
//! minimizer as a reparametrized solution of Newton's equations: virial
//! identity, spectral Newton residual, independent RK4 integration over
//! one rescaled period, and the node/transversality geometry of the eight.
//!
//! Module map:
//! - [`loops`]: the symmetric Fourier loop space and its invariants
//! - [`functionals`]: K, V, the scale envelope, F, and analytic gradients
//! - [`minimizer`]: projected gradient descent with Armijo backtracking
//! - [`dynamics`]: orbit certification and the independent ODE oracle
//! - [`pipeline`]: end-to-end runs, the α-continuation sweep, artifacts

pub mod dynamics;
pub mod error;
pub mod functionals;
pub mod loops;
pub mod minimizer;
pub mod pipeline;

pub use error::{Error, Result};
pub use functionals::{FunctionalReport, ProblemParams};
pub use loops::{SampledCurve, SymmetricLoop};
pub use minimizer::{SolverConfig, SolverState, Status};
pub use pipeline::{ChoreographyTrajectory, PipelineConfig};
