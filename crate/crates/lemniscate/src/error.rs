//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A pairwise distance dropped below the configured collision floor
    /// while evaluating the potential; the curve left the collision-free set.
    #[error("collision detected: min mutual distance {min_distance:.3e} below floor {floor:.3e}")]
    CollisionDetected { min_distance: f64, floor: f64 },

    /// A pairwise distance dropped below the floor mid-flight during the
    /// independent ODE integration; the candidate is not a genuine orbit.
    #[error("collision during integration at s = {time:.6e} (distance {distance:.3e})")]
    CollisionDuringIntegration { time: f64, distance: f64 },

    /// The loop cannot support the requested operation (constant curve,
    /// vanishing kinetic energy, vanishing constraint gradient).
    #[error("degenerate loop: {0}")]
    DegenerateLoop(String),

    /// Invalid parameter or configuration value.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The solver terminated without reaching the gradient tolerance.
    #[error("solver failed with status {status:?} (final gradient norm {gnorm:.3e})")]
    SolveFailed {
        status: crate::minimizer::Status,
        gnorm: f64,
    },

    /// A certificate metric violated its configured bound.
    #[error("certification failed: {metric} = {value:.6e} exceeds bound {bound:.6e}")]
    CertificationFailed {
        metric: String,
        value: f64,
        bound: f64,
    },

    /// A continuation sweep stopped early; completed runs are preserved.
    #[error("sweep broke at alpha = {alpha}: {detail}")]
    SweepBroken { alpha: f64, detail: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
