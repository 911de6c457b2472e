//! Kinetic and potential integrals of the three-body choreography, the
//! scale envelope, the scale-invariant functional, and their analytic
//! gradients with respect to the Fourier coefficients.
//!
//! The three bodies follow one loop with phase shifts 2π/3, so the kinetic
//! integral has the closed form K = (3m/2)·π Σ k²(a_k² + b_k²).  The
//! potential integral V = ∫ U(x(t)) dt with U = m² Σ_{i<j} |x_i − x_j|^{−α}
//! is evaluated by uniform trapezoidal quadrature, which is spectrally
//! accurate for smooth periodic integrands.  Under the homothety γ ↦ λγ
//! these scale exactly as K ↦ λ²K and V ↦ λ^{−α}V, making
//! F = K^{α/(α+2)} V^{2/(α+2)} scale-invariant.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::loops::SymmetricLoop;

/// Number of bodies in the choreography.
pub const BODIES: usize = 3;

/// Problem-level parameters: potential exponent, common mass, quadrature
/// resolution, and the runtime collision guard.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemParams {
    /// Homogeneity degree of the potential, in (0, 2).
    pub alpha: f64,
    /// Common mass of the three bodies.
    pub mass: f64,
    /// Uniform trapezoidal node count over [0, 2π).
    pub quad_nodes: usize,
    /// Minimum admissible mutual distance during evaluation.
    pub collision_floor: f64,
}

impl ProblemParams {
    pub fn new(alpha: f64) -> Result<Self> {
        let params = Self {
            alpha,
            mass: 1.0,
            quad_nodes: 512,
            collision_floor: 1e-6,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 2.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in the open interval (0, 2), got {}",
                self.alpha
            )));
        }
        if self.mass <= 0.0 {
            return Err(Error::InvalidConfig("mass must be positive".into()));
        }
        if self.quad_nodes < 8 {
            return Err(Error::InvalidConfig("quad_nodes must be at least 8".into()));
        }
        if self.collision_floor <= 0.0 {
            return Err(Error::InvalidConfig(
                "collision_floor must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Exponents p = α/(α+2) and q = 2/(α+2) of the scale-invariant functional.
    pub fn exponents(&self) -> (f64, f64) {
        (self.alpha / (self.alpha + 2.0), 2.0 / (self.alpha + 2.0))
    }
}

/// Envelope constant C_α = ((α+2)/2)·(α/2)^{−α/(α+2)}.
pub fn envelope_constant(alpha: f64) -> f64 {
    let p = alpha / (alpha + 2.0);
    0.5 * (alpha + 2.0) * (0.5 * alpha).powf(-p)
}

/// Optimal homothety scale λ* with λ*^{α+2} = αV/(2K).
pub fn optimal_scale(kinetic: f64, potential: f64, alpha: f64) -> f64 {
    (alpha * potential / (2.0 * kinetic)).powf(1.0 / (alpha + 2.0))
}

/// Values and coefficient-space gradients of K, V and F for one loop.
#[derive(Debug, Clone)]
pub struct FunctionalReport {
    pub k: f64,
    pub v: f64,
    pub f: f64,
    pub lambda_star: f64,
    pub c_alpha: f64,
    pub grad_f: Vec<f64>,
    pub grad_k: Vec<f64>,
    pub grad_v: Vec<f64>,
    /// Minimum mutual distance seen at the quadrature nodes.
    pub min_distance: f64,
}

/// Evaluator with precomputed phase-shifted basis tables.
///
/// The quadrature nodes never move, so sin(k(t_j + 2πi/3)) is tabulated
/// once per (modes, quad_nodes) pair; every potential or gradient
/// evaluation is then a sequence of dot products in a fixed summation
/// order, which keeps results deterministic and bit-reproducible.
pub struct Evaluator {
    params: ProblemParams,
    modes: usize,
    /// sin_x[i][j*modes + m] = sin((2m+2)(t_j + φ_i))
    sin_x: [Vec<f64>; BODIES],
    /// sin_y[i][j*modes + m] = sin((2m+1)(t_j + φ_i))
    sin_y: [Vec<f64>; BODIES],
}

impl Evaluator {
    pub fn new(params: &ProblemParams, modes: usize) -> Result<Self> {
        params.validate()?;
        if modes == 0 {
            return Err(Error::InvalidConfig("modes must be >= 1".into()));
        }
        if params.quad_nodes < 4 * modes {
            return Err(Error::InvalidConfig(format!(
                "quad_nodes = {} is below the anti-aliasing floor 4*modes = {}",
                params.quad_nodes,
                4 * modes
            )));
        }
        let nodes = params.quad_nodes;
        let mut sin_x: [Vec<f64>; BODIES] = Default::default();
        let mut sin_y: [Vec<f64>; BODIES] = Default::default();
        for i in 0..BODIES {
            let phase = 2.0 * PI * i as f64 / BODIES as f64;
            let mut sx = Vec::with_capacity(nodes * modes);
            let mut sy = Vec::with_capacity(nodes * modes);
            for j in 0..nodes {
                let t = 2.0 * PI * j as f64 / nodes as f64 + phase;
                for m in 0..modes {
                    sx.push((SymmetricLoop::x_wavenumber(m) * t).sin());
                }
                for m in 0..modes {
                    sy.push((SymmetricLoop::y_wavenumber(m) * t).sin());
                }
            }
            sin_x[i] = sx;
            sin_y[i] = sy;
        }
        Ok(Self {
            params: params.clone(),
            modes,
            sin_x,
            sin_y,
        })
    }

    pub fn params(&self) -> &ProblemParams {
        &self.params
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    fn check_loop(&self, curve: &SymmetricLoop) -> Result<()> {
        if curve.modes() != self.modes {
            return Err(Error::InvalidConfig(format!(
                "evaluator built for modes = {}, got loop with modes = {}",
                self.modes,
                curve.modes()
            )));
        }
        Ok(())
    }

    /// Positions of the three bodies at quadrature node j.
    #[inline]
    fn positions_at(&self, curve: &SymmetricLoop, j: usize) -> [[f64; 2]; BODIES] {
        let m = self.modes;
        let a = curve.a();
        let b = curve.b();
        let mut pos = [[0.0; 2]; BODIES];
        for (i, p) in pos.iter_mut().enumerate() {
            let sx = &self.sin_x[i][j * m..(j + 1) * m];
            let sy = &self.sin_y[i][j * m..(j + 1) * m];
            let mut x = 0.0;
            let mut y = 0.0;
            for k in 0..m {
                x += a[k] * sx[k];
                y += b[k] * sy[k];
            }
            p[0] = x;
            p[1] = y;
        }
        pos
    }

    /// Kinetic functional K = (3m/2)·π Σ k²(a_k² + b_k²), closed form.
    pub fn kinetic(&self, curve: &SymmetricLoop) -> f64 {
        let (_, dsq) = curve.parseval_norms();
        1.5 * self.params.mass * dsq
    }

    /// Potential functional V and the minimum mutual distance over the
    /// quadrature nodes.  Errors with `CollisionDetected` if any pairwise
    /// distance falls below the collision floor.
    pub fn potential(&self, curve: &SymmetricLoop) -> Result<(f64, f64)> {
        self.check_loop(curve)?;
        let nodes = self.params.quad_nodes;
        let alpha = self.params.alpha;
        let m2 = self.params.mass * self.params.mass;
        let floor = self.params.collision_floor;
        let w = 2.0 * PI / nodes as f64;
        let mut total = 0.0;
        let mut min_dist = f64::INFINITY;
        for j in 0..nodes {
            let pos = self.positions_at(curve, j);
            let mut u = 0.0;
            for i in 0..BODIES {
                for l in (i + 1)..BODIES {
                    let dx = pos[i][0] - pos[l][0];
                    let dy = pos[i][1] - pos[l][1];
                    let r2 = dx * dx + dy * dy;
                    let r = r2.sqrt();
                    if r < min_dist {
                        min_dist = r;
                    }
                    if r < floor {
                        return Err(Error::CollisionDetected {
                            min_distance: r,
                            floor,
                        });
                    }
                    u += m2 * r2.powf(-0.5 * alpha);
                }
            }
            total += w * u;
        }
        Ok((total, min_dist))
    }

    /// Scale envelope Φ_α(λ) = λ²K + λ^{−α}V, the action of the rescaled loop.
    pub fn scale_envelope(&self, curve: &SymmetricLoop, lambda: f64) -> Result<f64> {
        if lambda <= 0.0 {
            return Err(Error::InvalidConfig("lambda must be positive".into()));
        }
        let k = self.kinetic(curve);
        let (v, _) = self.potential(curve)?;
        Ok(lambda * lambda * k + lambda.powf(-self.params.alpha) * v)
    }

    /// Analytic gradients of K and V as flat coefficient vectors
    /// (x block then y block).  The b_1 entry is zeroed under nc1.
    pub fn gradients(&self, curve: &SymmetricLoop) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_loop(curve)?;
        let m = self.modes;
        let nodes = self.params.quad_nodes;
        let alpha = self.params.alpha;
        let mass = self.params.mass;
        let m2 = mass * mass;
        let floor = self.params.collision_floor;
        let w = 2.0 * PI / nodes as f64;

        let mut grad_k = vec![0.0; 2 * m];
        for idx in 0..m {
            let kx = SymmetricLoop::x_wavenumber(idx);
            let ky = SymmetricLoop::y_wavenumber(idx);
            grad_k[idx] = 3.0 * mass * PI * kx * kx * curve.a()[idx];
            grad_k[m + idx] = 3.0 * mass * PI * ky * ky * curve.b()[idx];
        }

        let mut grad_v = vec![0.0; 2 * m];
        for j in 0..nodes {
            let pos = self.positions_at(curve, j);
            // ∇_{x_i}U with ∇|r|^{−α} = −α|r|^{−α−2} r applied pairwise.
            let mut force = [[0.0; 2]; BODIES];
            for i in 0..BODIES {
                for l in (i + 1)..BODIES {
                    let dx = pos[i][0] - pos[l][0];
                    let dy = pos[i][1] - pos[l][1];
                    let r2 = dx * dx + dy * dy;
                    if r2.sqrt() < floor {
                        return Err(Error::CollisionDetected {
                            min_distance: r2.sqrt(),
                            floor,
                        });
                    }
                    let coeff = -alpha * m2 * r2.powf(-0.5 * alpha - 1.0);
                    force[i][0] += coeff * dx;
                    force[i][1] += coeff * dy;
                    force[l][0] -= coeff * dx;
                    force[l][1] -= coeff * dy;
                }
            }
            for (i, f) in force.iter().enumerate() {
                let sx = &self.sin_x[i][j * m..(j + 1) * m];
                let sy = &self.sin_y[i][j * m..(j + 1) * m];
                for idx in 0..m {
                    grad_v[idx] += w * f[0] * sx[idx];
                    grad_v[m + idx] += w * f[1] * sy[idx];
                }
            }
        }

        if curve.nc1() {
            grad_k[m] = 0.0;
            grad_v[m] = 0.0;
        }
        Ok((grad_k, grad_v))
    }

    /// Full functional report: K, V, F = K^p V^q, the optimal scale, the
    /// envelope constant, and all gradients assembled by the chain rule
    /// D F = pK^{p−1}V^q δK + qK^pV^{q−1} δV.
    pub fn report(&self, curve: &SymmetricLoop) -> Result<FunctionalReport> {
        let k = self.kinetic(curve);
        if k == 0.0 {
            return Err(Error::DegenerateLoop(
                "kinetic functional vanishes (constant loop)".into(),
            ));
        }
        let (v, min_distance) = self.potential(curve)?;
        let (grad_k, grad_v) = self.gradients(curve)?;
        let (p, q) = self.params.exponents();
        let f = k.powf(p) * v.powf(q);
        let wk = p * k.powf(p - 1.0) * v.powf(q);
        let wv = q * k.powf(p) * v.powf(q - 1.0);
        let grad_f = grad_k
            .iter()
            .zip(&grad_v)
            .map(|(gk, gv)| wk * gk + wv * gv)
            .collect();
        Ok(FunctionalReport {
            k,
            v,
            f,
            lambda_star: optimal_scale(k, v, self.params.alpha),
            c_alpha: envelope_constant(self.params.alpha),
            grad_f,
            grad_k,
            grad_v,
            min_distance,
        })
    }
}

/// One-shot kinetic functional.
pub fn kinetic(curve: &SymmetricLoop, params: &ProblemParams) -> Result<f64> {
    Ok(Evaluator::new(params, curve.modes())?.kinetic(curve))
}

/// One-shot potential functional with minimum mutual distance.
pub fn potential(curve: &SymmetricLoop, params: &ProblemParams) -> Result<(f64, f64)> {
    Evaluator::new(params, curve.modes())?.potential(curve)
}

/// One-shot scale envelope Φ_α(λ).
pub fn scale_envelope(curve: &SymmetricLoop, params: &ProblemParams, lambda: f64) -> Result<f64> {
    Evaluator::new(params, curve.modes())?.scale_envelope(curve, lambda)
}

/// One-shot gradients (grad_K, grad_V).
pub fn gradients(curve: &SymmetricLoop, params: &ProblemParams) -> Result<(Vec<f64>, Vec<f64>)> {
    Evaluator::new(params, curve.modes())?.gradients(curve)
}

/// One-shot full report for the scale-invariant functional.
pub fn scale_invariant_f(
    curve: &SymmetricLoop,
    params: &ProblemParams,
) -> Result<FunctionalReport> {
    Evaluator::new(params, curve.modes())?.report(curve)
}

pub(crate) fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}
