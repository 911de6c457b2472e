//! Planar 2π-periodic loops in the figure-eight symmetry class.
//!
//! The class is spanned by a truncated Fourier sine basis in which the
//! x-component carries only even wavenumbers k = 2, 4, …, 2M and the
//! y-component only odd wavenumbers k = 1, 3, …, 2M−1.  This basis enforces
//! semi-antiperiodicity (x(t+π) = x(t), y(t+π) = −y(t)) and reflection
//! symmetry about the y-axis centered at t = π/2 identically, pins the
//! self-intersection γ(0) = γ(π) = (0,0) to the origin, and gives x zero
//! mean over the period.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Planar point or vector.
pub type Vec2 = [f64; 2];

/// Loop in the figure-eight symmetry class, stored as Fourier sine
/// coefficients: `a[m]` multiplies `sin((2m+2) t)` in x and `b[m]`
/// multiplies `sin((2m+1) t)` in y, for m = 0 … modes−1.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricLoop {
    a: Vec<f64>,
    b: Vec<f64>,
    modes: usize,
    nc1: bool,
}

impl SymmetricLoop {
    /// Zero loop with the given truncation half-order.
    pub fn zeros(modes: usize, nc1: bool) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidConfig("modes must be >= 1".into()));
        }
        Ok(Self {
            a: vec![0.0; modes],
            b: vec![0.0; modes],
            modes,
            nc1,
        })
    }

    /// Build from explicit coefficient blocks (ascending wavenumber).
    /// With `nc1` set, the first y-harmonic must vanish.
    pub fn from_coefficients(a: Vec<f64>, b: Vec<f64>, nc1: bool) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::InvalidConfig(format!(
                "coefficient blocks must be nonempty and equal length, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        if nc1 && b[0] != 0.0 {
            return Err(Error::InvalidConfig(
                "nc1 requires the first y-harmonic b_1 = 0".into(),
            ));
        }
        let modes = a.len();
        Ok(Self { a, b, modes, nc1 })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn nc1(&self) -> bool {
        self.nc1
    }

    /// x-block coefficients a_k for k = 2, 4, …, 2M.
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// y-block coefficients b_k for k = 1, 3, …, 2M−1.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Wavenumber of the m-th x-coefficient.
    #[inline]
    pub fn x_wavenumber(m: usize) -> f64 {
        (2 * m + 2) as f64
    }

    /// Wavenumber of the m-th y-coefficient.
    #[inline]
    pub fn y_wavenumber(m: usize) -> f64 {
        (2 * m + 1) as f64
    }

    /// Number of scalar degrees of freedom in the flat coefficient vector.
    pub fn dof(&self) -> usize {
        2 * self.modes
    }

    /// Flat coefficient vector: x block then y block, ascending wavenumber.
    pub fn coefficient_vector(&self) -> Vec<f64> {
        let mut c = Vec::with_capacity(self.dof());
        c.extend_from_slice(&self.a);
        c.extend_from_slice(&self.b);
        c
    }

    /// Rebuild a loop of the same shape from a flat coefficient vector.
    /// The nc1 pin (b_1 = 0) is re-applied.
    pub fn with_coefficient_vector(&self, c: &[f64]) -> Self {
        assert_eq!(c.len(), self.dof(), "coefficient vector length mismatch");
        let mut out = self.clone();
        out.a.copy_from_slice(&c[..self.modes]);
        out.b.copy_from_slice(&c[self.modes..]);
        if out.nc1 {
            out.b[0] = 0.0;
        }
        out
    }

    pub fn set_a(&mut self, m: usize, value: f64) {
        self.a[m] = value;
    }

    pub fn set_b(&mut self, m: usize, value: f64) {
        if self.nc1 && m == 0 {
            return;
        }
        self.b[m] = value;
    }

    /// Homothetic copy λ·γ.
    pub fn scaled(&self, lambda: f64) -> Self {
        let mut out = self.clone();
        for v in out.a.iter_mut().chain(out.b.iter_mut()) {
            *v *= lambda;
        }
        out
    }

    /// Copy with a different truncation half-order; overlapping coefficients
    /// are kept, new ones are zero.  Used for warm starts across resolutions.
    pub fn resized(&self, modes: usize) -> Result<Self> {
        let mut out = Self::zeros(modes, self.nc1)?;
        let n = self.modes.min(modes);
        out.a[..n].copy_from_slice(&self.a[..n]);
        out.b[..n].copy_from_slice(&self.b[..n]);
        if out.nc1 {
            out.b[0] = 0.0;
        }
        Ok(out)
    }

    /// γ(t) = (Σ a_k sin(kt), Σ b_k sin(kt)).
    pub fn evaluate(&self, t: f64) -> Vec2 {
        let mut x = 0.0;
        let mut y = 0.0;
        for m in 0..self.modes {
            x += self.a[m] * (Self::x_wavenumber(m) * t).sin();
            y += self.b[m] * (Self::y_wavenumber(m) * t).sin();
        }
        [x, y]
    }

    /// γ'(t) = (Σ k a_k cos(kt), Σ k b_k cos(kt)).
    pub fn derivative(&self, t: f64) -> Vec2 {
        let mut x = 0.0;
        let mut y = 0.0;
        for m in 0..self.modes {
            let kx = Self::x_wavenumber(m);
            let ky = Self::y_wavenumber(m);
            x += kx * self.a[m] * (kx * t).cos();
            y += ky * self.b[m] * (ky * t).cos();
        }
        [x, y]
    }

    /// γ''(t) = (−Σ k² a_k sin(kt), −Σ k² b_k sin(kt)).
    pub fn second_derivative(&self, t: f64) -> Vec2 {
        let mut x = 0.0;
        let mut y = 0.0;
        for m in 0..self.modes {
            let kx = Self::x_wavenumber(m);
            let ky = Self::y_wavenumber(m);
            x -= kx * kx * self.a[m] * (kx * t).sin();
            y -= ky * ky * self.b[m] * (ky * t).sin();
        }
        [x, y]
    }

    /// (‖γ‖²_{L²}, ‖γ'‖²_{L²}) over [0, 2π] in closed form:
    /// π Σ (a_k² + b_k²) and π Σ k² (a_k² + b_k²).
    pub fn parseval_norms(&self) -> (f64, f64) {
        let mut sq = 0.0;
        let mut dsq = 0.0;
        for m in 0..self.modes {
            let kx = Self::x_wavenumber(m);
            let ky = Self::y_wavenumber(m);
            sq += self.a[m] * self.a[m] + self.b[m] * self.b[m];
            dsq += kx * kx * self.a[m] * self.a[m] + ky * ky * self.b[m] * self.b[m];
        }
        (PI * sq, PI * dsq)
    }

    /// Data for the reinforced Poincaré inequality ∫|γ|² ≤ ∫|γ'|² and its
    /// componentwise forms ∫x² ≤ ¼∫x'², ∫y² ≤ ∫y'² (1/9 under nc1).
    pub fn poincare_check(&self) -> PoincareReport {
        let mut x_sq = 0.0;
        let mut x_dsq = 0.0;
        let mut y_sq = 0.0;
        let mut y_dsq = 0.0;
        for m in 0..self.modes {
            let kx = Self::x_wavenumber(m);
            let ky = Self::y_wavenumber(m);
            x_sq += self.a[m] * self.a[m];
            x_dsq += kx * kx * self.a[m] * self.a[m];
            y_sq += self.b[m] * self.b[m];
            y_dsq += ky * ky * self.b[m] * self.b[m];
        }
        PoincareReport {
            lhs: PI * (x_sq + y_sq),
            rhs: PI * (x_dsq + y_dsq),
            x_component: (PI * x_sq, 0.25 * PI * x_dsq),
            y_component: (PI * y_sq, PI * y_dsq),
        }
    }

    /// Sample the four symmetry identities at uniform phases and report the
    /// worst deviation of each.  Loops built from this basis satisfy all
    /// four to machine precision; the check exists to validate externally
    /// constructed data and the basis closure itself.
    pub fn check_symmetries(&self, samples: usize, tol: f64) -> Result<SymmetryReport> {
        if samples < 8 {
            return Err(Error::InvalidConfig(format!(
                "symmetry check needs at least 8 samples, got {samples}"
            )));
        }
        if tol <= 0.0 {
            return Err(Error::InvalidConfig(
                "symmetry tolerance must be > 0".into(),
            ));
        }
        let mut report = SymmetryReport::default();
        for j in 0..samples {
            let t = 2.0 * PI * j as f64 / samples as f64;
            let g = self.evaluate(t);
            let g_pi = self.evaluate(t + PI);
            let g_plus = self.evaluate(PI / 2.0 + t);
            let g_minus = self.evaluate(PI / 2.0 - t);
            report.semi_antiperiodic_x = report.semi_antiperiodic_x.max((g_pi[0] - g[0]).abs());
            report.semi_antiperiodic_y = report.semi_antiperiodic_y.max((g_pi[1] + g[1]).abs());
            report.reflection_x = report.reflection_x.max((g_plus[0] + g_minus[0]).abs());
            report.reflection_y = report.reflection_y.max((g_plus[1] - g_minus[1]).abs());
        }
        report.tol = tol;
        Ok(report)
    }

    /// Uniform sampling of positions and velocities over [0, 2π).
    pub fn sample(&self, nodes: usize) -> Result<SampledCurve> {
        if nodes < 4 * self.modes {
            return Err(Error::InvalidConfig(format!(
                "need nodes >= 4*modes = {} to avoid aliasing, got {nodes}",
                4 * self.modes
            )));
        }
        let mut positions = Vec::with_capacity(nodes);
        let mut velocities = Vec::with_capacity(nodes);
        for j in 0..nodes {
            let t = 2.0 * PI * j as f64 / nodes as f64;
            positions.push(self.evaluate(t));
            velocities.push(self.derivative(t));
        }
        Ok(SampledCurve {
            nodes,
            positions,
            velocities,
        })
    }

    /// Serialize to the on-disk JSON schema.
    pub fn to_json(&self) -> Result<String> {
        let file = LoopFile {
            alpha_independent: LoopFields {
                modes: self.modes,
                nc1: self.nc1,
                a: self.a.clone(),
                b: self.b.clone(),
            },
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Deserialize from the on-disk JSON schema, validating invariants.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: LoopFile = serde_json::from_str(text)?;
        let f = file.alpha_independent;
        if f.a.len() != f.modes || f.b.len() != f.modes {
            return Err(Error::InvalidConfig(format!(
                "loop file declares modes = {} but has {} x and {} y coefficients",
                f.modes,
                f.a.len(),
                f.b.len()
            )));
        }
        Self::from_coefficients(f.a, f.b, f.nc1)
    }
}

/// On-disk schema: the coefficient data is independent of the potential
/// exponent, hence the top-level key.
#[derive(Serialize, Deserialize)]
struct LoopFile {
    #[serde(rename = "alpha-independent")]
    alpha_independent: LoopFields,
}

#[derive(Serialize, Deserialize)]
struct LoopFields {
    modes: usize,
    nc1: bool,
    a: Vec<f64>,
    b: Vec<f64>,
}

/// Worst sampled deviation of each symmetry identity.
#[derive(Debug, Clone, Default)]
pub struct SymmetryReport {
    /// max |x(t+π) − x(t)|
    pub semi_antiperiodic_x: f64,
    /// max |y(t+π) + y(t)|
    pub semi_antiperiodic_y: f64,
    /// max |x(π/2+t) + x(π/2−t)|
    pub reflection_x: f64,
    /// max |y(π/2+t) − y(π/2−t)|
    pub reflection_y: f64,
    pub tol: f64,
}

impl SymmetryReport {
    pub fn semi_antiperiodic_ok(&self) -> bool {
        self.semi_antiperiodic_x <= self.tol && self.semi_antiperiodic_y <= self.tol
    }

    pub fn reflection_ok(&self) -> bool {
        self.reflection_x <= self.tol && self.reflection_y <= self.tol
    }

    pub fn all_ok(&self) -> bool {
        self.semi_antiperiodic_ok() && self.reflection_ok()
    }
}

/// L² data for the reinforced Poincaré inequality; each lhs must not
/// exceed its rhs for any loop in the class.
#[derive(Debug, Clone)]
pub struct PoincareReport {
    /// ∫|γ|²
    pub lhs: f64,
    /// ∫|γ'|²
    pub rhs: f64,
    /// (∫x², ¼∫x'²)
    pub x_component: (f64, f64),
    /// (∫y², ∫y'²)
    pub y_component: (f64, f64),
}

impl PoincareReport {
    pub fn holds(&self) -> bool {
        let eps = 1e-12;
        self.lhs <= self.rhs * (1.0 + eps) + eps
            && self.x_component.0 <= self.x_component.1 * (1.0 + eps) + eps
            && self.y_component.0 <= self.y_component.1 * (1.0 + eps) + eps
    }
}

/// Uniformly sampled positions and velocities of a loop over one period.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    pub nodes: usize,
    pub positions: Vec<Vec2>,
    pub velocities: Vec<Vec2>,
}

/// The explicit member (sin 2t, sin t) of the symmetry class, scaled.
pub fn seed_loop(modes: usize, amplitude: f64) -> Result<SymmetricLoop> {
    let mut curve = SymmetricLoop::zeros(modes, false)?;
    curve.set_a(0, amplitude);
    curve.set_b(0, amplitude);
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn seed() -> SymmetricLoop {
        seed_loop(2, 1.0).unwrap()
    }

    #[test]
    fn evaluate_seed_examples() {
        let s = seed();
        // t = π/2 → (sin π, sin π/2) = (0, 1)
        let g = s.evaluate(PI / 2.0);
        assert_relative_eq!(g[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(g[1], 1.0, epsilon = 1e-15);
        // sine basis vanishes at 0
        assert_eq!(s.evaluate(0.0), [0.0, 0.0]);
        // t = π/4 → (1, √2/2)
        let g = s.evaluate(PI / 4.0);
        assert_relative_eq!(g[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(g[1], 0.5_f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn derivative_seed_examples() {
        let s = seed();
        let d0 = s.derivative(0.0);
        assert_relative_eq!(d0[0], 2.0, epsilon = 1e-15);
        assert_relative_eq!(d0[1], 1.0, epsilon = 1e-15);
        let dh = s.derivative(PI / 2.0);
        assert_relative_eq!(dh[0], -2.0, epsilon = 1e-14);
        assert!(dh[1].abs() < 1e-15);
        let zero = SymmetricLoop::zeros(3, false).unwrap();
        assert_eq!(zero.derivative(1.234), [0.0, 0.0]);
    }

    #[test]
    fn node_at_origin_is_exact() {
        let s = seed();
        assert_eq!(s.evaluate(0.0), [0.0, 0.0]);
        let g_pi = s.evaluate(PI);
        assert!(g_pi[0].abs() < 1e-15 && g_pi[1].abs() < 1e-15);
    }

    #[test]
    fn x_has_zero_mean() {
        let mut curve = SymmetricLoop::zeros(3, false).unwrap();
        curve.set_a(0, 0.9);
        curve.set_a(2, -0.4);
        curve.set_b(0, 1.0);
        let nodes = 64;
        let mean: f64 = (0..nodes)
            .map(|j| curve.evaluate(2.0 * PI * j as f64 / nodes as f64)[0])
            .sum::<f64>()
            / nodes as f64;
        assert!(mean.abs() < 1e-14);
    }

    #[test]
    fn symmetries_pass_for_basis_loops() {
        let s = seed();
        let rep = s.check_symmetries(64, 1e-12).unwrap();
        assert!(rep.all_ok(), "{rep:?}");
        let zero = SymmetricLoop::zeros(4, false).unwrap();
        assert!(zero.check_symmetries(64, 1e-12).unwrap().all_ok());
    }

    #[test]
    fn cosine_contamination_breaks_semi_antiperiodicity() {
        // Hand-sample x(t) = cos t against the (A_x) identity; the basis
        // itself cannot represent it, so check the identity directly.
        let samples = 64;
        let mut worst: f64 = 0.0;
        for j in 0..samples {
            let t = 2.0 * PI * j as f64 / samples as f64;
            let x = t.cos();
            let x_pi = (t + PI).cos();
            worst = worst.max((x_pi - x).abs());
        }
        assert!(
            worst > 1.0,
            "cos t must violate x(t+π) = x(t), worst = {worst}"
        );
    }

    #[test]
    fn symmetry_check_rejects_small_sample_counts() {
        assert!(matches!(
            seed().check_symmetries(4, 1e-12),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn parseval_examples() {
        let (sq, dsq) = seed().parseval_norms();
        assert_relative_eq!(sq, 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(dsq, 5.0 * PI, max_relative = 1e-14);

        let zero = SymmetricLoop::zeros(5, false).unwrap();
        assert_eq!(zero.parseval_norms(), (0.0, 0.0));

        // {b_3 = 2} alone → (4π, 36π)
        let mut only_b3 = SymmetricLoop::zeros(2, false).unwrap();
        only_b3.set_b(1, 2.0);
        let (sq, dsq) = only_b3.parseval_norms();
        assert_relative_eq!(sq, 4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(dsq, 36.0 * PI, max_relative = 1e-14);
    }

    #[test]
    fn parseval_matches_quadrature() {
        // Trapezoid on a uniform periodic grid is exact for trig
        // polynomials once the node count clears the aliasing floor.
        let mut curve = SymmetricLoop::zeros(3, false).unwrap();
        curve.set_a(0, 0.7);
        curve.set_a(2, -0.2);
        curve.set_b(0, 1.1);
        curve.set_b(1, 0.4);
        let nodes = 4 * curve.modes() + 1;
        let sampled = curve.sample(nodes).unwrap();
        let w = 2.0 * PI / nodes as f64;
        let quad_sq: f64 = sampled
            .positions
            .iter()
            .map(|p| w * (p[0] * p[0] + p[1] * p[1]))
            .sum();
        let quad_dsq: f64 = sampled
            .velocities
            .iter()
            .map(|v| w * (v[0] * v[0] + v[1] * v[1]))
            .sum();
        let (sq, dsq) = curve.parseval_norms();
        assert_relative_eq!(sq, quad_sq, max_relative = 1e-10);
        assert_relative_eq!(dsq, quad_dsq, max_relative = 1e-10);
    }

    #[test]
    fn poincare_saturation_on_lowest_modes() {
        let rep = seed().poincare_check();
        assert_relative_eq!(rep.lhs, 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(rep.rhs, 5.0 * PI, max_relative = 1e-14);
        // k = 2 saturates the x constant 1/4, k = 1 the y constant 1.
        assert_relative_eq!(rep.x_component.0, rep.x_component.1, max_relative = 1e-14);
        assert_relative_eq!(rep.y_component.0, rep.y_component.1, max_relative = 1e-14);

        let mut only_a4 = SymmetricLoop::zeros(2, false).unwrap();
        only_a4.set_a(1, 1.0);
        let rep = only_a4.poincare_check();
        assert_relative_eq!(rep.x_component.0, PI, max_relative = 1e-14);
        assert_relative_eq!(rep.x_component.1, 4.0 * PI, max_relative = 1e-14);
    }

    #[test]
    fn nc1_strengthens_y_constant_to_one_ninth() {
        let mut curve = SymmetricLoop::zeros(4, true).unwrap();
        curve.set_b(1, 0.8); // k = 3
        curve.set_b(3, 0.1); // k = 7
        curve.set_a(0, 0.5);
        let rep = curve.poincare_check();
        assert!(rep.y_component.0 <= rep.y_component.1 / 9.0 + 1e-14);
    }

    #[test]
    fn nc1_pins_first_y_harmonic() {
        let mut curve = SymmetricLoop::zeros(3, true).unwrap();
        curve.set_b(0, 5.0);
        assert_eq!(curve.b()[0], 0.0);
        let c = curve.coefficient_vector();
        let rebuilt = curve.with_coefficient_vector(&c);
        assert_eq!(rebuilt.b()[0], 0.0);
        assert!(SymmetricLoop::from_coefficients(vec![1.0], vec![1.0], true).is_err());
    }

    #[test]
    fn coefficient_vector_round_trip() {
        let mut curve = SymmetricLoop::zeros(3, false).unwrap();
        curve.set_a(1, 0.25);
        curve.set_b(2, -0.5);
        let c = curve.coefficient_vector();
        assert_eq!(c.len(), 6);
        assert_eq!(curve.with_coefficient_vector(&c), curve);
    }

    #[test]
    fn json_round_trip_preserves_bits() {
        let mut curve = SymmetricLoop::zeros(3, false).unwrap();
        curve.set_a(0, 0.12345678901234567);
        curve.set_b(1, -1.0 / 3.0);
        let text = curve.to_json().unwrap();
        assert!(text.contains("\"alpha-independent\""));
        assert!(text.contains("\"modes\""));
        let back = SymmetricLoop::from_json(&text).unwrap();
        assert_eq!(back, curve);
    }

    #[test]
    fn json_rejects_mismatched_lengths() {
        let text = r#"{"alpha-independent": {"modes": 3, "nc1": false, "a": [1.0], "b": [0.0, 0.0, 0.0]}}"#;
        assert!(SymmetricLoop::from_json(text).is_err());
    }

    #[test]
    fn sample_enforces_aliasing_floor() {
        let curve = SymmetricLoop::zeros(4, false).unwrap();
        assert!(curve.sample(15).is_err());
        assert!(curve.sample(16).is_ok());
    }

    #[test]
    fn resized_keeps_overlapping_coefficients() {
        let mut curve = SymmetricLoop::zeros(3, false).unwrap();
        curve.set_a(0, 0.5);
        curve.set_b(2, -0.25);
        let grown = curve.resized(6).unwrap();
        assert_eq!(grown.modes(), 6);
        assert_eq!(grown.a()[0], 0.5);
        assert_eq!(grown.b()[2], -0.25);
        assert_eq!(grown.a()[5], 0.0);
        let shrunk = grown.resized(2).unwrap();
        assert_eq!(shrunk.a()[0], 0.5);
        assert_eq!(shrunk.b().len(), 2);
        // evaluation is unchanged where modes survive
        let t = 1.1;
        let g = curve.evaluate(t);
        let gg = grown.evaluate(t);
        assert_relative_eq!(g[0], gg[0], epsilon = 1e-15);
        assert_relative_eq!(g[1], gg[1], epsilon = 1e-15);
    }

    fn arbitrary_loop(modes: usize) -> impl Strategy<Value = SymmetricLoop> {
        let coeff = prop::collection::vec(-2.0..2.0f64, modes);
        (coeff.clone(), coeff)
            .prop_map(move |(a, b)| SymmetricLoop::from_coefficients(a, b, false).unwrap())
    }

    proptest! {
        #[test]
        fn basis_closure_under_symmetries(curve in arbitrary_loop(6)) {
            let rep = curve.check_symmetries(256, 1e-12).unwrap();
            prop_assert!(rep.all_ok(), "{:?}", rep);
        }

        #[test]
        fn poincare_holds_for_random_loops(curve in arbitrary_loop(8)) {
            prop_assert!(curve.poincare_check().holds());
        }

        #[test]
        fn parseval_consistent_with_quadrature(curve in arbitrary_loop(5)) {
            let nodes = 4 * curve.modes() + 1;
            let sampled = curve.sample(nodes).unwrap();
            let w = 2.0 * PI / nodes as f64;
            let quad_sq: f64 = sampled.positions.iter()
                .map(|p| w * (p[0] * p[0] + p[1] * p[1])).sum();
            let (sq, _) = curve.parseval_norms();
            prop_assert!((sq - quad_sq).abs() <= 1e-10 * sq.max(1.0));
        }
    }
}
