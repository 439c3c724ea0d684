use serde::{Deserialize, Serialize};

use crate::{DynError, Params};

/// Local chart validity bound.
pub const MCGEHEE_X_CUTOFF: f64 = 0.5;

/// `x = (2/r)^{1/2}`, radial momentum `y`, angle `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McGeheeState {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl McGeheeState {
    pub fn from_radius(r: f64, y: f64, theta: f64) -> Self {
        McGeheeState { x: (2.0 / r).sqrt(), y, theta }
    }
    pub fn radius(&self) -> f64 {
        2.0 / (self.x * self.x)
    }
}

/// `λ(θ; μ) = (3/32) μ (1−μ) (1 − 3 cos²θ)`.
pub fn lambda_mcgehee(theta: f64, mu: f64) -> f64 {
    let c = theta.cos();
    3.0 / 32.0 * mu * (1.0 - mu) * (1.0 - 3.0 * c * c)
}

/// Truncated local field `(dx/dθ, dy/dθ, dθ/dθ)` near `x = 0`; the tenth
/// order remainder is dropped.
pub fn mcgehee_local_field(m: &McGeheeState, jacobi: f64, p: &Params) -> Result<[f64; 3], DynError> {
    if !(m.x >= 0.0 && m.x <= MCGEHEE_X_CUTOFF) {
        return Err(DynError::ChartCutoff { x: m.x, cutoff: MCGEHEE_X_CUTOFF });
    }
    let k = jacobi - p.mu * (1.0 - p.mu);
    let x = m.x;
    let y = m.y;
    let x3 = x * x * x;
    let x4 = x3 * x;
    let x6 = x3 * x3;
    let x7 = x6 * x;
    let x8 = x4 * x4;
    let dx = x3 * y / 4.0 + k * x7 * y / 32.0;
    let dy = x4 / 4.0 - k * k * x6 / 32.0 + 3.0 * k * x6 * y * y / 16.0 - lambda_mcgehee(m.theta, p.mu) * x8;
    Ok([dx, dy, 1.0])
}
