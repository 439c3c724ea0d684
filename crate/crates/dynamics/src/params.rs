use serde::{Deserialize, Serialize};

use crate::DynError;

/// Mass ratio and angular-momentum level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub mu: f64,
    pub g0: f64,
}

impl Params {
    pub fn new(mu: f64, g0: f64) -> Result<Self, DynError> {
        let p = Params { mu, g0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), DynError> {
        if !(self.mu.is_finite() && (0.0..=0.5).contains(&self.mu)) {
            return Err(DynError::InvalidParams(format!("mu = {} outside [0, 1/2]", self.mu)));
        }
        if !(self.g0.is_finite() && self.g0 > 1.0) {
            return Err(DynError::InvalidParams(format!("g0 = {} must exceed 1", self.g0)));
        }
        Ok(())
    }

    pub fn g0_cubed(&self) -> f64 {
        self.g0 * self.g0 * self.g0
    }

    /// Radius `max(μ, 1−μ)/G₀²` of the circle traced by the far primary.
    pub fn primary_radius(&self) -> f64 {
        self.mu.max(1.0 - self.mu) / (self.g0 * self.g0)
    }

    /// States with `r̃` below this radius are rejected by the vector field.
    pub fn collision_radius(&self) -> f64 {
        2.0 * self.primary_radius()
    }

    /// Energy level `𝓗 = −G₀³` of the rescaled rotating Hamiltonian.
    pub fn energy_level(&self) -> f64 {
        -self.g0_cubed()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_floor() {
        assert!(Params::new(0.3, 2.0).is_ok());
        assert!(Params::new(0.6, 2.0).is_err());
        assert!(Params::new(-0.1, 2.0).is_err());
        assert!(Params::new(0.2, 1.0).is_err());
        assert!(Params::new(0.5, 1.5).is_ok());
    }

    #[test]
    fn radii() {
        let p = Params::new(0.3, 2.0).unwrap();
        assert!((p.primary_radius() - 0.175).abs() < 1e-15);
        assert!((p.collision_radius() - 0.35).abs() < 1e-15);
    }
}
