//! Cartesian, polar and rescaled rotating charts.
//!
//! The polar angle `α` is measured from the direction opposite to `q`'s
//! positive x-axis (`α = arg q + π`), so that with `φ = α − t` the primary
//! of mass `1 − μ`, located at `−μ q₀(t)`, sits at `φ = 0`.

use serde::{Deserialize, Serialize};

use crate::potential::{potential_v_real, PotentialCoeffs};
use crate::{DynError, Params};

const COLLISION_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartesianState {
    pub q: [f64; 2],
    pub p: [f64; 2],
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarState {
    pub r: f64,
    pub alpha: f64,
    pub y: f64,
    pub g: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotatingState {
    pub r_tilde: f64,
    pub phi: f64,
    pub y_tilde: f64,
    pub g_tilde: f64,
}

impl RotatingState {
    pub fn new(r_tilde: f64, phi: f64, y_tilde: f64, g_tilde: f64) -> Self {
        RotatingState { r_tilde, phi, y_tilde, g_tilde }
    }
    pub fn to_array(self) -> [f64; 4] {
        [self.r_tilde, self.phi, self.y_tilde, self.g_tilde]
    }
    pub fn from_array(a: [f64; 4]) -> Self {
        RotatingState::new(a[0], a[1], a[2], a[3])
    }
}

pub fn cartesian_to_polar(s: &CartesianState) -> PolarState {
    let [x, y] = s.q;
    let r = x.hypot(y);
    PolarState {
        r,
        alpha: (-y).atan2(-x),
        y: (x * s.p[0] + y * s.p[1]) / r,
        g: x * s.p[1] - y * s.p[0],
        t: s.t,
    }
}

pub fn polar_to_cartesian(s: &PolarState) -> CartesianState {
    let (sa, ca) = s.alpha.sin_cos();
    let er = [-ca, -sa];
    let et = [sa, -ca];
    let vt = s.g / s.r;
    CartesianState {
        q: [s.r * er[0], s.r * er[1]],
        p: [s.y * er[0] + vt * et[0], s.y * er[1] + vt * et[1]],
        t: s.t,
    }
}

pub fn polar_to_rotating(s: &PolarState, g0: f64) -> RotatingState {
    RotatingState {
        r_tilde: s.r / (g0 * g0),
        phi: s.alpha - s.t,
        y_tilde: s.y * g0,
        g_tilde: s.g / g0,
    }
}

/// Inverse of [`polar_to_rotating`] at physical time `t`.
pub fn rotating_to_polar(s: &RotatingState, t: f64, g0: f64) -> PolarState {
    PolarState {
        r: s.r_tilde * g0 * g0,
        alpha: s.phi + t,
        y: s.y_tilde / g0,
        g: s.g_tilde * g0,
        t,
    }
}

fn guard(d: f64) -> Result<f64, DynError> {
    if !(d > COLLISION_EPS) {
        return Err(DynError::Collision { r: d, limit: COLLISION_EPS });
    }
    Ok(d)
}

/// `‖p‖²/2 − (1−μ)/‖q+μq₀(t)‖ − μ/‖q−(1−μ)q₀(t)‖`.
pub fn hamiltonian_cartesian(s: &CartesianState, p: &Params) -> Result<f64, DynError> {
    let mu = p.mu;
    let (st, ct) = s.t.sin_cos();
    let d1 = guard((s.q[0] + mu * ct).hypot(s.q[1] + mu * st))?;
    let kin = 0.5 * (s.p[0] * s.p[0] + s.p[1] * s.p[1]);
    let light = if mu > 0.0 {
        mu / guard((s.q[0] - (1.0 - mu) * ct).hypot(s.q[1] - (1.0 - mu) * st))?
    } else {
        0.0
    };
    Ok(kin - (1.0 - mu) / d1 - light)
}

pub fn hamiltonian_polar(s: &PolarState, p: &Params) -> Result<f64, DynError> {
    let mu = p.mu;
    let c = (s.alpha - s.t).cos();
    let r = s.r;
    let d1 = guard((r * r - 2.0 * mu * r * c + mu * mu).max(0.0).sqrt())?;
    let light = if mu > 0.0 {
        mu / guard((r * r + 2.0 * (1.0 - mu) * r * c + (1.0 - mu) * (1.0 - mu)).max(0.0).sqrt())?
    } else {
        0.0
    };
    Ok(0.5 * s.y * s.y + s.g * s.g / (2.0 * r * r) - (1.0 - mu) / d1 - light)
}

/// Jacobi constant `𝒥 = H − G`.
pub fn jacobi_constant(s: &PolarState, p: &Params) -> Result<f64, DynError> {
    Ok(hamiltonian_polar(s, p)? - s.g)
}

/// Rescaled rotating Hamiltonian `𝓗 = ỹ²/2 − G₀³G̃ + G̃²/(2r̃²) − 1/r̃ − V`.
pub fn hamiltonian_rotating(s: &RotatingState, p: &Params) -> Result<f64, DynError> {
    let limit = p.primary_radius();
    if !(s.r_tilde > limit) {
        return Err(DynError::Collision { r: s.r_tilde, limit });
    }
    let r = s.r_tilde;
    let v = potential_v_real(r, s.phi.cos(), &PotentialCoeffs::new(p));
    Ok(0.5 * s.y_tilde * s.y_tilde - p.g0_cubed() * s.g_tilde + s.g_tilde * s.g_tilde / (2.0 * r * r) - 1.0 / r - v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn circular_two_body_value() {
        let p = Params::new(0.0, 2.0).unwrap();
        let s = CartesianState { q: [1.0, 0.0], p: [0.0, 1.0], t: 0.0 };
        assert!((hamiltonian_cartesian(&s, &p).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn equal_masses_at_rest() {
        let p = Params::new(0.5, 2.0).unwrap();
        let s = CartesianState { q: [0.0, 10.0], p: [0.0, 0.0], t: 0.0 };
        let expect = -0.5 / 0.5f64.hypot(10.0) - 0.5 / (-0.5f64).hypot(10.0);
        assert!((hamiltonian_cartesian(&s, &p).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn heavy_primary_at_zero_rotating_angle() {
        // The heavy primary is at −μq₀(t); its polar angle minus t must be 0 mod 2π.
        let mu = 0.3;
        let t = 0.7f64;
        let s = CartesianState { q: [-mu * t.cos() * 5.0, -mu * t.sin() * 5.0], p: [0.0, 0.0], t };
        let ps = cartesian_to_polar(&s);
        let phi = (ps.alpha - t).rem_euclid(std::f64::consts::TAU);
        assert!(phi.min(std::f64::consts::TAU - phi) < 1e-14);
    }

    #[test]
    fn collision_is_rejected() {
        let p = Params::new(0.3, 2.0).unwrap();
        let s = CartesianState { q: [-0.3, 0.0], p: [0.0, 0.0], t: 0.0 };
        assert!(hamiltonian_cartesian(&s, &p).is_err());
    }

    proptest! {
        #[test]
        fn chart_round_trips(x in -5.0f64..5.0, y in -5.0f64..5.0, px in -2.0f64..2.0, py in -2.0f64..2.0,
                             t in -10.0f64..10.0, g0 in 1.1f64..4.0) {
            prop_assume!(x.hypot(y) > 0.1);
            let c = CartesianState { q: [x, y], p: [px, py], t };
            let pol = cartesian_to_polar(&c);
            let back = polar_to_cartesian(&pol);
            for k in 0..2 {
                prop_assert!((back.q[k] - c.q[k]).abs() < 1e-12);
                prop_assert!((back.p[k] - c.p[k]).abs() < 1e-12);
            }
            let rot = polar_to_rotating(&pol, g0);
            let pol2 = rotating_to_polar(&rot, t, g0);
            prop_assert!((pol2.r - pol.r).abs() < 1e-12 * pol.r.max(1.0));
            prop_assert!((pol2.alpha - pol.alpha).abs() < 1e-12);
            prop_assert!((pol2.y - pol.y).abs() < 1e-12);
            prop_assert!((pol2.g - pol.g).abs() < 1e-12);
        }

        #[test]
        fn hamiltonians_agree_across_charts(x in -8.0f64..8.0, y in -8.0f64..8.0, px in -1.0f64..1.0,
                                            py in -1.0f64..1.0, t in -5.0f64..5.0, mu in 0.0f64..0.5, g0 in 1.1f64..3.0) {
            let p = Params::new(mu, g0).unwrap();
            prop_assume!(x.hypot(y) > 2.0 * p.collision_radius() * g0 * g0 + 0.1);
            let c = CartesianState { q: [x, y], p: [px, py], t };
            let pol = cartesian_to_polar(&c);
            let hc = hamiltonian_cartesian(&c, &p).unwrap();
            let hp = hamiltonian_polar(&pol, &p).unwrap();
            prop_assert!((hc - hp).abs() < 1e-12);
            let rot = polar_to_rotating(&pol, g0);
            let hr = hamiltonian_rotating(&rot, &p).unwrap();
            let j = jacobi_constant(&pol, &p).unwrap();
            prop_assert!((hr - g0 * g0 * j).abs() < 1e-11 * (1.0 + hr.abs()));
        }
    }
}
