//! The unperturbed parabolic homoclinic orbit: `v = (τ³/3 + τ)/2`,
//! `r̃ = (τ²+1)/2`, `α̃ = 2 arctan τ`, `ỹ = 2τ/(τ²+1)`, `G̃ = 1`.

use num_complex::Complex64;
use rpc3bp_dynamics::RotatingState;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeparatrixError {
    #[error("asymptotic form requires |v| >= {min}, got {v}")]
    TooClose { v: f64, min: f64 },
    #[error("radius {0} is below the perihelion 1/2")]
    BelowPerihelion(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomoclinicPoint {
    pub v: f64,
    pub tau: f64,
    pub r_h: f64,
    pub y_h: f64,
    /// Unwrapped, in (−π, π).
    pub alpha_h: f64,
    pub g_h: f64,
}

impl HomoclinicPoint {
    /// Rotating-frame state at time `v` on the orbit whose angle at `v = 0` is `phase`.
    pub fn rotating_state(&self, g0: f64, phase: f64) -> RotatingState {
        RotatingState::new(self.r_h, phase + self.alpha_h - g0 * g0 * g0 * self.v, self.y_h, self.g_h)
    }
}

/// Real root of `τ³/3 + τ = 2v`, written as `τ = 6v/(A² + 1 + A⁻²)` with
/// `A³ = 3|v| + √(9v²+1)` (equal to `A − 1/A` without its cancellation),
/// polished by one Newton step.
pub fn tau_of_v(v: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let w = v.abs();
    let big = 3.0 * w + (9.0 * w * w + 1.0).sqrt();
    let a = big.cbrt();
    let mut tau = 6.0 * w / (a * a + 1.0 + 1.0 / (a * a));
    let f = tau * (tau * tau / 3.0 + 1.0) - 2.0 * w;
    tau -= f / (tau * tau + 1.0);
    tau.copysign(v)
}

/// `v(τ) = (τ³/3 + τ)/2`, valid for complex `τ`.
pub fn v_of_tau(tau: Complex64) -> Complex64 {
    (tau * tau * tau / 3.0 + tau) * 0.5
}

/// Complex times `v = ±i/3` where the continuation reaches `τ = ±i` and
/// `r̃_h` vanishes.
pub fn singularities() -> [Complex64; 2] {
    [Complex64::new(0.0, 1.0 / 3.0), Complex64::new(0.0, -1.0 / 3.0)]
}

pub fn homoclinic_state(v: f64) -> HomoclinicPoint {
    let tau = tau_of_v(v);
    let t2 = tau * tau;
    HomoclinicPoint {
        v,
        tau,
        r_h: 0.5 * (t2 + 1.0),
        y_h: 2.0 * tau / (t2 + 1.0),
        alpha_h: 2.0 * tau.atan(),
        g_h: 1.0,
    }
}

/// `v`-derivatives `(dr̃/dv, dα̃/dv, dỹ/dv)`.
pub fn homoclinic_derivatives(v: f64) -> [f64; 3] {
    let tau = tau_of_v(v);
    let s = 1.0 + tau * tau;
    [2.0 * tau / s, 4.0 / (s * s), 4.0 * (1.0 - tau * tau) / (s * s * s)]
}

/// Time on the outgoing (`sign > 0`) or incoming branch at which the orbit
/// reaches radius `r`.
pub fn v_of_radius(r: f64, sign: f64) -> Result<f64, SeparatrixError> {
    if !(r >= 0.5) {
        return Err(SeparatrixError::BelowPerihelion(r));
    }
    let tau = (2.0 * r - 1.0).sqrt().copysign(sign);
    Ok(0.5 * tau * (tau * tau / 3.0 + 1.0))
}

/// Radial momentum of the zero-energy Kepler orbit with `G̃ = 1` at radius `r`.
pub fn separatrix_y(r: f64, sign: f64) -> f64 {
    ((2.0 * r - 1.0).max(0.0).sqrt() / r).copysign(sign)
}

/// Section phase `x = φ₀ − α̃_h(v) + G₀³ v`.
pub fn section_phase(v: f64, phi0: f64, g0: f64) -> f64 {
    phi0 - homoclinic_state(v).alpha_h + g0 * g0 * g0 * v
}

/// `dx/dv = G₀³ − 1/r̃_h²`.
pub fn section_phase_rate(v: f64, g0: f64) -> f64 {
    let r = homoclinic_state(v).r_h;
    g0 * g0 * g0 - 1.0 / (r * r)
}

/// Leading constants of the large-|v| expansion, from `τ³ ≈ 6v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticConstants {
    /// `r̃_h ≈ c_r |v|^{2/3}`.
    pub c_r: f64,
    /// `|ỹ_h| ≈ c_y |v|^{−1/3}`.
    pub c_y: f64,
    /// `π − |α̃_h| ≈ c_alpha |v|^{−1/3}`.
    pub c_alpha: f64,
}

pub const ASYMPTOTIC_MIN_V: f64 = 10.0;

pub fn asymptotic_constants() -> AsymptoticConstants {
    let six_third = 6f64.cbrt();
    AsymptoticConstants { c_r: 0.5 * six_third * six_third, c_y: 2.0 / six_third, c_alpha: 2.0 / six_third }
}

/// Leading-order approximation of the orbit for `|v| ≥ 10`.
pub fn homoclinic_asymptotics(v: f64) -> Result<HomoclinicPoint, SeparatrixError> {
    if !(v.abs() >= ASYMPTOTIC_MIN_V) {
        return Err(SeparatrixError::TooClose { v, min: ASYMPTOTIC_MIN_V });
    }
    let k = asymptotic_constants();
    let w = v.abs();
    let s = v.signum();
    Ok(HomoclinicPoint {
        v,
        tau: (6.0 * v).cbrt(),
        r_h: k.c_r * w.powf(2.0 / 3.0),
        y_h: s * k.c_y * w.powf(-1.0 / 3.0),
        alpha_h: s * (std::f64::consts::PI - k.c_alpha * w.powf(-1.0 / 3.0)),
        g_h: 1.0,
    })
}

/// Empirical ratios `(r̃_h/v^{2/3}, ỹ_h v^{1/3}, (π−α̃_h) v^{1/3})` from the
/// exact orbit, which converge to [`asymptotic_constants`].
pub fn fitted_constants(v: f64) -> AsymptoticConstants {
    let h = homoclinic_state(v.abs());
    let w = v.abs();
    AsymptoticConstants {
        c_r: h.r_h / w.powf(2.0 / 3.0),
        c_y: h.y_h * w.cbrt(),
        c_alpha: (std::f64::consts::PI - h.alpha_h) * w.cbrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn tau_special_values() {
        assert_eq!(tau_of_v(0.0), 0.0);
        assert!((tau_of_v(2.0 / 3.0) - 1.0).abs() < 1e-15);
        assert!((tau_of_v(7.0 / 3.0) - 2.0).abs() < 1e-15);
        assert!((tau_of_v(-7.0 / 3.0) + 2.0).abs() < 1e-15);
    }

    #[test]
    fn tau_small_v_has_no_cancellation() {
        let v = 1e-12;
        assert!((tau_of_v(v) / (2.0 * v) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn turning_point_and_quarter_turn() {
        let h = homoclinic_state(0.0);
        assert_eq!((h.r_h, h.y_h, h.alpha_h), (0.5, 0.0, 0.0));
        let h = homoclinic_state(2.0 / 3.0);
        assert!((h.r_h - 1.0).abs() < 1e-15 && (h.y_h - 1.0).abs() < 1e-15);
        assert!((h.alpha_h - PI / 2.0).abs() < 1e-15);
        let h = homoclinic_state(-2.0 / 3.0);
        assert!((h.r_h - 1.0).abs() < 1e-15 && (h.y_h + 1.0).abs() < 1e-15);
        assert!((h.alpha_h + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for &v in &[-3.0, -0.4, 0.1, 1.0, 25.0] {
            let d = homoclinic_derivatives(v);
            let h = 1e-6;
            let a = homoclinic_state(v + h);
            let b = homoclinic_state(v - h);
            assert!((d[0] - (a.r_h - b.r_h) / (2.0 * h)).abs() < 1e-8);
            assert!((d[1] - (a.alpha_h - b.alpha_h) / (2.0 * h)).abs() < 1e-8);
            assert!((d[2] - (a.y_h - b.y_h) / (2.0 * h)).abs() < 1e-8);
            let hp = homoclinic_state(v);
            assert!((d[0] - hp.y_h).abs() < 1e-15);
            assert!((d[1] - 1.0 / (hp.r_h * hp.r_h)).abs() < 1e-14);
        }
    }

    #[test]
    fn radius_inversion() {
        for &v in &[0.3, 1.0, 170.0] {
            let h = homoclinic_state(v);
            assert!((v_of_radius(h.r_h, 1.0).unwrap() - v).abs() < 1e-12 * v.max(1.0));
            assert!((v_of_radius(h.r_h, -1.0).unwrap() + v).abs() < 1e-12 * v.max(1.0));
            assert!((separatrix_y(h.r_h, 1.0) - h.y_h).abs() < 1e-14);
        }
        assert!(v_of_radius(0.4, 1.0).is_err());
    }

    #[test]
    fn singularities_at_tau_equal_i() {
        let vi = v_of_tau(Complex64::new(0.0, 1.0));
        assert!((vi - singularities()[0]).norm() < 1e-16);
        let vm = v_of_tau(Complex64::new(0.0, -1.0));
        assert!((vm - singularities()[1]).norm() < 1e-16);
        let r = (Complex64::new(0.0, 1.0).powi(2) + 1.0) * 0.5;
        assert!(r.norm() < 1e-16);
    }

    #[test]
    fn asymptotic_constants_are_limits() {
        let k = asymptotic_constants();
        let mut prev = f64::INFINITY;
        for &v in &[10.0, 100.0, 1e3, 1e4, 1e5] {
            let f = fitted_constants(v);
            let err = (f.c_r / k.c_r - 1.0).abs() + (f.c_y / k.c_y - 1.0).abs() + (f.c_alpha / k.c_alpha - 1.0).abs();
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 1e-3);
        assert!((k.c_r - 1.6510).abs() < 1e-4);
        assert!(homoclinic_asymptotics(5.0).is_err());
        let a = homoclinic_asymptotics(-1e4).unwrap();
        let e = homoclinic_state(-1e4);
        assert!((a.r_h / e.r_h - 1.0).abs() < 1e-2 && a.y_h < 0.0 && a.alpha_h < 0.0);
    }

    #[test]
    fn asymptotic_relative_error_decreases() {
        let mut prev = f64::INFINITY;
        for &v in &[10.0, 30.0, 100.0, 300.0, 1000.0] {
            let a = homoclinic_asymptotics(v).unwrap();
            let e = homoclinic_state(v);
            let err = (a.r_h / e.r_h - 1.0).abs().max((a.y_h / e.y_h - 1.0).abs());
            assert!(err < prev);
            prev = err;
        }
    }

    proptest! {
        #[test]
        fn cubic_and_energy_identities(v in -1e6f64..1e6) {
            let h = homoclinic_state(v);
            let res = v - 0.5 * h.tau * (h.tau * h.tau / 3.0 + 1.0);
            prop_assert!(res.abs() <= 1e-14 * v.abs().max(1.0));
            let e = 0.5 * h.y_h * h.y_h + 1.0 / (2.0 * h.r_h * h.r_h) - 1.0 / h.r_h;
            prop_assert!(e.abs() <= 1e-14 / h.r_h);
        }

        #[test]
        fn symmetries(v in -1e3f64..1e3) {
            let a = homoclinic_state(v);
            let b = homoclinic_state(-v);
            prop_assert_eq!(a.r_h, b.r_h);
            prop_assert_eq!(a.y_h, -b.y_h);
            prop_assert_eq!(a.alpha_h, -b.alpha_h);
        }

        #[test]
        fn tau_strictly_increasing(v in -1e4f64..1e4, dv in 1e-6f64..1.0) {
            prop_assert!(tau_of_v(v + dv) > tau_of_v(v));
        }
    }
}
