//! Leading-order closed forms for the coefficients and the splitting
//! quantities derived from them.

use std::f64::consts::{PI, SQRT_2};

use rpc3bp_dynamics::Params;
use rpc3bp_separatrix::{homoclinic_state, section_phase};

use crate::MelnikovError;

fn damping(g0: f64) -> f64 {
    (-g0.powi(3) / 3.0).exp()
}

/// Leading terms of `L^[1]` and `L^[2]`.
///
/// `L^[2]` carries a positive sign: the contour series and the real-line
/// quadrature both give `L^[2] > 0` for `0 < μ ≤ 1/2`.
pub fn melnikov_coeff_asymptotic(l: i64, p: &Params) -> Result<f64, MelnikovError> {
    let (mu, g0) = (p.mu, p.g0);
    let base = mu * (1.0 - mu) * PI.sqrt();
    match l {
        1 => Ok(-base * (1.0 - 2.0 * mu) / (4.0 * SQRT_2) * g0.powf(-1.5) * damping(g0)),
        2 => Ok(2.0 * base * g0.sqrt() * damping(g0).powi(2)),
        _ => Err(MelnikovError::Unsupported(l)),
    }
}

fn check_v(v: f64) -> Result<(), MelnikovError> {
    if v > 0.0 {
        Ok(())
    } else {
        Err(MelnikovError::Domain { message: "distance needs v > 0".into(), value: v })
    }
}

/// Leading-order distance between the invariant curves at `v`.
pub fn predicted_distance(v: f64, phi0: f64, p: &Params) -> Result<f64, MelnikovError> {
    check_v(v)?;
    let (mu, g0) = (p.mu, p.g0);
    let h = homoclinic_state(v);
    let x = section_phase(v, phi0, g0);
    let e = damping(g0);
    let first = (1.0 - 2.0 * mu) / (2.0 * SQRT_2) * g0.powf(1.5) * e * x.sin();
    let second = 8.0 * g0.powf(3.5) * e * e * (2.0 * x).sin();
    Ok(mu * (1.0 - mu) * PI.sqrt() * (first + second) / h.y_h)
}

/// First-harmonic amplitude of the predicted distance at `v`.
pub fn predicted_first_harmonic_amplitude(v: f64, p: &Params) -> Result<f64, MelnikovError> {
    check_v(v)?;
    let (mu, g0) = (p.mu, p.g0);
    let amp = mu * (1.0 - mu) * PI.sqrt() * (1.0 - 2.0 * mu) / (2.0 * SQRT_2) * g0.powf(1.5) * damping(g0);
    Ok(amp / homoclinic_state(v).y_h)
}

/// `f(x) = (1−2μ) sin x + 16√2 G₀² e^{−G₀³/3} sin 2x`.
pub fn first_order_zero_function(x: f64, p: &Params) -> f64 {
    (1.0 - 2.0 * p.mu) * x.sin() + tangency_deviation_scale(p.g0) * (2.0 * x).sin()
}

pub fn predicted_lobe_area(p: &Params) -> f64 {
    let (mu, g0) = (p.mu, p.g0);
    let e = damping(g0);
    mu * (1.0 - mu) * PI.sqrt() * ((1.0 - 2.0 * mu) / SQRT_2 * g0.powf(-1.5) * e + 8.0 * g0.sqrt() * e * e)
}

/// `16√2 G₀² e^{−G₀³/3}`, the offset of the tangency curve from `μ = 1/2`.
pub fn tangency_deviation_scale(g0: f64) -> f64 {
    16.0 * SQRT_2 * g0 * g0 * damping(g0)
}

/// `μ*(G₀) = 1/2 − 16√2 G₀² e^{−G₀³/3}`; values outside `(0, 1/2)` are reported
/// as a domain error carrying the computed number.
pub fn predicted_tangency_mu(g0: f64) -> Result<f64, MelnikovError> {
    if !(g0 > 1.0) {
        return Err(MelnikovError::Invalid(format!("g0 = {g0} must exceed 1")));
    }
    let mu = 0.5 - tangency_deviation_scale(g0);
    if mu > 0.0 {
        Ok(mu)
    } else {
        Err(MelnikovError::Domain { message: format!("predicted tangency mass ratio outside (0, 1/2] at g0 = {g0}"), value: mu })
    }
}

/// `10√π G₀^{1/2} e^{−2G₀³/3}`.
pub fn predicted_tangency_lobe_area(g0: f64) -> f64 {
    10.0 * PI.sqrt() * g0.sqrt() * damping(g0).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_asymptotics() {
        let p = Params::new(0.25, 3.0).unwrap();
        let l1 = melnikov_coeff_asymptotic(1, &p).unwrap();
        assert!((l1 / -6.977e-7 - 1.0).abs() < 1e-3, "{l1}");
        assert!(melnikov_coeff_asymptotic(3, &p).is_err());
        let half = Params::new(0.5, 3.0).unwrap();
        assert_eq!(melnikov_coeff_asymptotic(1, &half).unwrap(), 0.0);
    }

    #[test]
    fn tangency_curve() {
        assert!((predicted_tangency_mu(3.0).unwrap() - 0.4749).abs() < 1e-4);
        let mut last = 0.0;
        for k in 0..10 {
            let m = predicted_tangency_mu(2.7 + 0.2 * k as f64).unwrap();
            assert!(m > last && m < 0.5);
            last = m;
        }
        assert!(matches!(predicted_tangency_mu(2.0), Err(MelnikovError::Domain { .. })));
    }

    #[test]
    fn lobe_area_values() {
        let p = Params::new(0.5, 2.5).unwrap();
        let want = 2.0 * PI.sqrt() * 2.5f64.sqrt() * damping(2.5).powi(2);
        assert!((predicted_lobe_area(&p) / want - 1.0).abs() < 1e-14);
        assert_eq!(predicted_lobe_area(&Params::new(0.0, 2.5).unwrap()), 0.0);
        assert!(predicted_lobe_area(&Params::new(0.25, 2.5).unwrap()) > 0.0);
    }

    fn sign_changes(p: &Params) -> usize {
        let n = 4000;
        let f: Vec<f64> =
            (0..n).map(|k| first_order_zero_function((k as f64 + 0.5) * std::f64::consts::TAU / n as f64, p)).collect();
        (0..n).filter(|&k| f[k] * f[(k + 1) % n] < 0.0).count()
    }

    #[test]
    fn zero_function_root_counts() {
        assert_eq!(sign_changes(&Params::new(0.5, 3.0).unwrap()), 4);
        assert_eq!(sign_changes(&Params::new(0.1, 3.0).unwrap()), 2);
        let p = Params::new(0.2, 2.2).unwrap();
        assert!(first_order_zero_function(0.0, &p).abs() < 1e-15);
        assert!(first_order_zero_function(PI, &p).abs() < 1e-14);
    }

    #[test]
    fn distance_domain() {
        let p = Params::new(0.3, 2.4).unwrap();
        assert!(predicted_distance(0.0, 0.0, &p).is_err());
        assert_eq!(predicted_distance(1.0, 0.3, &Params::new(0.0, 2.4).unwrap()).unwrap(), 0.0);
    }
}
