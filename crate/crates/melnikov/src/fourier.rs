//! Fourier coefficients `Û^[ℓ]` of the potential restricted to a circle.

use num_complex::Complex64;
use rpc3bp_dynamics::{Params, PotentialCoeffs};
use rpc3bp_numerics::{Real, DD};
use rpc3bp_separatrix::homoclinic_state;

use crate::MelnikovError;

/// `c_j = binom(−1/2, j)`.
pub fn binom_half(j: u32) -> f64 {
    let mut c = 1.0;
    for k in 0..j {
        c *= (-0.5 - k as f64) / (k as f64 + 1.0);
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UhatCoeff {
    pub value: Complex64,
    /// Geometric bound on the dropped terms.
    pub truncation_bound: f64,
}

/// Series for `Û^[ℓ](r̃)`; terms `j = j₀ … j₀ + jmax` with `j₀ = max(δ₀(ℓ), −ℓ)`.
pub fn uhat_fourier_coeff_at_radius(l: i64, r: f64, p: &Params, jmax: u32) -> Result<UhatCoeff, MelnikovError> {
    p.validate().map_err(|e| MelnikovError::Invalid(e.to_string()))?;
    if jmax < 1 {
        return Err(MelnikovError::Invalid("jmax must be at least 1".into()));
    }
    let limit = 2.0 * p.primary_radius();
    if !(r > limit) {
        return Err(MelnikovError::OutsideConvergence { r, limit });
    }
    let mu = p.mu;
    let g2 = p.g0 * p.g0;
    let j0 = if l == 0 { 1 } else { (-l).max(0) } as u32;
    let sign = if l.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let term = |j: u32| {
        let e = (2 * j as i64 + l) as i32;
        let mass = mu * (1.0 - mu).powi(e) + sign * (1.0 - mu) * mu.powi(e);
        binom_half(j) * binom_half((j as i64 + l) as u32) * mass / (g2.powi(e) * r.powi(e + 1))
    };
    let mut sum = 0.0;
    for j in j0..=j0 + jmax {
        sum += term(j);
    }
    let q = (p.mu.max(1.0 - p.mu) / (g2 * r)).powi(2);
    let next = term(j0 + jmax + 1).abs();
    Ok(UhatCoeff { value: Complex64::new(sum, 0.0), truncation_bound: next / (1.0 - q) })
}

/// `Û^[ℓ]` evaluated on the separatrix at time `v`.
pub fn uhat_fourier_coeff(l: i64, v: f64, p: &Params, jmax: u32) -> Result<UhatCoeff, MelnikovError> {
    uhat_fourier_coeff_at_radius(l, homoclinic_state(v).r_h, p, jmax)
}

/// Node count for the trapezoidal rule that resolves the Fourier tail of
/// `V(r̃, ·)` down to `eps`.
pub(crate) fn theta_nodes(r: f64, p: &Params, eps: f64) -> usize {
    let q = p.primary_radius() / r;
    let n = if q <= 0.0 { 8.0 } else { eps.ln() / q.ln() };
    ((2.0 * n).ceil() as usize + 16).clamp(32, 4096).next_power_of_two()
}

/// Direct trapezoidal evaluation of `(1/2π)∫ V(r̃, θ) e^{−iℓθ} dθ` in the scalar
/// type `T`; `n = 0` picks the node count automatically.
pub fn uhat_theta_quadrature<T: Real>(l: i64, r: f64, p: &Params, n: usize) -> Complex64 {
    let n = if n == 0 { theta_nodes(r, p, T::epsilon() * 1e-2) } else { n };
    let k = PotentialCoeffs::<T>::new(p);
    let rr = T::from_f64(r);
    let tau = tau_const::<T>();
    let (mut re, mut im) = (T::zero(), T::zero());
    for i in 0..n {
        let th = tau * T::from_f64(i as f64) / T::from_f64(n as f64);
        let c = th.cos();
        let v = rpc3bp_dynamics::potential_v_real(rr, c, &k);
        let (sl, cl) = (th * T::from_f64(l as f64)).sin_cos();
        re += v * cl;
        im -= v * sl;
    }
    let inv = T::one() / T::from_f64(n as f64);
    Complex64::new((re * inv).to_f64(), (im * inv).to_f64())
}

fn tau_const<T: Real>() -> T {
    // 2π as a double-double sum; exact enough for f64 as well.
    T::from_f64(6.283185307179586) + T::from_f64(2.4492935982947064e-16)
}

/// Double-double `Û^[ℓ]` along the separatrix, used as the θ-quadrature oracle.
pub fn uhat_theta_oracle(l: i64, v: f64, p: &Params) -> Complex64 {
    uhat_theta_quadrature::<DD>(l, homoclinic_state(v).r_h, p, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomials() {
        assert_eq!(binom_half(0), 1.0);
        assert_eq!(binom_half(1), -0.5);
        assert_eq!(binom_half(2), 0.375);
        assert!((binom_half(3) + 0.3125).abs() < 1e-16);
    }

    #[test]
    fn unperturbed_vanishes() {
        let p = Params::new(0.0, 2.0).unwrap();
        for l in -3..=3 {
            assert_eq!(uhat_fourier_coeff(l, 0.7, &p, 12).unwrap().value.re, 0.0);
        }
    }

    #[test]
    fn equal_masses_kill_odd_harmonics() {
        let p = Params::new(0.5, 2.0).unwrap();
        for l in [-5i64, -3, -1, 1, 3, 5] {
            assert_eq!(uhat_fourier_coeff(l, 1.0, &p, 12).unwrap().value.re, 0.0);
        }
        assert!(uhat_fourier_coeff(2, 1.0, &p, 12).unwrap().value.re > 0.0);
    }

    #[test]
    fn leading_terms() {
        let p = Params::new(0.3, 4.0).unwrap();
        let r = 50.0;
        let u0 = uhat_fourier_coeff_at_radius(0, r, &p, 12).unwrap().value.re;
        let u2 = uhat_fourier_coeff_at_radius(2, r, &p, 12).unwrap().value.re;
        let m = p.mu * (1.0 - p.mu) / (p.g0.powi(4) * r.powi(3));
        assert!((u0 / (0.25 * m) - 1.0).abs() < 1e-3);
        assert!((u2 / (0.375 * m) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn outside_convergence_domain() {
        let p = Params::new(0.3, 1.5).unwrap();
        assert!(matches!(uhat_fourier_coeff(1, 0.0, &p, 12), Err(MelnikovError::OutsideConvergence { .. })));
    }

    #[test]
    fn series_matches_theta_quadrature() {
        let p = Params::new(0.3, 2.5).unwrap();
        for l in -8i64..=8 {
            let s = uhat_fourier_coeff(l, 1.0, &p, 12).unwrap().value.re;
            let q = uhat_theta_oracle(l, 1.0, &p);
            assert!((s - q.re).abs() <= 1e-10 * s.abs(), "l={l} {s} {}", q.re);
            assert!(q.im.abs() <= 1e-10 * s.abs());
        }
    }

    proptest! {
        #[test]
        fn symmetric_in_harmonic_index(l in 0i64..8, r in 0.8f64..20.0, mu in 0.01f64..0.5) {
            let p = Params::new(mu, 2.0).unwrap();
            let a = uhat_fourier_coeff_at_radius(l, r, &p, 12).unwrap().value.re;
            let b = uhat_fourier_coeff_at_radius(-l, r, &p, 12).unwrap().value.re;
            prop_assert!((a - b).abs() <= 1e-14 * a.abs());
        }
    }
}
