//! Real-line route: `L^[ℓ] = ∫ Û^[ℓ](t) e^{iℓ(α̃_h(t) − G₀³t)} dt` with `Û^[ℓ]`
//! taken from a trapezoidal θ-average of `V` on the separatrix circle.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rpc3bp_dynamics::{potential_v_real, Params, PotentialCoeffs};
use rpc3bp_numerics::quad::integrate;
use rpc3bp_separatrix::homoclinic_state;

use crate::fourier::theta_nodes;
use crate::series::Coefficient;
use crate::MelnikovError;

struct ThetaAverager {
    l: i64,
    k: PotentialCoeffs<f64>,
    p: Params,
    tables: HashMap<usize, Vec<(f64, f64)>>,
}

impl ThetaAverager {
    fn new(l: i64, p: &Params) -> Self {
        ThetaAverager { l, k: PotentialCoeffs::new(p), p: *p, tables: HashMap::new() }
    }

    /// `(Û^[ℓ](r), mean |V(r, ·)|)`.
    fn eval(&mut self, r: f64) -> (f64, f64) {
        let n = theta_nodes(r, &self.p, 1e-18);
        let l = self.l as f64;
        let table = self.tables.entry(n).or_insert_with(|| {
            (0..n)
                .map(|i| {
                    let th = TAU * i as f64 / n as f64;
                    (th.cos(), (l * th).cos())
                })
                .collect()
        });
        let (mut acc, mut abs) = (0.0, 0.0);
        for &(c, cl) in table.iter() {
            let v = potential_v_real(r, c, &self.k);
            acc += v * cl;
            abs += v.abs();
        }
        (acc / n as f64, abs / n as f64)
    }
}

fn tan_mapped<F: FnMut(f64) -> f64>(mut g: F) -> impl FnMut(f64) -> f64 {
    move |th: f64| {
        let tau = th.tan();
        let w = 1.0 + tau * tau;
        g(0.5 * w) * 0.5 * w * w
    }
}

fn tan_breaks() -> Vec<f64> {
    (0..=16).map(|k| -FRAC_PI_2 + PI * k as f64 / 16.0).collect()
}

/// Real-line quadrature of the `ℓ`-th Melnikov coefficient to relative accuracy `tol`.
pub fn melnikov_coeff_quadrature(l: i64, p: &Params, tol: f64) -> Result<Coefficient, MelnikovError> {
    p.validate().map_err(|e| MelnikovError::Invalid(e.to_string()))?;
    if l < 0 {
        return Err(MelnikovError::Invalid("harmonic index must be non-negative".into()));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(MelnikovError::Invalid(format!("tolerance {tol} outside (0, 1)")));
    }
    if 0.5 <= p.primary_radius() {
        return Err(MelnikovError::Domain {
            message: "separatrix perihelion inside the primaries' orbit".into(),
            value: p.primary_radius(),
        });
    }
    if p.mu == 0.0 {
        return Ok(Coefficient { l, value: 0.0, imag: 0.0, error_estimate: 0.0, noise_floor: 0.0, trusted: true });
    }
    let mut abs_avg = ThetaAverager::new(0, p);
    let floor_int = integrate(tan_mapped(|r| abs_avg.eval(r).1), &tan_breaks(), 0.0, 1e-6, 200);
    let noise_floor = 4.0 * f64::EPSILON * floor_int.value;

    let mut avg = ThetaAverager::new(l, p);
    let (value, imag, error) = if l == 0 {
        let r = integrate(tan_mapped(|r| avg.eval(r).0), &tan_breaks(), 0.0, 1e-2 * tol, 4000);
        if !r.converged {
            return Err(MelnikovError::NoConvergence(format!("l = 0 quadrature error {:e}", r.error)));
        }
        (r.value, 0.0, r.error)
    } else {
        oscillatory(l, p, tol, &mut avg)?
    };
    let trusted = value.abs() >= 10.0 * noise_floor;
    if !trusted {
        return Err(MelnikovError::Precision { value, floor: noise_floor });
    }
    Ok(Coefficient { l, value, imag, error_estimate: error, noise_floor, trusted })
}

fn oscillatory(l: i64, p: &Params, tol: f64, avg: &mut ThetaAverager) -> Result<(f64, f64, f64), MelnikovError> {
    let lf = l as f64;
    let g3 = p.g0_cubed();
    let phase = |t: f64| {
        let h = homoclinic_state(t);
        (h.r_h, lf * (h.alpha_h - g3 * t), lf * (1.0 / (h.r_h * h.r_h) - g3))
    };
    let mut f = |t: f64| {
        let (r, ph, _) = phase(t);
        Complex64::from_polar(avg.eval(r).0, ph)
    };
    let h = (PI / (lf * g3)).min(0.5);
    let grid = |a: f64, b: f64| {
        let n = ((b - a).abs() / h).ceil().max(1.0) as usize;
        (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect::<Vec<_>>()
    };

    let mut t_cut = 32.0;
    let first_r = integrate(&mut f, &grid(0.0, t_cut), 0.0, 1e-2 * tol, 200_000);
    let first_l = integrate(&mut f, &grid(-t_cut, 0.0), 0.0, 1e-2 * tol, 200_000);
    let mut right = first_r.value;
    let mut left = first_l.value;
    let mut err = first_r.error + first_l.error;
    let mut ok = first_r.converged && first_l.converged;
    let scale = (right + left).norm().max(1e-3 * (first_r.abs_integral + first_l.abs_integral));
    let abs_tol = 1e-3 * tol * scale;
    loop {
        let (tr, er) = tail(t_cut, 1.0, &phase, avg);
        let (tl, el) = tail(-t_cut, -1.0, &phase, avg);
        if er + el <= abs_tol || t_cut >= 4096.0 {
            let total = right + left + tr + tl;
            if !ok {
                return Err(MelnikovError::NoConvergence(format!("oscillatory quadrature error {err:e}")));
            }
            err += er + el;
            return Ok((total.re, total.im, err));
        }
        let next = 2.0 * t_cut;
        let mut f = |t: f64| {
            let (r, ph, _) = phase(t);
            Complex64::from_polar(avg.eval(r).0, ph)
        };
        let a = integrate(&mut f, &grid(t_cut, next), abs_tol, 1e-2 * tol, 400_000);
        let b = integrate(&mut f, &grid(-next, -t_cut), abs_tol, 1e-2 * tol, 400_000);
        right += a.value;
        left += b.value;
        err += a.error + b.error;
        ok &= a.converged && b.converged;
        t_cut = next;
    }
}

/// Integration-by-parts expansion of the tail beyond `t` (to `+∞` when
/// `side = 1`, from `−∞` when `side = −1`); returns (value, truncation estimate).
fn tail<P>(t: f64, side: f64, phase: &P, avg: &mut ThetaAverager) -> (Complex64, f64)
where
    P: Fn(f64) -> (f64, f64, f64),
{
    let i = Complex64::i();
    let hd = 0.02 * t.abs();
    let mut b0 = [Complex64::new(0.0, 0.0); 9];
    let mut dphi = [0.0; 9];
    for k in 0..9 {
        let tk = t + hd * (k as f64 - 4.0);
        let (r, _, dp) = phase(tk);
        dphi[k] = dp;
        b0[k] = avg.eval(r).0 / (i * dp);
    }
    let d = |g: &[Complex64], k: usize| (g[k - 2] - g[k - 1] * 8.0 + g[k + 1] * 8.0 - g[k + 2]) / (12.0 * hd);
    let mut b1 = [Complex64::new(0.0, 0.0); 9];
    for k in 2..7 {
        b1[k] = d(&b0, k) / (i * dphi[k]);
    }
    let b2 = d(&b1, 4) / (i * dphi[4]);
    let b3_est = if b1[4].norm() > 0.0 { b2.norm() * b2.norm() / b1[4].norm() } else { b2.norm() };
    let (_, ph, _) = phase(t);
    let sum = b0[4] - b1[4] + b2;
    (-side * Complex64::from_polar(1.0, ph) * sum, b3_est + 1e-6 * b1[4].norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::melnikov_coeff_contour;

    #[test]
    fn unperturbed_is_zero() {
        let p = Params::new(0.0, 1.5).unwrap();
        assert_eq!(melnikov_coeff_quadrature(1, &p, 1e-10).unwrap().value, 0.0);
    }

    #[test]
    fn zeroth_harmonic_matches_contour_closed_form() {
        let p = Params::new(0.3, 1.5).unwrap();
        let q = melnikov_coeff_quadrature(0, &p, 1e-11).unwrap().value;
        let c = melnikov_coeff_contour(0, &p, 30).unwrap().value;
        assert!((q / c - 1.0).abs() < 1e-8, "{q} {c}");
    }

    #[test]
    fn second_harmonic_against_frozen_value() {
        let p = Params::new(0.3, 1.5).unwrap();
        let q = melnikov_coeff_quadrature(2, &p, 1e-11).unwrap();
        assert!((q.value / 0.0811390386470742 - 1.0).abs() < 1e-7, "{}", q.value);
        assert!(q.imag.abs() < 1e-10 * q.value.abs());
    }
}
