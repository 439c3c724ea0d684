use rpc3bp_numerics::Real;

use crate::{DynError, Params};

/// Mass factors and primary offsets of the rescaled potential in a given
/// scalar type.
#[derive(Debug, Clone, Copy)]
pub struct PotentialCoeffs<T> {
    /// Distance `μ/G₀²` of the heavy primary from the origin.
    pub a: T,
    /// Distance `(1−μ)/G₀²` of the light primary from the origin.
    pub b: T,
    pub m_heavy: T,
    pub m_light: T,
}

impl<T: Real> PotentialCoeffs<T> {
    pub fn new(p: &Params) -> Self {
        let mu = T::from_f64(p.mu);
        let g0 = T::from_f64(p.g0);
        let g2 = g0 * g0;
        PotentialCoeffs {
            a: mu / g2,
            b: (T::one() - mu) / g2,
            m_heavy: T::one() - mu,
            m_light: mu,
        }
    }
}

/// Value and first partial derivatives of `V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialGrad<T = f64> {
    pub v: T,
    pub dr: T,
    pub dphi: T,
}

/// `V(r̃, φ)` written as `(1−μ)(1/ρ₁ − 1/r̃) + μ(1/ρ₂ − 1/r̃)` with each bracket
/// in cancellation-free form.
#[inline]
pub fn potential_v_real<T: Real>(r: T, cos_phi: T, k: &PotentialCoeffs<T>) -> T {
    let two = T::from_f64(2.0);
    let d1 = k.a * (k.a - two * r * cos_phi);
    let d2 = k.b * (k.b + two * r * cos_phi);
    let s1 = (r * r + d1).sqrt();
    let s2 = (r * r + d2).sqrt();
    let t1 = -d1 / (r * s1 * (r + s1));
    let t2 = -d2 / (r * s2 * (r + s2));
    k.m_heavy * t1 + k.m_light * t2
}

#[inline]
pub(crate) fn potential_grad_real<T: Real>(r: T, cos_phi: T, sin_phi: T, k: &PotentialCoeffs<T>) -> PotentialGrad<T> {
    let two = T::from_f64(2.0);
    let d1 = k.a * (k.a - two * r * cos_phi);
    let d2 = k.b * (k.b + two * r * cos_phi);
    let q1 = r * r + d1;
    let q2 = r * r + d2;
    let s1 = q1.sqrt();
    let s2 = q2.sqrt();
    let i1 = T::one() / (q1 * s1);
    let i2 = T::one() / (q2 * s2);
    let t1 = -d1 / (r * s1 * (r + s1));
    let t2 = -d2 / (r * s2 * (r + s2));
    let v = k.m_heavy * t1 + k.m_light * t2;
    let inv_r2 = T::one() / (r * r);
    let dr = inv_r2 - k.m_heavy * (r - k.a * cos_phi) * i1 - k.m_light * (r + k.b * cos_phi) * i2;
    let dphi = r * sin_phi * (k.m_light * k.b * i2 - k.m_heavy * k.a * i1);
    PotentialGrad { v, dr, dphi }
}

fn check_domain(r_tilde: f64, p: &Params) -> Result<(), DynError> {
    p.validate()?;
    let limit = p.primary_radius();
    if !(r_tilde > limit) || !r_tilde.is_finite() {
        return Err(DynError::Collision { r: r_tilde, limit });
    }
    Ok(())
}

/// Rescaled perturbing potential `V(r̃, φ; μ, G₀)`.
pub fn potential_v(r_tilde: f64, phi: f64, p: &Params) -> Result<f64, DynError> {
    check_domain(r_tilde, p)?;
    Ok(potential_v_real(r_tilde, phi.cos(), &PotentialCoeffs::new(p)))
}

/// `V` together with `∂V/∂r̃` and `∂V/∂φ`.
pub fn potential_v_grad(r_tilde: f64, phi: f64, p: &Params) -> Result<PotentialGrad, DynError> {
    check_domain(r_tilde, p)?;
    let (s, c) = phi.sin_cos();
    Ok(potential_grad_real(r_tilde, c, s, &PotentialCoeffs::new(p)))
}
