use rpc3bp_numerics::{Dop853, OdeSystem, Real};

use crate::potential::{potential_grad_real, PotentialCoeffs};
use crate::{DynError, Params, RotatingState};

/// Autonomous vector field of `𝓗` in `(r̃, φ, ỹ, G̃)`, in any scalar type.
#[derive(Debug, Clone, Copy)]
pub struct RotatingField<T> {
    k: PotentialCoeffs<T>,
    g0_cubed: T,
    collision: f64,
    pub params: Params,
}

impl<T: Real> RotatingField<T> {
    pub fn new(p: &Params) -> Self {
        let g0 = T::from_f64(p.g0);
        RotatingField {
            k: PotentialCoeffs::new(p),
            g0_cubed: g0 * g0 * g0,
            collision: p.collision_radius(),
            params: *p,
        }
    }

    pub fn eval(&self, y: &[T; 4]) -> Result<[T; 4], DynError> {
        let [r, phi, yt, g] = *y;
        let rf = r.to_f64();
        if !(rf >= self.collision) {
            return Err(DynError::Collision { r: rf, limit: self.collision });
        }
        let (s, c) = phi.sin_cos();
        let grad = potential_grad_real(r, c, s, &self.k);
        let inv_r = T::one() / r;
        let inv_r2 = inv_r * inv_r;
        Ok([yt, g * inv_r2 - self.g0_cubed, g * g * inv_r2 * inv_r - inv_r2 + grad.dr, grad.dphi])
    }

    /// Energy `𝓗` in the field's scalar type.
    pub fn energy(&self, y: &[T; 4]) -> T {
        let [r, phi, yt, g] = *y;
        let v = crate::potential::potential_v_real(r, phi.cos(), &self.k);
        let half = T::from_f64(0.5);
        half * yt * yt - self.g0_cubed * g + half * g * g / (r * r) - T::one() / r - v
    }
}

impl<T: Real> OdeSystem<T, 4> for RotatingField<T> {
    type Error = DynError;
    fn rhs(&self, _s: T, y: &[T; 4]) -> Result<[T; 4], DynError> {
        self.eval(y)
    }
}

/// `(dr̃/ds, dφ/ds, dỹ/ds, dG̃/ds)` at `s`.
pub fn vector_field_rotating(s: &RotatingState, p: &Params) -> Result<[f64; 4], DynError> {
    RotatingField::<f64>::new(p).eval(&s.to_array())
}

/// Reversing involution `(r̃, φ, ỹ, G̃) ↦ (r̃, −φ, −ỹ, G̃)`.
pub fn involution_r(s: &RotatingState) -> RotatingState {
    RotatingState::new(s.r_tilde, -s.phi, -s.y_tilde, s.g_tilde)
}

pub fn check_tolerance<T: Real>(tol: f64) -> Result<(), DynError> {
    let floor = if T::epsilon() < 1e-20 { 1e-28 } else { 1e-15 };
    if !(tol >= floor && tol <= 1e-6) {
        return Err(DynError::Tolerance(tol));
    }
    Ok(())
}

/// Propagate an arbitrary-precision state by `delta_s`.
pub fn integrate_generic<T: Real>(y: [T; 4], delta_s: T, tol: f64, p: &Params) -> Result<[T; 4], DynError> {
    check_tolerance::<T>(tol)?;
    p.validate()?;
    let field = RotatingField::<T>::new(p);
    Ok(Dop853::new(tol).integrate(&field, T::zero(), y, delta_s)?)
}

/// Propagate `s` by `delta_s` units of rescaled time.
pub fn integrate(s: &RotatingState, delta_s: f64, tol: f64, p: &Params) -> Result<RotatingState, DynError> {
    Ok(RotatingState::from_array(integrate_generic(s.to_array(), delta_s, tol, p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian_rotating;
    use proptest::prelude::*;
    use rpc3bp_numerics::DD;

    fn energy(s: &RotatingState, p: &Params) -> f64 {
        hamiltonian_rotating(s, p).unwrap()
    }

    #[test]
    fn unperturbed_angular_momentum_constant() {
        let p = Params::new(0.0, 2.0).unwrap();
        let s = RotatingState::new(1.3, 0.4, 0.2, 1.1);
        let d = vector_field_rotating(&s, &p).unwrap();
        assert_eq!(d[3], 0.0);
        let out = integrate(&s, 3.0, 1e-12, &p).unwrap();
        assert!((out.g_tilde - 1.1).abs() < 1e-14);
    }

    #[test]
    fn zero_interval_is_identity() {
        let p = Params::new(0.2, 2.0).unwrap();
        let s = RotatingState::new(1.3, 0.4, 0.2, 1.0);
        assert_eq!(integrate(&s, 0.0, 1e-10, &p).unwrap(), s);
    }

    #[test]
    fn tolerance_window_enforced() {
        let p = Params::new(0.2, 2.0).unwrap();
        let s = RotatingState::new(1.3, 0.4, 0.2, 1.0);
        assert!(matches!(integrate(&s, 1.0, 1e-17, &p), Err(DynError::Tolerance(_))));
        assert!(matches!(integrate(&s, 1.0, 1e-3, &p), Err(DynError::Tolerance(_))));
    }

    #[test]
    fn collision_reports_failure() {
        let p = Params::new(0.3, 2.0).unwrap();
        let s = RotatingState::new(0.5, 0.0, -1.0, 0.05);
        assert!(integrate(&s, 2.0, 1e-10, &p).is_err());
    }

    #[test]
    fn energy_drift_and_jacobi_conservation() {
        let p = Params::new(0.3, 2.2).unwrap();
        let s = RotatingState::new(1.2, 0.3, 0.4, 1.0);
        let tol = 1e-12;
        let out = integrate(&s, 10.0, tol, &p).unwrap();
        let drift = (energy(&out, &p) - energy(&s, &p)).abs();
        assert!(drift < 100.0 * tol * 10.0, "drift {drift}");
        // 𝒥 = 𝓗 / G₀² in the original variables.
        assert!(drift / (p.g0 * p.g0) < 1e-10);
    }

    #[test]
    fn forward_backward_returns() {
        let p = Params::new(0.3, 2.2).unwrap();
        let s = RotatingState::new(1.5, -0.8, -0.3, 0.98);
        let tol = 1e-12;
        let out = integrate(&s, 4.0, tol, &p).unwrap();
        let back = integrate(&out, -4.0, tol, &p).unwrap();
        for (a, b) in back.to_array().iter().zip(s.to_array()) {
            assert!((a - b).abs() < 100.0 * tol);
        }
    }

    #[test]
    fn extended_precision_tightens_energy() {
        let p = Params::new(0.3, 2.2).unwrap();
        let y0 = [DD::from(1.2), DD::from(0.3), DD::from(0.4), DD::from(1.0)];
        let field = RotatingField::<DD>::new(&p);
        let out = integrate_generic(y0, DD::from(2.0), 1e-24, &p).unwrap();
        let drift = (field.energy(&out) - field.energy(&y0)).to_f64().abs();
        assert!(drift < 1e-20, "drift {drift}");
    }

    #[test]
    fn involution_is_an_involution() {
        let s = RotatingState::new(1.5, -0.8, -0.3, 0.98);
        assert_eq!(involution_r(&involution_r(&s)), s);
        let fixed = RotatingState::new(2.0, 0.0, 0.0, 1.0);
        assert_eq!(involution_r(&fixed), RotatingState::new(2.0, -0.0, -0.0, 1.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn energy_is_first_integral(r in 0.8f64..20.0, phi in -3.0f64..3.0, y in -1.0f64..1.0,
                                    g in 0.8f64..1.2, mu in 0.0f64..0.5) {
            let p = Params::new(mu, 2.0).unwrap();
            let s = RotatingState::new(r, phi, y, g);
            let d = vector_field_rotating(&s, &p).unwrap();
            let h = 1e-6;
            let mut grad = [0.0; 4];
            for k in 0..4 {
                let mut a = s.to_array();
                let mut b = s.to_array();
                a[k] += h;
                b[k] -= h;
                grad[k] = (energy(&RotatingState::from_array(a), &p) - energy(&RotatingState::from_array(b), &p)) / (2.0 * h);
            }
            // dH/ds = H_r ṙ + H_φ φ̇ + H_y ẏ + H_G Ġ with ṙ = H_y etc.
            let dh: f64 = grad.iter().zip(d.iter()).map(|(g, v)| g * v).sum();
            prop_assert!(dh.abs() < 1e-8 * (1.0 + p.g0_cubed()));
            // Exact Hamiltonian structure: ṙ = ∂H/∂ỹ, φ̇ = ∂H/∂G̃.
            prop_assert!((d[0] - grad[2]).abs() < 1e-7);
            prop_assert!((d[1] - grad[3]).abs() < 1e-7);
            prop_assert!((d[2] + grad[0]).abs() < 1e-7);
            prop_assert!((d[3] + grad[1]).abs() < 1e-7);
        }

        #[test]
        fn reversibility(r in 1.0f64..4.0, phi in -3.0f64..3.0, y in -0.5f64..0.5, ds in -5.0f64..5.0) {
            let p = Params::new(0.3, 2.2).unwrap();
            let tol = 1e-12;
            let z = RotatingState::new(r, phi, y, 1.0);
            let lhs = involution_r(&integrate(&involution_r(&z), ds, tol, &p).unwrap());
            let rhs = integrate(&z, -ds, tol, &p).unwrap();
            for (a, b) in lhs.to_array().iter().zip(rhs.to_array()) {
                prop_assert!((a - b).abs() < 100.0 * tol, "{a} {b}");
            }
        }
    }
}
