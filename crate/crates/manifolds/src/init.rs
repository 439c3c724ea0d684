use rpc3bp_dynamics::{potential_v_real, Params, PotentialCoeffs, RotatingState};
use rpc3bp_numerics::Real;
use rpc3bp_separatrix::v_of_radius;

use crate::flow::tau;
use crate::{Branch, ManifoldError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    pub state: RotatingState,
    /// `μ(1−μ)/(G₀⁴R₀²)`, the size of the neglected far-field terms.
    pub correction_bound: f64,
    /// Separatrix time with `r̃_h = R₀` on the matching branch.
    pub v_separatrix: f64,
}

/// Shell state at `r̃ = R₀`, `φ = phase`: incoming (`ỹ < 0`) on the unstable
/// branch, outgoing on the stable one. `G̃` carries the first-order averaged
/// response `(V − ⟨V⟩)/(1/R₀² − G₀³)` to the fast angular forcing and `ỹ`
/// follows from `𝓗 = −G₀³`.
pub fn initial_state_generic<T: Real>(branch: Branch, r0: f64, phase: T, p: &Params) -> Result<[T; 4], ManifoldError> {
    let k = PotentialCoeffs::<T>::new(p);
    let r = T::from_f64(r0);
    let g0 = T::from_f64(p.g0);
    let g3 = g0 * g0 * g0;
    let n = 64;
    let mut mean = T::zero();
    for i in 0..n {
        let th = tau::<T>() * T::from_f64(i as f64 / n as f64);
        mean += potential_v_real(r, th.cos(), &k);
    }
    mean = mean / T::from_f64(n as f64);
    let v = potential_v_real(r, phase.cos(), &k);
    let inv_r = T::one() / r;
    let g = T::one() + (v - mean) / (inv_r * inv_r - g3);
    let two = T::from_f64(2.0);
    let y2 = two * (g3 * (g - T::one()) + inv_r - g * g * inv_r * inv_r / two + v);
    if !(y2.to_f64() > 0.0) {
        return Err(ManifoldError::Lift { r: r0, y: 0.0 });
    }
    let sign = match branch {
        Branch::Unstable => -T::one(),
        Branch::Stable => T::one(),
    };
    Ok([r, phase, sign * y2.sqrt(), g])
}

pub fn initial_manifold_state(branch: Branch, r0: f64, phase: f64, p: &Params) -> Result<InitialState, ManifoldError> {
    p.validate()?;
    if !(r0 >= 50.0) {
        return Err(ManifoldError::Invalid(format!("R0 = {r0} below the far-field floor 50")));
    }
    let y = initial_state_generic::<f64>(branch, r0, phase, p)?;
    let sign = if branch == Branch::Unstable { -1.0 } else { 1.0 };
    Ok(InitialState {
        state: RotatingState::from_array(y),
        correction_bound: p.mu * (1.0 - p.mu) / (p.g0.powi(4) * r0 * r0),
        v_separatrix: v_of_radius(r0, sign).expect("R0 above perihelion"),
    })
}
