use rpc3bp_manifolds::ManifoldCurve;
use rpc3bp_numerics::quad;
use rpc3bp_separatrix::homoclinic_state;
use serde::{Deserialize, Serialize};

use crate::{distance_profile, find_homoclinic_points, DistanceProfile, SplittingError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LobeIntegral {
    /// `∫ ỹ_h D dv`.
    pub signed: f64,
    pub error: f64,
}

/// Adaptive Gauss–Kronrod integral of `ỹ_h·D` over the profile interpolant.
pub fn profile_lobe_integral(profile: &DistanceProfile, v_a: f64, v_b: f64) -> LobeIntegral {
    let r = quad::integrate(|v: f64| homoclinic_state(v).y_h * profile.eval(v), &[v_a, v_b], 0.0, 1e-10, 256);
    LobeIntegral { signed: r.value, error: r.error }
}

/// `|∫_{v_a}^{v_b} ỹ_h (Y^s − Y^u) dv|` between adjacent homoclinic points.
pub fn lobe_area(cs: &ManifoldCurve, cu: &ManifoldCurve, v_a: f64, v_b: f64) -> Result<f64, SplittingError> {
    if !(v_a < v_b) {
        return Err(SplittingError::Invalid(format!("lobe needs v_a < v_b, got [{v_a}, {v_b}]")));
    }
    let profile = distance_profile(cs, cu)?;
    let (lo, hi) = profile.window();
    if v_a < lo || v_b > hi {
        return Err(SplittingError::Range(format!("[{v_a}, {v_b}] leaves the profile window [{lo}, {hi}]")));
    }
    let roots = find_homoclinic_points(&profile)?;
    if roots.is_empty() {
        return Ok(profile_lobe_integral(&profile, v_a, v_b).signed.abs());
    }
    let slack = 1e-6 * (v_b - v_a);
    if roots.iter().any(|r| r.v > v_a + slack && r.v < v_b - slack) {
        return Err(SplittingError::NonAdjacent { v_a, v_b });
    }
    Ok(profile_lobe_integral(&profile, v_a, v_b).signed.abs())
}
