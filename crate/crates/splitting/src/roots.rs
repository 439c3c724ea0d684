//! Homoclinic points as sign changes of the distance profile.

use std::f64::consts::PI;

use rpc3bp_numerics::roots::brent;
use rpc3bp_separatrix::{homoclinic_state, section_phase, section_phase_rate};
use serde::{Deserialize, Serialize};

use crate::{DistanceProfile, SplittingError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    Transversal,
    NearTangent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomoclinicRoot {
    pub v: f64,
    /// `x = φ₀ − α̃_h(v) + G₀³v`.
    pub phase: f64,
    /// Nearest `k` with `x ≈ kπ`.
    pub k: i64,
    /// First-order root `v⁰_k`.
    pub first_order_v: f64,
    pub d: f64,
    pub d_prime: f64,
    pub d_prime_uncertainty: f64,
    pub kind: RootKind,
}

/// Solves `x(v) = target` on the outgoing branch by safeguarded Newton.
pub fn v_of_phase(target: f64, phi0: f64, g0: f64) -> Result<f64, SplittingError> {
    let g3 = g0 * g0 * g0;
    if g3 <= 4.0 {
        return Err(SplittingError::Invalid(format!("section phase is not monotone for g0 = {g0}")));
    }
    let f = |v: f64| section_phase(v, phi0, g0) - target;
    let mut v = ((target - phi0 + PI) / g3).max(1e-12);
    for _ in 0..100 {
        let step = f(v) / section_phase_rate(v, g0);
        let next = if v - step > 0.0 { v - step } else { 0.5 * v };
        if (next - v).abs() <= 1e-15 * next.abs().max(1.0) {
            return Ok(next);
        }
        v = next;
    }
    if f(v).abs() < 1e-12 * target.abs().max(1.0) {
        Ok(v)
    } else {
        Err(SplittingError::NotFound(format!("phase {target} has no preimage")))
    }
}

/// `v⁰_k` with `x(v⁰_k) = kπ` inside `[lo, hi]`.
pub fn first_order_roots(window: (f64, f64), phi0: f64, g0: f64) -> Result<Vec<(i64, f64)>, SplittingError> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(SplittingError::Invalid(format!("window [{lo}, {hi}] must lie in v > 0")));
    }
    let k0 = (section_phase(lo, phi0, g0) / PI).ceil() as i64;
    let k1 = (section_phase(hi, phi0, g0) / PI).floor() as i64;
    (k0..=k1).map(|k| Ok((k, v_of_phase(k as f64 * PI, phi0, g0)?))).collect()
}

/// `π/(G₀³ + α̃_h′(v))`.
pub fn predicted_root_spacing(v: f64, g0: f64) -> f64 {
    let r = homoclinic_state(v).r_h;
    PI / (g0 * g0 * g0 + 1.0 / (r * r))
}

/// `floor(window·(G₀³ + ᾱ′)/π)` with `ᾱ′` the mean of `α̃_h′` over the window.
pub fn predicted_root_count(window: (f64, f64), g0: f64) -> i64 {
    let (lo, hi) = window;
    let mean_rate = (homoclinic_state(hi).alpha_h - homoclinic_state(lo).alpha_h) / (hi - lo);
    ((hi - lo) * (g0 * g0 * g0 + mean_rate) / PI).floor() as i64
}

pub fn find_homoclinic_points(profile: &DistanceProfile) -> Result<Vec<HomoclinicRoot>, SplittingError> {
    let g0 = profile.g0;
    let required = PI / (2.0 * g0 * g0 * g0);
    let spacing = profile.max_spacing();
    if spacing > required {
        return Err(SplittingError::Resolution { spacing, required });
    }
    if profile.max_abs() <= 10.0 * profile.noise_floor {
        return Ok(Vec::new());
    }
    let (v, d) = (&profile.v, &profile.d);
    let mut found = Vec::new();
    for i in 0..v.len() - 1 {
        let root = if d[i] == 0.0 {
            v[i]
        } else if d[i].signum() != d[i + 1].signum() && d[i + 1] != 0.0 {
            brent(|t| profile.eval(t), v[i], v[i + 1], 1e-15 * v[i + 1].abs(), 200)
                .map_err(|e| SplittingError::NotFound(e.to_string()))?
        } else {
            continue;
        };
        found.push(root);
    }
    if d[v.len() - 1] == 0.0 {
        found.push(v[v.len() - 1]);
    }
    found
        .into_iter()
        .map(|root| {
            let x = section_phase(root, profile.phi0, g0);
            let k = (x / PI).round() as i64;
            let dp = profile.derivative(root);
            Ok(HomoclinicRoot {
                v: root,
                phase: x,
                k,
                first_order_v: v_of_phase(k as f64 * PI, profile.phi0, g0)?,
                d: profile.eval(root),
                d_prime: dp.value,
                d_prime_uncertainty: dp.uncertainty,
                kind: if dp.value.abs() > 10.0 * dp.uncertainty { RootKind::Transversal } else { RootKind::NearTangent },
            })
        })
        .collect()
}
