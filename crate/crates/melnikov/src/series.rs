use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rpc3bp_dynamics::Params;
use rpc3bp_separatrix::{homoclinic_state, section_phase};
use serde::{Deserialize, Serialize};

use crate::{melnikov_coeff_asymptotic, melnikov_coeff_contour, melnikov_coeff_quadrature, MelnikovError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Quadrature,
    Contour,
    Asymptotic,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::Contour => "contour",
            Method::Asymptotic => "asymptotic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = MelnikovError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quadrature" => Ok(Method::Quadrature),
            "contour" => Ok(Method::Contour),
            "asymptotic" => Ok(Method::Asymptotic),
            _ => Err(MelnikovError::Invalid(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub l: i64,
    pub value: f64,
    pub imag: f64,
    pub error_estimate: f64,
    pub noise_floor: f64,
    pub trusted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MelnikovSeries {
    pub mu: f64,
    pub g0: f64,
    pub method: Method,
    pub lmax: u32,
    pub jmax: u32,
    /// Sorted by `l`; the asymptotic route carries `l = 1, 2` only.
    pub coefficients: Vec<Coefficient>,
}

impl MelnikovSeries {
    pub fn params(&self) -> Params {
        Params { mu: self.mu, g0: self.g0 }
    }

    /// `L^[ℓ]`, using `L^[−ℓ] = L^[ℓ]`; absent harmonics read as zero.
    pub fn value(&self, l: i64) -> f64 {
        let l = l.abs();
        self.coefficients.iter().find(|c| c.l == l).map_or(0.0, |c| c.value)
    }

    pub fn all_trusted(&self) -> bool {
        self.coefficients.iter().all(|c| c.trusted)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("series serializes")
    }
}

/// Coefficients `ℓ = 0 … lmax` by the chosen route, harmonics in parallel.
pub fn compute_series(
    p: &Params,
    method: Method,
    lmax: u32,
    jmax: u32,
    tol: f64,
) -> Result<MelnikovSeries, MelnikovError> {
    p.validate().map_err(|e| MelnikovError::Invalid(e.to_string()))?;
    let ls: Vec<i64> = match method {
        Method::Asymptotic => {
            if lmax > 2 {
                return Err(MelnikovError::Unsupported(lmax as i64));
            }
            (1..=lmax as i64).collect()
        }
        _ => (0..=lmax as i64).collect(),
    };
    let coefficients = ls
        .par_iter()
        .map(|&l| match method {
            Method::Contour => melnikov_coeff_contour(l, p, jmax),
            Method::Quadrature => match melnikov_coeff_quadrature(l, p, tol) {
                Err(MelnikovError::Precision { value, floor }) => Ok(Coefficient {
                    l,
                    value,
                    imag: 0.0,
                    error_estimate: floor,
                    noise_floor: floor,
                    trusted: false,
                }),
                other => other,
            },
            Method::Asymptotic => melnikov_coeff_asymptotic(l, p).map(|value| Coefficient {
                l,
                value,
                imag: 0.0,
                error_estimate: f64::NAN,
                noise_floor: 0.0,
                trusted: true,
            }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MelnikovSeries { mu: p.mu, g0: p.g0, method, lmax, jmax, coefficients })
}

/// `L(v, ξ) = L^[0] + 2 Σ L^[ℓ] cos ℓ(ξ + G₀³v)`.
pub fn melnikov_potential(v: f64, xi: f64, series: &MelnikovSeries) -> f64 {
    melnikov_potential_phase(xi + series.g0.powi(3) * v, series)
}

/// The potential as a function of the phase `x = ξ + G₀³v` alone.
pub fn melnikov_potential_phase(x: f64, series: &MelnikovSeries) -> f64 {
    series
        .coefficients
        .iter()
        .map(|c| if c.l == 0 { c.value } else { 2.0 * c.value * (c.l as f64 * x).cos() })
        .sum()
}

/// First-order `Y^s − Y^u` on the section `φ = φ₀` at `r̃ = r̃_h(v)`:
/// `2 (G₀³ − 1/r̃_h²)/ỹ_h · Σ ℓ L^[ℓ] sin ℓx`.
pub fn first_order_distance(v: f64, phi0: f64, series: &MelnikovSeries) -> Result<f64, MelnikovError> {
    let h = homoclinic_state(v);
    if h.y_h.abs() < 1e-12 {
        return Err(MelnikovError::Domain { message: "distance undefined at the turning point".into(), value: v });
    }
    let g3 = series.g0.powi(3);
    let x = section_phase(v, phi0, series.g0);
    let s: f64 = series.coefficients.iter().map(|c| c.l as f64 * c.value * (c.l as f64 * x).sin()).sum();
    Ok(2.0 * (g3 - 1.0 / (h.r_h * h.r_h)) / h.y_h * s)
}
