//! Stable and unstable manifolds of parabolic infinity on the section
//! `φ = φ₀`, parameterized as `ỹ = Y(v)` over `r̃ = r̃_h(v)`.

mod curve;
mod error;
mod flow;
mod init;
mod section;

pub use curve::{
    compute_invariant_curve, compute_invariant_curve_with, sample_manifold, stable_by_reflection, CurveOptions,
    CurveSample, ManifoldCurve,
};
pub use error::ManifoldError;
pub use flow::{wrap_angle, Flow};
pub use init::{initial_manifold_state, initial_state_generic, InitialState};
pub use section::{lift_to_shell, poincare_map, poincare_map_generic, propagate_to_section, Direction, SectionCrossing};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Stable,
    Unstable,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Stable => "stable",
            Branch::Unstable => "unstable",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Branch {
    type Err = ManifoldError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "stable" => Ok(Branch::Stable),
            "unstable" => Ok(Branch::Unstable),
            _ => Err(ManifoldError::Invalid(format!("unknown branch {s:?}"))),
        }
    }
}
