//! Fresh evaluations of `D(v)` from newly computed manifold samples.

use rpc3bp_dynamics::Params;
use rpc3bp_manifolds::{compute_invariant_curve_with, Branch, CurveOptions};

use crate::roots::v_of_phase;
use crate::SplittingError;

#[derive(Debug, Clone)]
pub struct DistanceEvaluator {
    pub params: Params,
    pub phi0: f64,
    pub options: CurveOptions,
}

impl DistanceEvaluator {
    pub fn new(params: Params, phi0: f64, options: CurveOptions) -> Self {
        DistanceEvaluator { params, phi0, options }
    }

    /// `Y^s(v) − Y^u(v)` at each `v`.
    pub fn distances(&self, vs: &[f64]) -> Result<Vec<f64>, SplittingError> {
        let (s, u) = rayon::join(
            || compute_invariant_curve_with(Branch::Stable, self.phi0, vs, &self.params, &self.options),
            || compute_invariant_curve_with(Branch::Unstable, self.phi0, vs, &self.params, &self.options),
        );
        let (s, u) = (s?, u?);
        Ok(s.samples.iter().zip(&u.samples).map(|(a, b)| a.y - b.y).collect())
    }

    pub fn distance(&self, v: f64) -> Result<f64, SplittingError> {
        Ok(self.distances(&[v])?[0])
    }

    pub fn v_of_phase(&self, x: f64) -> Result<f64, SplittingError> {
        v_of_phase(x, self.phi0, self.params.g0)
    }

    /// `D` at the preimages of the given phases; returns `(v, D)`.
    pub fn distances_at_phases(&self, xs: &[f64]) -> Result<(Vec<f64>, Vec<f64>), SplittingError> {
        let vs = xs.iter().map(|&x| self.v_of_phase(x)).collect::<Result<Vec<_>, _>>()?;
        let d = self.distances(&vs)?;
        Ok((vs, d))
    }
}
