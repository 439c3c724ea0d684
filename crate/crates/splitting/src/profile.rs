//! `D(v) = Y^s(v) − Y^u(v)` on a common grid, with a local-polynomial
//! interpolant and Richardson-extrapolated central differences.

use rpc3bp_dynamics::Params;
use rpc3bp_manifolds::{Branch, ManifoldCurve};
use serde::{Deserialize, Serialize};

use crate::SplittingError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceProfile {
    pub mu: f64,
    pub g0: f64,
    pub phi0: f64,
    pub v: Vec<f64>,
    pub d: Vec<f64>,
    /// Largest cubic-minus-quintic difference at grid midpoints.
    pub interpolation_error: f64,
    pub noise_floor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Derivative {
    pub value: f64,
    pub uncertainty: f64,
}

fn lagrange(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..xs.len() {
        let mut w = 1.0;
        for j in 0..xs.len() {
            if i != j {
                w *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        acc += w * ys[i];
    }
    acc
}

/// Four-point window around `x` (clamped at the ends).
fn stencil(v: &[f64], x: f64) -> usize {
    let n = v.len();
    let i = v.partition_point(|&t| t <= x).max(1) - 1;
    i.saturating_sub(1).min(n.saturating_sub(4))
}

fn noise_from_curves(cs: &ManifoldCurve, cu: &ManifoldCurve) -> f64 {
    let ymax = cs.samples.iter().chain(&cu.samples).map(|s| s.y.abs()).fold(0.0, f64::max);
    let eps = cs.precision.epsilon().max(cu.precision.epsilon());
    let tol = cs.tol.max(cu.tol);
    let trunc = cs.truncation_error.unwrap_or(0.0) + cu.truncation_error.unwrap_or(0.0);
    (64.0 * eps * ymax).max(100.0 * tol).max(trunc)
}

impl DistanceProfile {
    pub fn from_samples(p: &Params, phi0: f64, v: Vec<f64>, d: Vec<f64>, noise_floor: f64) -> Result<Self, SplittingError> {
        if v.len() != d.len() || v.len() < 5 {
            return Err(SplittingError::Invalid(format!("profile needs at least 5 matched samples, got {}", v.len())));
        }
        if v.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(SplittingError::Invalid("profile grid must be strictly increasing".into()));
        }
        let mut prof = DistanceProfile { mu: p.mu, g0: p.g0, phi0, v, d, interpolation_error: 0.0, noise_floor };
        prof.interpolation_error = prof.midpoint_error();
        Ok(prof)
    }

    pub fn params(&self) -> Params {
        Params { mu: self.mu, g0: self.g0 }
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn window(&self) -> (f64, f64) {
        (self.v[0], self.v[self.v.len() - 1])
    }

    pub fn max_spacing(&self) -> f64 {
        self.v.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.d.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    fn midpoint_error(&self) -> f64 {
        let n = self.v.len();
        let mut worst: f64 = 0.0;
        for i in 2..n.saturating_sub(3) {
            let m = 0.5 * (self.v[i] + self.v[i + 1]);
            let cubic = lagrange(&self.v[i - 1..i + 3], &self.d[i - 1..i + 3], m);
            let quintic = lagrange(&self.v[i - 2..i + 4], &self.d[i - 2..i + 4], m);
            worst = worst.max((cubic - quintic).abs());
        }
        worst
    }

    /// Cubic interpolant; extrapolates with the end polynomial.
    pub fn eval(&self, v: f64) -> f64 {
        let s = stencil(&self.v, v);
        let e = (s + 4).min(self.v.len());
        lagrange(&self.v[s..e], &self.d[s..e], v)
    }

    fn spacing_at(&self, v: f64) -> f64 {
        let i = stencil(&self.v, v) + 1;
        let j = (i + 1).min(self.v.len() - 1);
        self.v[j] - self.v[j - 1]
    }

    /// `D′(v)` by central differences at `h` and `h/2` combined by Richardson.
    pub fn derivative(&self, v: f64) -> Derivative {
        let h = self.spacing_at(v);
        let c = |h: f64| (self.eval(v + h) - self.eval(v - h)) / (2.0 * h);
        let (c1, c2) = (c(h), c(0.5 * h));
        Derivative {
            value: (4.0 * c2 - c1) / 3.0,
            uncertainty: (c2 - c1).abs() / 3.0 + (self.noise_floor + self.interpolation_error) / h,
        }
    }

    pub fn second_derivative(&self, v: f64) -> Derivative {
        let h = self.spacing_at(v);
        let s = |h: f64| (self.eval(v + h) - 2.0 * self.eval(v) + self.eval(v - h)) / (h * h);
        let (s1, s2) = (s(h), s(0.5 * h));
        Derivative {
            value: (4.0 * s2 - s1) / 3.0,
            uncertainty: (s2 - s1).abs() / 3.0 + 4.0 * (self.noise_floor + self.interpolation_error) / (h * h),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("v,D\n");
        for (v, d) in self.v.iter().zip(&self.d) {
            out.push_str(&format!("{v:.15e},{d:.15e}\n"));
        }
        out
    }
}

fn check_pair(cs: &ManifoldCurve, cu: &ManifoldCurve) -> Result<(), SplittingError> {
    if cs.branch != Branch::Stable || cu.branch != Branch::Unstable {
        return Err(SplittingError::Invalid("expected (stable, unstable) curves".into()));
    }
    if cs.phi0 != cu.phi0 || cs.mu != cu.mu || cs.g0 != cu.g0 {
        return Err(SplittingError::Invalid("curves live on different sections or parameters".into()));
    }
    if cs.samples.len() < 2 || cu.samples.len() < 2 {
        return Err(SplittingError::Invalid("curves need at least two samples".into()));
    }
    Ok(())
}

/// Differences the two curves. Identical grids are used as they are;
/// otherwise the sparser grid, restricted to the overlap, becomes the common
/// grid and the denser curve is interpolated onto it.
pub fn distance_profile(cs: &ManifoldCurve, cu: &ManifoldCurve) -> Result<DistanceProfile, SplittingError> {
    check_pair(cs, cu)?;
    let (vs, vu) = (cs.v(), cu.v());
    let p = cs.params();
    let noise = noise_from_curves(cs, cu);
    if vs == vu {
        let d = cs.samples.iter().zip(&cu.samples).map(|(s, u)| s.y - u.y).collect();
        return DistanceProfile::from_samples(&p, cs.phi0, vs, d, noise);
    }
    let lo = vs[0].max(vu[0]);
    let hi = vs[vs.len() - 1].min(vu[vu.len() - 1]);
    if !(hi > lo) {
        return Err(SplittingError::Range(format!(
            "stable window [{}, {}] and unstable window [{}, {}]",
            vs[0],
            vs[vs.len() - 1],
            vu[0],
            vu[vu.len() - 1]
        )));
    }
    let inside = |g: &[f64]| g.iter().copied().filter(|v| *v >= lo && *v <= hi).collect::<Vec<_>>();
    let (gs, gu) = (inside(&vs), inside(&vu));
    let (grid, sparse_is_stable) = if gs.len() <= gu.len() { (gs, true) } else { (gu, false) };
    let mut d = Vec::with_capacity(grid.len());
    for &v in &grid {
        let (ys, yu) = if sparse_is_stable {
            let s = cs.samples.iter().find(|s| s.v == v).map(|s| s.y).unwrap_or(cs.interpolate(v)?);
            (s, cu.interpolate(v)?)
        } else {
            let u = cu.samples.iter().find(|s| s.v == v).map(|s| s.y).unwrap_or(cu.interpolate(v)?);
            (cs.interpolate(v)?, u)
        };
        d.push(ys - yu);
    }
    DistanceProfile::from_samples(&p, cs.phi0, grid, d, noise)
}
