//! Finite-horizon oscillation demonstrations: orbits started near a
//! transversal homoclinic point, logged as section returns in the inner
//! region and excursions beyond `R_out`.

use std::f64::consts::{PI, TAU};

use rpc3bp_dynamics::{DynError, Params, RotatingField};
use rpc3bp_manifolds::{lift_to_shell, sample_manifold, wrap_angle, Branch, CurveOptions, Flow, ManifoldError};
use rpc3bp_separatrix::homoclinic_state;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum OrbitError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Dynamics(#[from] DynError),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
}

impl From<rpc3bp_numerics::IntegrationError> for OrbitError {
    fn from(e: rpc3bp_numerics::IntegrationError) -> Self {
        OrbitError::Dynamics(DynError::from(e))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DemoOptions {
    pub tol: f64,
    pub max_time: f64,
    /// Hyperbolic threshold on `ỹ²/2 − 1/r̃ + G̃²/(2r̃²)`.
    pub escape_energy: f64,
    /// Escape is declared beyond `escape_factor·R_out`.
    pub escape_factor: f64,
    /// Beyond this radius a non-hyperbolic orbit is reported as parabolic.
    pub radius_cap: f64,
}

impl Default for DemoOptions {
    fn default() -> Self {
        DemoOptions { tol: 1e-13, max_time: 1e7, escape_energy: 1e-6, escape_factor: 10.0, radius_cap: 1e4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    Escaped,
    Parabolic,
    TimeLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Iterate {
    pub t: f64,
    pub r: f64,
    pub y: f64,
    pub g: f64,
    pub energy_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Excursion {
    pub t_exit: f64,
    pub max_r: f64,
    /// Smallest `r̃` after re-entering `r̃ < R_out`, `None` while still outside.
    pub return_r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcursionSummary {
    /// Excursions above `R_out` followed by a return below `R_in`.
    pub oscillations: usize,
    pub max_energy_residual: f64,
    pub total_time: f64,
    pub termination: Termination,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcursionLog {
    pub mu: f64,
    pub g0: f64,
    pub phi0: f64,
    pub seed: (f64, f64),
    pub r_out: f64,
    pub r_in: f64,
    pub iterations: usize,
    pub iterates: Vec<Iterate>,
    pub excursions: Vec<Excursion>,
    pub summary: ExcursionSummary,
}

impl ExcursionLog {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,t,r,Y,G,energy_residual\n");
        for (i, it) in self.iterates.iter().enumerate() {
            out.push_str(&format!("{i},{:.15e},{:.15e},{:.15e},{:.15e},{:.3e}\n", it.t, it.r, it.y, it.g, it.energy_residual));
        }
        out
    }

    pub fn summary_json(&self) -> String {
        #[derive(Serialize)]
        struct View<'a> {
            mu: f64,
            g0: f64,
            phi0: f64,
            seed: (f64, f64),
            r_out: f64,
            r_in: f64,
            iterations: usize,
            excursions: &'a [Excursion],
            summary: &'a ExcursionSummary,
        }
        serde_json::to_string_pretty(&View {
            mu: self.mu,
            g0: self.g0,
            phi0: self.phi0,
            seed: self.seed,
            r_out: self.r_out,
            r_in: self.r_in,
            iterations: self.iterations,
            excursions: &self.excursions,
            summary: &self.summary,
        })
        .expect("summary serializes")
    }
}

/// Kepler energy `ỹ²/2 − 1/r̃ + G̃²/(2r̃²)`.
pub fn kepler_energy(s: &[f64; 4]) -> f64 {
    0.5 * s[2] * s[2] - 1.0 / s[0] + s[3] * s[3] / (2.0 * s[0] * s[0])
}

/// Section point `(r̃_h(v), Y^u(v) + offset)` on the unstable curve.
pub fn homoclinic_seed(p: &Params, phi0: f64, v: f64, offset: f64, opts: &CurveOptions) -> Result<(f64, f64), OrbitError> {
    let s = sample_manifold(Branch::Unstable, phi0, v, p, opts)?;
    Ok((homoclinic_state(v).r_h.max(s.r), s.y + offset))
}

/// Index range of section levels `φ₀ + 2πj` crossed between `a` and `b`.
fn crossed_levels(a: f64, b: f64, phi0: f64) -> Vec<f64> {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let j0 = ((lo - phi0) / TAU).ceil() as i64;
    let j1 = ((hi - phi0) / TAU).floor() as i64;
    let mut levels: Vec<f64> = (j0..=j1).map(|j| phi0 + TAU * j as f64).filter(|l| *l != a).collect();
    if b < a {
        levels.reverse();
    }
    levels
}

pub fn oscillation_demo(
    p: &Params,
    seed: (f64, f64),
    n_iter: usize,
    r_out: f64,
    r_in: f64,
    phi0: f64,
    opts: &DemoOptions,
) -> Result<ExcursionLog, OrbitError> {
    p.validate()?;
    if !(r_out > r_in && r_in > 1.0) {
        return Err(OrbitError::Invalid(format!("need R_out > R_in > 1, got R_out = {r_out}, R_in = {r_in}")));
    }
    if n_iter == 0 {
        return Err(OrbitError::Invalid("n_iter must be positive".into()));
    }
    let (r0, y0) = seed;
    if !(r0 > p.collision_radius() && r0 < r_out) {
        return Err(OrbitError::Invalid(format!("seed radius {r0} must lie inside (collision radius, R_out)")));
    }
    let phi0 = wrap_angle(phi0);
    let g = lift_to_shell(r0, y0, phi0, p)?;
    let field = RotatingField::<f64>::new(p);
    let start = [r0, phi0, y0, g];
    let mut flow = Flow::new(&field, opts.tol, start, 1.0)?;
    let base_step = PI / p.g0_cubed();
    let level = p.energy_level();

    let mut iterates = Vec::new();
    let mut excursions: Vec<Excursion> = Vec::new();
    let mut outside = false;
    let mut max_res: f64 = 0.0;
    let termination;
    loop {
        let t = flow.time();
        if t >= opts.max_time {
            termination = Termination::TimeLimit;
            break;
        }
        let r_now = flow.state()[0];
        flow.set_max_step(if r_now > r_out { base_step.max(0.02 * r_now.powf(1.5)) } else { base_step });
        flow.step(opts.max_time)?;
        let (_, ya) = flow.start_of_step();
        let yb = flow.state();
        max_res = max_res.max((field.energy(&yb) - level).abs());

        if !outside && yb[0] > r_out {
            outside = true;
            excursions.push(Excursion { t_exit: flow.time(), max_r: yb[0], return_r: None });
        }
        if outside {
            let e = excursions.last_mut().expect("open excursion");
            e.max_r = e.max_r.max(yb[0]);
            if ya[2] > 0.0 && yb[2] <= 0.0 {
                let seg = flow.dense()?;
                let s = seg.locate(|_, y| y[2], ya[2], yb[2], 1e-14);
                e.max_r = e.max_r.max(seg.eval(s)[0]);
            }
            if yb[0] < r_out {
                outside = false;
                e.return_r = Some(yb[0]);
            }
        } else if let Some(e) = excursions.last_mut() {
            if let Some(rr) = e.return_r.as_mut() {
                *rr = rr.min(yb[0]);
            }
        }
        if !outside && ya[0] < r_out {
            let levels = crossed_levels(ya[1], yb[1], phi0);
            if !levels.is_empty() {
                let seg = flow.dense()?;
                for l in levels {
                    let s = seg.locate(|_, y| y[1] - l, ya[1] - l, yb[1] - l, 1e-14);
                    let y = seg.eval(s);
                    iterates.push(Iterate { t: s, r: y[0], y: y[2], g: y[3], energy_residual: (field.energy(&y) - level).abs() });
                    max_res = max_res.max((field.energy(&y) - level).abs());
                    if y[0] < r_in {
                        if let Some(e) = excursions.last_mut() {
                            if let Some(rr) = e.return_r.as_mut() {
                                *rr = rr.min(y[0]);
                            }
                        }
                    }
                }
            }
            if iterates.len() >= n_iter {
                iterates.truncate(n_iter);
                termination = Termination::Completed;
                break;
            }
        }
        if yb[0] > opts.escape_factor * r_out && kepler_energy(&yb) > opts.escape_energy {
            termination = Termination::Escaped;
            break;
        }
        if yb[0] > opts.radius_cap {
            termination = if kepler_energy(&yb) > opts.escape_energy { Termination::Escaped } else { Termination::Parabolic };
            break;
        }
    }
    let oscillations = excursions.iter().filter(|e| e.max_r > r_out && e.return_r.map_or(false, |r| r < r_in)).count();
    Ok(ExcursionLog {
        mu: p.mu,
        g0: p.g0,
        phi0,
        seed,
        r_out,
        r_in,
        iterations: iterates.len(),
        iterates,
        excursions,
        summary: ExcursionSummary { oscillations, max_energy_residual: max_res, total_time: flow.time(), termination },
    })
}

/// Independent seeds, run concurrently; results keep the seed order.
pub fn oscillation_demo_batch(
    p: &Params,
    seeds: &[(f64, f64)],
    n_iter: usize,
    r_out: f64,
    r_in: f64,
    phi0: f64,
    opts: &DemoOptions,
) -> Vec<Result<ExcursionLog, OrbitError>> {
    use rayon::prelude::*;
    seeds.par_iter().map(|&s| oscillation_demo(p, s, n_iter, r_out, r_in, phi0, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels_between_angles() {
        assert_eq!(crossed_levels(-0.1, 0.2, 0.0), vec![0.0]);
        assert_eq!(crossed_levels(0.2, -0.1, 0.0), vec![0.0]);
        assert!(crossed_levels(0.1, 0.2, 0.0).is_empty());
        assert_eq!(crossed_levels(3.0, 3.5, 0.0).len(), 0);
        assert_eq!(crossed_levels(-3.5, -2.5, 0.0).len(), 0);
        assert_eq!(crossed_levels(3.0, 6.5, 0.0), vec![TAU]);
    }

    #[test]
    fn rejects_bad_radii() {
        let p = Params::new(0.3, 2.2).unwrap();
        let o = DemoOptions::default();
        assert!(oscillation_demo(&p, (1.0, 0.1), 10, 2.0, 5.0, 0.0, &o).is_err());
        assert!(oscillation_demo(&p, (1.0, 0.1), 10, 5.0, 0.9, 0.0, &o).is_err());
        assert!(oscillation_demo(&p, (6.0, 0.1), 10, 5.0, 2.0, 0.0, &o).is_err());
    }
}
