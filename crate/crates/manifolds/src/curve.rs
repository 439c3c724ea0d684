use std::fmt::Write as _;

use rayon::prelude::*;
use rpc3bp_dynamics::{Params, RotatingField};
use rpc3bp_numerics::{Precision, Real, DD};
use rpc3bp_separatrix::{homoclinic_state, v_of_radius};
use serde::{Deserialize, Serialize};

use crate::flow::{wrap_angle, Flow};
use crate::init::initial_state_generic;
use crate::section::event_xtol;
use crate::{Branch, ManifoldError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveOptions {
    pub r0: f64,
    pub tol: f64,
    pub precision: Precision,
    pub max_iter: usize,
    /// Re-run the middle sample from `2R₀` and store the change.
    pub estimate_truncation: bool,
}

impl Default for CurveOptions {
    fn default() -> Self {
        CurveOptions { r0: 50.0, tol: 1e-13, precision: Precision::Double, max_iter: 30, estimate_truncation: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub v: f64,
    pub r: f64,
    pub y: f64,
    pub g: f64,
    /// `|φ − φ₀|` left by the phase matching.
    pub phase_residual: f64,
    pub energy_residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifoldCurve {
    pub branch: Branch,
    pub phi0: f64,
    pub mu: f64,
    pub g0: f64,
    pub r0: f64,
    pub tol: f64,
    pub precision: Precision,
    pub samples: Vec<CurveSample>,
    pub truncation_error: Option<f64>,
}

impl ManifoldCurve {
    pub fn params(&self) -> Params {
        Params { mu: self.mu, g0: self.g0 }
    }

    pub fn v(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.v).collect()
    }

    /// Four-point Lagrange interpolation of `Y − ỹ_h` at `v`.
    pub fn interpolate(&self, v: f64) -> Result<f64, ManifoldError> {
        let s = &self.samples;
        let n = s.len();
        if n < 4 || v < s[0].v || v > s[n - 1].v {
            return Err(ManifoldError::Range { v, reason: "outside sampled window".into() });
        }
        let i = s.partition_point(|c| c.v <= v).clamp(2, n - 2) - 2;
        let pts = &s[i..i + 4];
        let mut acc = 0.0;
        for (a, pa) in pts.iter().enumerate() {
            let mut w = 1.0;
            for (b, pb) in pts.iter().enumerate() {
                if a != b {
                    w *= (v - pb.v) / (pa.v - pb.v);
                }
            }
            acc += w * (pa.y - homoclinic_state(pa.v).y_h);
        }
        Ok(acc + homoclinic_state(v).y_h)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("v,r,Y,branch,phi0,mu,g0,tol\n");
        for s in &self.samples {
            let _ = writeln!(
                out,
                "{:.17e},{:.17e},{:.17e},{},{},{},{},{:e}",
                s.v, s.r, s.y, self.branch, self.phi0, self.mu, self.g0, self.tol
            );
        }
        out
    }
}

/// Trajectory from the far-field start to the first crossing of
/// `r̃ = r_target` with `sign(ỹ) = y_sign`; returns the state there with `φ`
/// reduced modulo `2π`.
fn run_to_radius<T: Real>(
    field: &RotatingField<T>,
    y0: [T; 4],
    direction: f64,
    r_target: f64,
    y_sign: f64,
    tol: f64,
    horizon: f64,
) -> Result<[T; 4], ManifoldError> {
    let mut flow = Flow::new(field, tol, y0, direction)?;
    let bound = T::from_f64(direction * horizon);
    let rt = T::from_f64(r_target);
    loop {
        if flow.time().to_f64() == bound.to_f64() {
            return Err(ManifoldError::Timeout { horizon });
        }
        flow.step(bound)?;
        let (_, ya) = flow.start_of_step();
        let yb = flow.state();
        let ga = ya[0] - rt;
        let gb = yb[0] - rt;
        if (ga.to_f64() > 0.0) == (gb.to_f64() > 0.0) {
            continue;
        }
        let seg = flow.dense()?;
        let s = seg.locate(|_, y| y[0] - rt, ga, gb, event_xtol::<T>());
        let y = seg.eval(s);
        if y[2].to_f64() * y_sign > 0.0 {
            return Ok(y);
        }
    }
}

fn sample_generic<T: Real>(
    branch: Branch,
    phi0: f64,
    v: f64,
    p: &Params,
    opts: &CurveOptions,
) -> Result<CurveSample, ManifoldError> {
    if v == 0.0 {
        return Err(ManifoldError::Range { v, reason: "turning point".into() });
    }
    if !(opts.r0 >= 50.0) {
        return Err(ManifoldError::Invalid(format!("R0 = {} is below the far-field floor 50", opts.r0)));
    }
    let (far_sign, direction) = match branch {
        Branch::Unstable => (-1.0, 1.0),
        Branch::Stable => (1.0, -1.0),
    };
    let v_r = v_of_radius(opts.r0, far_sign).expect("R0 above perihelion");
    let h = homoclinic_state(v);
    if h.r_h >= opts.r0 {
        return Err(ManifoldError::Range { v, reason: format!("r_h(v) = {} beyond R0 = {}", h.r_h, opts.r0) });
    }
    let g3 = p.g0_cubed();
    let hr = homoclinic_state(v_r);
    let horizon = (v - v_r).abs() + 50.0;
    let field = RotatingField::<T>::new(p);
    let y_sign = v.signum();
    let phase_tol = if T::epsilon() < 1e-20 { 1e-22 } else { 1e-10 };
    let p0 = T::from_f64(phi0);

    let eval = |psi: T| -> Result<([T; 4], T), ManifoldError> {
        let y0 = initial_state_generic(branch, opts.r0, psi, p)?;
        let y = run_to_radius(&field, y0, direction, h.r_h, y_sign, opts.tol, horizon)?;
        let d = y[1] - p0;
        let k = (d.to_f64() / std::f64::consts::TAU).round();
        Ok((y, d - crate::flow::tau::<T>() * T::from_f64(k)))
    };
    let guess = phi0 - (h.alpha_h - hr.alpha_h - g3 * (v - v_r));
    let mut x0 = T::from_f64(wrap_angle(guess));
    let (mut y_best, mut f0) = eval(x0)?;
    let mut x1 = x0 - f0;
    let mut iterations = 1;
    let mut residual = f0.abs().to_f64();
    let secant_budget = opts.max_iter.min(8);
    while residual > phase_tol && iterations < secant_budget {
        let (y1, f1) = eval(x1)?;
        iterations += 1;
        let r1 = f1.abs().to_f64();
        if r1 < residual {
            y_best = y1;
            residual = r1;
        }
        if residual <= phase_tol {
            break;
        }
        let denom = f1 - f0;
        let step = if denom.to_f64() == 0.0 { f1 } else { f1 * (x1 - x0) / denom };
        x0 = x1;
        f0 = f1;
        x1 = x1 - step;
    }
    if residual > phase_tol {
        // The arrival phase can fold over the initial phase; bracket the
        // sign change nearest the unperturbed guess and refine it.
        let n = 32;
        let pts: Vec<f64> = (0..=n).map(|j| guess - std::f64::consts::PI + std::f64::consts::TAU * j as f64 / n as f64).collect();
        let mut vals = Vec::with_capacity(pts.len());
        for &x in &pts {
            vals.push(eval(T::from_f64(x))?.1);
            iterations += 1;
        }
        let mut bracket: Option<(usize, f64)> = None;
        for j in 0..n {
            let (fa, fb) = (vals[j].to_f64(), vals[j + 1].to_f64());
            if (fa > 0.0) != (fb > 0.0) && (fb - fa).abs() < std::f64::consts::PI {
                let dist = (0.5 * (pts[j] + pts[j + 1]) - guess).abs();
                if bracket.map_or(true, |(_, d)| dist < d) {
                    bracket = Some((j, dist));
                }
            }
        }
        if let Some((j, _)) = bracket {
            let (mut a, mut b) = (T::from_f64(pts[j]), T::from_f64(pts[j + 1]));
            let (mut fa, mut fb) = (vals[j], vals[j + 1]);
            let mut side = 0i32;
            for _ in 0..opts.max_iter.max(60) {
                let c = (a * fb - b * fa) / (fb - fa);
                let (yc, fc) = eval(c)?;
                iterations += 1;
                let rc = fc.abs().to_f64();
                if rc < residual {
                    y_best = yc;
                    residual = rc;
                }
                if residual <= phase_tol || (b - a).abs().to_f64() < 1e3 * T::epsilon() {
                    break;
                }
                if (fc.to_f64() > 0.0) == (fb.to_f64() > 0.0) {
                    b = c;
                    fb = fc;
                    if side == 1 {
                        fa = fa * T::from_f64(0.5);
                    }
                    side = 1;
                } else {
                    a = c;
                    fa = fc;
                    if side == -1 {
                        fb = fb * T::from_f64(0.5);
                    }
                    side = -1;
                }
            }
        }
    }
    // Long approaches leave step-selection noise in the event phase; the
    // curve value is insensitive to it at first order.
    if residual > 1e-6 {
        return Err(ManifoldError::NoConvergence { v, residual });
    }
    let energy = field.energy(&y_best).to_f64() + g3;
    Ok(CurveSample {
        v,
        r: y_best[0].to_f64(),
        y: y_best[2].to_f64(),
        g: y_best[3].to_f64(),
        phase_residual: residual,
        energy_residual: energy.abs(),
        iterations,
    })
}

/// `Y(v)` at a single `v` on the section `φ₀`.
pub fn sample_manifold(
    branch: Branch,
    phi0: f64,
    v: f64,
    p: &Params,
    opts: &CurveOptions,
) -> Result<CurveSample, ManifoldError> {
    p.validate()?;
    match opts.precision {
        Precision::Double => {
            rpc3bp_dynamics::check_tolerance::<f64>(opts.tol)?;
            sample_generic::<f64>(branch, phi0, v, p, opts)
        }
        Precision::Extended => {
            rpc3bp_dynamics::check_tolerance::<DD>(opts.tol)?;
            sample_generic::<DD>(branch, phi0, v, p, opts)
        }
    }
}

/// The invariant curve sampled at the given `v` values (in parallel).
pub fn compute_invariant_curve_with(
    branch: Branch,
    phi0: f64,
    vs: &[f64],
    p: &Params,
    opts: &CurveOptions,
) -> Result<ManifoldCurve, ManifoldError> {
    if !(opts.r0 >= 50.0) {
        return Err(ManifoldError::Invalid(format!("R0 = {} below the far-field floor 50", opts.r0)));
    }
    if vs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ManifoldError::Invalid("v samples must be strictly increasing".into()));
    }
    let samples = vs
        .par_iter()
        .map(|&v| sample_manifold(branch, phi0, v, p, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let truncation_error = if opts.estimate_truncation && !vs.is_empty() {
        let mid = vs[vs.len() / 2];
        let far = CurveOptions { r0: 2.0 * opts.r0, ..*opts };
        let a = samples[vs.len() / 2].y;
        Some((sample_manifold(branch, phi0, mid, p, &far)?.y - a).abs())
    } else {
        None
    };
    Ok(ManifoldCurve {
        branch,
        phi0,
        mu: p.mu,
        g0: p.g0,
        r0: opts.r0,
        tol: opts.tol,
        precision: opts.precision,
        samples,
        truncation_error,
    })
}

/// Uniform `n_samples` grid over `v_window`.
pub fn compute_invariant_curve(
    branch: Branch,
    phi0: f64,
    v_window: (f64, f64),
    p: &Params,
    tol: f64,
    n_samples: usize,
) -> Result<ManifoldCurve, ManifoldError> {
    let (lo, hi) = v_window;
    if !(lo > 0.0 && hi > lo) || n_samples < 2 {
        return Err(ManifoldError::Invalid(format!("window ({lo}, {hi}) with {n_samples} samples")));
    }
    let vs: Vec<f64> = (0..n_samples).map(|k| lo + (hi - lo) * k as f64 / (n_samples - 1) as f64).collect();
    let opts = CurveOptions { tol, ..CurveOptions::default() };
    compute_invariant_curve_with(branch, phi0, &vs, p, &opts)
}

/// Stable curve on `φ₀` from the incoming unstable curve on `−φ₀`, using
/// `Y^s_{φ₀}(v) = −Y^u_{−φ₀}(−v)`.
pub fn stable_by_reflection(phi0: f64, vs: &[f64], p: &Params, opts: &CurveOptions) -> Result<ManifoldCurve, ManifoldError> {
    let mirrored: Vec<f64> = vs.iter().rev().map(|v| -v).collect();
    let u = compute_invariant_curve_with(Branch::Unstable, -phi0, &mirrored, p, opts)?;
    let samples = u
        .samples
        .iter()
        .rev()
        .map(|s| CurveSample { v: -s.v, y: -s.y, ..*s })
        .collect();
    Ok(ManifoldCurve { branch: Branch::Stable, phi0, samples, ..u })
}
