//! Cubic homoclinic tangency: the symmetric root near `x ≡ 0 (mod π)`
//! where `D′` changes sign as `μ` varies.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rpc3bp_dynamics::Params;
use rpc3bp_manifolds::CurveOptions;
use rpc3bp_melnikov::{predicted_tangency_lobe_area, predicted_tangency_mu, tangency_deviation_scale};
use rpc3bp_numerics::roots::brent;
use rpc3bp_separatrix::{homoclinic_derivatives, homoclinic_state, section_phase, section_phase_rate};
use serde::{Deserialize, Serialize};

use crate::{DistanceEvaluator, SplittingError};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TangencyOptions {
    pub curve: CurveOptions,
    pub phi0: f64,
    /// The tangency is sought at the multiple of `π` nearest `x(v_target)`.
    pub v_target: f64,
    /// Half-width in `x` of the local fit.
    pub half_width: f64,
    pub nodes: usize,
    pub degree: usize,
    pub mu_tol: f64,
    pub max_iter: usize,
    /// Root counts are taken at `μ* ± probe_fraction·(1/2 − μ*)`.
    pub probe_fraction: f64,
    pub count_nodes: usize,
    pub lobe_nodes: usize,
}

impl Default for TangencyOptions {
    fn default() -> Self {
        TangencyOptions {
            curve: CurveOptions::default(),
            phi0: 0.0,
            v_target: 1.0,
            half_width: 0.9,
            nodes: 41,
            degree: 11,
            mu_tol: 1e-10,
            max_iter: 60,
            probe_fraction: 0.3,
            count_nodes: 96,
            lobe_nodes: 33,
        }
    }
}

/// Derivatives in `v` of `D` at the tangency, and the same multiplied by
/// `h^k` with `h` the local node spacing in `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangencyResiduals {
    pub d: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub spacing: f64,
    pub d1_scaled: f64,
    pub d2_scaled: f64,
    pub d3_scaled: f64,
    /// Change of `D″h²` when the fit degree is lowered by two.
    pub d2_uncertainty: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangencyPoint {
    pub g0: f64,
    pub mu_star: f64,
    pub mu_predicted: Option<f64>,
    /// `(1/2 − μ*)/(16√2 G₀² e^{−G₀³/3})`.
    pub deviation_ratio: f64,
    pub v_tangent: f64,
    pub x_tangent: f64,
    /// `x_tangent/π`, rounded.
    pub phase_multiple: i64,
    pub residuals: TangencyResiduals,
    pub noise_floor: f64,
    pub fit_rms: f64,
    pub v_transversal: f64,
    pub lobe_area_at_tangency: f64,
    pub predicted_lobe_area: f64,
    /// `(μ, roots per 2π in x)` on each side of `μ*`.
    pub roots_below: (f64, usize),
    pub roots_above: (f64, usize),
    pub iterations: usize,
}

impl TangencyPoint {
    pub fn transition_verified(&self) -> bool {
        let mut c = [self.roots_below.1, self.roots_above.1];
        c.sort_unstable();
        c == [2, 4]
    }

    /// `|D|`, `|D′|h` below `10×` noise and `|D″|h²` above `100×` noise.
    pub fn signature(&self) -> (bool, bool, bool) {
        let n = self.noise_floor;
        let r = &self.residuals;
        (r.d.abs() < 10.0 * n, r.d1_scaled.abs() < 10.0 * n, r.d2_scaled.abs() > 100.0 * n)
    }
}

#[derive(Debug, Clone)]
struct LocalFit {
    x_center: f64,
    half_width: f64,
    coeffs: Vec<f64>,
    rms: f64,
}

impl LocalFit {
    fn derivs(&self, x: f64) -> [f64; 4] {
        let u = (x - self.x_center) / self.half_width;
        let mut out = [0.0; 4];
        for (k, o) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for n in k..self.coeffs.len() {
                let fall: f64 = (0..k).map(|j| (n - j) as f64).product();
                s += self.coeffs[n] * fall * u.powi((n - k) as i32);
            }
            *o = s / self.half_width.powi(k as i32);
        }
        out
    }

    /// Symmetric root: the median of the roots inside the fit window, which
    /// follows the pitchfork continuously in `μ`.
    fn central_root(&self) -> Option<f64> {
        let n = 720;
        let (lo, hi) = (self.x_center - 0.9 * self.half_width, self.x_center + 0.9 * self.half_width);
        let mut roots = Vec::new();
        let mut fa = self.derivs(lo)[0];
        for i in 0..n {
            let a = lo + (hi - lo) * i as f64 / n as f64;
            let b = lo + (hi - lo) * (i + 1) as f64 / n as f64;
            let fb = self.derivs(b)[0];
            if fa == 0.0 {
                roots.push(a);
            } else if fa.signum() != fb.signum() && fb != 0.0 {
                roots.push(brent(|t| self.derivs(t)[0], a, b, 1e-15, 200).ok()?);
            }
            fa = fb;
        }
        match roots.len() {
            0 => None,
            k if k % 2 == 1 => Some(roots[k / 2]),
            _ => roots.into_iter().min_by(|a, b| (a - self.x_center).abs().total_cmp(&(b - self.x_center).abs())),
        }
    }
}

fn fit(xs: &[f64], ds: &[f64], x_center: f64, half_width: f64, degree: usize) -> Result<LocalFit, SplittingError> {
    let n = xs.len();
    let a = DMatrix::from_fn(n, degree + 1, |i, k| ((xs[i] - x_center) / half_width).powi(k as i32));
    let b = DVector::from_column_slice(ds);
    let svd = a.clone().svd(true, true);
    let c = svd.solve(&b, 1e-14).map_err(|e| SplittingError::NotFound(format!("local fit failed: {e}")))?;
    let resid = &a * &c - &b;
    let rms = (resid.norm_squared() / n as f64).sqrt();
    Ok(LocalFit { x_center, half_width, coeffs: c.iter().copied().collect(), rms })
}

struct Analyzer<'a> {
    g0: f64,
    opts: &'a TangencyOptions,
}

struct LocalState {
    xs: Vec<f64>,
    ds: Vec<f64>,
    fit: LocalFit,
    root: f64,
    derivs: [f64; 4],
    sample_max: f64,
}

impl<'a> Analyzer<'a> {
    fn evaluator(&self, mu: f64) -> Result<DistanceEvaluator, SplittingError> {
        let p = Params::new(mu, self.g0).map_err(|e| SplittingError::Invalid(e.to_string()))?;
        Ok(DistanceEvaluator::new(p, self.opts.phi0, self.opts.curve.clone()))
    }

    fn local(&self, mu: f64, x_c: f64) -> Result<LocalState, SplittingError> {
        let o = self.opts;
        let xs: Vec<f64> = (0..o.nodes)
            .map(|i| x_c - o.half_width + 2.0 * o.half_width * i as f64 / (o.nodes - 1) as f64)
            .collect();
        let (_, ds) = self.evaluator(mu)?.distances_at_phases(&xs)?;
        let fit = fit(&xs, &ds, x_c, o.half_width, o.degree)?;
        let root = fit
            .central_root()
            .ok_or_else(|| SplittingError::NotFound(format!("no root near x = {x_c:.4} at mu = {mu}")))?;
        let derivs = fit.derivs(root);
        let sample_max = ds.iter().fold(0.0, |m: f64, d| m.max(d.abs()));
        Ok(LocalState { xs, ds, fit, root, derivs, sample_max })
    }

    fn indicator(&self, mu: f64, x_c: f64) -> Result<f64, SplittingError> {
        let s = self.local(mu, x_c)?;
        Ok(s.derivs[1] / s.sample_max.max(f64::MIN_POSITIVE))
    }

    /// Sign changes of `D` over one period `[x_c − π/2, x_c + 3π/2]`.
    fn count_roots(&self, mu: f64, x_c: f64) -> Result<usize, SplittingError> {
        let n = self.opts.count_nodes;
        let xs: Vec<f64> = (0..=n).map(|j| x_c - 0.5 * PI + 2.0 * PI * j as f64 / n as f64).collect();
        let (_, ds) = self.evaluator(mu)?.distances_at_phases(&xs)?;
        Ok(ds.windows(2).filter(|w| w[0].signum() != w[1].signum()).count())
    }
}

/// `[1/2 − 2.5·s, 1/2 − 0.4·s]` with `s = 16√2 G₀² e^{−G₀³/3}`, clipped to `(0, 1/2)`.
pub fn default_tangency_bracket(g0: f64) -> (f64, f64) {
    let s = tangency_deviation_scale(g0);
    ((0.5 - 2.5 * s).max(0.01), (0.5 - 0.4 * s).min(0.5 - 1e-6))
}

fn to_v_derivatives(f: [f64; 4], v: f64, g0: f64) -> [f64; 4] {
    let h = homoclinic_state(v);
    let [dr, _, dy] = homoclinic_derivatives(v);
    let r = h.r_h;
    let x1 = section_phase_rate(v, g0);
    let x2 = 2.0 * dr / r.powi(3);
    let x3 = 2.0 * (dy / r.powi(3) - 3.0 * dr * dr / r.powi(4));
    [f[0], f[1] * x1, f[2] * x1 * x1 + f[1] * x2, f[3] * x1.powi(3) + 3.0 * f[2] * x1 * x2 + f[1] * x3]
}

pub fn find_tangency(g0: f64, mu_bracket: (f64, f64), opts: &TangencyOptions) -> Result<TangencyPoint, SplittingError> {
    if !(g0 >= 2.6) {
        return Err(SplittingError::Invalid(format!("tangency search needs g0 >= 2.6, got {g0}")));
    }
    let (lo, hi) = mu_bracket;
    if !(lo > 0.0 && hi <= 0.5 && lo < hi) {
        return Err(SplittingError::Invalid(format!("mass-ratio bracket ({lo}, {hi}) must lie in (0, 1/2]")));
    }
    if opts.nodes <= opts.degree + 2 || opts.count_nodes < 16 || opts.lobe_nodes < 5 {
        return Err(SplittingError::Invalid("too few nodes for the local analysis".into()));
    }
    let an = Analyzer { g0, opts };
    let n0 = (section_phase(opts.v_target, opts.phi0, g0) / PI).round() as i64;
    let mut chosen = None;
    for n in [n0, n0 + 1] {
        let x_c = n as f64 * PI;
        let (a, b) = (an.indicator(lo, x_c), an.indicator(hi, x_c));
        if let (Ok(a), Ok(b)) = (a, b) {
            if a.signum() != b.signum() {
                chosen = Some(x_c);
                break;
            }
        }
    }
    let x_c = chosen.ok_or_else(|| {
        SplittingError::NotFound(format!("no sign change of the tangency indicator in mu bracket ({lo}, {hi}) at g0 = {g0}"))
    })?;

    let mut iterations = 0;
    let mut failure = None;
    let mu_star = brent(
        |mu| {
            iterations += 1;
            match an.indicator(mu, x_c) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        lo,
        hi,
        opts.mu_tol,
        opts.max_iter,
    )
    .map_err(|e| SplittingError::NotFound(e.to_string()))?;
    if let Some(e) = failure {
        return Err(e);
    }

    let state = an.local(mu_star, x_c)?;
    let v_t = an.evaluator(mu_star)?.v_of_phase(state.root)?;
    let dv = to_v_derivatives(state.derivs, v_t, g0);
    let h = 2.0 * opts.half_width / (opts.nodes - 1) as f64 / section_phase_rate(v_t, g0);
    let noise_floor = (100.0 * opts.curve.tol).max(state.fit.rms);
    let lower = fit(&state.xs, &state.ds, x_c, opts.half_width, opts.degree.saturating_sub(2).max(3))?;
    let d2_lower = to_v_derivatives(lower.derivs(state.root), v_t, g0)[2];

    let ev = an.evaluator(mu_star)?;
    let x_other = {
        let (a, b) = (state.root + PI - 0.6, state.root + PI + 0.6);
        let f = |x: f64| ev.v_of_phase(x).and_then(|v| ev.distance(v)).unwrap_or(f64::NAN);
        brent(f, a, b, 1e-12, 100).map_err(|e| SplittingError::NotFound(format!("adjacent transversal root: {e}")))?
    };
    let m = opts.lobe_nodes - 1 + (opts.lobe_nodes - 1) % 2;
    let xs: Vec<f64> = (0..=m).map(|j| state.root + (x_other - state.root) * j as f64 / m as f64).collect();
    let (vs, ds) = ev.distances_at_phases(&xs)?;
    let integrand: Vec<f64> =
        vs.iter().zip(&ds).map(|(&v, &d)| homoclinic_state(v).y_h * d / section_phase_rate(v, g0)).collect();
    let hx = (x_other - state.root) / m as f64;
    let simpson: f64 = integrand
        .iter()
        .enumerate()
        .map(|(j, f)| f * if j == 0 || j == m { 1.0 } else if j % 2 == 1 { 4.0 } else { 2.0 })
        .sum::<f64>()
        * hx
        / 3.0;

    let dev = (0.5 - mu_star).max(0.0);
    let delta = opts.probe_fraction * dev;
    let below = (mu_star - delta).max(1e-6);
    let above = (mu_star + delta).min(0.5);
    let roots_below = (below, an.count_roots(below, x_c)?);
    let roots_above = (above, an.count_roots(above, x_c)?);

    Ok(TangencyPoint {
        g0,
        mu_star,
        mu_predicted: predicted_tangency_mu(g0).ok(),
        deviation_ratio: dev / tangency_deviation_scale(g0),
        v_tangent: v_t,
        x_tangent: state.root,
        phase_multiple: (state.root / PI).round() as i64,
        residuals: TangencyResiduals {
            d: dv[0],
            d1: dv[1],
            d2: dv[2],
            d3: dv[3],
            spacing: h,
            d1_scaled: dv[1] * h,
            d2_scaled: dv[2] * h * h,
            d3_scaled: dv[3] * h * h * h,
            d2_uncertainty: (dv[2] - d2_lower).abs() * h * h,
        },
        noise_floor,
        fit_rms: state.fit.rms,
        v_transversal: ev.v_of_phase(x_other)?,
        lobe_area_at_tangency: simpson.abs(),
        predicted_lobe_area: predicted_tangency_lobe_area(g0),
        roots_below,
        roots_above,
        iterations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangencyCurve {
    pub points: Vec<TangencyPoint>,
    /// `(g0, message)` for steps that failed.
    pub failures: Vec<(f64, String)>,
}

impl TangencyCurve {
    /// Header `g0,mu_star,mu_predicted,ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("g0,mu_star,mu_predicted,ratio\n");
        for t in &self.points {
            let pred = t.mu_predicted.map_or_else(|| "nan".to_string(), |m| format!("{m:.12e}"));
            out.push_str(&format!("{:.12e},{:.12e},{},{:.12e}\n", t.g0, t.mu_star, pred, t.deviation_ratio));
        }
        out
    }
}

/// Natural continuation in `G₀`: each bracket is centred on the previous
/// deviation ratio, falling back to the default bracket.
pub fn continuation_tangency_curve(g0_range: (f64, f64), steps: usize, opts: &TangencyOptions) -> Result<TangencyCurve, SplittingError> {
    let (a, b) = g0_range;
    if !(a >= 2.6 && b >= a) || steps == 0 {
        return Err(SplittingError::Invalid(format!("g0 range ({a}, {b}) with {steps} steps")));
    }
    let grid: Vec<f64> =
        if steps == 1 { vec![a] } else { (0..steps).map(|i| a + (b - a) * i as f64 / (steps - 1) as f64).collect() };
    let mut curve = TangencyCurve { points: Vec::new(), failures: Vec::new() };
    let mut ratio: Option<f64> = None;
    for &g0 in &grid {
        let fallback = default_tangency_bracket(g0);
        let attempt = match ratio {
            Some(q) => {
                let s = tangency_deviation_scale(g0) * q;
                let br = ((0.5 - 1.6 * s).max(fallback.0), (0.5 - 0.6 * s).min(fallback.1));
                find_tangency(g0, br, opts).or_else(|_| find_tangency(g0, fallback, opts))
            }
            None => find_tangency(g0, fallback, opts),
        };
        match attempt {
            Ok(t) => {
                ratio = Some(t.deviation_ratio);
                curve.points.push(t);
            }
            Err(e) => curve.failures.push((g0, e.to_string())),
        }
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_fit_derivatives() {
        let xs: Vec<f64> = (0..25).map(|i| -0.9 + 1.8 * i as f64 / 24.0 + 6.0).collect();
        let ds: Vec<f64> = xs.iter().map(|x| (x - 6.02f64).powi(3) - 0.01 * (x - 6.02)).collect();
        let f = fit(&xs, &ds, 6.0, 0.9, 7).unwrap();
        let r = f.central_root().unwrap();
        assert!((r - 6.02).abs() < 1e-10, "{r}");
        let d = f.derivs(r);
        assert!((d[1] + 0.01).abs() < 1e-10);
        assert!(d[2].abs() < 1e-9);
        assert!((d[3] - 6.0).abs() < 1e-8);
    }

    #[test]
    fn bracket_is_ordered() {
        for g in [2.7, 3.0, 3.2] {
            let (a, b) = default_tangency_bracket(g);
            assert!(0.0 < a && a < b && b < 0.5);
        }
    }

    #[test]
    fn rejects_low_g0() {
        assert!(matches!(find_tangency(2.4, (0.3, 0.5), &TangencyOptions::default()), Err(SplittingError::Invalid(_))));
    }
}
