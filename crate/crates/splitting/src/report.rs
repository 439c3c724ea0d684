use std::f64::consts::PI;

use rpc3bp_dynamics::Params;
use rpc3bp_manifolds::{compute_invariant_curve_with, Branch, CurveOptions};
use rpc3bp_melnikov::{predicted_first_harmonic_amplitude, predicted_lobe_area};
use rpc3bp_numerics::Precision;
use rpc3bp_separatrix::homoclinic_state;
use serde::{Deserialize, Serialize};

use crate::lobes::profile_lobe_integral;
use crate::roots::{first_order_roots, predicted_root_count, predicted_root_spacing};
use crate::{distance_profile, find_homoclinic_points, DistanceEvaluator, DistanceProfile, HomoclinicRoot, SplittingError};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplittingConfig {
    pub v_window: (f64, f64),
    /// Grid nodes per `2π` of section phase.
    pub samples_per_period: usize,
    pub curve: CurveOptions,
    /// Re-evaluate `D` at `10·tol` at three points and fold the change into the noise floor.
    pub probe_noise: bool,
    /// Re-run in extended precision when the prediction is within `1e4×` of the noise floor.
    pub allow_extended: bool,
}

impl Default for SplittingConfig {
    fn default() -> Self {
        SplittingConfig {
            v_window: (0.4, 1.6),
            samples_per_period: 32,
            curve: CurveOptions::default(),
            probe_noise: true,
            allow_extended: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LobeRecord {
    pub v_a: f64,
    pub v_b: f64,
    pub signed_area: f64,
    pub area: f64,
    pub quadrature_error: f64,
    pub max_distance: f64,
    pub predicted_area: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predictions {
    /// Largest first-harmonic amplitude over the window nodes.
    pub first_harmonic_amplitude: f64,
    /// `max|D| / first_harmonic_amplitude`.
    pub distance_ratio: f64,
    pub lobe_area: f64,
    pub mean_lobe_ratio: Option<f64>,
    /// `π/(G₀³ + α̃_h′)` at the window midpoint.
    pub root_spacing: f64,
    pub root_count: i64,
    /// `(k, v⁰_k)`.
    pub first_order_roots: Vec<(i64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplittingReport {
    pub mu: f64,
    pub g0: f64,
    pub phi0: f64,
    pub v_window: (f64, f64),
    pub precision: Precision,
    pub tol: f64,
    pub profile: DistanceProfile,
    pub roots: Vec<HomoclinicRoot>,
    /// `max|D|` between consecutive roots.
    pub measured_distances: Vec<f64>,
    pub max_distance: f64,
    pub lobes: Vec<LobeRecord>,
    pub predictions: Predictions,
    pub noise_floor: f64,
    pub trusted: bool,
    pub warnings: Vec<String>,
}

impl SplittingReport {
    pub fn params(&self) -> Params {
        Params { mu: self.mu, g0: self.g0 }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn roots_csv(&self) -> String {
        let mut out = String::from("v,phase,k,first_order_v,d_prime,d_prime_uncertainty,kind\n");
        for r in &self.roots {
            let kind = match r.kind {
                crate::RootKind::Transversal => "transversal",
                crate::RootKind::NearTangent => "near_tangent",
            };
            out.push_str(&format!(
                "{:.15e},{:.15e},{},{:.15e},{:.6e},{:.3e},{}\n",
                r.v, r.phase, r.k, r.first_order_v, r.d_prime, r.d_prime_uncertainty, kind
            ));
        }
        out
    }

    pub fn lobes_csv(&self) -> String {
        let mut out = String::from("v_a,v_b,signed_area,area,max_distance,predicted_area,ratio\n");
        for l in &self.lobes {
            out.push_str(&format!(
                "{:.15e},{:.15e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e}\n",
                l.v_a, l.v_b, l.signed_area, l.area, l.max_distance, l.predicted_area, l.ratio
            ));
        }
        out
    }
}

fn grid(window: (f64, f64), g0: f64, per_period: usize) -> Vec<f64> {
    let (lo, hi) = window;
    let r = homoclinic_state(lo).r_h;
    let fastest = g0 * g0 * g0 + 1.0 / (r * r);
    let floor = (2.0 * (hi - lo) * g0 * g0 * g0 / PI).ceil() as usize + 1;
    let n = (((hi - lo) * fastest / (2.0 * PI) * per_period as f64).ceil() as usize + 1).max(floor).max(8);
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn interval_max(profile: &DistanceProfile, a: f64, b: f64) -> f64 {
    let mut m: f64 = 0.0;
    for (v, d) in profile.v.iter().zip(&profile.d) {
        if *v > a && *v < b {
            m = m.max(d.abs());
        }
    }
    let n = 64;
    for i in 1..n {
        m = m.max(profile.eval(a + (b - a) * i as f64 / n as f64).abs());
    }
    m
}

pub fn splitting_report(p: &Params, phi0: f64, cfg: &SplittingConfig) -> Result<SplittingReport, SplittingError> {
    let (lo, hi) = cfg.v_window;
    if !(lo > 0.0 && hi > lo) {
        return Err(SplittingError::Invalid(format!("window [{lo}, {hi}] must lie in v > 0")));
    }
    if cfg.samples_per_period < 8 {
        return Err(SplittingError::Invalid("need at least 8 samples per period".into()));
    }
    let vs = grid(cfg.v_window, p.g0, cfg.samples_per_period);
    let (cs, cu) = rayon::join(
        || compute_invariant_curve_with(Branch::Stable, phi0, &vs, p, &cfg.curve),
        || compute_invariant_curve_with(Branch::Unstable, phi0, &vs, p, &cfg.curve),
    );
    let mut profile = distance_profile(&cs?, &cu?)?;
    let mut warnings = Vec::new();

    if cfg.probe_noise && p.mu > 0.0 {
        let probe: Vec<f64> = [0.25, 0.5, 0.75].iter().map(|f| lo + f * (hi - lo)).collect();
        let mut coarse = cfg.curve.clone();
        coarse.tol = (10.0 * cfg.curve.tol).min(1e-6);
        let ev = DistanceEvaluator::new(*p, phi0, coarse);
        let fine = DistanceEvaluator::new(*p, phi0, cfg.curve.clone());
        let (a, b) = (ev.distances(&probe)?, fine.distances(&probe)?);
        let change = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        profile.noise_floor = profile.noise_floor.max(change);
    }
    let noise_floor = profile.noise_floor;

    let amplitude = if p.mu > 0.0 {
        vs.iter().map(|&v| predicted_first_harmonic_amplitude(v, p)).collect::<Result<Vec<_>, _>>()?.into_iter().fold(0.0, f64::max)
    } else {
        0.0
    };
    let trusted = p.mu == 0.0 || amplitude >= 1e4 * noise_floor;
    if !trusted {
        if cfg.allow_extended && cfg.curve.precision == Precision::Double {
            let mut ext = cfg.clone();
            ext.curve.precision = Precision::Extended;
            ext.curve.tol = ext.curve.tol.min(1e-20);
            ext.allow_extended = false;
            let mut rep = splitting_report(p, phi0, &ext)?;
            rep.warnings.insert(0, "re-run in extended precision: binary64 noise floor too close to the prediction".into());
            return Ok(rep);
        }
        warnings.push(format!("predicted amplitude {amplitude:.3e} is within 1e4 of the noise floor {noise_floor:.3e}"));
    }

    let roots = find_homoclinic_points(&profile)?;
    let lobe_pred = predicted_lobe_area(p);
    let mut lobes = Vec::new();
    let mut measured = Vec::new();
    for w in roots.windows(2) {
        let (a, b) = (w[0].v, w[1].v);
        let li = profile_lobe_integral(&profile, a, b);
        let m = interval_max(&profile, a, b);
        measured.push(m);
        lobes.push(LobeRecord {
            v_a: a,
            v_b: b,
            signed_area: li.signed,
            area: li.signed.abs(),
            quadrature_error: li.error,
            max_distance: m,
            predicted_area: lobe_pred,
            ratio: if lobe_pred > 0.0 { li.signed.abs() / lobe_pred } else { f64::NAN },
        });
    }
    let max_distance = profile.max_abs().max(interval_max(&profile, lo, hi));
    let mean_lobe_ratio =
        if lobes.is_empty() || lobe_pred == 0.0 { None } else { Some(lobes.iter().map(|l| l.ratio).sum::<f64>() / lobes.len() as f64) };
    let predictions = Predictions {
        first_harmonic_amplitude: amplitude,
        distance_ratio: if amplitude > 0.0 { max_distance / amplitude } else { f64::NAN },
        lobe_area: lobe_pred,
        mean_lobe_ratio,
        root_spacing: predicted_root_spacing(0.5 * (lo + hi), p.g0),
        root_count: predicted_root_count(cfg.v_window, p.g0),
        first_order_roots: first_order_roots(cfg.v_window, phi0, p.g0)?,
    };
    Ok(SplittingReport {
        mu: p.mu,
        g0: p.g0,
        phi0,
        v_window: cfg.v_window,
        precision: cfg.curve.precision,
        tol: cfg.curve.tol,
        profile,
        roots,
        measured_distances: measured,
        max_distance,
        lobes,
        predictions,
        noise_floor,
        trusted,
        warnings,
    })
}
