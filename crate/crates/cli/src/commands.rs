use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use rpc3bp_dynamics::Params;
use rpc3bp_manifolds::{compute_invariant_curve_with, Branch, CurveOptions};
use rpc3bp_melnikov::{compute_series, MelnikovError, MelnikovSeries, Method};
use rpc3bp_orbits::{homoclinic_seed, oscillation_demo, DemoOptions};
use rpc3bp_separatrix::homoclinic_state;
use rpc3bp_splitting::{
    continuation_tangency_curve, distance_profile, splitting_report, RootKind, SplittingConfig, SplittingReport,
    TangencyOptions,
};
use serde::Serialize;

use crate::{CliError, Outcome, Provenance, RunConfig, Status, SweepStage, Writer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Homoclinic,
    Melnikov,
    Manifolds,
    Splitting,
    Tangency,
    Oscillate,
    Sweep,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Homoclinic => "homoclinic",
            Stage::Melnikov => "melnikov",
            Stage::Manifolds => "manifolds",
            Stage::Splitting => "splitting",
            Stage::Tangency => "tangency",
            Stage::Oscillate => "oscillate",
            Stage::Sweep => "sweep",
        }
    }
}

pub fn run_stage(stage: Stage, cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    match stage {
        Stage::Homoclinic => cmd_homoclinic(cfg),
        Stage::Melnikov => cmd_melnikov(cfg),
        Stage::Manifolds => cmd_manifolds(cfg),
        Stage::Splitting => cmd_splitting(cfg),
        Stage::Tangency => cmd_tangency(cfg),
        Stage::Oscillate => cmd_oscillate(cfg),
        Stage::Sweep => cmd_sweep(cfg),
    }
}

fn writer(stage: Stage, cfg: &RunConfig) -> Result<Writer, CliError> {
    let mut w = Writer::new(&cfg.out, Provenance::new(stage.name(), cfg))?;
    w.json("config.json", cfg)?;
    Ok(w)
}

fn curve_options(cfg: &RunConfig) -> CurveOptions {
    CurveOptions { r0: cfg.r0, tol: cfg.tol, precision: cfg.precision, ..CurveOptions::default() }
}

fn splitting_config(cfg: &RunConfig) -> SplittingConfig {
    SplittingConfig {
        v_window: cfg.v_window,
        samples_per_period: cfg.samples_per_period,
        curve: curve_options(cfg),
        probe_noise: true,
        allow_extended: cfg.allow_extended,
    }
}

pub fn cmd_homoclinic(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut w = writer(Stage::Homoclinic, cfg)?;
    let mut table = String::from("v,tau,r_h,y_h,alpha_h\n");
    let mut projection = String::from("r,y\n");
    for v in cfg.homoclinic_grid.points() {
        let h = homoclinic_state(v);
        writeln!(table, "{},{},{},{},{}", v, h.tau, h.r_h, h.y_h, h.alpha_h).unwrap();
        writeln!(projection, "{},{}", h.r_h, h.y_h).unwrap();
    }
    w.csv("homoclinic.csv", &table)?;
    w.csv("separatrix_projection.csv", &projection)?;
    Ok(w.finish(Status::Trusted, Vec::new()))
}

fn series_for(p: &Params, method: Method, cfg: &RunConfig) -> Result<MelnikovSeries, CliError> {
    compute_series(p, method, cfg.lmax, cfg.jmax, cfg.quad_tol).map_err(|e| match e {
        MelnikovError::Unsupported(_) => CliError::Validation(format!(
            "the asymptotic method only provides harmonics l = 1, 2 (requested lmax = {}); lower lmax to 2 or drop the method",
            cfg.lmax
        )),
        other => other.into(),
    })
}

fn comparison_table(series: &[MelnikovSeries]) -> String {
    let ls: BTreeSet<i64> = series.iter().flat_map(|s| s.coefficients.iter().map(|c| c.l)).collect();
    let mut out = String::from("l");
    for s in series {
        write!(out, ",{}", s.method).unwrap();
    }
    for s in series.iter().skip(1) {
        write!(out, ",ratio_{m}_{r},agreement_{m}_{r}", m = s.method, r = series[0].method).unwrap();
    }
    out.push_str(",trusted\n");
    for l in ls {
        let cells: Vec<Option<&rpc3bp_melnikov::Coefficient>> =
            series.iter().map(|s| s.coefficients.iter().find(|c| c.l == l)).collect();
        write!(out, "{l}").unwrap();
        for c in &cells {
            match c {
                Some(c) => write!(out, ",{:.15e}", c.value).unwrap(),
                None => out.push(','),
            }
        }
        for c in cells.iter().skip(1) {
            match (c, cells[0]) {
                (Some(a), Some(b)) => {
                    let ratio = if b.value != 0.0 { a.value / b.value } else { f64::NAN };
                    let scale = a.value.abs().max(b.value.abs());
                    let agreement = if scale > 0.0 { (a.value - b.value).abs() / scale } else { 0.0 };
                    if ratio.is_nan() {
                        write!(out, ",nan,{agreement:.3e}").unwrap();
                    } else {
                        write!(out, ",{ratio:.15e},{agreement:.3e}").unwrap();
                    }
                }
                _ => out.push_str(",,"),
            }
        }
        let trusted = cells.iter().flatten().all(|c| c.trusted);
        writeln!(out, ",{trusted}").unwrap();
    }
    out
}

pub fn cmd_melnikov(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.params();
    let mut methods = cfg.methods.clone();
    methods.dedup();
    let series = methods.iter().map(|&m| series_for(&p, m, cfg)).collect::<Result<Vec<_>, _>>()?;
    let mut w = writer(Stage::Melnikov, cfg)?;
    for s in &series {
        w.json(&format!("melnikov_{}.json", s.method), s)?;
    }
    w.csv("melnikov_comparison.csv", &comparison_table(&series))?;
    let untrusted: Vec<String> = series
        .iter()
        .flat_map(|s| s.coefficients.iter().filter(|c| !c.trusted).map(move |c| format!("{} l={} untrusted", s.method, c.l)))
        .collect();
    let status = if untrusted.is_empty() { Status::Trusted } else { Status::Untrusted };
    Ok(w.finish(status, untrusted))
}

pub fn cmd_manifolds(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.params();
    let (lo, hi) = cfg.v_window;
    let n = cfg.manifold_samples;
    let vs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let opts = CurveOptions { estimate_truncation: true, ..curve_options(cfg) };
    let (cs, cu) = rayon::join(
        || compute_invariant_curve_with(Branch::Stable, cfg.phi0, &vs, &p, &opts),
        || compute_invariant_curve_with(Branch::Unstable, cfg.phi0, &vs, &p, &opts),
    );
    let (cs, cu) = (cs?, cu?);
    let profile = distance_profile(&cs, &cu)?;
    let mut w = writer(Stage::Manifolds, cfg)?;
    w.csv("manifold_unstable.csv", &cu.to_csv())?;
    w.csv("manifold_stable.csv", &cs.to_csv())?;
    w.csv("manifold_distance.csv", &profile.to_csv())?;
    Ok(w.finish(Status::Trusted, Vec::new()))
}

fn write_report(w: &mut Writer, rep: &SplittingReport) -> Result<(), CliError> {
    w.json("splitting.json", rep)?;
    w.csv("splitting_roots.csv", &rep.roots_csv())?;
    w.csv("splitting_lobes.csv", &rep.lobes_csv())?;
    w.csv("splitting_profile.csv", &rep.profile.to_csv())
}

pub fn cmd_splitting(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rep = splitting_report(&cfg.params(), cfg.phi0, &splitting_config(cfg))?;
    let mut w = writer(Stage::Splitting, cfg)?;
    write_report(&mut w, &rep)?;
    let status = if rep.trusted { Status::Trusted } else { Status::Untrusted };
    Ok(w.finish(status, rep.warnings.clone()))
}

pub fn cmd_tangency(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let opts = TangencyOptions { curve: curve_options(cfg), mu_tol: cfg.root_tol, ..TangencyOptions::default() };
    let curve = continuation_tangency_curve(cfg.tangency.g0_range, cfg.tangency.steps, &opts)?;
    let mut w = writer(Stage::Tangency, cfg)?;
    w.csv("tangency.csv", &curve.to_csv())?;
    w.json("tangency.json", &curve)?;
    if curve.points.is_empty() {
        return Err(CliError::Numerical(format!("no tangency found on the {} steps", cfg.tangency.steps)));
    }
    let mut notes: Vec<String> = curve.failures.iter().map(|(g, m)| format!("g0 = {g}: {m}")).collect();
    for t in curve.points.iter().filter(|t| !t.transition_verified()) {
        notes.push(format!("g0 = {}: root-count transition not verified", t.g0));
    }
    let status = if notes.is_empty() { Status::Trusted } else { Status::Untrusted };
    Ok(w.finish(status, notes))
}

pub fn cmd_oscillate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.params();
    let o = &cfg.orbit;
    let seed = match o.seed {
        Some(s) => s,
        None => {
            let rep = splitting_report(&p, cfg.phi0, &splitting_config(cfg))?;
            let root = rep
                .roots
                .iter()
                .find(|r| r.kind == RootKind::Transversal)
                .ok_or_else(|| CliError::Numerical("no transversal homoclinic point to seed from".into()))?;
            homoclinic_seed(&p, cfg.phi0, root.v, o.offset_fraction * rep.max_distance, &curve_options(cfg))?
        }
    };
    let opts = DemoOptions { tol: cfg.tol, max_time: o.max_time, ..DemoOptions::default() };
    let log = oscillation_demo(&p, seed, o.n_iter, o.r_out, o.r_in, cfg.phi0, &opts)?;
    let mut w = writer(Stage::Oscillate, cfg)?;
    w.csv("oscillate.csv", &log.to_csv())?;
    let summary: serde_json::Value = serde_json::from_str(&log.summary_json()).expect("summary is JSON");
    w.json("oscillate.json", &summary)?;
    Ok(w.finish(Status::Trusted, Vec::new()))
}

#[derive(Debug, Clone, Serialize)]
pub(crate) struct SweepEntry {
    mu: f64,
    g0: f64,
    ok: bool,
    trusted: bool,
    error: Option<String>,
    splitting: Option<SplittingReport>,
    melnikov: Vec<MelnikovSeries>,
}

pub(crate) fn sweep_one(stage: SweepStage, mu: f64, g0: f64, cfg: &RunConfig) -> SweepEntry {
    let p = Params { mu, g0 };
    let mut e = SweepEntry { mu, g0, ok: false, trusted: false, error: None, splitting: None, melnikov: Vec::new() };
    match stage {
        SweepStage::Splitting => match splitting_report(&p, cfg.phi0, &splitting_config(cfg)) {
            Ok(r) => {
                e.ok = true;
                e.trusted = r.trusted;
                e.splitting = Some(r);
            }
            Err(err) => e.error = Some(err.to_string()),
        },
        SweepStage::Melnikov => {
            match cfg.methods.iter().map(|&m| series_for(&p, m, cfg)).collect::<Result<Vec<_>, _>>() {
                Ok(s) => {
                    e.ok = true;
                    e.trusted = s.iter().all(|x| x.all_trusted());
                    e.melnikov = s;
                }
                Err(err) => e.error = Some(err.to_string()),
            }
        }
    }
    e
}

fn csv_text(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

fn sweep_table(stage: SweepStage, entries: &[SweepEntry], cfg: &RunConfig) -> String {
    let mut out = String::new();
    match stage {
        SweepStage::Splitting => {
            out.push_str("mu,g0,ok,trusted,max_distance,predicted_amplitude,distance_ratio,roots,predicted_roots,mean_lobe_ratio,error\n");
            for e in entries {
                write!(out, "{},{},{},{}", e.mu, e.g0, e.ok, e.trusted).unwrap();
                match &e.splitting {
                    Some(r) => {
                        let lobe = r.predictions.mean_lobe_ratio.map_or_else(String::new, |x| format!("{x:.6e}"));
                        writeln!(
                            out,
                            ",{:.6e},{:.6e},{:.6e},{},{},{},",
                            r.max_distance,
                            r.predictions.first_harmonic_amplitude,
                            r.predictions.distance_ratio,
                            r.roots.len(),
                            r.predictions.root_count,
                            lobe
                        )
                        .unwrap();
                    }
                    None => writeln!(out, ",,,,,,,{}", csv_text(e.error.as_deref().unwrap_or(""))).unwrap(),
                }
            }
        }
        SweepStage::Melnikov => {
            out.push_str("mu,g0,method,ok,trusted");
            for l in 0..=cfg.lmax {
                write!(out, ",L{l}").unwrap();
            }
            out.push_str(",error\n");
            for e in entries {
                if e.melnikov.is_empty() {
                    write!(out, "{},{},,{},{}", e.mu, e.g0, e.ok, e.trusted).unwrap();
                    out.push_str(&",".repeat(cfg.lmax as usize + 1));
                    writeln!(out, ",{}", csv_text(e.error.as_deref().unwrap_or(""))).unwrap();
                }
                for s in &e.melnikov {
                    write!(out, "{},{},{},{},{}", e.mu, e.g0, s.method, e.ok, s.all_trusted()).unwrap();
                    for l in 0..=cfg.lmax as i64 {
                        match s.coefficients.iter().find(|c| c.l == l) {
                            Some(c) => write!(out, ",{:.15e}", c.value).unwrap(),
                            None => out.push(','),
                        }
                    }
                    out.push_str(",\n");
                }
            }
        }
    }
    out
}

/// Sorted, de-duplicated `(μ, G₀)` grid.
pub fn sweep_keys(cfg: &RunConfig) -> Vec<(f64, f64)> {
    let mut keys: Vec<(f64, f64)> =
        cfg.mu_axis().iter().flat_map(|&mu| cfg.g0_axis().into_iter().map(move |g0| (mu, g0))).collect();
    keys.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    keys.dedup();
    keys
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let stage = cfg.sweep_stage;
    let keys = sweep_keys(cfg);
    let entries: Vec<SweepEntry> = keys.par_iter().map(|&(mu, g0)| sweep_one(stage, mu, g0, cfg)).collect();
    let mut w = writer(Stage::Sweep, cfg)?;
    w.json("sweep.json", &entries)?;
    w.csv("sweep.csv", &sweep_table(stage, &entries, cfg))?;
    let notes: Vec<String> = entries
        .iter()
        .filter(|e| !e.trusted)
        .map(|e| format!("mu = {}, g0 = {}: {}", e.mu, e.g0, e.error.as_deref().unwrap_or("untrusted")))
        .collect();
    let status = if notes.is_empty() { Status::Trusted } else { Status::Untrusted };
    Ok(w.finish(status, notes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_failures_stay_local() {
        let cfg = RunConfig { lmax: 2, methods: vec![Method::Contour], ..RunConfig::default() };
        let bad = sweep_one(SweepStage::Melnikov, 0.7, 2.0, &cfg);
        assert!(!bad.ok && !bad.trusted && bad.error.is_some());
        let good = sweep_one(SweepStage::Melnikov, 0.3, 2.0, &cfg);
        assert!(good.ok && good.trusted);
        let table = sweep_table(SweepStage::Melnikov, &[bad, good], &cfg);
        let rows: Vec<&str> = table.lines().collect();
        assert_eq!(rows.len(), 3);
        assert!(rows[1].starts_with("0.7,2,,false,false"));
        assert!(rows.iter().all(|r| r.split(',').count() == rows[0].split(',').count()));
    }

    #[test]
    fn sweep_keys_are_sorted_and_unique() {
        let cfg = RunConfig { mu_grid: vec![0.3, 0.1, 0.3], g0_grid: vec![3.0, 2.0], ..RunConfig::default() };
        assert_eq!(sweep_keys(&cfg), vec![(0.1, 2.0), (0.1, 3.0), (0.3, 2.0), (0.3, 3.0)]);
    }

    #[test]
    fn comparison_leaves_missing_harmonics_blank() {
        let p = Params { mu: 0.3, g0: 2.0 };
        let cfg = RunConfig { lmax: 2, ..RunConfig::default() };
        let s = vec![series_for(&p, Method::Contour, &cfg).unwrap(), series_for(&p, Method::Asymptotic, &cfg).unwrap()];
        let t = comparison_table(&s);
        let rows: Vec<&str> = t.lines().collect();
        assert_eq!(rows[0], "l,contour,asymptotic,ratio_asymptotic_contour,agreement_asymptotic_contour,trusted");
        assert!(rows[1].starts_with("0,") && rows[1].contains(",,,,"));
        assert_eq!(rows.len(), 4);
    }
}
