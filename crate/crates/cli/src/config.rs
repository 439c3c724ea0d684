use std::path::{Path, PathBuf};

use rpc3bp_dynamics::Params;
use rpc3bp_melnikov::Method;
use rpc3bp_numerics::Precision;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const MAX_GRID: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub v_min: f64,
    pub v_max: f64,
    pub n: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { v_min: -3.0, v_max: 3.0, n: 121 }
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.v_min];
        }
        let span = self.v_max - self.v_min;
        (0..self.n).map(|i| self.v_min + span * i as f64 / (self.n - 1) as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TangencySpec {
    pub g0_range: (f64, f64),
    pub steps: usize,
}

impl Default for TangencySpec {
    fn default() -> Self {
        TangencySpec { g0_range: (2.7, 3.2), steps: 6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrbitSpec {
    /// Explicit section point `(r̃, ỹ)`; otherwise seeded off a transversal root.
    pub seed: Option<(f64, f64)>,
    /// Offset from the unstable curve in units of the measured splitting amplitude.
    pub offset_fraction: f64,
    pub n_iter: usize,
    pub r_out: f64,
    pub r_in: f64,
    pub max_time: f64,
}

impl Default for OrbitSpec {
    fn default() -> Self {
        OrbitSpec { seed: None, offset_fraction: -0.5, n_iter: 200, r_out: 5.0, r_in: 2.0, max_time: 1e7 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepStage {
    Splitting,
    Melnikov,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mu: f64,
    pub g0: f64,
    /// Sweep axes; an empty list falls back to the scalar value.
    pub mu_grid: Vec<f64>,
    pub g0_grid: Vec<f64>,
    pub phi0: f64,
    pub tol: f64,
    pub quad_tol: f64,
    pub root_tol: f64,
    pub jmax: u32,
    pub lmax: u32,
    pub methods: Vec<Method>,
    pub v_window: (f64, f64),
    pub homoclinic_grid: GridSpec,
    pub manifold_samples: usize,
    pub samples_per_period: usize,
    pub r0: f64,
    pub precision: Precision,
    pub allow_extended: bool,
    pub out: PathBuf,
    pub tangency: TangencySpec,
    pub orbit: OrbitSpec,
    pub sweep_stage: SweepStage,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mu: 0.3,
            g0: 2.4,
            mu_grid: Vec::new(),
            g0_grid: Vec::new(),
            phi0: 0.0,
            tol: 1e-13,
            quad_tol: 1e-10,
            root_tol: 1e-10,
            jmax: 30,
            lmax: 4,
            methods: vec![Method::Contour, Method::Quadrature],
            v_window: (0.4, 1.6),
            homoclinic_grid: GridSpec::default(),
            manifold_samples: 49,
            samples_per_period: 32,
            r0: 50.0,
            precision: Precision::Double,
            allow_extended: false,
            out: PathBuf::from("out"),
            tangency: TangencySpec::default(),
            orbit: OrbitSpec::default(),
            sweep_stage: SweepStage::Splitting,
        }
    }
}

/// Values given on the command line; `None` leaves the file value alone.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub mu: Option<f64>,
    pub g0: Option<f64>,
    pub phi0: Option<f64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub precision: Option<Precision>,
}

fn merge(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, t) => *b = t,
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let top: Value = serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))?;
        if !top.is_object() {
            return Err(CliError::Validation("config must be a JSON object".into()));
        }
        let mut base = serde_json::to_value(RunConfig::default()).expect("defaults serialize");
        merge(&mut base, top);
        serde_json::from_value(base).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Io { path: p.to_path_buf(), source: e })?;
                RunConfig::from_json(&text)?
            }
            None => RunConfig::default(),
        };
        cfg.apply(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.mu {
            self.mu = v;
        }
        if let Some(v) = o.g0 {
            self.g0 = v;
        }
        if let Some(v) = o.phi0 {
            self.phi0 = v;
        }
        if let Some(v) = o.tol {
            self.tol = v;
        }
        if let Some(v) = &o.out {
            self.out = v.clone();
        }
        if let Some(v) = o.precision {
            self.precision = v;
        }
    }

    pub fn params(&self) -> Params {
        Params { mu: self.mu, g0: self.g0 }
    }

    pub fn mu_axis(&self) -> Vec<f64> {
        if self.mu_grid.is_empty() { vec![self.mu] } else { self.mu_grid.clone() }
    }

    pub fn g0_axis(&self) -> Vec<f64> {
        if self.g0_grid.is_empty() { vec![self.g0] } else { self.g0_grid.clone() }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Validation(m));
        for mu in self.mu_axis() {
            for g0 in self.g0_axis() {
                if let Err(e) = (Params { mu, g0 }).validate() {
                    return bad(e.to_string());
                }
            }
        }
        let combos = self.mu_axis().len() * self.g0_axis().len();
        if combos > MAX_GRID {
            return bad(format!("parameter grid has {combos} combinations (limit {MAX_GRID})"));
        }
        if !self.phi0.is_finite() {
            return bad("phi0 must be finite".into());
        }
        let floor = match self.precision {
            Precision::Double => 1e-15,
            Precision::Extended => 1e-28,
        };
        if !(self.tol >= floor && self.tol <= 1e-6) {
            return bad(format!("tol = {:e} outside [{floor:e}, 1e-6] for {:?} precision", self.tol, self.precision));
        }
        if !(self.quad_tol > 0.0 && self.quad_tol <= 1e-3) {
            return bad(format!("quad_tol = {:e} outside (0, 1e-3]", self.quad_tol));
        }
        if !(self.root_tol > 0.0 && self.root_tol <= 1e-3) {
            return bad(format!("root_tol = {:e} outside (0, 1e-3]", self.root_tol));
        }
        if !(1..=200).contains(&self.jmax) {
            return bad(format!("jmax = {} outside [1, 200]", self.jmax));
        }
        if self.lmax > 64 {
            return bad(format!("lmax = {} above 64", self.lmax));
        }
        if self.methods.is_empty() {
            return bad("at least one Melnikov method is required".into());
        }
        let (lo, hi) = self.v_window;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return bad(format!("v_window ({lo}, {hi}) must satisfy 0 < lo < hi"));
        }
        let g = &self.homoclinic_grid;
        if !(g.n >= 1 && g.n <= 1_000_000 && g.v_min.is_finite() && g.v_max.is_finite() && g.v_max >= g.v_min) {
            return bad("homoclinic_grid needs 1 ≤ n ≤ 1e6 and v_min ≤ v_max".into());
        }
        if self.manifold_samples < 2 || self.manifold_samples > 100_000 {
            return bad(format!("manifold_samples = {} outside [2, 1e5]", self.manifold_samples));
        }
        if self.samples_per_period < 8 {
            return bad("samples_per_period must be at least 8".into());
        }
        if !(self.r0 >= 50.0 && self.r0.is_finite()) {
            return bad(format!("r0 = {} below the far-field floor 50", self.r0));
        }
        let t = &self.tangency;
        if !(t.g0_range.0 >= 2.6 && t.g0_range.1 >= t.g0_range.0 && t.steps >= 1 && t.steps <= 200) {
            return bad("tangency needs 2.6 ≤ g0_lo ≤ g0_hi and 1 ≤ steps ≤ 200".into());
        }
        let o = &self.orbit;
        if !(o.r_out > o.r_in && o.r_in > 1.0) {
            return bad(format!("need r_out > r_in > 1, got r_out = {}, r_in = {}", o.r_out, o.r_in));
        }
        if o.n_iter == 0 || !(o.max_time > 0.0) || !o.offset_fraction.is_finite() {
            return bad("orbit needs n_iter > 0, max_time > 0 and a finite offset_fraction".into());
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON with the output path stripped, so reruns
    /// into different directories share a hash.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = PathBuf::new();
        let text = serde_json::to_string(&c).expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlay_keeps_unset_defaults() {
        let c = RunConfig::from_json(r#"{"mu": 0.1, "orbit": {"n_iter": 5}}"#).unwrap();
        assert_eq!(c.mu, 0.1);
        assert_eq!(c.g0, 2.4);
        assert_eq!(c.orbit.n_iter, 5);
        assert_eq!(c.orbit.r_out, 5.0);
    }

    #[test]
    fn flags_override_file() {
        let mut c = RunConfig::from_json(r#"{"mu": 0.1, "tol": 1e-10}"#).unwrap();
        c.apply(&Overrides { mu: Some(0.2), precision: Some(Precision::Extended), ..Default::default() });
        assert_eq!(c.mu, 0.2);
        assert_eq!(c.tol, 1e-10);
        assert_eq!(c.precision, Precision::Extended);
    }

    #[test]
    fn unknown_keys_and_big_grids_fail() {
        assert!(RunConfig::from_json(r#"{"mew": 0.1}"#).is_err());
        let c = RunConfig { mu_grid: vec![0.1; 101], g0_grid: vec![2.0; 100], ..Default::default() };
        assert!(matches!(c.validate(), Err(CliError::Validation(_))));
        let c = RunConfig { mu_grid: vec![0.1; 100], g0_grid: vec![2.0; 100], ..Default::default() };
        assert!(c.validate().is_ok());
    }

    #[test]
    fn hash_ignores_output_dir() {
        let a = RunConfig::default();
        let b = RunConfig { out: "elsewhere".into(), ..Default::default() };
        let c = RunConfig { mu: 0.31, ..Default::default() };
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn default_grid_hits_the_turning_point() {
        assert!(GridSpec::default().points().contains(&0.0));
    }
}
