//! Command-line front end for the RPC3BP splitting toolkit.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

pub mod commands;
pub mod config;

pub use commands::{
    cmd_homoclinic, cmd_manifolds, cmd_melnikov, cmd_oscillate, cmd_splitting, cmd_sweep, cmd_tangency, run_stage, Stage,
};
pub use config::{GridSpec, OrbitSpec, Overrides, RunConfig, SweepStage, TangencySpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

macro_rules! classify {
    ($t:ty, $($invalid:pat),+) => {
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                match e {
                    $($invalid)|+ => CliError::Validation(e.to_string()),
                    _ => CliError::Numerical(e.to_string()),
                }
            }
        }
    };
}

classify!(rpc3bp_dynamics::DynError, rpc3bp_dynamics::DynError::InvalidParams(_), rpc3bp_dynamics::DynError::Tolerance(_));
classify!(rpc3bp_melnikov::MelnikovError, rpc3bp_melnikov::MelnikovError::Invalid(_), rpc3bp_melnikov::MelnikovError::Unsupported(_));
classify!(rpc3bp_manifolds::ManifoldError, rpc3bp_manifolds::ManifoldError::Invalid(_), rpc3bp_manifolds::ManifoldError::Range { .. });
classify!(rpc3bp_splitting::SplittingError, rpc3bp_splitting::SplittingError::Invalid(_), rpc3bp_splitting::SplittingError::Range(_));
classify!(rpc3bp_orbits::OrbitError, rpc3bp_orbits::OrbitError::Invalid(_));

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Trusted,
    Untrusted,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub status: Status,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Trusted => 0,
            Status::Untrusted => 4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub toolkit: String,
    pub version: String,
    pub command: String,
    pub config_sha256: String,
    pub tol: f64,
    pub quad_tol: f64,
    pub root_tol: f64,
    pub precision: String,
}

impl Provenance {
    pub fn new(command: &str, cfg: &RunConfig) -> Self {
        Provenance {
            toolkit: "toolkit".into(),
            version: VERSION.into(),
            command: command.into(),
            config_sha256: cfg.hash(),
            tol: cfg.tol,
            quad_tol: cfg.quad_tol,
            root_tol: cfg.root_tol,
            precision: cfg.precision.name().into(),
        }
    }

    /// Single `#` comment line placed above a CSV header.
    pub fn csv_line(&self) -> String {
        format!(
            "# toolkit {} command={} config_sha256={} tol={:e} quad_tol={:e} root_tol={:e} precision={}\n",
            self.version, self.command, self.config_sha256, self.tol, self.quad_tol, self.root_tol, self.precision
        )
    }
}

/// Writes provenance-stamped artifacts into one output directory.
pub struct Writer {
    dir: PathBuf,
    provenance: Provenance,
    files: Vec<PathBuf>,
}

impl Writer {
    pub fn new(dir: &Path, provenance: Provenance) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.to_path_buf(), source: e })?;
        Ok(Writer { dir: dir.to_path_buf(), provenance, files: Vec::new() })
    }

    fn put(&mut self, name: &str, body: String) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, body.replace("\r\n", "\n")).map_err(|e| CliError::Io { path: path.clone(), source: e })?;
        self.files.push(path);
        Ok(())
    }

    pub fn csv(&mut self, name: &str, table: &str) -> Result<(), CliError> {
        let body = self.provenance.csv_line() + table;
        self.put(name, body)
    }

    /// `{"provenance": …, "result": …}` with keys sorted.
    pub fn json<T: Serialize>(&mut self, name: &str, result: &T) -> Result<(), CliError> {
        let doc = serde_json::json!({
            "provenance": serde_json::to_value(&self.provenance).expect("provenance serializes"),
            "result": serde_json::to_value(result).map_err(|e| CliError::Numerical(e.to_string()))?,
        });
        self.put(name, canonical(&doc) + "\n")
    }

    pub fn finish(self, status: Status, notes: Vec<String>) -> Outcome {
        Outcome { files: self.files, status, notes }
    }
}

/// Pretty JSON with object keys in sorted order at every depth.
pub fn canonical(v: &Value) -> String {
    fn sort(v: &Value) -> Value {
        match v {
            Value::Object(m) => {
                let mut keys: Vec<&String> = m.keys().collect();
                keys.sort();
                let mut out = serde_json::Map::new();
                for k in keys {
                    out.insert(k.clone(), sort(&m[k]));
                }
                Value::Object(out)
            }
            Value::Array(a) => Value::Array(a.iter().map(sort).collect()),
            other => other.clone(),
        }
    }
    serde_json::to_string_pretty(&sort(v)).expect("value serializes")
}
