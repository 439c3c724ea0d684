use rpc3bp_dynamics::DynError;

#[derive(Debug, Clone, thiserror::Error)]
pub enum ManifoldError {
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Dynamics(#[from] DynError),
    #[error("no event within a horizon of {horizon} time units")]
    Timeout { horizon: f64 },
    #[error("point (r={r}, y={y}) does not lift to the energy shell")]
    Lift { r: f64, y: f64 },
    #[error("v = {v} is outside the reachable window: {reason}")]
    Range { v: f64, reason: String },
    #[error("phase matching did not converge at v = {v} (residual {residual:e})")]
    NoConvergence { v: f64, residual: f64 },
}

impl From<rpc3bp_numerics::IntegrationError> for ManifoldError {
    fn from(e: rpc3bp_numerics::IntegrationError) -> Self {
        ManifoldError::Dynamics(DynError::Integration(e))
    }
}
