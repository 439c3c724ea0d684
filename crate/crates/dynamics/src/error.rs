use rpc3bp_numerics::IntegrationError;

#[derive(Debug, Clone, thiserror::Error)]
pub enum DynError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("collision: r = {r} below radius {limit}")]
    Collision { r: f64, limit: f64 },
    #[error("McGehee chart cutoff exceeded: x = {x} > {cutoff}")]
    ChartCutoff { x: f64, cutoff: f64 },
    #[error("invalid tolerance {0}: expected value in [1e-15, 1e-6] (double) or [1e-28, 1e-6] (extended)")]
    Tolerance(f64),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
}
