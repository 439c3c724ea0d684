use rpc3bp_manifolds::ManifoldError;
use rpc3bp_melnikov::MelnikovError;

#[derive(Debug, thiserror::Error)]
pub enum SplittingError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("curves do not overlap: {0}")]
    Range(String),
    #[error("profile spacing {spacing:.3e} exceeds the required {required:.3e}")]
    Resolution { spacing: f64, required: f64 },
    #[error("roots {v_a} and {v_b} are not adjacent")]
    NonAdjacent { v_a: f64, v_b: f64 },
    #[error("not found: {0}")]
    NotFound(String),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error(transparent)]
    Melnikov(#[from] MelnikovError),
}
