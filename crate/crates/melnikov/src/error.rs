#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MelnikovError {
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("radius {r} outside the series convergence domain (requires r > {limit})")]
    OutsideConvergence { r: f64, limit: f64 },
    #[error("result {value:e} is within 10x of the noise floor {floor:e}")]
    Precision { value: f64, floor: f64 },
    #[error("harmonic {0} has no closed-form leading term (only l = 1, 2)")]
    Unsupported(i64),
    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),
    #[error("{message} (value {value:e})")]
    Domain { message: String, value: f64 },
}
