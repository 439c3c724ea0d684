//! Splitting analysis from a pair of invariant curves on one section:
//! distance profile, homoclinic points, lobe areas and the cubic tangency.

mod error;
mod evaluator;
mod lobes;
mod profile;
mod report;
mod roots;
mod tangency;

pub use error::SplittingError;
pub use evaluator::DistanceEvaluator;
pub use lobes::{lobe_area, profile_lobe_integral, LobeIntegral};
pub use profile::{distance_profile, Derivative, DistanceProfile};
pub use report::{splitting_report, LobeRecord, Predictions, SplittingConfig, SplittingReport};
pub use roots::{
    find_homoclinic_points, first_order_roots, predicted_root_count, predicted_root_spacing, v_of_phase, HomoclinicRoot,
    RootKind,
};
pub use tangency::{
    continuation_tangency_curve, default_tangency_bracket, find_tangency, TangencyCurve, TangencyOptions, TangencyPoint,
    TangencyResiduals,
};
