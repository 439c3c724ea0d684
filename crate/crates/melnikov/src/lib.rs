//! Melnikov potential of the parabolic separatrix and its Fourier
//! coefficients by three independent routes (real-line quadrature,
//! steepest-descent contour series, leading asymptotics), plus the
//! first-order splitting predictions built from them.

mod asymptotic;
mod contour;
mod error;
mod fourier;
mod quadrature;
mod series;

pub use asymptotic::{
    first_order_zero_function, melnikov_coeff_asymptotic, predicted_distance, predicted_first_harmonic_amplitude,
    predicted_lobe_area, predicted_tangency_lobe_area, predicted_tangency_mu, tangency_deviation_scale,
};
pub use contour::{contour_integral_i, melnikov_coeff_contour, ContourValue};
pub use error::MelnikovError;
pub use fourier::{
    binom_half, uhat_fourier_coeff, uhat_fourier_coeff_at_radius, uhat_theta_oracle, uhat_theta_quadrature, UhatCoeff,
};
pub use quadrature::melnikov_coeff_quadrature;
pub use series::{
    compute_series, first_order_distance, melnikov_potential, melnikov_potential_phase, Coefficient, Method,
    MelnikovSeries,
};
