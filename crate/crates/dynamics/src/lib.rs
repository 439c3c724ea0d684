//! Charts, Hamiltonians, vector fields and symmetries of the restricted
//! planar circular three-body problem near parabolic infinity.
//!
//! Conventions: the rotating angle is `φ = α − t` and the primary of mass
//! `1 − μ` sits at `φ = 0`. The rescaled chart uses
//! `r = G₀² r̃`, `y = ỹ / G₀`, `G = G₀ G̃`, `t = G₀³ s`.

mod charts;
mod error;
mod field;
mod mcgehee;
mod params;
mod potential;

pub use charts::{
    cartesian_to_polar, hamiltonian_cartesian, hamiltonian_polar, hamiltonian_rotating, jacobi_constant,
    polar_to_cartesian, polar_to_rotating, rotating_to_polar, CartesianState, PolarState, RotatingState,
};
pub use error::DynError;
pub use field::{
    check_tolerance, integrate, integrate_generic, involution_r, vector_field_rotating, RotatingField,
};
pub use mcgehee::{lambda_mcgehee, mcgehee_local_field, McGeheeState, MCGEHEE_X_CUTOFF};
pub use params::Params;
pub use potential::{potential_v, potential_v_grad, potential_v_real, PotentialCoeffs, PotentialGrad};
