//! Numerical building blocks shared by the RPC3BP crates: a scalar
//! abstraction with an extended-precision backend, an adaptive DOP853
//! integrator with dense output and event location, Gauss–Kronrod
//! quadrature and bracketing root finders.

mod dd;
pub mod dop853;
pub mod quad;
pub mod real;
pub mod roots;
mod tableau;

pub use dop853::{Dop853, IntegrationError, OdeSystem, Stepper};
pub use real::{Precision, Real, DD};
