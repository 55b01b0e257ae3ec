//! Cone-associated special functions.
//!
//! The crate is organised bottom-up:
//!
//! * [`cone`] — exact rational polyhedral cones, duals, faces and goodness;
//! * [`subdivision`] — unimodular subdivisions and the signed inclusion–exclusion complex;
//! * [`sl`] — the `SL_r(Z)` elements attached to cone generators and the fractional-linear action;
//! * [`cone_sums`] — analytically continued lattice sums `sum exp(-n . omega)`;
//! * [`bernoulli`] — classical and cone-generalized multiple Bernoulli polynomials;
//! * [`special`] — q-shifted factorials, q-polylogarithms, multiple elliptic gamma and
//!   multiple sine functions, and their cone generalizations;
//! * [`verify`] — named numerical identity checks and deterministic reports.

pub mod bernoulli;
pub mod cmath;
pub mod cone;
pub mod cone_sums;
pub mod config;
pub mod corpus;
pub mod error;
pub(crate) mod int_linalg;
pub mod series;
pub mod sl;
pub mod special;
pub mod subdivision;
pub mod verify;

pub use cone::{Cone, ConeSpec, IntVector};
pub use config::EvalConfig;
pub use error::{Error, Result};
