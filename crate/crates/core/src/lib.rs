//! Numerical laboratory for hyperbolic surface spectra and their graph
//! analogues.
//!
//! The crate computes geodesic length spectra of cocompact Fuchsian groups
//! (and their finite covers), evaluates Selberg-zeta log-derivative series
//! and their normalized variants, cross-checks them against spectral-side
//! evaluations from Laplace eigenvalue data, estimates local-geometry
//! statistics by Monte Carlo sampling of the quotient, and computes the
//! exactly-solvable Ihara-zeta analogue on finite regular graphs.

pub mod bsstats;
pub mod files;
pub mod fuchsian;
pub mod graphzeta;
pub mod hypgeom;
pub mod numcore;
pub mod scalar;
pub mod spectral;
pub mod zetageom;

pub use numcore::{GroupElement, NumError, PrecComplex, PrecScalar};
pub use scalar::{DoubleDouble, Real};

/// Default high-precision scalar (~106 bits).
pub type DefaultReal = DoubleDouble;
