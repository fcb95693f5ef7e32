//! Kinetic solution of longitudinal plasma oscillations in a slab of degenerate
//! electron plasma driven by an external longitudinal AC field, with
//! specular-accommodative reflection of electrons at the walls.
//!
//! The crate is `no_std` (it needs `alloc` for adaptive quadrature and result
//! buffers) and computes everything in dimensionless units:
//!
//! * [`params`]: the four physical inputs and every derived complex constant.
//! * [`specfun`]: closed forms of the dispersion function and its relatives.
//! * [`quadrature`]: adaptive Gauss-Kronrod, principal values, residue series.
//! * [`spectrum`]: winding index, Debye zero, and the curve `L` separating the
//!   parameter regions with and without the Debye mode.
//! * [`solution`]: expansion coefficients, field profile, boundary distribution.
//! * [`absorption`]: absorbed power by three independent routes.
//!
//! All complex quantities are [`num_complex::Complex64`].
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod absorption;
pub mod error;
pub mod params;
pub mod quadrature;
pub(crate) mod scaled;
pub mod solution;
pub mod specfun;
pub mod spectrum;

pub use num_complex::Complex64;

pub use absorption::{compute_absorption, AbsorptionResult};
pub use error::{Error, Result};
pub use params::{derive, DerivedConstants, PlasmaParams};
pub use quadrature::{QuadratureOptions, QuadratureResult};
pub use solution::{solve, FieldProfile, SolutionCoefficients, Tolerances};
pub use spectrum::{analyze, CurveLPoint, Region, SpectrumResult};

/// Normalization conventions used throughout the crate. Written verbatim into
/// the metadata header of every CLI output file.
pub const CONVENTIONS: &str = "A_tilde = w0*A1; e_s = 1; \
E(eta) = [lambda1*eta^2 + (A_tilde/6)(2*eta*T1(eta) - 3*lambda_inf*eta^2)] / (4c cosh(w0/eta) lambda+ lambda-); \
e(x) = E_inf + 2 E0 cosh(w0 x/eta0) + 2 int cosh(w0 x/eta) E(eta) deta; \
Q1 = (1/2) int_{-1}^{1} e(x) dx, Q0 = -Im Q1";
