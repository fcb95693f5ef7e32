use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A physical parameter is outside its admissible range.
    Parameter {
        field: &'static str,
        value: f64,
        requirement: &'static str,
    },
    /// A function was evaluated at a point outside its domain.
    Domain {
        function: &'static str,
        at: Complex64,
    },
    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    Quadrature {
        value: Complex64,
        error_estimate: f64,
        evaluations: usize,
    },
    /// An integrand returned NaN or infinity.
    NonFinite { quantity: &'static str, at: f64 },
    /// Principal-value pole closer than the admissible distance to an endpoint.
    PoleNearEndpoint { pole: f64 },
    /// A residue-series node fell onto the cut or onto another pole.
    SeriesAbort { index: usize, node: Complex64 },
    /// The residue series did not settle within its term budget.
    SeriesNonConvergence { partial: Complex64, terms: usize },
    /// Newton iteration for the Debye zero failed.
    RootNotFound {
        iterations: usize,
        trail: Vec<Complex64>,
    },
    /// Parameters sit on (or too close to) the curve `L`.
    NearBoundaryCurve { closure_error: f64, min_distance: f64 },
    /// A Debye-mode quantity was requested in the region without that mode.
    NoDebyeMode,
    /// `|lambda'(eta0)|` is too small for the pole-elimination formulas.
    DegenerateZero { derivative: f64 },
    /// The denominator of the accommodation constant vanished.
    DegenerateAccommodation { denominator: f64 },
    /// Wraps an error with the coordinate at which it happened.
    At {
        quantity: &'static str,
        coordinate: f64,
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps the error with the quantity and coordinate being evaluated.
    pub fn at(self, quantity: &'static str, coordinate: f64) -> Self {
        Error::At {
            quantity,
            coordinate,
            source: Box::new(self),
        }
    }

    /// True for errors caused by bad inputs rather than numerical failure.
    pub fn is_parameter_error(&self) -> bool {
        match self {
            Error::Parameter { .. } => true,
            Error::At { source, .. } => source.is_parameter_error(),
            _ => false,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parameter {
                field,
                value,
                requirement,
            } => write!(f, "parameter `{field}` = {value} violates {requirement}"),
            Error::Domain { function, at } => {
                write!(f, "{function} is not defined at {} {:+}i", at.re, at.im)
            }
            Error::Quadrature {
                value,
                error_estimate,
                evaluations,
            } => write!(
                f,
                "quadrature did not converge: partial value {} {:+}i, error estimate {error_estimate:e} after {evaluations} evaluations",
                value.re, value.im
            ),
            Error::NonFinite { quantity, at } => {
                write!(f, "{quantity} is not finite at {at}")
            }
            Error::PoleNearEndpoint { pole } => {
                write!(f, "principal-value pole at {pole} is too close to an endpoint")
            }
            Error::SeriesAbort { index, node } => write!(
                f,
                "residue node t_{index} = {} {:+}i is too close to the cut or another pole",
                node.re, node.im
            ),
            Error::SeriesNonConvergence { partial, terms } => write!(
                f,
                "series not converged after {terms} terms (partial sum {} {:+}i)",
                partial.re, partial.im
            ),
            Error::RootNotFound { iterations, trail } => {
                write!(f, "Newton iteration failed after {iterations} steps")?;
                if let Some(last) = trail.last() {
                    write!(f, " (last iterate {} {:+}i)", last.re, last.im)?;
                }
                Ok(())
            }
            Error::NearBoundaryCurve {
                closure_error,
                min_distance,
            } => write!(
                f,
                "parameters are on or near the curve L (closure error {closure_error:e}, min |G| distance {min_distance:e})"
            ),
            Error::NoDebyeMode => write!(f, "no Debye mode exists for these parameters"),
            Error::DegenerateZero { derivative } => {
                write!(f, "dispersion zero is not simple: |lambda'(eta0)| = {derivative:e}")
            }
            Error::DegenerateAccommodation { denominator } => write!(
                f,
                "accommodation equation is degenerate (denominator {denominator:e})"
            ),
            Error::At {
                quantity,
                coordinate,
                source,
            } => write!(f, "{source} (while evaluating {quantity} at {coordinate})"),
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::At { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}
