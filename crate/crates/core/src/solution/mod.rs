//! Boundary-value problem: expansion coefficients of the field and of the
//! distribution function in the eigenfunctions of the characteristic system.
//!
//! The field is
//! `e(x) = E_inf + 2 E0 cosh(w0 x/eta0) + 2 int cosh(w0 x/eta) E(eta) deta`,
//! normalized so that `e(+-1) = 1`. Quantities that would overflow near
//! `eta = 0` are carried as `cosh(w0/eta) E(eta)` (the "weighted" continuum
//! coefficient) and `cosh(w0/eta0) E0`.

mod diagnostics;
mod distribution;
mod field;

pub use diagnostics::{BoundaryDiagnostics, ProportionalityFit, ResidueCheck};
pub use field::FieldProfile;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{derive, DerivedConstants, PlasmaParams};
use crate::quadrature::{try_integrate, QuadratureOptions};
use crate::scaled;
use crate::specfun::{self, boundary_product, lambda, m, m0, t, t1, t_at, Side};
use crate::spectrum::{analyze, Region, SpectrumResult};

/// Smallest `|lambda'(eta0)|` accepted for pole elimination.
pub const MIN_ZERO_DERIVATIVE: f64 = 1e-10;
const MIN_DENOMINATOR: f64 = 1e-12;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Accuracy targets for the three kinds of numerical work.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Coefficient integrals (moment terms, residue-integral checks).
    pub coeff: f64,
    /// Field and distribution reconstruction.
    pub field: f64,
    /// Truncation of the residue series.
    pub series: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            coeff: 1e-10,
            field: 1e-8,
            series: 1e-15,
        }
    }
}

impl Tolerances {
    pub(crate) fn coeff_opts(&self) -> QuadratureOptions {
        QuadratureOptions::with_tol(self.coeff)
    }
    pub(crate) fn field_opts(&self) -> QuadratureOptions {
        QuadratureOptions::with_tol(self.field)
    }
}

/// Amplitude of the Debye mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DebyeMode {
    pub eta0: Complex64,
    pub lambda_prime: Complex64,
    /// `E0` itself; underflows to zero when `cosh(w0/eta0)` overflows.
    pub e0: Complex64,
    /// `cosh(w0/eta0) E0`, always representable.
    pub e0_cosh: Complex64,
}

impl DebyeMode {
    /// `lambda'(eta0) (eta0^2 - eta1^2)`, the common denominator of the pole terms.
    pub fn pole_denominator(&self, dc: &DerivedConstants) -> Complex64 {
        self.lambda_prime * (self.eta0 * self.eta0 - dc.eta1_sq)
    }

    /// `exp(+-w0/eta0) / cosh(w0/eta0)`.
    pub fn exp_ratios(&self, dc: &DerivedConstants) -> (Complex64, Complex64) {
        let a = dc.w0 / self.eta0;
        (scaled::exp_over_cosh(a), scaled::exp_over_cosh(-a))
    }
}

/// The pieces of the accommodation equation solved for `A_tilde`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccommodationTerms {
    pub a1_tilde: Complex64,
    /// Debye-mode moment factor, zero without the mode.
    pub beta0: Complex64,
    /// `(1/c) int eta^2 beta(eta)`.
    pub i0: Complex64,
    /// `(1/c) int eta T1(eta) beta(eta)`.
    pub i1: Complex64,
    pub denominator: Complex64,
}

/// Value of the continuum coefficient at one `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumValue {
    /// `E(eta)`.
    pub value: Complex64,
    /// `cosh(w0/eta) E(eta)`.
    pub weighted: Complex64,
    /// True when `cosh(w0/eta)` overflows and `E(eta)` was set to its limit 0.
    pub suppressed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionCoefficients {
    pub dc: DerivedConstants,
    pub tol: Tolerances,
    pub spectrum: SpectrumResult,
    /// Drude amplitude `lambda1 / lambda_inf`.
    pub e_inf: Complex64,
    /// Accommodation constant `w0 A1`.
    pub a1_tilde: Complex64,
    pub debye: Option<DebyeMode>,
    pub accommodation: AccommodationTerms,
}

fn check_driven(p: &PlasmaParams) -> Result<()> {
    if p.omega > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter {
            field: "omega",
            value: p.omega,
            requirement: "omega > 0 for the driven problem",
        })
    }
}

/// Solves the boundary-value problem at `p`.
pub fn solve(p: &PlasmaParams, tol: Tolerances) -> Result<SolutionCoefficients> {
    check_driven(p)?;
    let dc = derive(p)?;
    let spectrum = analyze(&dc)?;
    solve_with_spectrum(&dc, spectrum, tol)
}

/// As [`solve`], reusing an already computed spectrum.
pub fn solve_with_spectrum(
    dc: &DerivedConstants,
    spectrum: SpectrumResult,
    tol: Tolerances,
) -> Result<SolutionCoefficients> {
    check_driven(&dc.params)?;
    let zero = match spectrum.region {
        Region::NearL => {
            return Err(Error::NearBoundaryCurve {
                closure_error: spectrum.winding.closure_error,
                min_distance: spectrum.winding.min_distance,
            })
        }
        Region::DMinus => None,
        Region::DPlus => Some((
            spectrum.eta0.ok_or(Error::NoDebyeMode)?,
            spectrum.eta0_derivative.ok_or(Error::NoDebyeMode)?,
        )),
    };
    let accommodation = compute_a1(dc, zero, &tol)?;
    let debye = match zero {
        Some((eta0, lp)) => Some(compute_e0(dc, eta0, lp, accommodation.a1_tilde)?),
        None => None,
    };
    Ok(SolutionCoefficients {
        dc: *dc,
        tol,
        spectrum,
        e_inf: dc.lambda1 / dc.lambda_inf,
        a1_tilde: accommodation.a1_tilde,
        debye,
        accommodation,
    })
}

fn check_zero_derivative(lp: Complex64) -> Result<()> {
    if lp.norm() > MIN_ZERO_DERIVATIVE {
        Ok(())
    } else {
        Err(Error::DegenerateZero {
            derivative: lp.norm(),
        })
    }
}

/// `beta(eta) = m(eta) [exp(w0/eta)/cosh(w0/eta)] / (lambda+ lambda-)`.
pub fn beta(eta: f64, dc: &DerivedConstants) -> Result<Complex64> {
    let ratio = scaled::exp_over_cosh(dc.w0 / eta);
    Ok(m(eta, dc)? * ratio / boundary_product(eta, dc)?)
}

/// Accommodation constant `A_tilde = w0 A1` from the moment condition at the
/// wall. `zero` is `(eta0, lambda'(eta0))` when the Debye mode exists.
pub fn compute_a1(
    dc: &DerivedConstants,
    zero: Option<(Complex64, Complex64)>,
    tol: &Tolerances,
) -> Result<AccommodationTerms> {
    let alpha = dc.params.alpha_p;
    if alpha == 0.0 {
        return Ok(AccommodationTerms {
            a1_tilde: ZERO,
            beta0: ZERO,
            i0: ZERO,
            i1: ZERO,
            denominator: Complex64::new(f64::INFINITY, 0.0),
        });
    }
    let opts = tol.coeff_opts();
    let i0 = try_integrate(|eta| Ok(eta * eta * beta(eta, dc)?), -1.0, 1.0, &opts)?.value / dc.c;
    let i1 = try_integrate(|eta| Ok(eta * t1(eta, dc)? * beta(eta, dc)?), -1.0, 1.0, &opts)?.value / dc.c;
    let (beta0, eta0, t_eta0) = match zero {
        Some((eta0, lp)) => {
            check_zero_derivative(lp)?;
            let d = lp * (eta0 * eta0 - dc.eta1_sq);
            let a = dc.w0 / eta0;
            let b0 = (m0(eta0, dc)? * scaled::exp_over_cosh(a) + m0(-eta0, dc)? * scaled::exp_over_cosh(-a)) / d;
            (b0, eta0, t(eta0, dc)?)
        }
        None => (ZERO, ZERO, ZERO),
    };
    let li = dc.lambda_inf;
    let numerator = dc.lambda1 * (ONE / (36.0 * li) - eta0 * beta0 + i0 / 2.0);
    let denominator = i1 / 6.0 - li * i0 / 4.0 + (1.0 - alpha) / (36.0 * alpha) - beta0 * t_eta0 / 3.0
        + beta0 * li * eta0 / 2.0;
    if denominator.norm() < MIN_DENOMINATOR {
        return Err(Error::DegenerateAccommodation {
            denominator: denominator.norm(),
        });
    }
    Ok(AccommodationTerms {
        a1_tilde: -numerator / denominator,
        beta0,
        i0,
        i1,
        denominator,
    })
}

/// Debye amplitude from the regularity of the jump-problem solution at `eta0`.
pub fn compute_e0(
    dc: &DerivedConstants,
    eta0: Complex64,
    lambda_prime: Complex64,
    a1_tilde: Complex64,
) -> Result<DebyeMode> {
    check_zero_derivative(lambda_prime)?;
    let d = lambda_prime * (eta0 * eta0 - dc.eta1_sq);
    let e0_cosh = -(dc.lambda1 * eta0 + a1_tilde * (t(eta0, dc)? / 3.0 - dc.lambda_inf * eta0 / 2.0)) / d;
    let e0 = match scaled::cosh(dc.w0 / eta0) {
        Some(ch) => e0_cosh / ch,
        None => ZERO,
    };
    Ok(DebyeMode {
        eta0,
        lambda_prime,
        e0,
        e0_cosh,
    })
}

impl SolutionCoefficients {
    pub fn params(&self) -> &PlasmaParams {
        &self.dc.params
    }

    pub fn region(&self) -> Region {
        self.spectrum.region
    }

    /// `(eta0, lambda'(eta0))` when the dispersion function has a zero.
    pub fn zero(&self) -> Option<(Complex64, Complex64)> {
        self.spectrum.eta0.zip(self.spectrum.eta0_derivative)
    }

    pub fn e0(&self) -> Complex64 {
        self.debye.map_or(ZERO, |d| d.e0)
    }

    /// `cosh(w0/eta0) E0`, zero without the Debye mode.
    pub fn e0_cosh(&self) -> Complex64 {
        self.debye.map_or(ZERO, |d| d.e0_cosh)
    }

    /// `C1 = lambda_inf (E_inf - A_tilde/2)`.
    pub fn c1(&self) -> Complex64 {
        self.dc.lambda_inf * (self.e_inf - self.a1_tilde / 2.0)
    }

    /// `cosh(w0/eta) E(eta)`, finite for every `eta` in `(-1, 1)` other than 0.
    pub fn weighted_continuum(&self, eta: f64) -> Result<Complex64> {
        let dc = &self.dc;
        let a = self.a1_tilde;
        let num = (dc.lambda1 - dc.lambda_inf * a / 2.0) * eta * eta + a / 3.0 * eta * t1(eta, dc)?;
        Ok(num / (4.0 * dc.c * boundary_product(eta, dc)?))
    }

    /// Continuum coefficient `E(eta)`.
    pub fn continuum(&self, eta: f64) -> Result<ContinuumValue> {
        let weighted = self.weighted_continuum(eta)?;
        Ok(match scaled::cosh(self.dc.w0 / eta) {
            Some(ch) if (self.dc.w0.re / eta).abs() <= 700.0 => ContinuumValue {
                value: weighted / ch,
                weighted,
                suppressed: false,
            },
            _ => ContinuumValue {
                value: ZERO,
                weighted,
                suppressed: true,
            },
        })
    }

    fn regular_part(&self, z: Complex64) -> Complex64 {
        let dc = &self.dc;
        let mut r = (self.e_inf - self.a1_tilde / 2.0) * z;
        if let Some(d) = self.debye {
            let e2 = d.eta0 * d.eta0;
            r += d.e0_cosh * 2.0 * z * (e2 - dc.eta1_sq) / (e2 - z * z);
        }
        r
    }

    /// Closed form of `M(z) = int (z eta - eta1^2)/(eta - z) cosh(w0/eta) E(eta) deta`
    /// for `z` off the cut.
    pub fn jump_function(&self, z: Complex64) -> Result<Complex64> {
        let num = self.a1_tilde / 3.0 * t(z, &self.dc)? + self.c1() * z;
        Ok(0.5 * (num / lambda(z, &self.dc)? - self.regular_part(z)))
    }

    /// Boundary value of [`Self::jump_function`] from above or below the cut.
    pub fn jump_function_boundary(&self, eta: f64, side: Side) -> Result<Complex64> {
        let dc = &self.dc;
        let z = Complex64::new(eta, 0.0);
        let (lp, lm) = specfun::lambda_boundary(eta, dc)?;
        let shift = match side {
            Side::Above => 1e-300,
            Side::Below => -1e-300,
            Side::Principal => 0.0,
        };
        let tv = t_at(Complex64::new(eta, shift), dc)?.value;
        let lv = match side {
            Side::Above => lp,
            Side::Below => lm,
            Side::Principal => lambda(z, dc)?,
        };
        let num = self.a1_tilde / 3.0 * tv + self.c1() * z;
        Ok(0.5 * (num / lv - self.regular_part(z)))
    }

    /// The same function by direct quadrature of its defining integral.
    pub fn jump_function_quadrature(&self, z: Complex64) -> Result<Complex64> {
        let dc = &self.dc;
        let r = try_integrate(
            |eta| Ok((z * eta - dc.eta1_sq) / (eta - z) * self.weighted_continuum(eta)?),
            -1.0,
            1.0,
            &self.tol.coeff_opts(),
        )?;
        Ok(r.value)
    }

    /// Coefficient of `1/(z - eta0)` in the closed form of `M(z)`; zero when the
    /// Debye amplitude removes the pole.
    pub fn pole_coefficient(&self) -> Result<Complex64> {
        let Some(d) = self.debye else {
            return Ok(ZERO);
        };
        let dc = &self.dc;
        let num = self.a1_tilde / 3.0 * t(d.eta0, dc)? + self.c1() * d.eta0;
        Ok(0.5 * (num / d.lambda_prime + d.e0_cosh * (d.eta0 * d.eta0 - dc.eta1_sq)))
    }
}
