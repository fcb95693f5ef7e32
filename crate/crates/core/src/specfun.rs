//! Closed forms of the dispersion function and the functions built from it.
//!
//! Every evaluator is a pure function of its argument and the
//! [`DerivedConstants`]. Arguments closer than [`CUT_GUARD`] to the cut
//! `(-1, 1)` are routed to the boundary-value formulas so that the logarithm
//! never flips branches on rounding noise.

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::params::DerivedConstants;

pub const CUT_GUARD: f64 = 1e-12;

/// Beyond this modulus the logarithms are replaced by their expansions at
/// infinity, which avoid cancellation between `z^2` and the log term.
const SERIES_RADIUS: f64 = 3.0;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
    Principal,
}

/// A function value together with how the argument was routed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutFunctionValue {
    pub value: Complex64,
    pub on_cut: bool,
    pub side: Side,
}

impl CutFunctionValue {
    fn off_cut(value: Complex64) -> Self {
        CutFunctionValue {
            value,
            on_cut: false,
            side: Side::Principal,
        }
    }
}

fn domain(function: &'static str, at: Complex64) -> Error {
    Error::Domain { function, at }
}

/// Where `z` sits relative to the cut `(-1, 1)`.
fn locate(z: Complex64) -> Option<(f64, Side)> {
    if z.re.abs() < 1.0 && z.im.abs() < CUT_GUARD {
        let side = if z.im > 0.0 {
            Side::Above
        } else if z.im < 0.0 {
            Side::Below
        } else {
            Side::Principal
        };
        Some((z.re, side))
    } else {
        None
    }
}

fn side_sign(side: Side) -> f64 {
    match side {
        Side::Above => 1.0,
        Side::Below => -1.0,
        Side::Principal => 0.0,
    }
}

fn at_branch_point(z: Complex64) -> bool {
    z.im == 0.0 && z.re.abs() == 1.0
}

/// `sum_n x^n / (n + offset)` or any other coefficient sequence, summed until
/// the terms stop mattering in double precision.
fn power_sum(x: Complex64, coeff: impl Fn(usize) -> f64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut p = ONE;
    for n in 0..400 {
        let term = p * coeff(n);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        p *= x;
    }
    sum
}

/// `ln((1 - mu) / (1 + mu))` for real `|mu| < 1`.
fn log_ratio(mu: f64) -> f64 {
    (-mu).ln_1p() - mu.ln_1p()
}

/// Case function on the cut, principal value.
pub fn lambda0(mu: f64) -> Result<f64> {
    if !(mu.abs() < 1.0) {
        return Err(domain("lambda0", Complex64::new(mu, 0.0)));
    }
    Ok(1.0 + 0.5 * mu * log_ratio(mu))
}

/// `sum_n u^(2n) / (2n + 3)`, so that the Case function is `-u^2` times it.
fn case_tail(u2: Complex64) -> Complex64 {
    power_sum(u2, |n| 1.0 / (2 * n + 3) as f64)
}

/// Case dispersion function `1 + (z/2) ln((z-1)/(z+1))`.
pub fn lambda_case(z: Complex64) -> Result<Complex64> {
    if at_branch_point(z) {
        return Err(domain("lambda_case", z));
    }
    if let Some((mu, side)) = locate(z) {
        return Ok(Complex64::new(lambda0(mu)?, side_sign(side) * PI * mu / 2.0));
    }
    if z.norm() > SERIES_RADIUS {
        let u = ONE / z;
        let u2 = u * u;
        return Ok(-u2 * case_tail(u2));
    }
    Ok(ONE + z / 2.0 * ((z - 1.0) / (z + 1.0)).ln())
}

/// Dispersion function, with the routing recorded.
pub fn lambda_at(z: Complex64, dc: &DerivedConstants) -> Result<CutFunctionValue> {
    if at_branch_point(z) {
        return Err(domain("lambda", z));
    }
    let base = ONE - ONE / dc.z0;
    if let Some((mu, side)) = locate(z) {
        let principal = base + (ONE - mu * mu / dc.eta1_sq) * lambda0(mu)? / dc.z0;
        let jump = I * PI * mu * (dc.eta1_sq - mu * mu) / (2.0 * dc.c);
        return Ok(CutFunctionValue {
            value: principal + jump * side_sign(side),
            on_cut: true,
            side,
        });
    }
    let value = if z.norm() > SERIES_RADIUS {
        let u = ONE / z;
        let u2 = u * u;
        base + case_tail(u2) * (ONE / dc.eta1_sq - u2) / dc.z0
    } else {
        base + (ONE - z * z / dc.eta1_sq) * lambda_case(z)? / dc.z0
    };
    Ok(CutFunctionValue::off_cut(value))
}

/// Dispersion function. Real arguments inside `(-1, 1)` give the principal value.
pub fn lambda(z: Complex64, dc: &DerivedConstants) -> Result<Complex64> {
    lambda_at(z, dc).map(|v| v.value)
}

/// Analytic derivative of [`lambda`] off the cut.
pub fn lambda_prime(z: Complex64, dc: &DerivedConstants) -> Result<Complex64> {
    if at_branch_point(z) || locate(z).is_some() {
        return Err(domain("lambda_prime", z));
    }
    if z.norm() > SERIES_RADIUS {
        let u = ONE / z;
        let u2 = u * u;
        let s = case_tail(u2);
        let ds = power_sum(u2, |n| (n + 1) as f64 / (2 * n + 5) as f64);
        let u3 = u2 * u;
        return Ok((2.0 * u3 * (s + u2 * ds) - 2.0 * u3 * ds / dc.eta1_sq) / dc.z0);
    }
    let lc = lambda_case(z)?;
    let dlc = 0.5 * ((z - 1.0) / (z + 1.0)).ln() + z / (z * z - 1.0);
    Ok(((ONE - z * z / dc.eta1_sq) * dlc - 2.0 * z * lc / dc.eta1_sq) / dc.z0)
}

/// Boundary values `(lambda+, lambda-)` from above and below the cut.
pub fn lambda_boundary(mu: f64, dc: &DerivedConstants) -> Result<(Complex64, Complex64)> {
    if !(mu.abs() < 1.0) {
        return Err(domain("lambda_boundary", Complex64::new(mu, 0.0)));
    }
    let principal = lambda(Complex64::new(mu, 0.0), dc)?;
    let jump = I * PI * mu * (dc.eta1_sq - mu * mu) / (2.0 * dc.c);
    Ok((principal + jump, principal - jump))
}

/// `lambda+ * lambda-`, the denominator of every continuum coefficient.
pub fn boundary_product(mu: f64, dc: &DerivedConstants) -> Result<Complex64> {
    let (p, m) = lambda_boundary(mu, dc)?;
    Ok(p * m)
}

fn check_plane_point(function: &'static str, z: Complex64) -> Result<()> {
    if z.norm() == 0.0 || locate(z).is_some() || at_branch_point(z) {
        Err(domain(function, z))
    } else {
        Ok(())
    }
}

/// Dispersion function in the form `(c/z) lambda(z)`.
pub fn h_disp(z: Complex64, dc: &DerivedConstants) -> Result<Complex64> {
    check_plane_point("h_disp", z)?;
    Ok(dc.c / z * lambda(z, dc)?)
}

/// The same function written out directly, `c/z - z - (z^2 - eta1^2) ln((z-1)/(z+1)) / 2`.
pub fn h_disp_direct(z: Complex64, dc: &DerivedConstants) -> Result<Complex64> {
    check_plane_point("h_disp", z)?;
    Ok(dc.c / z - z - (z * z - dc.eta1_sq) * 0.5 * ((z - 1.0) / (z + 1.0)).ln())
}

/// `T(z) = (z/2c)[1 + (z^2 - eta1^2) ln(1 - 1/z^2)]`, with routing on the cut.
pub fn t_at(z: Complex64, dc: &DerivedConstants) -> Result<CutFunctionValue> {
    if z.norm() == 0.0 || at_branch_point(z) {
        return Err(domain("T", z));
    }
    if let Some((eta, side)) = locate(z) {
        if eta == 0.0 {
            return Err(domain("T", z));
        }
        let q = eta * eta - dc.eta1_sq;
        let principal = eta / (2.0 * dc.c) * (ONE + q * (1.0 / (eta * eta) - 1.0).ln());
        let jump = I * PI * eta.abs() * q / (2.0 * dc.c);
        return Ok(CutFunctionValue {
            value: principal + jump * side_sign(side),
            on_cut: true,
            side,
        });
    }
    let value = if z.norm() > SERIES_RADIUS {
        let u = ONE / z;
        let x = u * u;
        let a = power_sum(x, |n| 1.0 / (n + 1) as f64);
        let b = power_sum(x, |n| 1.0 / (n + 2) as f64);
        u / (2.0 * dc.c) * (dc.eta1_sq * a - b)
    } else {
        z / (2.0 * dc.c) * (ONE + (z * z - dc.eta1_sq) * (ONE - ONE / (z * z)).ln())
    };
    Ok(CutFunctionValue::off_cut(value))
}

pub fn t(z: Complex64, dc: &DerivedConstants) -> Result<Complex64> {
    t_at(z, dc).map(|v| v.value)
}

/// `T0(z) = (1/2c)[1/2 + z + (z^2 - eta1^2) ln(1 - 1/z)]`, cut along `[0, 1]`.
pub fn t0(z: Complex64, dc: &DerivedConstants) -> Result<Complex64> {
    if z.im == 0.0 && (0.0..=1.0).contains(&z.re) {
        return Err(domain("T0", z));
    }
    if z.norm() > SERIES_RADIUS {
        let u = ONE / z;
        let a = power_sum(u, |n| 1.0 / (n + 1) as f64);
        let b = power_sum(u, |n| 1.0 / (n + 3) as f64);
        return Ok(u / (2.0 * dc.c) * (dc.eta1_sq * a - b));
    }
    Ok((0.5 + z + (z * z - dc.eta1_sq) * (ONE - ONE / z).ln()) / (2.0 * dc.c))
}

/// `T1(eta) = T(eta) + sign(eta) lambda(eta)` on the cut; odd, with a jump at 0.
pub fn t1(eta: f64, dc: &DerivedConstants) -> Result<Complex64> {
    if eta == 0.0 || !(eta.abs() <= 1.0) {
        return Err(domain("T1", Complex64::new(eta, 0.0)));
    }
    let a = eta.abs();
    let inner = a - 2.0 * a * a + 2.0 * a * (a * a - dc.eta1_sq) * (1.0 / a).ln_1p();
    Ok((ONE + inner / (2.0 * dc.c)) * eta.signum())
}

/// Pieces of the continuous-spectrum eigenfunctions at `(eta, mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenParts {
    /// `F(eta,mu) + F(-eta,mu)`, odd in `mu`.
    pub phi: Complex64,
    /// `F(-eta,mu) - F(eta,mu)`, even in `mu`.
    pub psi: Complex64,
    /// Principal-value part `(mu eta - eta1^2) / (eta - mu)`.
    pub f_smooth: Complex64,
    /// Weight `-2c lambda(eta) / eta` of `delta(eta - mu)`.
    pub delta_weight: Complex64,
}

pub fn eigenfunction_parts(
    eta: Complex64,
    mu: f64,
    dc: &DerivedConstants,
    exclusion: f64,
) -> Result<EigenParts> {
    if (eta - mu).norm() < exclusion || (eta + mu).norm() < exclusion || eta.norm() == 0.0 {
        return Err(domain("eigenfunction", eta));
    }
    let e2 = eta * eta;
    let m2 = mu * mu;
    let den = e2 - m2;
    Ok(EigenParts {
        phi: 2.0 * mu * (e2 - dc.eta1_sq) / den,
        psi: 2.0 * eta * (dc.eta1_sq - m2) / den,
        f_smooth: (mu * eta - dc.eta1_sq) / (eta - mu),
        delta_weight: -2.0 * dc.c * lambda(eta, dc)? / eta,
    })
}

/// `int_{-1}^{1} F(eta, mu) dmu` including the delta part: `-2c/eta`.
/// Valid for real `eta` in the continuum and at zeros of the dispersion function.
pub fn eigen_moment0(eta: Complex64, dc: &DerivedConstants) -> Complex64 {
    -2.0 * dc.c / eta
}

/// `int_{-1}^{1} mu F(eta, mu) dmu`, independent of `eta`.
pub fn eigen_moment1(dc: &DerivedConstants) -> Complex64 {
    -2.0 * (dc.c - dc.eta1_sq)
}

/// `(1/6 - z) - (z^2 - 2z/3) ln(1 - 1/z)`, principal value on the real axis.
fn moment_kernel(z: Complex64) -> Complex64 {
    let log = if z.im == 0.0 {
        Complex64::new((1.0 - 1.0 / z.re).abs().ln(), 0.0)
    } else {
        (ONE - ONE / z).ln()
    };
    (1.0 / 6.0 - z) - (z * z - 2.0 * z / 3.0) * log
}

/// `int_0^1 (mu^2 - 2mu/3) F(z, mu) dmu` for `z` off the segment `[0, 1]`.
pub fn m0(z: Complex64, dc: &DerivedConstants) -> Result<Complex64> {
    if z.im == 0.0 && (0.0..=1.0).contains(&z.re) {
        return Err(domain("m0", z));
    }
    Ok((z * z - dc.eta1_sq) * moment_kernel(z))
}

/// `int_0^1 (mu^2 - 2mu/3) F(eta, mu) dmu` for real `eta`, principal value plus
/// the delta contribution when `eta` lies in `(0, 1)`.
pub fn m(eta: f64, dc: &DerivedConstants) -> Result<Complex64> {
    if eta == 0.0 || !(eta.abs() < 1.0) {
        return Err(domain("m", Complex64::new(eta, 0.0)));
    }
    let z = Complex64::new(eta, 0.0);
    let mut v = (z * z - dc.eta1_sq) * moment_kernel(z);
    if eta > 0.0 {
        v -= 2.0 * dc.c * lambda(z, dc)? * (eta - 2.0 / 3.0);
    }
    Ok(v)
}

/// Explicit expression for [`m`] as printed for the two half-intervals.
pub fn m_closed(eta: f64, dc: &DerivedConstants) -> Result<Complex64> {
    if eta == 0.0 || !(eta.abs() < 1.0) {
        return Err(domain("m", Complex64::new(eta, 0.0)));
    }
    let a = eta.abs();
    let q = eta * eta - dc.eta1_sq;
    let mut v = q * (1.0 / 6.0 - eta - (eta * eta - 2.0 * eta / 3.0) * (1.0 / a).ln_1p());
    if eta > 0.0 {
        v += 2.0 * (eta * eta - dc.c) * (eta - 2.0 / 3.0);
    }
    Ok(v)
}
