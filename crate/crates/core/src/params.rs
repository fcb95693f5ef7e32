//! Physical inputs and the complex constants derived from them.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// The four dimensionless inputs of the problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasmaParams {
    /// Field frequency over the plasma frequency.
    pub omega: f64,
    /// Collision frequency over the plasma frequency.
    pub eps: f64,
    /// Slab half-width in units of the Fermi length `v_F / omega_p`.
    pub k: f64,
    /// Normal-momentum accommodation coefficient, 0 for specular walls.
    pub alpha_p: f64,
}

impl PlasmaParams {
    pub fn new(omega: f64, eps: f64, k: f64, alpha_p: f64) -> Result<Self> {
        let p = PlasmaParams {
            omega,
            eps,
            k,
            alpha_p,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check("omega", self.omega, self.omega.is_finite() && self.omega >= 0.0, "omega >= 0")?;
        check("eps", self.eps, self.eps.is_finite() && self.eps > 0.0, "eps > 0")?;
        check("k", self.k, self.k.is_finite() && self.k > 0.0, "k > 0")?;
        check(
            "alpha_p",
            self.alpha_p,
            (0.0..=1.0).contains(&self.alpha_p),
            "0 <= alpha_p <= 1",
        )
    }

    pub fn derive(&self) -> Result<DerivedConstants> {
        derive(self)
    }
}

fn check(field: &'static str, value: f64, ok: bool, requirement: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Parameter {
            field,
            value,
            requirement,
        })
    }
}

/// Constants shared by every formula downstream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    pub params: PlasmaParams,
    /// `k*eps - i*k*omega`
    pub w0: Complex64,
    /// `1 - i*omega/eps`
    pub z0: Complex64,
    pub eta1_sq: Complex64,
    /// Principal square root of `eta1_sq`.
    pub eta1: Complex64,
    /// `w0^2 / up_sq`, equal to `z0 * eta1_sq`.
    pub c: Complex64,
    pub up_sq: f64,
    /// Value of the dispersion function at `eta1`.
    pub lambda1: Complex64,
    /// Limit of the dispersion function at infinity.
    pub lambda_inf: Complex64,
    /// Coefficient of `z^-2` in the expansion at infinity.
    pub lambda2: Complex64,
    /// Coefficient of `z^-4` in the expansion at infinity.
    pub lambda4: Complex64,
}

pub fn derive(p: &PlasmaParams) -> Result<DerivedConstants> {
    p.validate()?;
    let one = Complex64::new(1.0, 0.0);
    let w0 = Complex64::new(p.k * p.eps, -p.k * p.omega);
    let z0 = Complex64::new(1.0, -p.omega / p.eps);
    let eta1_sq = z0 * (p.eps * p.eps / 3.0);
    let up_sq = 3.0 * p.k * p.k;
    let c = w0 * w0 / up_sq;
    let lambda1 = one - one / z0;
    let lambda_inf = {
        // (omega^2 - 1 + i eps omega) / (omega + i eps)^2
        let num = Complex64::new(p.omega * p.omega - 1.0, p.eps * p.omega);
        let den = Complex64::new(p.omega, p.eps);
        num / (den * den)
    };
    let lambda2 = one / (5.0 * c) - one / (3.0 * z0);
    let lambda4 = one / (7.0 * c) - one / (5.0 * z0);
    Ok(DerivedConstants {
        params: *p,
        w0,
        z0,
        eta1_sq,
        eta1: eta1_sq.sqrt(),
        c,
        up_sq,
        lambda1,
        lambda_inf,
        lambda2,
        lambda4,
    })
}
