use alloc::vec::Vec;

use num_complex::Complex64;

use super::SolutionCoefficients;
use crate::error::Result;
use crate::quadrature::try_integrate;
use crate::specfun::{boundary_product, m, m0, t, t1};

/// A contour-integral closed form next to direct quadrature of the same integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueCheck {
    pub closed: Complex64,
    pub quadrature: Complex64,
}

impl ResidueCheck {
    pub fn difference(&self) -> f64 {
        (self.closed - self.quadrature).norm()
    }
}

/// Complex least-squares line `w0 [h(mu) - h(-mu)] ~ intercept + slope * mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProportionalityFit {
    pub mu: Vec<f64>,
    pub slope: Complex64,
    pub intercept: Complex64,
    /// Largest deviation of a sample from the fitted line.
    pub max_residual: f64,
}

impl ProportionalityFit {
    /// Distance of the fitted line from `A_tilde (mu - 2/3)`.
    pub fn coefficient_error(&self, a1_tilde: Complex64) -> f64 {
        (self.slope - a1_tilde)
            .norm()
            .max((self.intercept + a1_tilde * (2.0 / 3.0)).norm())
    }
}

/// Every consistency check on a solved boundary-value problem.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryDiagnostics {
    /// `|E_inf lambda_inf - lambda1|`.
    pub drude_residual: f64,
    /// Size of the `1/(z - eta0)` coefficient left in `M(z)`.
    pub pole_residual: f64,
    /// `|e(1) - 1|` from quadrature of the field.
    pub field_boundary_residual: f64,
    /// `|e(1) - 1|` with the contour closed forms substituted.
    pub field_condition_residual: f64,
    pub j1: ResidueCheck,
    pub j2: ResidueCheck,
    /// `int_{-1}^{1} mu h(-1, mu) dmu`.
    pub nonflow: Complex64,
    /// Residual of the accommodation moment equation.
    pub moment_residual: f64,
    pub proportionality: ProportionalityFit,
}

/// Sample points for the wall-condition fit.
pub const FIT_SAMPLES: usize = 19;

impl SolutionCoefficients {
    /// `(1/c) int_0^1 eta^2 / (lambda+ lambda-)` by contour integration.
    pub fn j1_closed(&self) -> Result<Complex64> {
        let dc = &self.dc;
        let mut v = -1.0 / dc.lambda_inf + 1.0 / dc.lambda1;
        if let Some((eta0, lp)) = self.zero() {
            v += 2.0 * eta0 / (lp * (eta0 * eta0 - dc.eta1_sq));
        }
        Ok(v)
    }

    /// `(1/c) int_0^1 eta T1(eta) / (lambda+ lambda-)` by contour integration.
    pub fn j2_closed(&self) -> Result<Complex64> {
        let dc = &self.dc;
        let mut v = 1.0 / (2.0 * dc.c * dc.lambda1);
        if let Some((eta0, lp)) = self.zero() {
            v += 2.0 * t(eta0, dc)? / (lp * (eta0 * eta0 - dc.eta1_sq));
        }
        Ok(v)
    }

    pub fn j1_quadrature(&self) -> Result<Complex64> {
        let dc = &self.dc;
        let r = try_integrate(
            |eta| Ok(eta * eta / boundary_product(eta, dc)?),
            0.0,
            1.0,
            &self.tol.coeff_opts(),
        )?;
        Ok(r.value / dc.c)
    }

    pub fn j2_quadrature(&self) -> Result<Complex64> {
        let dc = &self.dc;
        let r = try_integrate(
            |eta| Ok(eta * t1(eta, dc)? / boundary_product(eta, dc)?),
            0.0,
            1.0,
            &self.tol.coeff_opts(),
        )?;
        Ok(r.value / dc.c)
    }

    /// `e(1)` assembled from the amplitudes and the two residue integrals.
    pub fn field_condition(&self, j1: Complex64, j2: Complex64) -> Complex64 {
        let dc = &self.dc;
        let a = self.a1_tilde;
        self.e_inf + 2.0 * self.e0_cosh() + (dc.lambda1 - dc.lambda_inf * a / 2.0) * j1 + a / 3.0 * j2
    }

    /// `int_{-1}^{1} exp(w0/eta) E(eta) deta`.
    fn wall_weight_integral(&self) -> Result<Complex64> {
        Ok(try_integrate(|eta| self.wall_weight(eta), -1.0, 1.0, &self.tol.coeff_opts())?.value)
    }

    /// Particle flux through the wall, with the `mu` integration done first in
    /// closed form.
    pub fn nonflow(&self) -> Result<Complex64> {
        let dc = &self.dc;
        let modes = self.e0_cosh() + self.wall_weight_integral()?;
        Ok(2.0 / dc.w0 * (self.e_inf / 3.0 - 2.0 * (dc.c - dc.eta1_sq) * modes))
    }

    /// `w0 int_0^1 (mu^2 - 2mu/3) h(-1, mu) dmu`, `mu` integration done first.
    pub fn wall_moment(&self) -> Result<Complex64> {
        let dc = &self.dc;
        let mut v = self.e_inf / 36.0;
        if let Some(d) = self.debye {
            let (rp, rm) = d.exp_ratios(dc);
            v += d.e0_cosh * (m0(d.eta0, dc)? * rp + m0(-d.eta0, dc)? * rm);
        }
        let cont = try_integrate(
            |eta| Ok(m(eta, dc)? * self.wall_weight(eta)?),
            -1.0,
            1.0,
            &self.tol.coeff_opts(),
        )?;
        Ok(v + 2.0 * cont.value)
    }

    /// `alpha_p * wall_moment + (1 - alpha_p) A_tilde / 36`, zero for the exact solution.
    pub fn moment_residual(&self, wall_moment: Complex64) -> f64 {
        let alpha = self.dc.params.alpha_p;
        (alpha * wall_moment + (1.0 - alpha) * self.a1_tilde / 36.0).norm()
    }

    /// `int_{-1}^{1} mu h(-1, mu) dmu` by quadrature of the pointwise distribution.
    pub fn nonflow_direct(&self) -> Result<Complex64> {
        let opts = self.tol.field_opts();
        Ok(try_integrate(|mu| Ok(mu * self.boundary_distribution(mu)?), -1.0, 1.0, &opts)?.value)
    }

    /// [`Self::wall_moment`] by quadrature of the pointwise distribution.
    pub fn wall_moment_direct(&self) -> Result<Complex64> {
        let opts = self.tol.field_opts();
        let r = try_integrate(
            |mu| Ok((mu * mu - 2.0 * mu / 3.0) * self.boundary_distribution(mu)?),
            0.0,
            1.0,
            &opts,
        )?;
        Ok(self.dc.w0 * r.value)
    }

    /// Least-squares fit of `w0 [h(-1, mu) - h(-1, -mu)]` against `mu` on `n`
    /// interior points of `(0, 1)`.
    pub fn proportionality_fit(&self, n: usize) -> Result<ProportionalityFit> {
        let n = n.max(3);
        let mu: Vec<f64> = (1..=n).map(|j| j as f64 / (n + 1) as f64).collect();
        let d = mu
            .iter()
            .map(|&u| Ok(self.dc.w0 * self.wall_asymmetry(u)?))
            .collect::<Result<Vec<Complex64>>>()?;
        let nf = n as f64;
        let mx = mu.iter().sum::<f64>() / nf;
        let md = d.iter().sum::<Complex64>() / nf;
        let sxx: f64 = mu.iter().map(|u| (u - mx) * (u - mx)).sum();
        let sxd: Complex64 = mu.iter().zip(&d).map(|(u, v)| (v - md) * (u - mx)).sum();
        let slope = sxd / sxx;
        let intercept = md - slope * mx;
        let max_residual = mu
            .iter()
            .zip(&d)
            .map(|(u, v)| (v - intercept - slope * *u).norm())
            .fold(0.0, f64::max);
        Ok(ProportionalityFit {
            mu,
            slope,
            intercept,
            max_residual,
        })
    }

    /// Runs every check except the nested quadratures.
    pub fn diagnostics(&self) -> Result<BoundaryDiagnostics> {
        let dc = &self.dc;
        let one = Complex64::new(1.0, 0.0);
        let j1 = ResidueCheck {
            closed: self.j1_closed()?,
            quadrature: self.j1_quadrature()?,
        };
        let j2 = ResidueCheck {
            closed: self.j2_closed()?,
            quadrature: self.j2_quadrature()?,
        };
        Ok(BoundaryDiagnostics {
            drude_residual: (self.e_inf * dc.lambda_inf - dc.lambda1).norm(),
            pole_residual: self.pole_coefficient()?.norm(),
            field_boundary_residual: (self.field_at(1.0)? - one).norm(),
            field_condition_residual: (self.field_condition(j1.closed, j2.closed) - one).norm(),
            j1,
            j2,
            nonflow: self.nonflow()?,
            moment_residual: self.moment_residual(self.wall_moment()?),
            proportionality: self.proportionality_fit(FIT_SAMPLES)?,
        })
    }
}

