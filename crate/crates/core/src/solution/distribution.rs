use num_complex::Complex64;

use super::SolutionCoefficients;
use crate::error::{Error, Result};
use crate::quadrature::try_integrate_pv;
use crate::scaled::exp_over_cosh;
use crate::specfun::lambda;

impl SolutionCoefficients {
    /// `exp(w0/eta)/cosh(w0/eta) * cosh(w0/eta) E(eta)`, i.e. `exp(w0/eta) E(eta)`.
    pub(super) fn wall_weight(&self, eta: f64) -> Result<Complex64> {
        Ok(exp_over_cosh(self.dc.w0 / eta) * self.weighted_continuum(eta)?)
    }

    /// Distribution function `h(-1, mu)` of electrons at the left wall.
    pub fn boundary_distribution(&self, mu: f64) -> Result<Complex64> {
        self.boundary_distribution_inner(mu)
            .map_err(|e| e.at("h(-1, mu)", mu))
    }

    fn boundary_distribution_inner(&self, mu: f64) -> Result<Complex64> {
        let dc = &self.dc;
        let z = Complex64::new(mu, 0.0);
        if mu == 0.0 || !(mu.abs() < 1.0) {
            return Err(Error::Domain {
                function: "boundary_distribution",
                at: z,
            });
        }
        let mut h = self.e_inf * mu;
        if let Some(d) = self.debye {
            let (rp, rm) = d.exp_ratios(dc);
            let f = |eta: Complex64| (mu * eta - dc.eta1_sq) / (eta - mu);
            h += d.e0_cosh * (f(d.eta0) * rp + f(-d.eta0) * rm);
        }
        let pv = try_integrate_pv(
            |eta| Ok(self.wall_weight(eta)? * (mu * eta - dc.eta1_sq)),
            -1.0,
            1.0,
            mu,
            &[0.0],
            &self.tol.field_opts(),
        )?;
        let delta = -2.0 * dc.c * lambda(z, dc)? / mu * self.wall_weight(mu)?;
        h += 2.0 * (pv.value + delta);
        Ok(h / dc.w0)
    }

    /// `h(-1, mu) - h(-1, -mu)`, which the wall condition makes equal to
    /// `A_tilde (mu - 2/3) / w0`.
    pub fn wall_asymmetry(&self, mu: f64) -> Result<Complex64> {
        Ok(self.boundary_distribution(mu)? - self.boundary_distribution(-mu)?)
    }
}
