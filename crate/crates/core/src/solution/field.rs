use alloc::vec::Vec;

use num_complex::Complex64;

use super::SolutionCoefficients;
use crate::error::Result;
use crate::quadrature::try_integrate;
use crate::scaled::{cosh_ratio, sinh_ratio};

/// Field sampled on a grid, with the wall checks.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldProfile {
    pub x_grid: Vec<f64>,
    pub e_values: Vec<Complex64>,
    /// `max |e(+-1) - 1|`.
    pub boundary_residual: f64,
    /// `max |e(x) - e(-x)|` over the grid.
    pub symmetry_residual: f64,
}

impl SolutionCoefficients {
    /// Electric field `e(x)` for `|x| <= 1`.
    pub fn field_at(&self, x: f64) -> Result<Complex64> {
        self.field_inner(x).map_err(|e| e.at("e(x)", x))
    }

    fn field_inner(&self, x: f64) -> Result<Complex64> {
        let dc = &self.dc;
        let mut e = self.e_inf;
        if let Some(d) = self.debye {
            e += 2.0 * d.e0_cosh * cosh_ratio(dc.w0 / d.eta0, x);
        }
        let cont = try_integrate(
            |eta| Ok(self.weighted_continuum(eta)? * cosh_ratio(dc.w0 / eta, x)),
            0.0,
            1.0,
            &self.tol.field_opts(),
        )?;
        Ok(e + 4.0 * cont.value)
    }

    /// `int [E0 sinh(w0 x/eta0)/eta0 + E(eta) sinh(w0 x/eta)/eta]`, the common
    /// bracket of the density and the field gradient.
    fn odd_bracket(&self, x: f64) -> Result<Complex64> {
        let dc = &self.dc;
        let mut b = Complex64::new(0.0, 0.0);
        if let Some(d) = self.debye {
            b += d.e0_cosh * sinh_ratio(dc.w0 / d.eta0, x) / d.eta0;
        }
        let cont = try_integrate(
            |eta| Ok(self.weighted_continuum(eta)? * sinh_ratio(dc.w0 / eta, x) / eta),
            0.0,
            1.0,
            &self.tol.field_opts(),
        )?;
        Ok(b + 2.0 * cont.value)
    }

    /// Electron density perturbation `n(x)`.
    pub fn density(&self, x: f64) -> Result<Complex64> {
        Ok(4.0 * self.dc.c / self.dc.w0 * self.odd_bracket(x)?)
    }

    /// `de/dx`, computed from the mode expansion term by term.
    pub fn field_gradient(&self, x: f64) -> Result<Complex64> {
        Ok(2.0 * self.dc.w0 * self.odd_bracket(x)?)
    }

    /// `e(x)` on `n` equally spaced points of `[-1, 1]` (`n >= 2`).
    pub fn field_profile(&self, n: usize) -> Result<FieldProfile> {
        let n = n.max(2);
        let x_grid: Vec<f64> = (0..n)
            .map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64)
            .collect();
        let e_values = x_grid
            .iter()
            .map(|&x| self.field_at(x))
            .collect::<Result<Vec<_>>>()?;
        let one = Complex64::new(1.0, 0.0);
        let boundary_residual = (e_values[0] - one).norm().max((e_values[n - 1] - one).norm());
        let symmetry_residual = (0..n)
            .map(|i| (e_values[i] - e_values[n - 1 - i]).norm())
            .fold(0.0, f64::max);
        Ok(FieldProfile {
            x_grid,
            e_values,
            boundary_residual,
            symmetry_residual,
        })
    }
}
