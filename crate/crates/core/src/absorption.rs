//! Absorbed power. `Q1 = (1/2) int e(x) dx` is computed along three routes
//! that share only the solved amplitudes, and `Q0 = -Im Q1`.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{sum_symmetric_series, try_integrate, SeriesResult};
use crate::scaled::tanh;
use crate::specfun::{boundary_product, lambda, t1};
use crate::solution::SolutionCoefficients;

/// Upper bound on residue-series terms.
pub const MAX_SERIES_TERMS: usize = 2_000_000;
/// Relative agreement the three routes must reach.
pub const AGREEMENT_TOL: f64 = 1e-6;
const NODE_GUARD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Residue series and the remaining continuum integral.
    Closed,
    /// Quadrature of the continuum term.
    Quadrature,
    /// Integral of the reconstructed field across the slab.
    Spatial,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Closed => "closed",
            Route::Quadrature => "quadrature",
            Route::Spatial => "spatial",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorptionResult {
    pub q1_closed: Complex64,
    pub q1_quadrature: Complex64,
    /// `None` when the spatial route was skipped.
    pub q1_spatial: Option<Complex64>,
    pub q0: f64,
    pub series_terms: usize,
    pub series_tail: f64,
    pub j1_series: Complex64,
    pub j1_quadrature: Complex64,
    pub j0: Complex64,
    /// Largest pairwise relative deviation between the routes.
    pub agreement: f64,
    /// The two routes that disagree most.
    pub worst_pair: (Route, Route),
}

impl AbsorptionResult {
    pub fn q0_nonnegative(&self) -> bool {
        self.q0 >= 0.0
    }

    pub fn is_consistent(&self) -> bool {
        self.agreement < AGREEMENT_TOL && self.q0_nonnegative()
    }
}

/// Poles of `tanh(w0/eta)`: `t_k = 2 i w0 / (pi (2k + 1))`.
pub fn tanh_pole(w0: Complex64, k: usize) -> Complex64 {
    Complex64::new(0.0, 2.0) * w0 / (PI * (2 * k + 1) as f64)
}

/// Term `k` of the residue series, `t_k^4 / (lambda(t_k) (t_k^2 - eta1^2))`.
pub fn j1_series_term(s: &SolutionCoefficients, k: usize) -> Result<Complex64> {
    let dc = &s.dc;
    let node = tanh_pole(dc.w0, k);
    let d2 = node * node - dc.eta1_sq;
    let near_zero = s.zero().is_some_and(|(eta0, _)| (node - eta0).norm() < NODE_GUARD);
    if near_zero || d2.norm() < NODE_GUARD || (node.re.abs() < 1.0 && node.im.abs() < NODE_GUARD) {
        return Err(Error::SeriesAbort { index: k, node });
    }
    let n2 = node * node;
    Ok(n2 * n2 / (lambda(node, dc)? * d2))
}

/// `(1/c) int_0^1 eta^3 tanh(w0/eta) / (lambda+ lambda-)` by residues.
pub fn j1_series(s: &SolutionCoefficients) -> Result<(Complex64, SeriesResult)> {
    let dc = &s.dc;
    let series = sum_symmetric_series(|k| j1_series_term(s, k), s.tol.series, MAX_SERIES_TERMS)?;
    let mut v = -dc.w0 / dc.lambda_inf + dc.eta1 / dc.lambda1 * tanh(dc.w0 / dc.eta1) - series.value / dc.w0;
    if let Some((eta0, lp)) = s.zero() {
        v += 2.0 * eta0 * eta0 * tanh(dc.w0 / eta0) / (lp * (eta0 * eta0 - dc.eta1_sq));
    }
    Ok((v, series))
}

/// The same integral as [`j1_series`] by quadrature.
pub fn j1_quadrature(s: &SolutionCoefficients) -> Result<Complex64> {
    let dc = &s.dc;
    let r = try_integrate(
        |eta| Ok(eta * eta * eta * tanh(dc.w0 / eta) / boundary_product(eta, dc)?),
        0.0,
        1.0,
        &s.tol.coeff_opts(),
    )?;
    Ok(r.value / dc.c)
}

/// `(1/c) int_0^1 eta^2 T1(eta) tanh(w0/eta) / (lambda+ lambda-)`; no closed form.
pub fn j0_quadrature(s: &SolutionCoefficients) -> Result<Complex64> {
    let dc = &s.dc;
    let r = try_integrate(
        |eta| Ok(eta * eta * t1(eta, dc)? * tanh(dc.w0 / eta) / boundary_product(eta, dc)?),
        0.0,
        1.0,
        &s.tol.coeff_opts(),
    )?;
    Ok(r.value / dc.c)
}

/// Drude and Debye part of `Q1`, shared by the first two routes.
fn discrete_part(s: &SolutionCoefficients) -> Complex64 {
    let dc = &s.dc;
    let mut q = s.e_inf;
    if let Some(d) = s.debye {
        q += 2.0 * d.e0_cosh * tanh(dc.w0 / d.eta0) * d.eta0 / dc.w0;
    }
    q
}

/// `Q1` from the residue form of the continuum integral.
pub fn q1_closed(s: &SolutionCoefficients, j1: Complex64, j0: Complex64) -> Complex64 {
    let dc = &s.dc;
    let a = s.a1_tilde;
    discrete_part(s) + ((dc.lambda1 - dc.lambda_inf * a / 2.0) * j1 + a / 3.0 * j0) / dc.w0
}

/// `Q1` with the continuum term `(2/w0) int eta E(eta) sinh(w0/eta)` by quadrature.
pub fn q1_quadrature(s: &SolutionCoefficients) -> Result<Complex64> {
    let dc = &s.dc;
    let r = try_integrate(
        |eta| Ok(eta * s.weighted_continuum(eta)? * tanh(dc.w0 / eta)),
        0.0,
        1.0,
        &s.tol.coeff_opts(),
    )?;
    Ok(discrete_part(s) + 4.0 / dc.w0 * r.value)
}

/// `Q1 = int_0^1 e(x) dx` from the field itself.
pub fn q1_spatial(s: &SolutionCoefficients) -> Result<Complex64> {
    let opts = s.tol.field_opts();
    Ok(try_integrate(|x| s.field_at(x), 0.0, 1.0, &opts)?.value)
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// All three routes.
pub fn compute_absorption(s: &SolutionCoefficients) -> Result<AbsorptionResult> {
    compute_absorption_with(s, true)
}

/// As [`compute_absorption`], optionally skipping the (slowest) spatial route.
pub fn compute_absorption_with(s: &SolutionCoefficients, spatial: bool) -> Result<AbsorptionResult> {
    let (j1s, series) = j1_series(s)?;
    let j1q = j1_quadrature(s)?;
    let j0 = j0_quadrature(s)?;
    let qa = q1_closed(s, j1s, j0);
    let qb = q1_quadrature(s)?;
    let qc = if spatial { Some(q1_spatial(s)?) } else { None };
    let mut worst = (relative(qa, qb), (Route::Closed, Route::Quadrature));
    if let Some(qc) = qc {
        for (d, pair) in [
            (relative(qa, qc), (Route::Closed, Route::Spatial)),
            (relative(qb, qc), (Route::Quadrature, Route::Spatial)),
        ] {
            if d > worst.0 {
                worst = (d, pair);
            }
        }
    }
    Ok(AbsorptionResult {
        q1_closed: qa,
        q1_quadrature: qb,
        q1_spatial: qc,
        q0: -qb.im,
        series_terms: series.terms,
        series_tail: series.tail_estimate,
        j1_series: j1s,
        j1_quadrature: j1q,
        j0,
        agreement: worst.0,
        worst_pair: worst.1,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::PlasmaParams;
    use crate::solution::{solve, Tolerances};
    use crate::specfun::lambda_boundary;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn p1() -> PlasmaParams {
        PlasmaParams::new(0.5, 0.2, 5.0, 0.5).unwrap()
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn reference_point_routes_agree() {
        let s = solve(&p1(), Tolerances::default()).unwrap();
        let a = compute_absorption(&s).unwrap();
        let expect = Complex64::new(-0.10041562534, -0.16083175971);
        assert!(rel(a.q1_closed, expect) < 1e-9, "{}", a.q1_closed);
        assert!(a.agreement < 1e-6, "{:?}", a);
        assert!(a.q0_nonnegative() && a.is_consistent());
        assert!(rel(a.j1_series, a.j1_quadrature) < 1e-7);
    }

    #[test]
    fn tanh_poles_are_zeros_of_cosh() {
        let w0 = Complex64::new(1.0, -2.5);
        for k in [0, 1, 7] {
            let v = (w0 / tanh_pole(w0, k)).cosh();
            assert!(v.norm() < 1e-12, "{k}: {v}");
        }
    }

    #[test]
    fn series_tail_decays_like_inverse_cube() {
        let s = solve(&p1(), Tolerances::default()).unwrap();
        let (_, full) = j1_series(&s).unwrap();
        let partial = |n: usize| -> Complex64 { 2.0 * (0..n).map(|k| j1_series_term(&s, k).unwrap()).sum::<Complex64>() };
        let rem: Vec<f64> = [200usize, 400, 800].iter().map(|&n| (full.value - partial(n)).norm()).collect();
        for w in rem.windows(2) {
            let slope = (w[1] / w[0]).log2();
            assert!((slope + 3.0).abs() < 0.1, "{slope}");
        }
    }

    #[test]
    fn dispersion_tends_to_one_along_the_poles() {
        let s = solve(&p1(), Tolerances::default()).unwrap();
        let dc = &s.dc;
        // the poles approach 0 from the upper half plane, where
        // lambda(z) = 1 + i pi z / (2 z0) + O(z^2)
        for k in [100_000usize, 1_000_000] {
            let t = tanh_pole(dc.w0, k);
            assert!(t.im > 0.0);
            let lead = Complex64::new(0.0, PI / 2.0) * t / dc.z0;
            let v = lambda(t, dc).unwrap();
            assert!(((v - 1.0) - lead).norm() < 1e-3 * lead.norm(), "{k}: {v}");
        }
        let v = lambda(tanh_pole(dc.w0, 100_000_000), dc).unwrap();
        assert!((v - 1.0).norm() < 1e-8, "{v}");
    }

    #[test]
    fn j0_integrand_limit_at_zero() {
        let s = solve(&p1(), Tolerances::default()).unwrap();
        let dc = &s.dc;
        let eta = 1e-7;
        assert!((t1(eta, dc).unwrap() - 1.0).norm() < 1e-5);
        assert!((tanh(dc.w0 / eta) - 1.0).norm() < 1e-12);
        let (lp, lm) = lambda_boundary(eta, dc).unwrap();
        assert!((lp * lm - 1.0).norm() < 1e-5);
    }

    #[test]
    fn j0_is_stable_under_refinement() {
        let s = solve(&p1(), Tolerances::default()).unwrap();
        let mut fine = s.clone();
        fine.tol.coeff = 1e-13;
        assert!((j0_quadrature(&s).unwrap() - j0_quadrature(&fine).unwrap()).norm() < 1e-9);
    }

    #[test]
    fn j0_matches_fixed_grid() {
        let s = solve(&p1(), Tolerances::default()).unwrap();
        let dc = &s.dc;
        // midpoint rule in u with eta = u^2 (3 - 2u), which flattens both ends
        let n = 1_000_000;
        let h = 1.0 / n as f64;
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let u = (i as f64 + 0.5) * h;
            let eta = u * u * (3.0 - 2.0 * u);
            let f = eta * eta * t1(eta, dc).unwrap() * tanh(dc.w0 / eta) / boundary_product(eta, dc).unwrap();
            sum += f * 6.0 * u * (1.0 - u);
        }
        let grid = sum * h / dc.c;
        assert!((grid - j0_quadrature(&s).unwrap()).norm() < 1e-8);
    }

    #[test]
    fn truncated_expansion_keeps_routes_consistent() {
        let mut s = solve(&p1(), Tolerances::default()).unwrap();
        s.debye = None;
        s.a1_tilde = Complex64::new(0.0, 0.0);
        let a = compute_absorption_with(&s, false).unwrap();
        assert!(rel(a.q1_closed, a.q1_quadrature) < 1e-8);
        let expect = s.e_inf + s.dc.lambda1 * a.j1_series / s.dc.w0;
        assert!(rel(a.q1_closed, expect) < 1e-14);
    }

    #[test]
    fn specular_limit_is_continuous() {
        let q0 = |alpha: f64| {
            let mut p = p1();
            p.alpha_p = alpha;
            compute_absorption_with(&solve(&p, Tolerances::default()).unwrap(), false).unwrap().q0
        };
        let d = (q0(0.0) - q0(1e-6)).abs();
        assert!(d < 1e-6 && d > 0.0, "{d}");
    }

    #[test]
    fn routes_agree_without_debye_mode() {
        let s = solve(&PlasmaParams::new(5.0, 2.0, 5.0, 0.5).unwrap(), Tolerances::default()).unwrap();
        let a = compute_absorption(&s).unwrap();
        assert!(a.is_consistent(), "{:?}", a);
    }

    #[test]
    fn q0_is_stable_under_tighter_tolerances() {
        let base = solve(&p1(), Tolerances::default()).unwrap();
        let tight = solve(&p1(), Tolerances { coeff: 1e-13, field: 1e-11, series: 1e-16 }).unwrap();
        let a = compute_absorption(&base).unwrap();
        let b = compute_absorption(&tight).unwrap();
        assert!((a.q0 - b.q0).abs() < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn routes_agree_at_random_points(omega in 0.3f64..1.5, eps in 0.05f64..0.5, alpha in 0.05f64..1.0) {
            let p = PlasmaParams::new(omega, eps, 5.0, alpha).unwrap();
            match solve(&p, Tolerances::default()) {
                Ok(s) => {
                    let a = compute_absorption(&s).unwrap();
                    prop_assert!(a.agreement < 1e-6, "{:?}", a);
                    prop_assert!(a.q0 >= 0.0);
                }
                Err(e) => prop_assert!(matches!(e, Error::NearBoundaryCurve { .. }), "{}", e),
            }
        }
    }
}
