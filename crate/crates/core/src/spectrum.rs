//! Discrete spectrum: how many zeros the dispersion function has off the cut,
//! where the Debye zero is, and the curve `L` in the `(omega, eps)` plane across
//! which that zero appears or disappears.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::params::{derive, DerivedConstants, PlasmaParams};
use crate::specfun::{lambda, lambda0, lambda_boundary, lambda_prime};

/// Uniform sample count on `[0, 1)` used by [`analyze`] before refinement.
pub const DEFAULT_WINDING_DENSITY: usize = 64;
/// `min(|G|, 1/|G|)` below this counts as touching the origin.
pub const NEAR_L_DISTANCE: f64 = 1e-6;
/// Residual required of an accepted Debye zero.
pub const ZERO_RESIDUAL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 100;
const CUT_CLEARANCE: f64 = 1e-8;
const MIN_WIDTH: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// One pair of zeros `+-eta0` exists.
    DPlus,
    /// No zeros off the cut.
    DMinus,
    /// On or too close to the curve `L` to decide.
    NearL,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::DPlus => "DPlus",
            Region::DMinus => "DMinus",
            Region::NearL => "NearL",
        }
    }
}

/// Argument tracking of `G = lambda+ / lambda-` along `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingReport {
    pub kappa: i32,
    /// Total change of `arg G` divided by `2 pi`.
    pub turns: f64,
    /// Distance of `turns` from the nearest integer.
    pub closure_error: f64,
    /// Smallest `min(|G|, 1/|G|)` over the samples.
    pub min_distance: f64,
    pub samples: usize,
    /// False if some step could not be refined below `pi/4`.
    pub resolved: bool,
}

impl WindingReport {
    pub fn near_l(&self) -> bool {
        !self.resolved || self.closure_error > 1e-6 || self.min_distance < NEAR_L_DISTANCE
    }
}

/// `G(mu) = lambda+(mu) / lambda-(mu)`.
pub fn g_ratio(mu: f64, dc: &DerivedConstants) -> Result<Complex64> {
    if mu >= 1.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let (p, m) = lambda_boundary(mu, dc)?;
    Ok(p / m)
}

struct Tracker<'a> {
    dc: &'a DerivedConstants,
    total: f64,
    samples: usize,
    min_distance: f64,
    resolved: bool,
}

impl Tracker<'_> {
    fn sample(&mut self, mu: f64) -> Result<Complex64> {
        let g = g_ratio(mu, self.dc)?;
        self.samples += 1;
        let n = g.norm();
        self.min_distance = self.min_distance.min(n.min(1.0 / n));
        Ok(g)
    }

    fn step(&mut self, a: f64, ga: Complex64, b: f64, gb: Complex64) -> Result<()> {
        let d = (gb / ga).arg();
        if d.abs() < FRAC_PI_4 {
            self.total += d;
            return Ok(());
        }
        let mid = 0.5 * (a + b);
        if b - a < MIN_WIDTH || !(mid > a && mid < b) {
            self.resolved = false;
            self.total += d;
            return Ok(());
        }
        let gm = self.sample(mid)?;
        self.step(a, ga, mid, gm)?;
        self.step(mid, gm, b, gb)
    }
}

/// Sample points: `density` uniform steps on `[0, 0.999]`, then a geometric
/// approach to 1 where the boundary values are log-singular.
fn base_grid(density: usize) -> Vec<f64> {
    let n = density.max(2);
    let mut pts: Vec<f64> = (0..=n).map(|i| 0.999 * i as f64 / n as f64).collect();
    let tail = n / 2 + 4;
    for j in 1..=tail {
        let expo = -3.0 - 12.0 * j as f64 / tail as f64;
        pts.push(1.0 - 10f64.powf(expo));
    }
    pts.push(1.0);
    pts
}

/// Winding of `G` over `[0, 1]`, refined adaptively from `density` base samples.
pub fn winding(dc: &DerivedConstants, density: usize) -> Result<WindingReport> {
    let mut tr = Tracker {
        dc,
        total: 0.0,
        samples: 0,
        min_distance: f64::INFINITY,
        resolved: true,
    };
    let grid = base_grid(density);
    let mut prev = (grid[0], tr.sample(grid[0])?);
    for &mu in &grid[1..] {
        let g = tr.sample(mu)?;
        tr.step(prev.0, prev.1, mu, g)?;
        prev = (mu, g);
    }
    let turns = tr.total / (2.0 * PI);
    let kappa = turns.round();
    Ok(WindingReport {
        kappa: kappa as i32,
        turns,
        closure_error: (turns - kappa).abs(),
        min_distance: tr.min_distance,
        samples: tr.samples,
        resolved: tr.resolved,
    })
}

/// Index of `G` on `[0, 1]`; refuses parameters on or near `L`.
pub fn winding_index(dc: &DerivedConstants) -> Result<i32> {
    let w = winding(dc, DEFAULT_WINDING_DENSITY)?;
    if w.near_l() {
        return Err(Error::NearBoundaryCurve {
            closure_error: w.closure_error,
            min_distance: w.min_distance,
        });
    }
    Ok(w.kappa)
}

/// Seed from the two-term expansion at infinity: `lambda_inf + lambda2/z^2 = 0`.
pub fn laurent_seed(dc: &DerivedConstants) -> Complex64 {
    let z = (-dc.lambda2 / dc.lambda_inf).sqrt();
    if z.re < 0.0 {
        -z
    } else {
        z
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOutcome {
    pub root: Complex64,
    pub residual: f64,
    pub derivative: Complex64,
    pub iterations: usize,
}

fn cut_distance(z: Complex64) -> f64 {
    if z.re.abs() <= 1.0 {
        z.im.abs()
    } else {
        Complex64::new(z.re.abs() - 1.0, z.im).norm()
    }
}

/// Newton iteration on `lambda` with the analytic derivative.
pub fn newton(dc: &DerivedConstants, seed: Complex64) -> Result<NewtonOutcome> {
    let mut z = seed;
    let mut trail = Vec::new();
    let fail = |trail: Vec<Complex64>, iterations| Error::RootNotFound { iterations, trail };
    let mut settled = 0;
    for it in 0..NEWTON_MAX_ITER {
        trail.push(z);
        if cut_distance(z) < CUT_CLEARANCE || !(z.norm() < 1e8) {
            return Err(fail(trail, it));
        }
        let f = lambda(z, dc)?;
        let d = lambda_prime(z, dc)?;
        if d.norm() == 0.0 || !d.re.is_finite() {
            return Err(fail(trail, it));
        }
        let mut step = f / d;
        let cap = z.norm().max(1.0);
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        z -= step;
        if step.norm() <= 1e-14 * z.norm().max(1.0) {
            settled += 1;
            if settled == 2 {
                break;
            }
        }
    }
    if cut_distance(z) < CUT_CLEARANCE {
        return Err(fail(trail, NEWTON_MAX_ITER));
    }
    let residual = lambda(z, dc)?.norm();
    if settled == 0 || residual >= ZERO_RESIDUAL {
        trail.push(z);
        let n = trail.len();
        return Err(fail(trail, n));
    }
    if z.re < 0.0 {
        z = -z;
    }
    Ok(NewtonOutcome {
        root: z,
        residual,
        derivative: lambda_prime(z, dc)?,
        iterations: trail.len(),
    })
}

/// Point of the cut plane for a point of the strip `|Im l| < pi`, inverse of
/// `l = ln((z-1)/(z+1))`.
fn from_strip(l: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if l.re <= 0.0 {
        let e = l.exp();
        (one + e) / (one - e)
    } else {
        let e = (-l).exp();
        (e + one) / (e - one)
    }
}

/// Newton iteration in the variable `l = ln((z-1)/(z+1))`. Zeros squeezed
/// against a branch point are well separated from it in this variable.
fn newton_strip(dc: &DerivedConstants, seed: Complex64) -> Result<NewtonOutcome> {
    let mut l = seed;
    let mut trail = Vec::new();
    let mut settled = 0;
    for _ in 0..NEWTON_MAX_ITER {
        let z = from_strip(l);
        trail.push(z);
        if cut_distance(z) < CUT_CLEARANCE || !(z.norm() < 1e8) {
            break;
        }
        let f = lambda(z, dc)?;
        let d = lambda_prime(z, dc)? * (z * z - 1.0) * 0.5;
        if d.norm() == 0.0 || !d.re.is_finite() {
            break;
        }
        let mut step = f / d;
        if step.norm() > 2.0 {
            step *= 2.0 / step.norm();
        }
        l -= step;
        if l.im.abs() >= PI {
            break;
        }
        // settle in z: near a branch point l carries far more roundoff than z
        let dz = step * (z * z - 1.0) * 0.5;
        if dz.norm() <= 1e-14 * z.norm().max(1.0) {
            settled += 1;
            if settled == 2 {
                break;
            }
        }
    }
    let z = from_strip(l);
    if settled > 0 && l.im.abs() < PI && cut_distance(z) >= CUT_CLEARANCE {
        let residual = lambda(z, dc)?.norm();
        if residual < ZERO_RESIDUAL {
            let z = if z.re < 0.0 { -z } else { z };
            return Ok(NewtonOutcome {
                root: z,
                residual,
                derivative: lambda_prime(z, dc)?,
                iterations: trail.len(),
            });
        }
    }
    let n = trail.len();
    Err(Error::RootNotFound {
        iterations: n,
        trail,
    })
}

fn strip_seeds() -> Vec<Complex64> {
    let mut seeds = Vec::with_capacity(140);
    for &x in &[-20.0, -12.0, -7.0, -4.0, -2.0, -1.0, -0.4, 0.4, 1.0, 2.0, 4.0, 7.0, 12.0, 20.0] {
        for &y in &[0.1, 0.5, 1.5, 2.5, 3.0] {
            seeds.push(Complex64::new(x, y));
            seeds.push(Complex64::new(x, -y));
        }
    }
    seeds
}

/// Newton from each `z`-plane seed, then from each strip seed.
fn all_attempts(dc: &DerivedConstants) -> impl Iterator<Item = Result<NewtonOutcome>> + '_ {
    multistart_seeds(dc)
        .into_iter()
        .map(move |s| newton(dc, s))
        .chain(strip_seeds().into_iter().map(move |s| newton_strip(dc, s)))
}

fn multistart_seeds(dc: &DerivedConstants) -> Vec<Complex64> {
    let mut seeds = Vec::with_capacity(26);
    let seed = laurent_seed(dc);
    seeds.push(seed);
    seeds.push(-seed);
    for &radius in &[2.0, 0.6] {
        for j in 0..12 {
            let th = (j as f64 + 0.5) * PI / 6.0;
            seeds.push(Complex64::from_polar(radius, th));
        }
    }
    seeds
}

/// Debye zero with `Re eta0 > 0`: Newton from the Laurent seed, then from
/// rings of fallback seeds in the `z` plane and in the log strip.
pub fn find_eta0(dc: &DerivedConstants) -> Result<NewtonOutcome> {
    let mut first_err = None;
    for attempt in all_attempts(dc) {
        match attempt {
            Ok(out) => return Ok(out),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.unwrap_or(Error::RootNotFound {
        iterations: 0,
        trail: Vec::new(),
    }))
}

/// Every distinct zero reached from the multistart seeds, both signs included.
pub fn multistart_zeros(dc: &DerivedConstants) -> Vec<Complex64> {
    let mut zeros: Vec<Complex64> = Vec::new();
    for attempt in all_attempts(dc) {
        if let Ok(out) = attempt {
            for z in [out.root, -out.root] {
                if !zeros.iter().any(|w| (w - z).norm() < 1e-8 * z.norm().max(1.0)) {
                    zeros.push(z);
                }
            }
        }
    }
    zeros
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub kappa: i32,
    pub zero_count: i32,
    pub eta0: Option<Complex64>,
    /// `lambda'(eta0)`, present with `eta0`.
    pub eta0_derivative: Option<Complex64>,
    /// `|lambda(eta0)|`, zero when there is no zero.
    pub residual: f64,
    pub region: Region,
    pub winding: WindingReport,
}

/// Winding index, region, and the Debye zero when there is one.
pub fn analyze(dc: &DerivedConstants) -> Result<SpectrumResult> {
    analyze_with_density(dc, DEFAULT_WINDING_DENSITY)
}

pub fn analyze_with_density(dc: &DerivedConstants, density: usize) -> Result<SpectrumResult> {
    let w = winding(dc, density)?;
    let mut out = SpectrumResult {
        kappa: w.kappa,
        zero_count: 2 * w.kappa,
        eta0: None,
        eta0_derivative: None,
        residual: 0.0,
        region: Region::NearL,
        winding: w,
    };
    if w.near_l() {
        return Ok(out);
    }
    if w.kappa <= 0 {
        out.region = Region::DMinus;
        return Ok(out);
    }
    match find_eta0(dc) {
        Ok(z) => {
            out.eta0 = Some(z.root);
            out.eta0_derivative = Some(z.derivative);
            out.residual = z.residual;
            out.region = Region::DPlus;
        }
        // a zero count without a locatable zero means it is merging into the cut
        Err(_) => out.region = Region::NearL,
    }
    Ok(out)
}

/// The `g` decomposition of `G = (g1 + i g2) / g` at one `mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GParts {
    pub g: f64,
    pub g1: f64,
    pub g2: f64,
}

fn jump_arc(mu: f64) -> f64 {
    PI * mu / 2.0
}

/// `g`, `g1`, `g2` from the products of `P+-` and `Q+-`.
pub fn g_parts(mu: f64, omega: f64, eps: f64) -> Result<GParts> {
    let l0 = lambda0(mu)?;
    let s = jump_arc(mu);
    let a = eps * eps - 3.0 * mu * mu;
    let pp = omega * omega - l0 * a + eps * omega * s;
    let pm = omega * omega - l0 * a - eps * omega * s;
    let qp = eps * omega * (1.0 + l0) + s * a;
    let qm = eps * omega * (1.0 + l0) - s * a;
    Ok(GParts {
        g: pp * pp + qp * qp,
        g1: pp * pm + qp * qm,
        g2: pp * qm - pm * qp,
    })
}

/// Root of `lambda0` in `(0, 1)`, the lower end of the curve parameter.
pub fn mu_star() -> f64 {
    let (mut lo, mut hi) = (0.5f64, 0.99f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if lambda0(mid).unwrap_or(f64::NAN) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveLPoint {
    pub mu: f64,
    pub omega: f64,
    pub eps: f64,
}

impl CurveLPoint {
    pub fn residuals(&self) -> Result<GParts> {
        g_parts(self.mu, self.omega, self.eps)
    }
}

/// Point of `L` at curve parameter `mu`.
pub fn curve_l_point(mu: f64) -> Result<CurveLPoint> {
    let lo = mu_star();
    if !(mu > lo && mu < 1.0) {
        return Err(Error::Parameter {
            field: "mu",
            value: mu,
            requirement: "mu_star < mu < 1",
        });
    }
    let l0 = lambda0(mu)?;
    let s = jump_arc(mu);
    let den = l0 * (s * s + (1.0 + l0) * (1.0 + l0));
    let l2 = -3.0 * mu * mu * s * s / den;
    let r = s * s + l0 * (1.0 + l0);
    let l1 = -3.0 * mu * mu * r * r / den;
    Ok(CurveLPoint {
        mu,
        omega: l1.sqrt(),
        eps: l2.sqrt(),
    })
}

/// Unit normal of `L` in the `(omega, eps)` plane at parameter `mu`, oriented
/// from the region with the Debye mode towards the region without it.
pub fn curve_l_normal(mu: f64) -> Result<(f64, f64)> {
    let h = 1e-6 * (1.0 - mu).min(mu - mu_star()).min(1.0);
    let a = curve_l_point(mu - h)?;
    let b = curve_l_point(mu + h)?;
    let (tx, ty) = (b.omega - a.omega, b.eps - a.eps);
    let n = tx.hypot(ty);
    Ok((-ty / n, tx / n))
}

pub fn trace_curve_l(mu_samples: &[f64]) -> Result<Vec<CurveLPoint>> {
    mu_samples.iter().map(|&mu| curve_l_point(mu)).collect()
}

/// `n` curve parameters spread over the open interval `(mu_star, 1)`.
pub fn curve_l_samples(n: usize) -> Vec<f64> {
    let lo = mu_star();
    (0..n)
        .map(|j| lo + (1.0 - lo) * (j as f64 + 0.5) / n as f64)
        .collect()
}

/// Convenience: region of `(omega, eps)` at a fixed `k`.
pub fn classify(omega: f64, eps: f64, k: f64) -> Result<Region> {
    let dc = derive(&PlasmaParams::new(omega, eps, k, 0.0)?)?;
    Ok(analyze(&dc)?.region)
}
