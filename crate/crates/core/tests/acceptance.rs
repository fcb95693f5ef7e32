//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! failure status if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use plasmode_core::absorption::{compute_absorption, j1_quadrature, j1_series};
use plasmode_core::quadrature::{integrate, QuadratureOptions};
use plasmode_core::solution::{compute_e0, solve, Tolerances};
use plasmode_core::specfun::{lambda, lambda_boundary, lambda_prime, t, t0};
use plasmode_core::spectrum::{
    analyze, analyze_with_density, curve_l_normal, curve_l_point, curve_l_samples, multistart_zeros,
    trace_curve_l, Region,
};
use plasmode_core::{derive, Complex64, DerivedConstants, PlasmaParams, Result};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const DISPERSION_ORACLE_TOL: f64 = 1e-9;
const DISPERSION_ORACLE_TIME: Duration = Duration::from_secs(5);
const IDENTITY_TOL: f64 = 1e-12;
const ZERO_RESIDUAL_TOL: f64 = 1e-12;
const CURVE_RESIDUAL_TOL: f64 = 1e-9;
const FIELD_BOUNDARY_TOL: f64 = 1e-6;
const FIELD_SYMMETRY_TOL: f64 = 1e-8;
const NONFLOW_TOL: f64 = 1e-6;
const PROPORTIONALITY_TOL: f64 = 1e-5;
const MOMENT_TOL: f64 = 1e-8;
const CLOSURE_TIME: Duration = Duration::from_secs(30);
const RESIDUE_TOL: f64 = 1e-7;
const ROUTE_TOL: f64 = 1e-6;
const GRID_TIME: Duration = Duration::from_secs(300);
const SPECULAR_RATIO_DRIFT: f64 = 0.01;
const SPECULAR_SYMMETRY_TOL: f64 = 1e-6;
const LAURENT_TOL: f64 = 1e-4;
const DERIVATIVE_TOL: f64 = 1e-6;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn p1() -> PlasmaParams {
    PlasmaParams::new(0.5, 0.2, 5.0, 0.5).unwrap()
}

fn dc_of(omega: f64, eps: f64, k: f64) -> DerivedConstants {
    derive(&PlasmaParams::new(omega, eps, k, 0.5).unwrap()).unwrap()
}

fn grid() -> Vec<(f64, f64)> {
    let lin = |a: f64, b: f64, i: usize| a + (b - a) * i as f64 / 4.0;
    (0..5)
        .flat_map(|i| (0..5).map(move |j| (lin(0.3, 1.5, i), lin(0.05, 0.5, j))))
        .collect()
}

fn random_off_cut(rng: &mut StdRng) -> Complex64 {
    let im: f64 = rng.gen_range(0.05..3.0);
    Complex64::new(rng.gen_range(-3.0..3.0), if rng.gen::<bool>() { im } else { -im })
}

fn dispersion_oracle() -> Result<Outcome> {
    let start = Instant::now();
    let dc = derive(&p1())?;
    let opts = QuadratureOptions::with_tol(1e-13);
    let mut rng = StdRng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let z = random_off_cut(&mut rng);
        let q = integrate(|mu| (mu * z - dc.eta1_sq) / (mu - z), -1.0, 1.0, &opts)?;
        let direct = 1.0 - z / (2.0 * dc.c) * q.value;
        worst = worst.max(rel(lambda(z, &dc)?, direct));
    }
    let took = start.elapsed();
    outcome(
        worst < DISPERSION_ORACLE_TOL && took < DISPERSION_ORACLE_TIME,
        format!("max rel err {worst:.2e} (< {DISPERSION_ORACLE_TOL:.0e}), {took:.2?}"),
    )
}

fn identity_suite() -> Result<Outcome> {
    let dc = derive(&p1())?;
    let one = Complex64::new(1.0, 0.0);
    let inf = rel(dc.lambda_inf, dc.lambda1 + one / (3.0 * dc.c));
    let mut rng = StdRng::seed_from_u64(2);
    let mut ltt: f64 = 0.0;
    for _ in 0..100 {
        let z = random_off_cut(&mut rng);
        let lhs = lambda(z, &dc)? + t(z, &dc)?;
        ltt = ltt.max(rel(lhs, one + 2.0 * z * t0(-z, &dc)?));
    }
    let tj = rel(t(dc.eta1, &dc)? - t(-dc.eta1, &dc)?, dc.eta1 / dc.c);
    let mut sym: f64 = 0.0;
    for i in 1..100 {
        let mu = -0.99 + 1.98 * i as f64 / 100.0;
        let (_, minus) = lambda_boundary(mu, &dc)?;
        let (plus_neg, _) = lambda_boundary(-mu, &dc)?;
        sym = sym.max(rel(plus_neg, minus));
    }
    let worst = inf.max(ltt).max(tj).max(sym);
    outcome(
        worst < IDENTITY_TOL,
        format!("lambda_inf {inf:.1e}, lambda+T {ltt:.1e}, T jump {tj:.1e}, boundary symmetry {sym:.1e} (< {IDENTITY_TOL:.0e})"),
    )
}

fn spectrum_consistency() -> Result<Outcome> {
    let mut mismatches = 0;
    let mut unstable = 0;
    let mut worst: f64 = 0.0;
    for (omega, eps) in grid() {
        let dc = dc_of(omega, eps, 5.0);
        let base = analyze(&dc)?;
        let doubled = analyze_with_density(&dc, 128)?;
        if base.kappa != doubled.kappa {
            unstable += 1;
        }
        let zeros = multistart_zeros(&dc);
        if zeros.len() as i32 != base.zero_count {
            mismatches += 1;
        }
        for z in zeros {
            worst = worst.max(lambda(z, &dc)?.norm());
        }
        if let Some(z) = base.eta0 {
            worst = worst.max(lambda(z, &dc)?.norm());
        }
    }
    outcome(
        mismatches == 0 && unstable == 0 && worst < ZERO_RESIDUAL_TOL,
        format!("25 points: {mismatches} count mismatches, {unstable} unstable indices, max |lambda(eta0)| {worst:.1e}"),
    )
}

fn curve_l() -> Result<Outcome> {
    let points = trace_curve_l(&curve_l_samples(200))?;
    let mut worst: f64 = 0.0;
    for p in &points {
        let r = p.residuals()?;
        worst = worst.max(r.g1.abs()).max(r.g2.abs());
    }
    let mut flips = 0;
    for mu in [0.86, 0.9, 0.94, 0.97, 0.99] {
        let p = curve_l_point(mu)?;
        let (nx, ny) = curve_l_normal(mu)?;
        let step = 0.03 * p.omega.hypot(p.eps);
        let inside = analyze(&dc_of(p.omega - step * nx, p.eps - step * ny, 3.0))?;
        let outside = analyze(&dc_of(p.omega + step * nx, p.eps + step * ny, 3.0))?;
        if (inside.kappa, outside.kappa) == (1, 0) {
            flips += 1;
        }
    }
    outcome(
        points.len() == 200 && worst < CURVE_RESIDUAL_TOL && flips == 5,
        format!("{} points, max |g1|,|g2| {worst:.1e}; index flips at {flips}/5 transversals", points.len()),
    )
}

fn closure() -> Result<Outcome> {
    let start = Instant::now();
    let s = solve(&p1(), Tolerances::default())?;
    let profile = s.field_profile(41)?;
    let d = s.diagnostics()?;
    let took = start.elapsed();
    let nonflow = d.nonflow.norm();
    let fit = d.proportionality.max_residual;
    let pass = profile.boundary_residual < FIELD_BOUNDARY_TOL
        && profile.symmetry_residual < FIELD_SYMMETRY_TOL
        && nonflow < NONFLOW_TOL
        && fit < PROPORTIONALITY_TOL
        && d.moment_residual < MOMENT_TOL
        && took < CLOSURE_TIME;
    outcome(
        pass,
        format!(
            "|e(+-1)-1| {:.1e}, symmetry {:.1e}, non-flow {nonflow:.1e}, fit {fit:.1e}, moment {:.1e}, {took:.2?}",
            profile.boundary_residual, profile.symmetry_residual, d.moment_residual
        ),
    )
}

fn residues() -> Result<Outcome> {
    let s = solve(&p1(), Tolerances::default())?;
    let j1 = rel(s.j1_closed()?, s.j1_quadrature()?);
    let j2 = rel(s.j2_closed()?, s.j2_quadrature()?);
    let (series, _) = j1_series(&s)?;
    let j1t = rel(series, j1_quadrature(&s)?);
    outcome(
        j1.max(j2).max(j1t) < RESIDUE_TOL,
        format!("J1 {j1:.1e}, J1 (tanh form) {j1t:.1e}, J2 {j2:.1e} (< {RESIDUE_TOL:.0e})"),
    )
}

fn absorption_grid() -> Result<Outcome> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut negative = 0;
    let mut used = 0;
    for (omega, eps) in grid() {
        let p = PlasmaParams::new(omega, eps, 5.0, 0.5)?;
        let s = solve(&p, Tolerances::default())?;
        if s.region() != Region::DPlus {
            continue;
        }
        used += 1;
        let a = compute_absorption(&s)?;
        worst = worst.max(a.agreement);
        if !a.q0_nonnegative() {
            negative += 1;
        }
    }
    let took = start.elapsed();
    outcome(
        used > 0 && worst < ROUTE_TOL && negative == 0 && took < GRID_TIME,
        format!("{used} D+ points, max route deviation {worst:.1e}, {negative} negative Q0, {took:.2?}"),
    )
}

fn specular_limit() -> Result<Outcome> {
    let mut ratios = Vec::new();
    for alpha in [1e-2, 1e-4, 1e-6] {
        let mut p = p1();
        p.alpha_p = alpha;
        ratios.push(solve(&p, Tolerances::default())?.a1_tilde / alpha);
    }
    let drift = ratios
        .windows(2)
        .map(|w| rel(w[0], w[1]))
        .fold(0.0, f64::max);
    let mut p = p1();
    p.alpha_p = 0.0;
    let s = solve(&p, Tolerances::default())?;
    let d = s.debye.expect("reference point has a Debye mode");
    let a_free = compute_e0(&s.dc, d.eta0, d.lambda_prime, Complex64::new(0.0, 0.0))?;
    let dc = &s.dc;
    let printed = -dc.lambda1 * d.eta0
        / (lambda_prime(d.eta0, dc)? * (d.eta0 * d.eta0 - dc.eta1_sq) * (dc.w0 / d.eta0).cosh());
    let e0_err = rel(a_free.e0, printed).max(rel(d.e0, printed));
    let mut asym: f64 = 0.0;
    for mu in [0.25, 0.5, 0.75] {
        asym = asym.max(s.wall_asymmetry(mu)?.norm());
    }
    outcome(
        drift < SPECULAR_RATIO_DRIFT && s.a1_tilde.norm() == 0.0 && e0_err < 1e-12 && asym < SPECULAR_SYMMETRY_TOL,
        format!("ratio drift {drift:.1e}, E0 vs A-free form {e0_err:.1e}, |h(mu)-h(-mu)| {asym:.1e}"),
    )
}

fn laurent_tail() -> Result<Outcome> {
    let dc = derive(&p1())?;
    let mut tail: f64 = 0.0;
    for k in 0..16 {
        let z = Complex64::from_polar(1e3, 0.1 + k as f64 * PI / 8.0);
        let lead = z * z * (lambda(z, &dc)? - dc.lambda_inf);
        tail = tail.max((lead - dc.lambda2).norm() / dc.lambda2.norm());
    }
    let mut rng = StdRng::seed_from_u64(9);
    let h = 1e-6;
    let mut deriv: f64 = 0.0;
    for _ in 0..20 {
        let z = random_off_cut(&mut rng);
        let fd = (lambda(z + h, &dc)? - lambda(z - h, &dc)?) / (2.0 * h);
        deriv = deriv.max(rel(lambda_prime(z, &dc)?, fd));
    }
    outcome(
        tail < LAURENT_TOL && deriv < DERIVATIVE_TOL,
        format!("Laurent tail {tail:.1e} (< {LAURENT_TOL:.0e}), derivative {deriv:.1e} (< {DERIVATIVE_TOL:.0e})"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 9] = [
        ("dispersion function vs defining integral", dispersion_oracle),
        ("identity suite", identity_suite),
        ("spectrum consistency on the grid", spectrum_consistency),
        ("curve L and index flips", curve_l),
        ("boundary-value closure at P1", closure),
        ("residue forms vs quadrature", residues),
        ("absorption by three routes on the grid", absorption_grid),
        ("specular limit", specular_limit),
        ("Laurent tail and derivative", laurent_tail),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!("{} {}. {name}: {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
