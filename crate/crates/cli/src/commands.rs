use plasmode_core::absorption::{compute_absorption, j1_series, AbsorptionResult, AGREEMENT_TOL};
use plasmode_core::solution::{solve, SolutionCoefficients};
use plasmode_core::specfun::{lambda, lambda_boundary, lambda_prime};
use plasmode_core::spectrum::{analyze_with_density, curve_l_samples, multistart_zeros, trace_curve_l};
use plasmode_core::{derive, Complex64, Error, PlasmaParams, Tolerances};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::output::{num, write_csv, write_json, write_text, Meta};

fn par_map<T: Sync, R: Send>(jobs: &JobsArg, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> CliResult<Vec<R>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.jobs as usize)
        .build()
        .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    Ok(pool.install(|| items.par_iter().map(f).collect()))
}

fn complex(z: Complex64) -> [String; 2] {
    [num(z.re), num(z.im)]
}

/// Midpoints of `n` equal cells of (-1, 1), without 0.
fn cell_midpoints(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| -1.0 + (2 * j + 1) as f64 / n as f64)
        .filter(|&mu| mu != 0.0)
        .collect()
}

fn positive(name: &str, n: usize, min: usize) -> CliResult<()> {
    if n >= min {
        Ok(())
    } else {
        Err(CliError::Parameter(format!("--{name} must be at least {min}")))
    }
}

fn solved(p: &PlasmaParams, tol: Tolerances) -> CliResult<SolutionCoefficients> {
    Ok(solve(p, tol)?)
}

pub fn dispersion(a: &DispersionArgs) -> CliResult<()> {
    let p = a.params.resolve(Some(0.0), None)?;
    let dc = derive(&p)?;
    let meta = Meta::new("dispersion", &a.out).params(&p);
    if a.z.is_empty() {
        positive("mu-grid", a.mu_grid, 1)?;
        let mut rows = Vec::new();
        for j in 0..a.mu_grid {
            let mu = -1.0 + (2 * j + 1) as f64 / a.mu_grid as f64;
            let principal = lambda(Complex64::new(mu, 0.0), &dc)?;
            let (plus, minus) = lambda_boundary(mu, &dc)?;
            let mut r = vec![num(mu)];
            for z in [principal, plus, minus] {
                r.extend(complex(z));
            }
            rows.push(r);
        }
        let cols = [
            "mu", "re_lambda", "im_lambda", "re_lambda_plus", "im_lambda_plus", "re_lambda_minus", "im_lambda_minus",
        ];
        write_csv(&a.out, &meta, &cols, &rows)
    } else {
        let mut rows = Vec::new();
        for &(re, im) in &a.z {
            let z = Complex64::new(re, im);
            let mut r = vec![num(re), num(im)];
            r.extend(complex(lambda(z, &dc)?));
            r.extend(complex(lambda_prime(z, &dc)?));
            rows.push(r);
        }
        let cols = ["re_z", "im_z", "re_lambda", "im_lambda", "re_lambda_prime", "im_lambda_prime"];
        write_csv(&a.out, &meta, &cols, &rows)
    }
}

#[derive(Serialize)]
struct SpectrumReport {
    kappa: i32,
    #[serde(rename = "N")]
    n: i32,
    multistart_zero_count: usize,
    eta0_re: Option<f64>,
    eta0_im: Option<f64>,
    lambda_prime_re: Option<f64>,
    lambda_prime_im: Option<f64>,
    residual: f64,
    region: &'static str,
    winding_turns: f64,
    winding_closure_error: f64,
    winding_min_distance: f64,
    winding_samples: usize,
}

pub fn spectrum(a: &SpectrumArgs) -> CliResult<()> {
    positive("density", a.density, 4)?;
    let p = a.params.resolve(Some(0.0), None)?;
    let dc = derive(&p)?;
    let s = analyze_with_density(&dc, a.density)?;
    let report = SpectrumReport {
        kappa: s.kappa,
        n: s.zero_count,
        multistart_zero_count: multistart_zeros(&dc).len(),
        eta0_re: s.eta0.map(|z| z.re),
        eta0_im: s.eta0.map(|z| z.im),
        lambda_prime_re: s.eta0_derivative.map(|z| z.re),
        lambda_prime_im: s.eta0_derivative.map(|z| z.im),
        residual: s.residual,
        region: s.region.as_str(),
        winding_turns: s.winding.turns,
        winding_closure_error: s.winding.closure_error,
        winding_min_distance: s.winding.min_distance,
        winding_samples: s.winding.samples,
    };
    write_json(&a.out, &Meta::new("spectrum", &a.out).params(&p), &report)
}

pub fn boundary_curve(a: &BoundaryCurveArgs) -> CliResult<()> {
    positive("samples", a.samples, 2)?;
    let points = trace_curve_l(&curve_l_samples(a.samples))?;
    let mut rows = Vec::with_capacity(points.len());
    for pt in &points {
        let r = pt.residuals()?;
        rows.push(vec![num(pt.mu), num(pt.omega), num(pt.eps), num(r.g1), num(r.g2)]);
    }
    let meta = Meta::new("boundary-curve", &a.out);
    write_csv(&a.out, &meta, &["mu", "Omega", "eps", "g1", "g2"], &rows)
}

pub fn field(a: &FieldArgs) -> CliResult<()> {
    positive("points", a.points, 2)?;
    let p = a.params.resolve(None, None)?;
    let tol = a.tol.resolve()?;
    let s = solved(&p, tol)?;
    let xs: Vec<f64> = (0..a.points)
        .map(|i| -1.0 + 2.0 * i as f64 / (a.points - 1) as f64)
        .collect();
    let values = par_map(&a.jobs, &xs, |&x| s.field_at(x))?;
    let mut rows = Vec::with_capacity(xs.len());
    for (x, e) in xs.iter().zip(values) {
        let e = e?;
        let mut r = vec![num(*x)];
        r.extend(complex(e));
        rows.push(r);
    }
    let meta = Meta::new("field", &a.out).params(&p).tolerances(&tol);
    write_csv(&a.out, &meta, &["x", "re_e", "im_e"], &rows)
}

pub fn distribution(a: &DistributionArgs) -> CliResult<()> {
    positive("mu-grid", a.mu_grid, 1)?;
    let p = a.params.resolve(None, None)?;
    let tol = a.tol.resolve()?;
    let s = solved(&p, tol)?;
    let mus = cell_midpoints(a.mu_grid);
    let values = par_map(&a.jobs, &mus, |&mu| s.boundary_distribution(mu))?;
    let mut rows = Vec::with_capacity(mus.len());
    for (mu, h) in mus.iter().zip(values) {
        let mut r = vec![num(*mu)];
        r.extend(complex(h?));
        rows.push(r);
    }
    let meta = Meta::new("distribution", &a.out).params(&p).tolerances(&tol);
    write_csv(&a.out, &meta, &["mu", "re_h", "im_h"], &rows)
}

/// Axis, range and step count of an `absorb` sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub fixed: PlasmaParams,
}

impl SweepSpec {
    pub fn from_args(a: &AbsorbArgs) -> CliResult<Self> {
        let shorthand = a.omega_min.is_some() || a.omega_max.is_some() || a.omega_steps.is_some();
        if shorthand && a.axis != Axis::Omega {
            return Err(CliError::Parameter("--omega-min/--omega-max/--omega-steps sweep omega; drop --axis".into()));
        }
        let min = a.omega_min.or(a.min);
        let max = a.omega_max.or(a.max);
        let steps = a.omega_steps.or(a.steps);
        let (Some(min), Some(max), Some(steps)) = (min, max, steps) else {
            return Err(CliError::Parameter("a sweep needs --min, --max and --steps".into()));
        };
        if !(min < max) || steps < 2 {
            return Err(CliError::Parameter(format!(
                "sweep needs min < max and steps >= 2 (got {min}, {max}, {steps})"
            )));
        }
        let fixed = a.params.resolve(None, Some(a.axis))?;
        let spec = SweepSpec {
            axis: a.axis,
            min,
            max,
            steps,
            fixed,
        };
        for v in [min, max] {
            spec.at(v).validate()?;
        }
        Ok(spec)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }

    pub fn at(&self, v: f64) -> PlasmaParams {
        let mut p = self.fixed;
        self.axis.set(&mut p, v);
        p
    }

    fn describe(&self) -> String {
        format!("{} from {} to {} in {} steps", self.axis.key(), self.min, self.max, self.steps)
    }
}

#[derive(Debug, Serialize)]
struct AbsorbRow {
    value: f64,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
    q0: Option<f64>,
    agreement: Option<f64>,
    q1_closed: Option<[f64; 2]>,
    q1_quadrature: Option<[f64; 2]>,
    q1_spatial: Option<[f64; 2]>,
}

fn absorb_point(p: &PlasmaParams, tol: Tolerances) -> Result<AbsorptionResult, Error> {
    compute_absorption(&solve(p, tol)?)
}

fn absorb_row(value: f64, r: Result<AbsorptionResult, Error>) -> AbsorbRow {
    let pair = |z: Complex64| [z.re, z.im];
    match r {
        Ok(a) => AbsorbRow {
            value,
            status: if !a.q0_nonnegative() {
                "q0_negative"
            } else if a.agreement >= AGREEMENT_TOL {
                "disagree"
            } else {
                "ok"
            },
            message: None,
            q0: Some(a.q0),
            agreement: Some(a.agreement),
            q1_closed: Some(pair(a.q1_closed)),
            q1_quadrature: Some(pair(a.q1_quadrature)),
            q1_spatial: a.q1_spatial.map(pair),
        },
        Err(e) => AbsorbRow {
            value,
            status: match e {
                Error::NearBoundaryCurve { .. } => "near_l",
                _ => "error",
            },
            message: Some(e.to_string()),
            q0: None,
            agreement: None,
            q1_closed: None,
            q1_quadrature: None,
            q1_spatial: None,
        },
    }
}

#[derive(Serialize)]
struct AbsorbDocument<'a> {
    axis: &'static str,
    rows: &'a [AbsorbRow],
}

pub fn absorb(a: &AbsorbArgs) -> CliResult<()> {
    let spec = SweepSpec::from_args(a)?;
    let tol = a.tol.resolve()?;
    let values = spec.values();
    let rows = par_map(&a.jobs, &values, |&v| absorb_row(v, absorb_point(&spec.at(v), tol)))?;
    let meta = Meta::new("absorb", &a.out)
        .params(&spec.fixed)
        .swept(spec.axis.key())
        .sweep(spec.describe())
        .tolerances(&tol);
    match a.format {
        Format::Json => write_json(
            &a.out,
            &meta,
            &AbsorbDocument {
                axis: spec.axis.key(),
                rows: &rows,
            },
        ),
        Format::Csv => {
            let mut cols = vec![spec.axis.column(), "Q0", "agreement", "status"];
            if a.all_routes {
                cols.extend([
                    "re_q1_closed",
                    "im_q1_closed",
                    "re_q1_quadrature",
                    "im_q1_quadrature",
                    "re_q1_spatial",
                    "im_q1_spatial",
                ]);
            }
            let opt = |x: Option<f64>| x.map_or_else(|| "NaN".to_string(), num);
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut line = vec![num(r.value), opt(r.q0), opt(r.agreement), r.status.to_string()];
                    if a.all_routes {
                        for z in [r.q1_closed, r.q1_quadrature, r.q1_spatial] {
                            line.push(opt(z.map(|z| z[0])));
                            line.push(opt(z.map(|z| z[1])));
                        }
                    }
                    line
                })
                .collect();
            write_csv(&a.out, &meta, &cols, &table)
        }
    }
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

fn below(name: &'static str, value: f64, limit: f64) -> Check {
    Check {
        name,
        value,
        limit,
        pass: value < limit,
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Every invariant the solver can check about itself at one parameter point.
pub fn checks(p: &PlasmaParams, tol: Tolerances) -> CliResult<Vec<Check>> {
    let s = solved(p, tol)?;
    let dc = &s.dc;
    let mut out = Vec::new();
    out.push(Check {
        name: "zero count equals twice the winding index",
        value: multistart_zeros(dc).len() as f64,
        limit: s.spectrum.zero_count as f64,
        pass: multistart_zeros(dc).len() as i32 == s.spectrum.zero_count,
    });
    if let Some(z) = s.spectrum.eta0 {
        out.push(below("|lambda(eta0)|", lambda(z, dc)?.norm(), 1e-12));
    }
    out.push(below("Drude amplitude |E_inf lambda_inf - lambda1|", (s.e_inf * dc.lambda_inf - dc.lambda1).norm(), 1e-14));
    let profile = s.field_profile(41)?;
    out.push(below("field at the walls |e(+-1) - 1|", profile.boundary_residual, 1e-6));
    out.push(below("field symmetry max |e(x) - e(-x)|", profile.symmetry_residual, 1e-8));
    let d = s.diagnostics()?;
    out.push(below("pole coefficient of M at eta0", d.pole_residual, 1e-10));
    out.push(below("field condition from residue forms", d.field_condition_residual, 1e-6));
    out.push(below("J1 residue vs quadrature (relative)", rel(d.j1.closed, d.j1.quadrature), 1e-7));
    out.push(below("J2 residue vs quadrature (relative)", rel(d.j2.closed, d.j2.quadrature), 1e-7));
    out.push(below("non-flow |int mu h(-1,mu)|", d.nonflow.norm(), 1e-6));
    out.push(below("accommodation moment equation", d.moment_residual, 1e-8));
    out.push(below("wall asymmetry linear-fit residual", d.proportionality.max_residual, 1e-5));
    out.push(below("wall asymmetry coefficients vs A_tilde", d.proportionality.coefficient_error(s.a1_tilde), 1e-5));
    let (series, _) = j1_series(&s)?;
    let a = compute_absorption(&s)?;
    out.push(below("J1 (tanh) series vs quadrature (relative)", rel(series, a.j1_quadrature), 1e-7));
    out.push(below("Q1 three-route agreement", a.agreement, AGREEMENT_TOL));
    out.push(Check {
        name: "Q0 non-negative",
        value: a.q0,
        limit: 0.0,
        pass: a.q0 >= 0.0,
    });
    Ok(out)
}

pub fn verify(a: &VerifyArgs) -> CliResult<()> {
    let p = a.params.resolve(None, None)?;
    let tol = a.tol.resolve()?;
    let list = checks(&p, tol)?;
    let region = solved(&p, tol)?.region();
    let mut lines = vec![format!("region {}", region.as_str())];
    let mut failed = 0;
    for c in &list {
        if !c.pass {
            failed += 1;
        }
        lines.push(format!(
            "{} {}: {} (limit {})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            num(c.value),
            num(c.limit)
        ));
    }
    lines.push(format!("{} of {} checks passed", list.len() - failed, list.len()));
    write_text(&a.out, &Meta::new("verify", &a.out).params(&p).tolerances(&tol), &lines)?;
    if failed > 0 {
        Err(CliError::Verification(failed))
    } else {
        Ok(())
    }
}
