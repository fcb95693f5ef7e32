use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plasmode_core::{PlasmaParams, Tolerances};

use crate::config;
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "plasmode", version, about = "Plasma oscillations in a degenerate-plasma slab")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dispersion function on the cut or at given complex points (CSV).
    Dispersion(DispersionArgs),
    /// Winding index, zero count and Debye zero (JSON).
    Spectrum(SpectrumArgs),
    /// Points of the curve separating the two parameter regions (CSV).
    BoundaryCurve(BoundaryCurveArgs),
    /// Electric field across the slab (CSV).
    Field(FieldArgs),
    /// Electron distribution at the left wall (CSV).
    Distribution(DistributionArgs),
    /// Absorbed power along a parameter sweep (CSV or JSON).
    Absorb(AbsorbArgs),
    /// Runs every consistency check and reports residuals.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Driving frequency over the plasma frequency.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Collision frequency over the plasma frequency.
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Half-thickness of the slab in Debye-like units.
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Accommodation coefficient of the walls.
    #[arg(long = "alpha-p", allow_negative_numbers = true)]
    pub alpha_p: Option<f64>,
    /// Flat `key = value` file with omega, eps, k, alpha_p; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// The parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Omega,
    Eps,
    K,
    #[value(name = "alpha-p")]
    AlphaP,
}

impl Axis {
    pub fn key(&self) -> &'static str {
        match self {
            Axis::Omega => "omega",
            Axis::Eps => "eps",
            Axis::K => "k",
            Axis::AlphaP => "alpha_p",
        }
    }

    pub fn column(&self) -> &'static str {
        match self {
            Axis::Omega => "Omega",
            Axis::Eps => "eps",
            Axis::K => "k",
            Axis::AlphaP => "alpha_p",
        }
    }

    pub fn set(&self, p: &mut PlasmaParams, v: f64) {
        match self {
            Axis::Omega => p.omega = v,
            Axis::Eps => p.eps = v,
            Axis::K => p.k = v,
            Axis::AlphaP => p.alpha_p = v,
        }
    }
}

impl ParamArgs {
    /// Merges the config file and the flags. A missing `alpha_p` falls back to
    /// `default_alpha` when given; `free` names an axis filled in later.
    pub fn resolve(&self, default_alpha: Option<f64>, free: Option<Axis>) -> CliResult<PlasmaParams> {
        let mut values = match &self.config {
            Some(path) => config::load(path)?,
            None => Default::default(),
        };
        for (key, v) in [
            ("omega", self.omega),
            ("eps", self.eps),
            ("k", self.k),
            ("alpha_p", self.alpha_p),
        ] {
            if let Some(v) = v {
                values.insert(key.to_string(), v);
            }
        }
        if let Some(a) = default_alpha {
            values.entry("alpha_p".to_string()).or_insert(a);
        }
        let get = |key: &str| -> CliResult<f64> {
            match free {
                // any valid value; the sweep overwrites it point by point
                Some(Axis::AlphaP) if key == "alpha_p" => Ok(0.5),
                Some(axis) if axis.key() == key => Ok(1.0),
                _ => values.get(key).copied().ok_or_else(|| {
                    CliError::Parameter(format!(
                        "missing --{} (or {key} in the config file)",
                        key.replace('_', "-")
                    ))
                }),
            }
        };
        Ok(PlasmaParams::new(get("omega")?, get("eps")?, get("k")?, get("alpha_p")?)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct TolArgs {
    /// Tolerance of coefficient integrals.
    #[arg(long, env = "PLASMODE_TOL_COEFF", default_value_t = 1e-10)]
    pub tol_coeff: f64,
    /// Tolerance of field and distribution reconstruction.
    #[arg(long, env = "PLASMODE_TOL_FIELD", default_value_t = 1e-8)]
    pub tol_field: f64,
    /// Truncation tolerance of the residue series.
    #[arg(long, env = "PLASMODE_TOL_SERIES", default_value_t = 1e-15)]
    pub tol_series: f64,
}

impl TolArgs {
    pub fn resolve(&self) -> CliResult<Tolerances> {
        for (name, v) in [
            ("tol-coeff", self.tol_coeff),
            ("tol-field", self.tol_field),
            ("tol-series", self.tol_series),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(CliError::Parameter(format!("--{name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(Tolerances {
            coeff: self.tol_coeff,
            field: self.tol_field,
            series: self.tol_series,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Leave the generation time out of the header.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Args)]
pub struct JobsArg {
    /// Worker threads; rows keep their input order.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
}

#[derive(Debug, Args)]
pub struct DispersionArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub out: OutArgs,
    /// Number of cell midpoints of (-1, 1) at which to tabulate the boundary values.
    #[arg(long, default_value_t = 100)]
    pub mu_grid: usize,
    /// Complex points `re,im` off the cut; replaces the grid.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Vec<(f64, f64)>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub out: OutArgs,
    /// Starting samples per turn of the winding tracker.
    #[arg(long, default_value_t = 64)]
    pub density: usize,
}

#[derive(Debug, Args)]
pub struct BoundaryCurveArgs {
    #[command(flatten)]
    pub out: OutArgs,
    /// Number of points along the curve.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
    #[command(flatten)]
    pub jobs: JobsArg,
    /// Equally spaced points of [-1, 1].
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct DistributionArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
    #[command(flatten)]
    pub jobs: JobsArg,
    /// Number of cell midpoints of (-1, 1); the midpoint 0 of an odd grid is skipped.
    #[arg(long, default_value_t = 100)]
    pub mu_grid: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct AbsorbArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
    #[command(flatten)]
    pub jobs: JobsArg,
    /// Parameter to sweep.
    #[arg(long, value_enum, default_value_t = Axis::Omega)]
    pub axis: Axis,
    /// First value of the swept parameter
    #[arg(long, allow_negative_numbers = true)]
    pub min: Option<f64>,
    /// Last value of the swept parameter
    #[arg(long, allow_negative_numbers = true)]
    pub max: Option<f64>,
    /// Number of evenly spaced values, ends included
    #[arg(long)]
    pub steps: Option<usize>,
    /// Shorthand for `--axis omega --min`.
    #[arg(long, conflicts_with = "min", allow_negative_numbers = true)]
    pub omega_min: Option<f64>,
    /// Shorthand for `--axis omega --max`.
    #[arg(long, conflicts_with = "max", allow_negative_numbers = true)]
    pub omega_max: Option<f64>,
    /// Shorthand for `--axis omega --steps`.
    #[arg(long, conflicts_with = "steps")]
    pub omega_steps: Option<usize>,
    /// Add the three Q1 routes as columns.
    #[arg(long)]
    pub all_routes: bool,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

fn parse_complex(s: &str) -> Result<(f64, f64), String> {
    let (re, im) = s.split_once(',').ok_or("expected re,im")?;
    let re: f64 = re.trim().parse().map_err(|_| format!("bad real part '{re}'"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part '{im}'"))?;
    Ok((re, im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn params(argv: &[&str]) -> ParamArgs {
        let mut full = vec!["plasmode", "spectrum"];
        full.extend_from_slice(argv);
        match Cli::try_parse_from(full).unwrap().command {
            Command::Spectrum(a) => a.params,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn flags_override_config_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "omega = 0.7\neps = 0.3\nk = 4\nalpha_p = 0.25").unwrap();
        let path = f.path().to_str().unwrap().to_string();
        let p = params(&["--config", &path, "--eps", "0.1"]).resolve(None, None).unwrap();
        assert_eq!((p.omega, p.eps, p.k, p.alpha_p), (0.7, 0.1, 4.0, 0.25));
    }

    #[test]
    fn missing_values_are_parameter_errors() {
        let err = params(&["--omega", "0.5", "--eps", "0.2"]).resolve(Some(0.0), None).unwrap_err();
        assert!(err.to_string().contains("--k"), "{err}");
        assert_eq!(err.exit_code(), 1);
        let p = params(&["--omega", "0.5", "--eps", "0.2", "--k", "1"]).resolve(Some(0.0), None).unwrap();
        assert_eq!(p.alpha_p, 0.0);
        let bad = params(&["--config", "/nonexistent/plasmode.conf"]).resolve(None, None).unwrap_err();
        assert_eq!(bad.exit_code(), 1);
    }

    #[test]
    fn tolerances_must_be_fractions() {
        let t = TolArgs {
            tol_coeff: 0.0,
            tol_field: 1e-8,
            tol_series: 1e-15,
        };
        assert_eq!(t.resolve().unwrap_err().exit_code(), 1);
    }
}
