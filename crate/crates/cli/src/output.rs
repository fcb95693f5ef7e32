//! Output files: a `#` metadata header followed by CSV rows, or a JSON
//! document carrying the same metadata under `meta`.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use plasmode_core::{PlasmaParams, Tolerances, CONVENTIONS};
use serde::Serialize;

use crate::args::OutArgs;
use crate::error::CliResult;

/// 17 significant digits, enough to round-trip a double.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub program: String,
    pub command: String,
    pub params: Option<ParamsMeta>,
    pub sweep: Option<String>,
    pub tolerances: Option<TolMeta>,
    pub conventions: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamsMeta {
    pub omega: Option<f64>,
    pub eps: Option<f64>,
    pub k: Option<f64>,
    /// `None` for the swept parameter of a sweep.
    pub alpha_p: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TolMeta {
    pub coeff: f64,
    pub field: f64,
    pub series: f64,
}

impl Meta {
    pub fn new(command: &str, out: &OutArgs) -> Self {
        Meta {
            program: format!("plasmode {}", env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            params: None,
            sweep: None,
            tolerances: None,
            conventions: CONVENTIONS,
            generated: (!out.no_timestamp).then(|| chrono::Utc::now().to_rfc3339()),
        }
    }

    pub fn params(mut self, p: &PlasmaParams) -> Self {
        self.params = Some(ParamsMeta {
            omega: Some(p.omega),
            eps: Some(p.eps),
            k: Some(p.k),
            alpha_p: Some(p.alpha_p),
        });
        self
    }

    /// Marks parameter `key` as varied by a sweep.
    pub fn swept(mut self, key: &str) -> Self {
        if let Some(p) = &mut self.params {
            match key {
                "omega" => p.omega = None,
                "eps" => p.eps = None,
                "k" => p.k = None,
                _ => p.alpha_p = None,
            }
        }
        self
    }

    pub fn tolerances(mut self, t: &Tolerances) -> Self {
        self.tolerances = Some(TolMeta {
            coeff: t.coeff,
            field: t.field,
            series: t.series,
        });
        self
    }

    pub fn sweep(mut self, s: String) -> Self {
        self.sweep = Some(s);
        self
    }

    pub fn comment_lines(&self) -> Vec<String> {
        let mut lines = vec![format!("# {} {}", self.program, self.command)];
        match &self.params {
            Some(p) => {
                let show = |v: Option<f64>| v.map_or_else(|| "swept".to_string(), |v| v.to_string());
                lines.push(format!(
                    "# params: omega={} eps={} k={} alpha_p={}",
                    show(p.omega),
                    show(p.eps),
                    show(p.k),
                    show(p.alpha_p)
                ))
            }
            None => lines.push("# params: none".to_string()),
        }
        if let Some(s) = &self.sweep {
            lines.push(format!("# sweep: {s}"));
        }
        if let Some(t) = &self.tolerances {
            lines.push(format!(
                "# tolerances: coeff={:e} field={:e} series={:e}",
                t.coeff, t.field, t.series
            ));
        }
        lines.push(format!("# conventions: {}", self.conventions));
        if let Some(g) = &self.generated {
            lines.push(format!("# generated: {g}"));
        }
        lines
    }
}

pub fn open(out: &OutArgs) -> CliResult<Box<dyn Write>> {
    Ok(match &out.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

/// Header, column names and rows of already formatted fields.
pub fn write_csv(out: &OutArgs, meta: &Meta, columns: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = open(out)?;
    for line in meta.comment_lines() {
        writeln!(w, "{line}")?;
    }
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(columns)?;
    for r in rows {
        csv.write_record(r)?;
    }
    csv.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    meta: &'a Meta,
    #[serde(flatten)]
    body: &'a T,
}

pub fn write_json<T: Serialize>(out: &OutArgs, meta: &Meta, body: &T) -> CliResult<()> {
    let mut w = open(out)?;
    serde_json::to_writer_pretty(&mut w, &Document { meta, body })?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Plain text report with the comment header.
pub fn write_text(out: &OutArgs, meta: &Meta, lines: &[String]) -> CliResult<()> {
    let mut w = open(out)?;
    for line in meta.comment_lines().iter().chain(lines) {
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

