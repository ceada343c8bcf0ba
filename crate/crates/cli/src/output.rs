use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::value::RawValue;

use crate::{CliError, FitReport, Peak, PeakTimeFit, SweepResult, Table1};

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(CliError::Parameter(format!("unknown format `{s}` (csv|json)"))),
        }
    }
}

/// Anything the CLI can print.
pub trait Emit {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()>;
    fn write_json(&self, w: &mut dyn Write) -> std::io::Result<()>;

    fn write_as(&self, format: Format, w: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => self.write_json(w),
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// JSON number with the same digits as the CSV; `null` when absent or non-finite.
#[derive(Debug)]
struct JsonNum(Box<RawValue>);

impl JsonNum {
    fn new(x: Option<f64>) -> Self {
        let text = match x {
            Some(v) if v.is_finite() => num(v),
            _ => "null".to_string(),
        };
        Self(RawValue::from_string(text).expect("formatted float is valid JSON"))
    }
}

impl Serialize for JsonNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

fn jn(x: f64) -> JsonNum {
    JsonNum::new(Some(x))
}

#[derive(Serialize)]
struct JsonPeak {
    t_star: usize,
    p_star: JsonNum,
}

fn json_peak(p: Option<Peak>) -> Option<JsonPeak> {
    p.map(|p| JsonPeak {
        t_star: p.t_star,
        p_star: jn(p.p_star),
    })
}

#[derive(Serialize)]
struct JsonPoint {
    t: usize,
    prob_quantum: JsonNum,
    prob_classical: JsonNum,
    prob_asymptotic: JsonNum,
}

#[derive(Serialize)]
struct JsonSweep {
    n: usize,
    points: Vec<JsonPoint>,
    quantum_peak: Option<JsonPeak>,
    classical_peak: Option<JsonPeak>,
    asymptotic_peak: Option<JsonPeak>,
}

fn finish_json(w: &mut dyn Write, value: &impl Serialize) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)
}

impl Emit for [SweepResult] {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "n,t,prob_quantum,prob_classical,prob_asymptotic")?;
        for r in self {
            for p in &r.points {
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    r.n,
                    p.t,
                    opt(p.quantum),
                    opt(p.classical),
                    opt(p.asymptotic)
                )?;
            }
        }
        Ok(())
    }

    fn write_json(&self, w: &mut dyn Write) -> std::io::Result<()> {
        let sweeps: Vec<JsonSweep> = self
            .iter()
            .map(|r| JsonSweep {
                n: r.n,
                points: r
                    .points
                    .iter()
                    .map(|p| JsonPoint {
                        t: p.t,
                        prob_quantum: JsonNum::new(p.quantum),
                        prob_classical: JsonNum::new(p.classical),
                        prob_asymptotic: JsonNum::new(p.asymptotic),
                    })
                    .collect(),
                quantum_peak: json_peak(r.quantum_peak),
                classical_peak: json_peak(r.classical_peak),
                asymptotic_peak: json_peak(r.asymptotic_peak),
            })
            .collect();
        finish_json(w, &sweeps)
    }
}

impl Emit for Vec<SweepResult> {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        self.as_slice().write_csv(w)
    }
    fn write_json(&self, w: &mut dyn Write) -> std::io::Result<()> {
        self.as_slice().write_json(w)
    }
}

#[derive(Serialize)]
struct JsonPeakTimes {
    proportional: JsonNum,
    max_rel_residual: JsonNum,
    with_log: [JsonNum; 2],
    affine: [JsonNum; 2],
    max_abs_residual_affine: JsonNum,
}

fn json_peak_times(f: &Option<PeakTimeFit>) -> Option<JsonPeakTimes> {
    f.as_ref().map(|f| JsonPeakTimes {
        proportional: jn(f.proportional),
        max_rel_residual: jn(f.max_rel_residual),
        with_log: [jn(f.with_log.0), jn(f.with_log.1)],
        affine: [jn(f.affine.0), jn(f.affine.1)],
        max_abs_residual_affine: jn(f.max_abs_residual_affine),
    })
}

#[derive(Serialize)]
struct JsonResidual {
    n: usize,
    residual: JsonNum,
}

fn json_residuals(r: &[(usize, f64)]) -> Vec<JsonResidual> {
    r.iter()
        .map(|&(n, v)| JsonResidual {
            n,
            residual: jn(v),
        })
        .collect()
}

#[derive(Serialize)]
struct JsonFit {
    slope_quantum: JsonNum,
    slope_classical: JsonNum,
    ratio: JsonNum,
    window: [usize; 2],
    window_frac: JsonNum,
    residuals_quantum: Vec<JsonResidual>,
    residuals_classical: Vec<JsonResidual>,
    full_range_ratio: JsonNum,
    power_quantum: JsonNum,
    power_classical: JsonNum,
    peak_times_quantum: Option<JsonPeakTimes>,
    peak_times_classical: Option<JsonPeakTimes>,
}

impl Emit for FitReport {
    /// Long format: one `quantity,n,value` row per number; `n` is empty for scalars.
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "quantity,n,value")?;
        let scalars = [
            ("slope_quantum", self.slope_quantum),
            ("slope_classical", self.slope_classical),
            ("ratio", self.ratio),
            ("window_n_min", self.window.0 as f64),
            ("window_n_max", self.window.1 as f64),
            ("window_frac", self.window_frac),
            ("full_range_ratio", self.full_range_ratio),
            ("power_quantum", self.power_quantum),
            ("power_classical", self.power_classical),
        ];
        for (name, v) in scalars {
            writeln!(w, "{name},,{}", num(v))?;
        }
        for (label, fit) in [
            ("quantum", &self.peak_times_quantum),
            ("classical", &self.peak_times_classical),
        ] {
            if let Some(f) = fit {
                for (name, v) in [
                    ("peak_time_proportional", f.proportional),
                    ("peak_time_max_rel_residual", f.max_rel_residual),
                    ("peak_time_log_c", f.with_log.0),
                    ("peak_time_log_d", f.with_log.1),
                    ("peak_time_affine_slope", f.affine.0),
                    ("peak_time_affine_intercept", f.affine.1),
                ] {
                    writeln!(w, "{name}_{label},,{}", num(v))?;
                }
            }
        }
        for &(n, v) in &self.residuals_quantum {
            writeln!(w, "residual_quantum,{n},{}", num(v))?;
        }
        for &(n, v) in &self.residuals_classical {
            writeln!(w, "residual_classical,{n},{}", num(v))?;
        }
        Ok(())
    }

    fn write_json(&self, w: &mut dyn Write) -> std::io::Result<()> {
        let j = JsonFit {
            slope_quantum: jn(self.slope_quantum),
            slope_classical: jn(self.slope_classical),
            ratio: jn(self.ratio),
            window: [self.window.0, self.window.1],
            window_frac: jn(self.window_frac),
            residuals_quantum: json_residuals(&self.residuals_quantum),
            residuals_classical: json_residuals(&self.residuals_classical),
            full_range_ratio: jn(self.full_range_ratio),
            power_quantum: jn(self.power_quantum),
            power_classical: jn(self.power_classical),
            peak_times_quantum: json_peak_times(&self.peak_times_quantum),
            peak_times_classical: json_peak_times(&self.peak_times_classical),
        };
        finish_json(w, &j)
    }
}

#[derive(Serialize)]
struct JsonRow<'a> {
    method: &'a str,
    n: usize,
    t_star: usize,
    p_star: JsonNum,
}

impl Emit for Table1 {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "method,n,t_star,p_star")?;
        for r in &self.rows {
            writeln!(w, "{},{},{},{}", r.method, r.n, r.t_star, num(r.p_star))?;
        }
        Ok(())
    }

    fn write_json(&self, w: &mut dyn Write) -> std::io::Result<()> {
        let rows: Vec<JsonRow> = self
            .rows
            .iter()
            .map(|r| JsonRow {
                method: r.method,
                n: r.n,
                t_star: r.t_star,
                p_star: jn(r.p_star),
            })
            .collect();
        finish_json(w, &rows)
    }
}

/// Per-site probabilities over time, as produced by the demo walks.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SiteSeries {
    /// `(t, site, probability)` in emission order.
    pub rows: Vec<(usize, i64, f64)>,
}

#[derive(Serialize)]
struct JsonSite {
    t: usize,
    site: i64,
    prob: JsonNum,
}

impl Emit for SiteSeries {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "t,site,prob")?;
        for &(t, site, p) in &self.rows {
            writeln!(w, "{t},{site},{}", num(p))?;
        }
        Ok(())
    }

    fn write_json(&self, w: &mut dyn Write) -> std::io::Result<()> {
        let rows: Vec<JsonSite> = self
            .rows
            .iter()
            .map(|&(t, site, p)| JsonSite { t, site, prob: jn(p) })
            .collect();
        finish_json(w, &rows)
    }
}

/// Writes `result` to `out`, or to stdout when `out` is `None`.
pub fn emit_results<E: Emit + ?Sized>(
    result: &E,
    format: Format,
    out: Option<&Path>,
) -> crate::Result<()> {
    match out {
        Some(path) => {
            let io = |source| CliError::Io {
                path: path.to_path_buf(),
                source,
            };
            let mut w = BufWriter::new(File::create(path).map_err(io)?);
            result.write_as(format, &mut w).map_err(io)?;
            w.flush().map_err(io)
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            result
                .write_as(format, &mut w)
                .and_then(|_| w.flush())
                .or_else(|e| match e.kind() {
                    // A closed reader (e.g. `| head`) is not an error for us.
                    std::io::ErrorKind::BrokenPipe => Ok(()),
                    _ => Err(e),
                })
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
