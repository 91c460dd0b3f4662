use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::dynamics::TimeTrace;
use crate::error::{Error, Result};
use crate::experiments::{CompareResult, MonteCarloStats, SweepAxis, SweepResult};
use crate::spectrum::{FieldAxis, SpectrumTrace, SweepMap};
use crate::units::{to_mhz, to_ns};

/// `#`-prefixed header lines written above every CSV body.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Metadata {
    pub lines: Vec<String>,
}

impl Metadata {
    /// Tool version, run kind, seed, and the resolved configuration.
    pub fn new(kind: &str, seed: Option<u64>, config_text: &str) -> Self {
        let mut lines = vec![format!("mgm {} {}", env!("CARGO_PKG_VERSION"), kind)];
        if let Some(s) = seed {
            lines.push(format!("seed = {s}"));
        }
        lines.push("units: time ns, frequency MHz (cyclic), field Oe, amplitudes in input-field units".into());
        lines.push("config:".into());
        lines.extend(config_text.lines().map(|l| format!("  {l}")));
        Self { lines }
    }

    pub fn push(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }
}

/// A result ready for serialization.
#[derive(Debug, Clone, Copy)]
pub enum Output<'a> {
    Trace(&'a TimeTrace),
    Spectrum(&'a SpectrumTrace),
    SweepMap(&'a SweepMap),
    Sweep(&'a SweepResult),
    MonteCarlo(&'a MonteCarloStats),
    /// Long form `domain, case, x, y`: |r| against f_mhz and detected
    /// intensity against t_ns for the uniform and random combs.
    Compare(&'a CompareResult),
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn write_body(
    out: &mut dyn Write,
    meta: &Metadata,
    columns: &[String],
    rows: impl Iterator<Item = Vec<String>>,
    footer: &[String],
) -> Result<()> {
    for l in &meta.lines {
        writeln!(out, "# {l}")?;
    }
    {
        let mut w = csv::WriterBuilder::new().from_writer(&mut *out);
        w.write_record(columns).map_err(csv_error)?;
        for r in rows {
            w.write_record(&r).map_err(csv_error)?;
        }
        w.flush()?;
    }
    for l in footer {
        writeln!(out, "# {l}")?;
    }
    Ok(())
}

fn f(x: f64) -> String {
    x.to_string()
}

/// Serializes `output` as CSV with the metadata header.
pub fn write_result_to(out: &mut dyn Write, output: &Output<'_>, meta: &Metadata) -> Result<()> {
    match output {
        Output::Trace(tr) => {
            let mut cols: Vec<String> = ["t_ns", "re_a", "im_a", "intensity", "re_Eout", "im_Eout", "re_Ein", "im_Ein"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            for j in 1..=tr.modes() {
                cols.push(format!("re_m{j}"));
                cols.push(format!("im_m{j}"));
            }
            let rows = (0..tr.len()).map(|k| {
                let mut r = vec![
                    f(to_ns(tr.t[k])),
                    f(tr.cavity[k].re),
                    f(tr.cavity[k].im),
                    f(tr.intensity[k]),
                    f(tr.e_out[k].re),
                    f(tr.e_out[k].im),
                    f(tr.e_in[k].re),
                    f(tr.e_in[k].im),
                ];
                for m in &tr.magnons[k] {
                    r.push(f(m.re));
                    r.push(f(m.im));
                }
                r
            });
            let footer = [format!("kappa_ext_mhz = {}", to_mhz(tr.kappa_ext))];
            write_body(out, meta, &cols, rows, &footer)
        }
        Output::Spectrum(s) => {
            let cols: Vec<String> = ["f_mhz", "re_r", "im_r", "abs_r", "phase_rad", "group_delay_ns"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let rows = (0..s.len()).map(|k| {
                vec![
                    f(to_mhz(s.omega[k])),
                    f(s.r[k].re),
                    f(s.r[k].im),
                    f(s.magnitude[k]),
                    f(s.phase[k]),
                    f(to_ns(s.group_delay[k])),
                ]
            });
            write_body(out, meta, &cols, rows, &[])
        }
        Output::SweepMap(m) => {
            let x = match m.axis {
                FieldAxis::Bias => "h0_oe",
                FieldAxis::Gradient => "delta_h_oe",
            };
            let cols = vec![x.to_string(), "f_mhz".into(), "abs_r".into()];
            let rows = m.x_axis.iter().enumerate().flat_map(|(i, &xv)| {
                m.omega.iter().enumerate().map(move |(k, &w)| vec![f(xv), f(to_mhz(w)), f(m.magnitude[i][k])])
            });
            write_body(out, meta, &cols, rows, &[])
        }
        Output::Sweep(s) => {
            let unit = match s.axis {
                SweepAxis::Modes => String::new(),
                _ => "_mhz".into(),
            };
            let cols: Vec<String> = vec![
                format!("{}{unit}", s.axis.name()),
                "zeta".into(),
                "t_measured_ns".into(),
                "peak_intensity".into(),
                "zeta_closed_form".into(),
                "kappa_ext_mhz".into(),
                "error".into(),
            ];
            let rows = s.values.iter().zip(&s.points).map(|(&v, p)| {
                let x = if s.axis == SweepAxis::Modes { v } else { to_mhz(v) };
                match p {
                    Ok(p) => vec![
                        f(x),
                        f(p.zeta),
                        f(to_ns(p.t_measured)),
                        f(p.peak_intensity),
                        p.closed_form.map_or_else(String::new, f),
                        f(to_mhz(p.kappa_ext)),
                        String::new(),
                    ],
                    Err(e) => vec![f(x), String::new(), String::new(), String::new(), String::new(), String::new(), e.clone()],
                }
            });
            write_body(out, meta, &cols, rows, &[])
        }
        Output::MonteCarlo(mc) => {
            let cols = vec!["sample".to_string(), "zeta".to_string()];
            let rows = mc.samples.iter().enumerate().map(|(i, z)| vec![i.to_string(), f(*z)]);
            let footer = [
                format!("samples = {}", mc.samples.len()),
                format!("mean = {}", mc.mean),
                format!("std = {}", mc.std),
                format!("seed = {}", mc.seed),
                format!("spread = {}", mc.spread),
            ];
            write_body(out, meta, &cols, rows, &footer)
        }
        Output::Compare(c) => {
            let cols: Vec<String> = ["domain", "case", "x", "y"].iter().map(|s| s.to_string()).collect();
            let cases = [("uniform", &c.uniform), ("random", &c.random)];
            let spectra = cases.into_iter().flat_map(|(name, case)| {
                let s = &case.spectrum;
                (0..s.len()).map(move |k| vec!["spectrum".into(), name.into(), f(to_mhz(s.omega[k])), f(s.magnitude[k])])
            });
            let traces = cases.into_iter().flat_map(|(name, case)| {
                let t = &case.run.trace;
                (0..t.len()).map(move |k| vec!["trace".into(), name.into(), f(to_ns(t.t[k])), f(t.intensity[k])])
            });
            let footer = [
                format!("zone2_ratio = {}", c.zone2_ratio),
                format!("zeta_uniform = {}", c.uniform.run.report.zeta),
                format!("zeta_random = {}", c.random.run.report.zeta),
                format!("ripple_uniform = {}", c.uniform.ripple_energy),
                format!("ripple_random = {}", c.random.ripple_energy),
            ];
            write_body(out, meta, &cols, spectra.chain(traces), &footer)
        }
    }
}

pub fn write_result(path: impl AsRef<Path>, output: &Output<'_>, meta: &Metadata) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut w = std::io::BufWriter::new(file);
    write_result_to(&mut w, output, meta)?;
    w.flush()?;
    Ok(())
}

/// A CSV file as written by [`write_result`].
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub footer: Vec<String>,
}

impl Table {
    pub fn column(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Io(format!("missing column `{name}`")))
    }

    /// Numeric column; empty cells are NaN.
    pub fn numbers(&self, name: &str) -> Result<Vec<f64>> {
        let c = self.column(name)?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let cell = r.get(c).map(String::as_str).unwrap_or("");
                if cell.is_empty() {
                    return Ok(f64::NAN);
                }
                cell.parse().map_err(|_| Error::Parse { line: i + 1, message: format!("`{cell}` in `{name}`") })
            })
            .collect()
    }

    /// `key = value` footer entry.
    pub fn footer_value(&self, key: &str) -> Option<&str> {
        self.footer.iter().find_map(|l| {
            let (k, v) = l.split_once('=')?;
            (k.trim() == key).then(|| v.trim())
        })
    }
}

pub fn read_table_from(input: impl Read) -> Result<Table> {
    let mut header = Vec::new();
    let mut footer = Vec::new();
    let mut body = String::new();
    for line in BufReader::new(input).lines() {
        let line = line?;
        if let Some(c) = line.strip_prefix('#') {
            let c = c.strip_prefix(' ').unwrap_or(c).to_string();
            if body.is_empty() {
                header.push(c);
            } else {
                footer.push(c);
            }
        } else {
            body.push_str(&line);
            body.push('\n');
        }
    }
    let mut r = csv::ReaderBuilder::new().from_reader(body.as_bytes());
    let columns = r.headers().map_err(csv_error)?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()).map_err(csv_error))
        .collect::<Result<Vec<Vec<String>>>>()?;
    Ok(Table { header, columns, rows, footer })
}

pub fn read_table(path: impl AsRef<Path>) -> Result<Table> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_table_from(file)
}

/// Rebuilds a trace written by [`write_result`].
pub fn read_trace(path: impl AsRef<Path>) -> Result<TimeTrace> {
    let t = read_table(path)?;
    let pair = |re: &str, im: &str| -> Result<Vec<Complex64>> {
        Ok(t.numbers(re)?.into_iter().zip(t.numbers(im)?).map(|(a, b)| Complex64::new(a, b)).collect())
    };
    let modes = t.columns.iter().filter(|c| c.starts_with("re_m")).count();
    let per_mode = (1..=modes)
        .map(|j| pair(&format!("re_m{j}"), &format!("im_m{j}")))
        .collect::<Result<Vec<_>>>()?;
    let n = t.rows.len();
    let kappa_ext = t
        .footer_value("kappa_ext_mhz")
        .and_then(|v| v.parse::<f64>().ok())
        .map(crate::units::mhz)
        .ok_or_else(|| Error::Io("missing kappa_ext_mhz footer".into()))?;
    Ok(TimeTrace {
        t: t.numbers("t_ns")?.into_iter().map(crate::units::ns).collect(),
        cavity: pair("re_a", "im_a")?,
        magnons: (0..n).map(|k| per_mode.iter().map(|m| m[k]).collect()).collect(),
        e_in: pair("re_Ein", "im_Ein")?,
        e_out: pair("re_Eout", "im_Eout")?,
        intensity: t.numbers("intensity")?,
        kappa_ext,
    })
}

/// Rebuilds Monte Carlo statistics from a written file.
pub fn read_monte_carlo(path: impl AsRef<Path>) -> Result<MonteCarloStats> {
    let t = read_table(path)?;
    let get = |k: &str| -> Result<f64> {
        t.footer_value(k)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Io(format!("missing `{k}` footer")))
    };
    Ok(MonteCarloStats {
        samples: t.numbers("zeta")?,
        mean: get("mean")?,
        std: get("std")?,
        seed: get("seed")? as u64,
        spread: get("spread")?,
    })
}
