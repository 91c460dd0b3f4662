use std::fmt::Write as _;
use std::path::Path;

use crate::dynamics::{storage_time, DriveSpec, Pulse, PulseShape};
use crate::error::{Error, Result};
use crate::experiments::{Coupling, MemoryParams, SweepAxis};
use crate::model::{build_gradient_system, CavityMode, FieldMap, MagnonMode, SystemConfig};
use crate::spectrum::{critical_kappa, linear_grid, FieldAxis};
use crate::units::{gamma_per_oe, mhz, ns};

/// A right-hand side in a config file.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Text(String),
    List(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub section: String,
    pub key: String,
    pub value: Value,
    pub line: usize,
}

fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn parse_value(raw: &str, line: usize) -> Result<Value> {
    let err = |message: String| Error::Parse { line, message };
    if let Some(inner) = raw.strip_prefix('[') {
        let inner = inner.strip_suffix(']').ok_or_else(|| err("unterminated list".into()))?;
        if inner.trim().is_empty() {
            return Ok(Value::List(vec![]));
        }
        return inner
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| err(format!("`{}` is not a number", x.trim()))))
            .collect::<Result<Vec<_>>>()
            .map(Value::List);
    }
    if let Some(inner) = raw.strip_prefix('"') {
        let inner = inner.strip_suffix('"').ok_or_else(|| err("unterminated string".into()))?;
        return Ok(Value::Text(inner.to_string()));
    }
    if raw.is_empty() {
        return Err(err("missing value".into()));
    }
    Ok(raw.parse::<f64>().map(Value::Number).unwrap_or_else(|_| Value::Text(raw.to_string())))
}

/// Splits `key = value` text into entries. Keys before the first
/// `[section]` header belong to `system`; keys are case-insensitive.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>> {
    let mut section = "system".to_string();
    let mut out: Vec<Entry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let s = strip_comment(raw).trim();
        if s.is_empty() {
            continue;
        }
        if let Some(name) = s.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse { line, message: "malformed section header".into() })?;
            section = name.trim().to_ascii_lowercase();
            continue;
        }
        let (key, value) = s
            .split_once('=')
            .ok_or_else(|| Error::Parse { line, message: format!("expected `key = value`, got `{s}`") })?;
        let key = key.trim().to_ascii_lowercase();
        if key.is_empty() {
            return Err(Error::Parse { line, message: "empty key".into() });
        }
        if let Some(prev) = out.iter().find(|e| e.section == section && e.key == key) {
            return Err(Error::Parse { line, message: format!("duplicate key `{key}` (first set on line {})", prev.line) });
        }
        let value = parse_value(value.trim(), line)?;
        out.push(Entry { section: section.clone(), key, value, line });
    }
    Ok(out)
}

fn number(e: &Entry) -> Result<f64> {
    match e.value {
        Value::Number(x) => Ok(x),
        _ => Err(Error::Parse { line: e.line, message: format!("`{}` expects a number", e.key) }),
    }
}

fn count(e: &Entry) -> Result<usize> {
    let x = number(e)?;
    if x < 0.0 || x.fract() != 0.0 {
        return Err(Error::Parse { line: e.line, message: format!("`{}` expects a non-negative integer", e.key) });
    }
    Ok(x as usize)
}

fn text(e: &Entry) -> Result<String> {
    match &e.value {
        Value::Text(s) => Ok(s.clone()),
        Value::Number(x) => Ok(x.to_string()),
        Value::List(_) => Err(Error::Parse { line: e.line, message: format!("`{}` expects a word", e.key) }),
    }
}

fn list(e: &Entry) -> Result<Vec<f64>> {
    match &e.value {
        Value::List(v) => Ok(v.clone()),
        Value::Number(x) => Ok(vec![*x]),
        Value::Text(_) => Err(Error::Parse { line: e.line, message: format!("`{}` expects a list", e.key) }),
    }
}

/// External coupling as written in a config file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingSpec {
    Critical,
    /// κ_a1/2π in MHz.
    FixedMhz(f64),
}

/// System parameters in I/O units (cyclic MHz).
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSection {
    pub n: usize,
    pub cavity_mhz: f64,
    pub g0_mhz: f64,
    pub delta_omega_mhz: f64,
    pub kappa_a0_mhz: f64,
    pub kappa_m_mhz: f64,
    pub coupling: CouplingSpec,
    pub couplings_mhz: Option<Vec<f64>>,
    pub frequencies_mhz: Option<Vec<f64>>,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriveSection {
    pub shape: PulseShape,
    pub duration_ns: f64,
    pub start_ns: f64,
    pub amplitude: f64,
    pub detuning_mhz: f64,
    pub count: usize,
    pub separation_ns: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldSection {
    pub gamma_mhz_per_oe: f64,
    /// Defaults to the field that puts the comb centre on the cavity.
    pub h0_oe: Option<f64>,
    pub delta_h_oe: f64,
    pub axis: FieldAxis,
    pub from_oe: Option<f64>,
    pub to_oe: Option<f64>,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSection {
    /// Defaults to 2.5 storage times.
    pub t_end_ns: Option<f64>,
    pub step_ns: f64,
    pub seed: u64,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSection {
    pub f_min_mhz: Option<f64>,
    pub f_max_mhz: Option<f64>,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSection {
    pub axis: SweepAxis,
    /// MHz for frequency axes, a count for `n`.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSection {
    pub samples: usize,
    pub spread: f64,
}

/// Everything a CLI run needs. Defaults are the storage experiment: eight
/// spheres, g/2π = Δω/2π = 10 MHz, κ_a0/2π = 3 MHz, κ_m/2π = 0.72 MHz,
/// critical coupling, a resonant 20 ns rectangular pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemSection,
    pub drive: DriveSection,
    pub field: FieldSection,
    pub run: RunSection,
    pub spectrum: SpectrumSection,
    pub sweep: SweepSection,
    pub montecarlo: MonteCarloSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            system: SystemSection {
                n: 8,
                cavity_mhz: 7520.0,
                g0_mhz: 10.0,
                delta_omega_mhz: 10.0,
                kappa_a0_mhz: 3.0,
                kappa_m_mhz: 0.72,
                coupling: CouplingSpec::Critical,
                couplings_mhz: None,
                frequencies_mhz: None,
                label: "experiment".into(),
            },
            drive: DriveSection {
                shape: PulseShape::Rectangular,
                duration_ns: 20.0,
                start_ns: 0.0,
                amplitude: 1.0,
                detuning_mhz: 0.0,
                count: 1,
                separation_ns: 40.0,
            },
            field: FieldSection {
                gamma_mhz_per_oe: crate::units::GAMMA_MHZ_PER_OE,
                h0_oe: None,
                delta_h_oe: 0.0,
                axis: FieldAxis::Bias,
                from_oe: None,
                to_oe: None,
                points: 201,
            },
            run: RunSection { t_end_ns: None, step_ns: 0.1, seed: 1, workers: None },
            spectrum: SpectrumSection { f_min_mhz: None, f_max_mhz: None, points: 4001 },
            sweep: SweepSection { axis: SweepAxis::DeltaOmega, values: vec![5.0, 8.0, 10.0, 12.5, 20.0] },
            montecarlo: MonteCarloSection { samples: 500, spread: 0.1 },
        }
    }
}

fn shape_name(s: PulseShape) -> &'static str {
    match s {
        PulseShape::Rectangular => "rectangular",
        PulseShape::Gaussian => "gaussian",
    }
}

fn axis_name(a: FieldAxis) -> &'static str {
    match a {
        FieldAxis::Bias => "bias",
        FieldAxis::Gradient => "gradient",
    }
}

fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn non_negative(field: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be ≥ 0, got {x}")))
    }
}

fn positive(field: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be > 0, got {x}")))
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        for e in parse_entries(text)? {
            c.assign(&e)?;
        }
        c.validate()?;
        Ok(c)
    }

    fn assign(&mut self, e: &Entry) -> Result<()> {
        let bad_word = |what: &str, got: &str| Error::Parse { line: e.line, message: format!("unknown {what} `{got}`") };
        match (e.section.as_str(), e.key.as_str()) {
            ("system", "n") => self.system.n = count(e)?,
            ("system", "cavity_mhz") => self.system.cavity_mhz = number(e)?,
            ("system", "g0_mhz") => self.system.g0_mhz = number(e)?,
            ("system", "delta_omega_mhz") => self.system.delta_omega_mhz = number(e)?,
            ("system", "kappa_a0_mhz") => self.system.kappa_a0_mhz = number(e)?,
            ("system", "kappa_m_mhz") => self.system.kappa_m_mhz = number(e)?,
            ("system", "coupling") => {
                self.system.coupling = match &e.value {
                    Value::Number(x) => CouplingSpec::FixedMhz(*x),
                    Value::Text(s) if s == "critical" => CouplingSpec::Critical,
                    _ => return Err(bad_word("coupling", &text(e).unwrap_or_default())),
                }
            }
            ("system", "couplings_mhz") => self.system.couplings_mhz = Some(list(e)?),
            ("system", "frequencies_mhz") => self.system.frequencies_mhz = Some(list(e)?),
            ("system", "label") => self.system.label = text(e)?,
            ("drive", "shape") => {
                self.drive.shape = match text(e)?.as_str() {
                    "rectangular" => PulseShape::Rectangular,
                    "gaussian" => PulseShape::Gaussian,
                    other => return Err(bad_word("pulse shape", other)),
                }
            }
            ("drive", "duration_ns") => self.drive.duration_ns = number(e)?,
            ("drive", "start_ns") => self.drive.start_ns = number(e)?,
            ("drive", "amplitude") => self.drive.amplitude = number(e)?,
            ("drive", "detuning_mhz") => self.drive.detuning_mhz = number(e)?,
            ("drive", "count") => self.drive.count = count(e)?,
            ("drive", "separation_ns") => self.drive.separation_ns = number(e)?,
            ("field", "gamma_mhz_per_oe") => self.field.gamma_mhz_per_oe = number(e)?,
            ("field", "h0_oe") => self.field.h0_oe = Some(number(e)?),
            ("field", "delta_h_oe") => self.field.delta_h_oe = number(e)?,
            ("field", "axis") => {
                self.field.axis = match text(e)?.as_str() {
                    "bias" => FieldAxis::Bias,
                    "gradient" => FieldAxis::Gradient,
                    other => return Err(bad_word("field axis", other)),
                }
            }
            ("field", "from_oe") => self.field.from_oe = Some(number(e)?),
            ("field", "to_oe") => self.field.to_oe = Some(number(e)?),
            ("field", "points") => self.field.points = count(e)?,
            ("run", "t_end_ns") => self.run.t_end_ns = Some(number(e)?),
            ("run", "step_ns") => self.run.step_ns = number(e)?,
            ("run", "seed") => self.run.seed = count(e)? as u64,
            ("run", "workers") => self.run.workers = Some(count(e)?),
            ("spectrum", "f_min_mhz") => self.spectrum.f_min_mhz = Some(number(e)?),
            ("spectrum", "f_max_mhz") => self.spectrum.f_max_mhz = Some(number(e)?),
            ("spectrum", "points") => self.spectrum.points = count(e)?,
            ("sweep", "axis") => {
                let name = text(e)?;
                self.sweep.axis = SweepAxis::parse(&name).map_err(|_| bad_word("sweep axis", &name))?
            }
            ("sweep", "values") => self.sweep.values = list(e)?,
            ("montecarlo", "samples") => self.montecarlo.samples = count(e)?,
            ("montecarlo", "spread") => self.montecarlo.spread = number(e)?,
            (section, key) => {
                return Err(Error::Parse { line: e.line, message: format!("unknown key `{key}` in [{section}]") });
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.system;
        if s.n == 0 {
            return Err(Error::invalid("system.n", "must be at least 1"));
        }
        positive("system.cavity_mhz", s.cavity_mhz)?;
        non_negative("system.g0_mhz", s.g0_mhz)?;
        non_negative("system.delta_omega_mhz", s.delta_omega_mhz)?;
        non_negative("system.kappa_a0_mhz", s.kappa_a0_mhz)?;
        non_negative("system.kappa_m_mhz", s.kappa_m_mhz)?;
        if let CouplingSpec::FixedMhz(k) = s.coupling {
            non_negative("system.coupling", k)?;
        }
        for (name, v) in [("system.couplings_mhz", &s.couplings_mhz), ("system.frequencies_mhz", &s.frequencies_mhz)] {
            if let Some(v) = v {
                if v.len() != s.n {
                    return Err(Error::invalid(name, format!("has {} entries for n = {}", v.len(), s.n)));
                }
            }
        }
        let d = &self.drive;
        positive("drive.duration_ns", d.duration_ns)?;
        non_negative("drive.start_ns", d.start_ns)?;
        if d.count == 0 {
            return Err(Error::invalid("drive.count", "must be at least 1"));
        }
        if d.count > 1 {
            positive("drive.separation_ns", d.separation_ns)?;
        }
        positive("field.gamma_mhz_per_oe", self.field.gamma_mhz_per_oe)?;
        if self.field.points < 1 {
            return Err(Error::invalid("field.points", "must be at least 1"));
        }
        positive("run.step_ns", self.run.step_ns)?;
        if let Some(t) = self.run.t_end_ns {
            positive("run.t_end_ns", t)?;
        }
        if self.run.workers == Some(0) {
            return Err(Error::invalid("run.workers", "must be at least 1"));
        }
        if self.spectrum.points < 2 {
            return Err(Error::invalid("spectrum.points", "must be at least 2"));
        }
        if self.montecarlo.samples == 0 {
            return Err(Error::invalid("montecarlo.samples", "must be at least 1"));
        }
        non_negative("montecarlo.spread", self.montecarlo.spread)?;
        self.system_config()?;
        self.drive_spec()?;
        Ok(())
    }

    pub fn delta_omega(&self) -> f64 {
        mhz(self.system.delta_omega_mhz)
    }

    fn uses_overrides(&self) -> bool {
        self.system.couplings_mhz.is_some() || self.system.frequencies_mhz.is_some()
    }

    /// Resolved system; per-mode lists override the uniform gradient.
    pub fn system_config(&self) -> Result<SystemConfig> {
        let s = &self.system;
        let mut config = build_gradient_system(
            s.n,
            mhz(s.cavity_mhz),
            self.delta_omega(),
            mhz(s.g0_mhz),
            mhz(s.kappa_m_mhz),
            mhz(s.kappa_a0_mhz),
            0.0,
        )?;
        if let Some(g) = &s.couplings_mhz {
            for (m, &x) in config.magnons.iter_mut().zip(g) {
                *m = MagnonMode::new(m.omega, mhz(x), m.kappa);
            }
        }
        if let Some(f) = &s.frequencies_mhz {
            for (m, &x) in config.magnons.iter_mut().zip(f) {
                m.omega = mhz(x);
            }
        }
        let kappa_ext = match s.coupling {
            CouplingSpec::FixedMhz(k) => mhz(k),
            CouplingSpec::Critical if self.uses_overrides() => critical_kappa(&config, self.delta_omega())?.kappa_ext,
            CouplingSpec::Critical => crate::spectrum::critical_kappa_for(mhz(s.g0_mhz), self.delta_omega(), mhz(s.kappa_a0_mhz))?.kappa_ext,
        };
        let cavity = CavityMode::new(config.cavity.omega, config.cavity.kappa_int, kappa_ext)?;
        Ok(SystemConfig { cavity, ..config }.with_label(s.label.clone()))
    }

    pub fn drive_spec(&self) -> Result<DriveSpec> {
        let d = &self.drive;
        let carrier = mhz(self.system.cavity_mhz + d.detuning_mhz);
        let pulses = (0..d.count)
            .map(|k| {
                let start = ns(d.start_ns + k as f64 * d.separation_ns);
                match d.shape {
                    PulseShape::Rectangular => Pulse::rectangular(start, ns(d.duration_ns), d.amplitude),
                    PulseShape::Gaussian => Pulse::gaussian(start, ns(d.duration_ns), d.amplitude),
                }
            })
            .collect();
        DriveSpec::new(carrier, pulses)
    }

    pub fn storage_time(&self) -> Result<f64> {
        storage_time(self.delta_omega())
    }

    pub fn t_end(&self) -> Result<f64> {
        match self.run.t_end_ns {
            Some(t) => Ok(ns(t)),
            None => Ok(ns(self.drive.start_ns) + 2.5 * self.storage_time()?),
        }
    }

    pub fn output_step(&self) -> f64 {
        ns(self.run.step_ns)
    }

    /// Memory parameters for uniform systems (per-mode overrides are not
    /// representable and are rejected).
    pub fn memory_params(&self) -> Result<MemoryParams> {
        if self.uses_overrides() {
            return Err(Error::invalid("system", "per-mode couplings or frequencies need a uniform comb here"));
        }
        let s = &self.system;
        let t_end = self.t_end()?;
        Ok(MemoryParams {
            n: s.n,
            omega_a: mhz(s.cavity_mhz),
            delta_omega: self.delta_omega(),
            g: mhz(s.g0_mhz),
            kappa_m: mhz(s.kappa_m_mhz),
            kappa_a0: mhz(s.kappa_a0_mhz),
            coupling: match s.coupling {
                CouplingSpec::Critical => Coupling::Critical,
                CouplingSpec::FixedMhz(k) => Coupling::Fixed(mhz(k)),
            },
            detuning: mhz(self.drive.detuning_mhz),
            shape: self.drive.shape,
            t_p: ns(self.drive.duration_ns),
            amplitude: self.drive.amplitude,
            output_step: self.output_step(),
            periods: t_end / self.storage_time()?,
        })
    }

    pub fn field_map(&self) -> Result<FieldMap> {
        let gamma = gamma_per_oe(self.field.gamma_mhz_per_oe);
        let h0 = self.field.h0_oe.unwrap_or(self.system.cavity_mhz / self.field.gamma_mhz_per_oe);
        FieldMap::new(gamma, h0, self.field.delta_h_oe)
    }

    /// Swept field values (Oe): ±20 Oe around the map's H_0 (bias axis) or
    /// ±20 Oe of ΔH (gradient axis) unless given.
    pub fn field_values(&self) -> Result<Vec<f64>> {
        let map = self.field_map()?;
        let centre = match self.field.axis {
            FieldAxis::Bias => map.h0,
            FieldAxis::Gradient => 0.0,
        };
        let lo = self.field.from_oe.unwrap_or(centre - 20.0);
        let hi = self.field.to_oe.unwrap_or(centre + 20.0);
        if self.field.points == 1 {
            return Ok(vec![lo]);
        }
        Ok(linear_grid(lo, hi, self.field.points))
    }

    /// Probe grid (rad/s): the comb plus three spacings of margin on each
    /// side unless given.
    pub fn spectrum_grid(&self) -> Vec<f64> {
        let s = &self.system;
        let half = (0.5 * s.n as f64 + 3.0) * s.delta_omega_mhz.max(s.g0_mhz * (s.n as f64).sqrt() / 2.0);
        let lo = self.spectrum.f_min_mhz.unwrap_or(s.cavity_mhz - half);
        let hi = self.spectrum.f_max_mhz.unwrap_or(s.cavity_mhz + half);
        linear_grid(mhz(lo), mhz(hi), self.spectrum.points)
    }

    /// Sweep values in internal units.
    pub fn sweep_values(&self) -> Vec<f64> {
        match self.sweep.axis {
            SweepAxis::Modes => self.sweep.values.clone(),
            _ => self.sweep.values.iter().map(|&v| mhz(v)).collect(),
        }
    }

    /// Fully resolved config in the same format [`RunConfig::parse`] reads.
    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let s = &self.system;
        let _ = writeln!(o, "[system]");
        let _ = writeln!(o, "n = {}", s.n);
        let _ = writeln!(o, "cavity_mhz = {}", s.cavity_mhz);
        let _ = writeln!(o, "g0_mhz = {}", s.g0_mhz);
        let _ = writeln!(o, "delta_omega_mhz = {}", s.delta_omega_mhz);
        let _ = writeln!(o, "kappa_a0_mhz = {}", s.kappa_a0_mhz);
        let _ = writeln!(o, "kappa_m_mhz = {}", s.kappa_m_mhz);
        match s.coupling {
            CouplingSpec::Critical => {
                let _ = writeln!(o, "coupling = critical");
            }
            CouplingSpec::FixedMhz(k) => {
                let _ = writeln!(o, "coupling = {k}");
            }
        }
        if let Some(v) = &s.couplings_mhz {
            let _ = writeln!(o, "couplings_mhz = {}", fmt_list(v));
        }
        if let Some(v) = &s.frequencies_mhz {
            let _ = writeln!(o, "frequencies_mhz = {}", fmt_list(v));
        }
        let _ = writeln!(o, "label = \"{}\"", s.label);
        let d = &self.drive;
        let _ = writeln!(o, "[drive]");
        let _ = writeln!(o, "shape = {}", shape_name(d.shape));
        let _ = writeln!(o, "duration_ns = {}", d.duration_ns);
        let _ = writeln!(o, "start_ns = {}", d.start_ns);
        let _ = writeln!(o, "amplitude = {}", d.amplitude);
        let _ = writeln!(o, "detuning_mhz = {}", d.detuning_mhz);
        let _ = writeln!(o, "count = {}", d.count);
        let _ = writeln!(o, "separation_ns = {}", d.separation_ns);
        let f = &self.field;
        let _ = writeln!(o, "[field]");
        let _ = writeln!(o, "gamma_mhz_per_oe = {}", f.gamma_mhz_per_oe);
        if let Some(h) = f.h0_oe {
            let _ = writeln!(o, "h0_oe = {h}");
        }
        let _ = writeln!(o, "delta_h_oe = {}", f.delta_h_oe);
        let _ = writeln!(o, "axis = {}", axis_name(f.axis));
        if let Some(h) = f.from_oe {
            let _ = writeln!(o, "from_oe = {h}");
        }
        if let Some(h) = f.to_oe {
            let _ = writeln!(o, "to_oe = {h}");
        }
        let _ = writeln!(o, "points = {}", f.points);
        let r = &self.run;
        let _ = writeln!(o, "[run]");
        if let Some(t) = r.t_end_ns {
            let _ = writeln!(o, "t_end_ns = {t}");
        }
        let _ = writeln!(o, "step_ns = {}", r.step_ns);
        let _ = writeln!(o, "seed = {}", r.seed);
        if let Some(w) = r.workers {
            let _ = writeln!(o, "workers = {w}");
        }
        let _ = writeln!(o, "[spectrum]");
        if let Some(x) = self.spectrum.f_min_mhz {
            let _ = writeln!(o, "f_min_mhz = {x}");
        }
        if let Some(x) = self.spectrum.f_max_mhz {
            let _ = writeln!(o, "f_max_mhz = {x}");
        }
        let _ = writeln!(o, "points = {}", self.spectrum.points);
        let _ = writeln!(o, "[sweep]");
        let _ = writeln!(o, "axis = {}", self.sweep.axis.name());
        let _ = writeln!(o, "values = {}", fmt_list(&self.sweep.values));
        let _ = writeln!(o, "[montecarlo]");
        let _ = writeln!(o, "samples = {}", self.montecarlo.samples);
        let _ = writeln!(o, "spread = {}", self.montecarlo.spread);
        o
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    RunConfig::parse(&text)
}
