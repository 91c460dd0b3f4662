use rayon::prelude::*;

use super::params::{MemoryParams, MemoryRun};
use super::with_workers;
use crate::dynamics::{efficiency_closed_form, TimeTrace};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    DeltaOmega,
    Coupling,
    KappaM,
    Modes,
    Detuning,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::DeltaOmega => "delta_omega",
            SweepAxis::Coupling => "g",
            SweepAxis::KappaM => "kappa_m",
            SweepAxis::Modes => "n",
            SweepAxis::Detuning => "detuning",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "delta_omega" => Ok(SweepAxis::DeltaOmega),
            "g" => Ok(SweepAxis::Coupling),
            "kappa_m" => Ok(SweepAxis::KappaM),
            "n" => Ok(SweepAxis::Modes),
            "detuning" => Ok(SweepAxis::Detuning),
            other => Err(Error::invalid("axis", format!("unknown sweep axis `{other}`"))),
        }
    }

    /// `base` with this axis set to `value` (rad/s, or a mode count).
    pub fn apply(&self, base: &MemoryParams, value: f64) -> Result<MemoryParams> {
        let mut p = base.clone();
        match self {
            SweepAxis::DeltaOmega => p.delta_omega = value,
            SweepAxis::Coupling => p.g = value,
            SweepAxis::KappaM => p.kappa_m = value,
            SweepAxis::Detuning => p.detuning = value,
            SweepAxis::Modes => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(Error::invalid("n", format!("must be a positive integer, got {value}")));
                }
                p.n = value as usize;
            }
        }
        Ok(p)
    }
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub zeta: f64,
    /// Zone-II intensity maximum, measured from the input pulse centre.
    pub t_measured: f64,
    pub peak_intensity: f64,
    /// Asymptotic estimate, when its pulse-length bound holds.
    pub closed_form: Option<f64>,
    pub kappa_ext: f64,
    pub trace: Option<TimeTrace>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    /// One entry per value; failures carry the error text.
    pub points: Vec<std::result::Result<SweepPoint, String>>,
}

impl SweepResult {
    pub fn successes(&self) -> impl Iterator<Item = (f64, &SweepPoint)> {
        self.values.iter().zip(&self.points).filter_map(|(v, p)| p.as_ref().ok().map(|p| (*v, p)))
    }
}

fn sweep_point(params: &MemoryParams, keep_trace: bool) -> Result<SweepPoint> {
    let MemoryRun { trace, report, config, .. } = params.run()?;
    let peak_intensity = trace
        .t
        .iter()
        .zip(&trace.intensity)
        .filter(|(t, _)| report.window_out.contains(**t))
        .map(|(_, v)| *v)
        .fold(0.0, f64::max);
    let closed_form = efficiency_closed_form(params.g, params.delta_omega, params.kappa_m, params.kappa_a0, params.t_p)
        .ok()
        .map(|c| c.zeta);
    Ok(SweepPoint {
        zeta: report.zeta,
        t_measured: report.storage_delay,
        peak_intensity,
        closed_form,
        kappa_ext: config.cavity.kappa_ext,
        trace: keep_trace.then_some(trace),
    })
}

/// Runs the memory once per axis value, in parallel. A failing point is
/// recorded and the sweep continues.
pub fn run_sweep(
    base: &MemoryParams,
    axis: SweepAxis,
    values: &[f64],
    keep_traces: bool,
    workers: Option<usize>,
) -> Result<SweepResult> {
    let points = with_workers(workers, || {
        values
            .par_iter()
            .map(|&v| {
                axis.apply(base, v)
                    .and_then(|p| sweep_point(&p, keep_traces))
                    .map_err(|e| e.to_string())
            })
            .collect()
    })?;
    Ok(SweepResult { axis, values: values.to_vec(), points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{mhz, ns};

    #[test]
    fn failed_points_do_not_abort() {
        let base = MemoryParams::experiment();
        let r = run_sweep(&base, SweepAxis::Modes, &[2.0, 2.5], false, Some(2)).unwrap();
        assert!(r.points[0].is_ok());
        assert!(r.points[1].as_ref().unwrap_err().contains("positive integer"));
        // Δω too large for the pulse: the zones overlap.
        let r = run_sweep(&base, SweepAxis::DeltaOmega, &[mhz(60.0)], false, None).unwrap();
        assert!(r.points[0].is_err());
    }

    #[test]
    fn storage_time_tracks_gradient() {
        let base = MemoryParams::experiment();
        let values = [mhz(8.0), mhz(12.5)];
        let r = run_sweep(&base, SweepAxis::DeltaOmega, &values, true, None).unwrap();
        let times: Vec<f64> = r.successes().map(|(_, p)| p.t_measured).collect();
        assert!(times[0] > times[1]);
        for (dw, t) in values.iter().zip(&times) {
            assert!((t - crate::units::TWO_PI / dw).abs() <= ns(10.1) + base.output_step);
        }
        assert!(r.points[0].as_ref().unwrap().trace.is_some());
    }

    #[test]
    fn axis_names_round_trip() {
        for a in [SweepAxis::DeltaOmega, SweepAxis::Coupling, SweepAxis::KappaM, SweepAxis::Modes, SweepAxis::Detuning] {
            assert_eq!(SweepAxis::parse(a.name()).unwrap(), a);
        }
        assert!(SweepAxis::parse("kapa_m").is_err());
    }
}
