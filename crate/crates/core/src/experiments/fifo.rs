use super::params::MemoryParams;
use crate::dynamics::{integrate, DriveSpec, IntegrateOptions, Side, TimeTrace};
use crate::error::{Error, Result};
use crate::model::SystemConfig;

/// Local maxima of `y` after a centred moving average over `smooth` samples,
/// restricted to `lo ≤ t ≤ hi` and above `threshold`. Returns
/// `(time, smoothed value)` pairs in time order.
pub fn detect_peaks(t: &[f64], y: &[f64], smooth: usize, lo: f64, hi: f64, threshold: f64) -> Vec<(f64, f64)> {
    let n = y.len();
    let half = smooth.max(1) / 2;
    let mut prefix = vec![0.0; n + 1];
    for k in 0..n {
        prefix[k + 1] = prefix[k] + y[k];
    }
    let s: Vec<f64> = (0..n)
        .map(|k| {
            let a = k.saturating_sub(half);
            let b = (k + half + 1).min(n);
            (prefix[b] - prefix[a]) / (b - a) as f64
        })
        .collect();
    (1..n.saturating_sub(1))
        .filter(|&k| t[k] >= lo && t[k] <= hi && s[k] > threshold && s[k] > s[k - 1] && s[k] >= s[k + 1])
        .map(|k| (t[k], s[k]))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FifoReport {
    /// Pulse centres in input order.
    pub input_centers: Vec<f64>,
    /// Retrieval peaks in time order.
    pub peak_times: Vec<f64>,
    pub peak_values: Vec<f64>,
    /// `peak_times[k] − input_centers[k]`.
    pub delays: Vec<f64>,
    /// First-to-last spacing of inputs and of retrieval peaks.
    pub separation_in: f64,
    pub separation_out: f64,
    /// `|separation_out − separation_in| / separation_in`.
    pub separation_error: f64,
    /// Smallest over largest retrieval peak.
    pub amplitude_ratio: f64,
    /// Every pulse comes back after the same delay to within 10% of the input
    /// spacing, i.e. first in, first out.
    pub in_order: bool,
}

#[derive(Debug, Clone)]
pub struct FifoRun {
    pub trace: TimeTrace,
    pub report: FifoReport,
}

/// Stores a pulse train and locates its retrieval. Peaks are searched
/// between the end of the input zone (train padded by half a pulse) and
/// `1.4T` after the last pulse start.
pub fn multi_pulse_fifo(
    config: &SystemConfig,
    drive: &DriveSpec,
    storage_time: f64,
    t_end: f64,
    output_step: f64,
) -> Result<FifoRun> {
    let mut pulses = drive.pulses.clone();
    if pulses.len() < 2 {
        return Err(Error::invalid("drive", "needs at least two pulses"));
    }
    pulses.sort_by(|a, b| a.start.total_cmp(&b.start));
    let (lo, hi) = drive.span().ok_or_else(|| Error::invalid("drive", "has no pulses"))?;
    let t_p = drive.duration();
    if hi - lo + t_p >= storage_time {
        return Err(Error::ZonesOverlap(format!(
            "pulse train of {:.1} ns does not fit in the storage time {:.1} ns",
            (hi - lo) * 1e9,
            storage_time * 1e9
        )));
    }

    let trace = integrate(config, drive, &IntegrateOptions::until(t_end).output_step(output_step))?;
    let input_peak = trace.e_in.iter().map(|e| e.norm_sqr()).fold(0.0, f64::max).max(
        pulses.iter().map(|p| p.value(p.center(), Side::Right).norm_sqr()).fold(0.0, f64::max),
    );
    let smooth = ((0.25 * t_p / output_step).round() as usize).max(1);
    let window = (hi + 0.5 * t_p, pulses.last().map_or(hi, |p| p.start) + 1.4 * storage_time);
    let mut peaks = detect_peaks(&trace.t, &trace.intensity, smooth, window.0, window.1, 0.01 * input_peak);
    if peaks.len() < pulses.len() {
        return Err(Error::UnresolvablePeaks(format!(
            "found {} retrieval peaks for {} pulses",
            peaks.len(),
            pulses.len()
        )));
    }
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
    peaks.truncate(pulses.len());
    peaks.sort_by(|a, b| a.0.total_cmp(&b.0));

    let input_centers: Vec<f64> = pulses.iter().map(|p| p.center()).collect();
    let peak_times: Vec<f64> = peaks.iter().map(|p| p.0).collect();
    let peak_values: Vec<f64> = peaks.iter().map(|p| p.1).collect();
    let delays: Vec<f64> = peak_times.iter().zip(&input_centers).map(|(o, i)| o - i).collect();
    let separation_in = input_centers[input_centers.len() - 1] - input_centers[0];
    let separation_out = peak_times[peak_times.len() - 1] - peak_times[0];
    let spread = delays.iter().fold(f64::NEG_INFINITY, |m, &d| m.max(d)) - delays.iter().fold(f64::INFINITY, |m, &d| m.min(d));
    let max_peak = peak_values.iter().fold(0.0, |m: f64, &v| m.max(v));
    let min_peak = peak_values.iter().fold(f64::INFINITY, |m: f64, &v| m.min(v));
    let report = FifoReport {
        separation_error: (separation_out - separation_in).abs() / separation_in,
        amplitude_ratio: min_peak / max_peak,
        in_order: spread <= 0.1 * separation_in,
        input_centers,
        peak_times,
        peak_values,
        delays,
        separation_in,
        separation_out,
    };
    Ok(FifoRun { trace, report })
}

impl MemoryParams {
    /// `count` copies of the probe pulse, `separation` apart start to start.
    pub fn pulse_train(&self, count: usize, separation: f64) -> Result<DriveSpec> {
        DriveSpec::new(self.carrier(), (0..count).map(|k| self.pulse(k as f64 * separation)).collect())
    }
}
