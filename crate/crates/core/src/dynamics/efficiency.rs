use std::fmt;

use super::asymptotic::{enhanced_decay_rate, storage_time};
use super::drive::DriveSpec;
use super::trace::{integrate_window, TimeTrace};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub start: f64,
    pub end: f64,
}

impl Window {
    pub fn new(start: f64, end: f64) -> Self {
        Self { start, end }
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t <= self.end
    }

    /// Windows that only touch (to within rounding) do not overlap.
    fn overlaps(&self, other: &Window) -> bool {
        let eps = 1e-9 * (self.end - self.start).abs().max((other.end - other.start).abs());
        self.start < other.end - eps && other.start < self.end - eps
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.3} ns, {:.3} ns]", self.start * 1e9, self.end * 1e9)
    }
}

/// Energy bookkeeping of a storage/retrieval run.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyReport {
    /// Zone-II detected energy over input energy.
    pub zeta: f64,
    /// `∫|E_in|² dt`.
    pub input_energy: f64,
    pub window_in: Window,
    pub window_out: Window,
    /// Zones I, II, III.
    pub zones: [Window; 3],
    /// `∫2κ_a1|a|² dt` per zone.
    pub zone_energies: [f64; 3],
    /// `∫|E_out|² dt` per zone (includes the promptly reflected input in Zone I).
    pub output_energies: [f64; 3],
    /// Time of the largest detected intensity inside Zone II.
    pub peak_time: f64,
    /// `peak_time` measured from the centre of the first pulse.
    pub storage_delay: f64,
}

impl EfficiencyReport {
    /// Zone-III over Zone-II detected energy.
    pub fn second_echo_ratio(&self) -> f64 {
        self.zone_energies[2] / self.zone_energies[1]
    }
}

/// Splits the trace into the input zone (drive support padded by half the
/// pulse length), the first echo `[0.6T, 1.4T]` and the second echo
/// `[1.6T, 2.4T]`, the latter two measured from the first pulse start, and
/// integrates the detected intensity in each.
pub fn measure_efficiency(trace: &TimeTrace, drive: &DriveSpec, t_expected: f64) -> Result<EfficiencyReport> {
    let (lo, hi) = drive.span().ok_or_else(|| Error::invalid("drive", "has no pulses"))?;
    if !(t_expected > 0.0) {
        return Err(Error::invalid("t_expected", "must be positive"));
    }
    let t0 = drive.first_start();
    let first_center = drive
        .pulses
        .iter()
        .min_by(|a, b| a.start.total_cmp(&b.start))
        .map_or(t0, |p| p.center());
    let pad = 0.5 * drive.duration();
    let zones = [
        Window::new(lo - pad, hi + pad),
        Window::new(t0 + 0.6 * t_expected, t0 + 1.4 * t_expected),
        Window::new(t0 + 1.6 * t_expected, t0 + 2.4 * t_expected),
    ];
    if zones[0].overlaps(&zones[1]) {
        return Err(Error::ZonesOverlap(format!("input zone {} runs into retrieval zone {}", zones[0], zones[1])));
    }
    let required = t0 + 1.6 * t_expected;
    if trace.t_end() < required {
        return Err(Error::TraceTooShort { covered: trace.t_end(), required });
    }
    let input_energy = drive.energy();
    if !(input_energy > 0.0) {
        return Err(Error::invalid("drive", "input energy is zero"));
    }
    let out_power: Vec<f64> = trace.e_out.iter().map(|z| z.norm_sqr()).collect();
    let zone_energies = zones.map(|w| integrate_window(&trace.t, &trace.intensity, w.start, w.end));
    let output_energies = zones.map(|w| integrate_window(&trace.t, &out_power, w.start, w.end));

    let peak_time = trace
        .t
        .iter()
        .zip(&trace.intensity)
        .filter(|(t, _)| zones[1].contains(**t))
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map_or(f64::NAN, |(t, _)| *t);

    Ok(EfficiencyReport {
        zeta: zone_energies[1] / input_energy,
        input_energy,
        window_in: zones[0],
        window_out: zones[1],
        zones,
        zone_energies,
        output_energies,
        peak_time,
        storage_delay: peak_time - first_center,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormEfficiency {
    pub zeta: f64,
    /// `F = Δω/2κ_m`.
    pub finesse: f64,
    /// `C = g²/(κ_m κ_a0)`.
    pub cooperativity: f64,
    /// `G = (π/2)·C/F`.
    pub gain: f64,
}

/// Asymptotic retrieval efficiency
/// `ζ ≈ e^{−2π/F}·[1 − 1/(t_p κ_a0 (1+G))]·(G/(1+G))²` at critical coupling.
pub fn efficiency_closed_form(
    g: f64,
    delta_omega: f64,
    kappa_m: f64,
    kappa_a0: f64,
    t_p: f64,
) -> Result<ClosedFormEfficiency> {
    storage_time(delta_omega)?;
    if !(kappa_m > 0.0) || !(kappa_a0 > 0.0) {
        return Err(Error::invalid("kappa", "κ_m and κ_a0 must be positive"));
    }
    let product = t_p * (kappa_a0 + enhanced_decay_rate(g, delta_omega));
    if !(product > 1.0) {
        return Err(Error::PulseTooShort { product });
    }
    let finesse = delta_omega / (2.0 * kappa_m);
    let cooperativity = g * g / (kappa_m * kappa_a0);
    let gain = 0.5 * std::f64::consts::PI * cooperativity / finesse;
    let ratio = gain / (1.0 + gain);
    let zeta = (-crate::units::TWO_PI / finesse).exp() * (1.0 - 1.0 / (t_p * kappa_a0 * (1.0 + gain))) * ratio * ratio;
    Ok(ClosedFormEfficiency { zeta, finesse, cooperativity, gain })
}
