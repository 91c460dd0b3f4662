use num_complex::Complex64;

use super::drive::{DriveSpec, Pulse, Side};
use super::trace::TimeTrace;
use crate::error::{Error, Result};
use crate::units::TWO_PI;

/// Linear interpolation of complex samples at `t`.
pub fn sample_complex(t: &[f64], y: &[Complex64], at: f64) -> Result<Complex64> {
    let n = t.len();
    if n == 0 || at < t[0] || at > t[n - 1] {
        return Err(Error::OutOfRange { t: at, max: t.last().copied().unwrap_or(0.0) });
    }
    if n == 1 {
        return Ok(y[0]);
    }
    let k = t.partition_point(|&s| s <= at).clamp(1, n - 1);
    let w = (at - t[k - 1]) / (t[k] - t[k - 1]);
    Ok(y[k - 1] + (y[k] - y[k - 1]) * w)
}

/// Visibility of the fringe `P(φ) = |E_out(t_d) + e^{iφ}·E_ref(t_d)|²`
/// recorded at detection time `t_d` over the phase grid.
///
/// The fringe is fitted with `A + B cos φ + C sin φ` by least squares and the
/// visibility is `√(B²+C²)/A`, equal to `(max − min)/(max + min)` of the
/// underlying sinusoid.
pub fn interference_visibility(trace: &TimeTrace, reference: &DriveSpec, t_detect: f64, phases: &[f64]) -> Result<f64> {
    let (lo, hi) = phases
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &p| (a.min(p), b.max(p)));
    if phases.len() < 3 || hi - lo < TWO_PI * (1.0 - 1e-12) {
        return Err(Error::invalid("phases", "need at least 3 phases spanning 2π"));
    }
    let signal = sample_complex(&trace.t, &trace.e_out, t_detect)?;
    let reference = reference.envelope(t_detect, Side::Right);
    if signal.norm() == 0.0 {
        return Err(Error::UndefinedVisibility("retrieved signal is zero at the detection time".into()));
    }
    if reference.norm() == 0.0 {
        return Err(Error::UndefinedVisibility("reference field is zero at the detection time".into()));
    }

    // Normal equations of the 3-parameter fit.
    let mut ata = nalgebra::Matrix3::<f64>::zeros();
    let mut atb = nalgebra::Vector3::<f64>::zeros();
    for &phi in phases {
        let p = (signal + Complex64::from_polar(1.0, phi) * reference).norm_sqr();
        let row = nalgebra::Vector3::new(1.0, phi.cos(), phi.sin());
        ata += row * row.transpose();
        atb += row * p;
    }
    let coef = ata
        .lu()
        .solve(&atb)
        .ok_or_else(|| Error::UndefinedVisibility("phase grid does not determine the fringe".into()))?;
    if !(coef[0] > 0.0) {
        return Err(Error::UndefinedVisibility("fringe offset is not positive".into()));
    }
    Ok(coef[1].hypot(coef[2]) / coef[0])
}

/// Rectangular reference pulse around `t_detect` whose amplitude matches
/// `|E_out(t_d)|`, the condition for full-contrast fringes.
pub fn balanced_reference(trace: &TimeTrace, carrier: f64, t_detect: f64, width: f64) -> Result<DriveSpec> {
    let amp = sample_complex(&trace.t, &trace.e_out, t_detect)?.norm();
    let start = (t_detect - 0.5 * width).max(0.0);
    DriveSpec::single(carrier, Pulse::rectangular(start, width, amp))
}
