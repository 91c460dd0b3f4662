use nalgebra::DVector;
use num_complex::Complex64;

use super::drive::{DriveSpec, Side};
use crate::error::{Error, Result};

/// Sampled time evolution in the frame rotating at the drive carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeTrace {
    pub t: Vec<f64>,
    pub cavity: Vec<Complex64>,
    /// `magnons[k][j]` is m_{j+1}(t_k).
    pub magnons: Vec<Vec<Complex64>>,
    pub e_in: Vec<Complex64>,
    /// `E_out = −E_in + i√(2κ_a1)·a`.
    pub e_out: Vec<Complex64>,
    /// Detected intensity `2κ_a1·|a|²`.
    pub intensity: Vec<f64>,
    pub kappa_ext: f64,
}

impl TimeTrace {
    pub fn from_states(t: Vec<f64>, states: &[DVector<Complex64>], drive: &DriveSpec, kappa_ext: f64) -> Self {
        let coupling = Complex64::i() * (2.0 * kappa_ext).sqrt();
        let cavity: Vec<Complex64> = states.iter().map(|x| x[0]).collect();
        let magnons = states.iter().map(|x| x.iter().skip(1).copied().collect()).collect();
        let e_in: Vec<Complex64> = t.iter().map(|&s| drive.envelope(s, Side::Right)).collect();
        let e_out = e_in.iter().zip(&cavity).map(|(e, a)| -e + coupling * a).collect();
        let intensity = cavity.iter().map(|a| 2.0 * kappa_ext * a.norm_sqr()).collect();
        Self { t, cavity, magnons, e_in, e_out, intensity, kappa_ext }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn modes(&self) -> usize {
        self.magnons.first().map_or(0, Vec::len)
    }

    pub fn t_end(&self) -> f64 {
        self.t.last().copied().unwrap_or(0.0)
    }

    /// Full state vector `(a, m_1, …)` at sample `k`.
    pub fn state(&self, k: usize) -> Vec<Complex64> {
        std::iter::once(self.cavity[k]).chain(self.magnons[k].iter().copied()).collect()
    }

    /// Largest state amplitude over the whole trace.
    pub fn max_amplitude(&self) -> f64 {
        (0..self.len())
            .flat_map(|k| self.state(k))
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `max_k ‖x_k − y_k‖_∞ / max_k ‖y_k‖_∞` with `other` as reference.
    pub fn max_relative_difference(&self, other: &TimeTrace) -> Result<f64> {
        if self.len() != other.len() || self.modes() != other.modes() {
            return Err(Error::DimensionMismatch { expected: other.len(), found: self.len() });
        }
        let scale = other.max_amplitude();
        let diff = (0..self.len())
            .flat_map(|k| self.state(k).into_iter().zip(other.state(k)).map(|(a, b)| (a - b).norm()).collect::<Vec<_>>())
            .fold(0.0, f64::max);
        Ok(if scale > 0.0 { diff / scale } else { diff })
    }
}

/// Trapezoid integral of samples `y(t)` over `[lo, hi]`, with linear
/// interpolation at window edges that fall between samples.
pub fn integrate_window(t: &[f64], y: &[f64], lo: f64, hi: f64) -> f64 {
    let n = t.len();
    if n < 2 || hi <= lo {
        return 0.0;
    }
    let lo = lo.max(t[0]);
    let hi = hi.min(t[n - 1]);
    if hi <= lo {
        return 0.0;
    }
    let interp = |s: f64| -> f64 {
        let k = t.partition_point(|&x| x <= s).clamp(1, n - 1);
        let (t0, t1) = (t[k - 1], t[k]);
        let w = if t1 > t0 { (s - t0) / (t1 - t0) } else { 0.0 };
        y[k - 1] + w * (y[k] - y[k - 1])
    };
    let mut pts: Vec<(f64, f64)> = vec![(lo, interp(lo))];
    pts.extend(t.iter().zip(y).filter(|(&s, _)| s > lo && s < hi).map(|(&s, &v)| (s, v)));
    pts.push((hi, interp(hi)));
    pts.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum()
}
