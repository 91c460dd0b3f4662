use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseShape {
    Rectangular,
    /// Gaussian amplitude envelope with FWHM equal to the pulse duration,
    /// truncated at ±3σ.
    Gaussian,
}

/// Which one-sided limit to take at a discontinuity of the envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub shape: PulseShape,
    /// Start of the support (s).
    pub start: f64,
    /// Duration t_p (s): full width for rectangles, FWHM for Gaussians.
    pub duration: f64,
    pub amplitude: Complex64,
}

impl Pulse {
    pub fn rectangular(start: f64, duration: f64, amplitude: f64) -> Self {
        Self { shape: PulseShape::Rectangular, start, duration, amplitude: Complex64::new(amplitude, 0.0) }
    }

    pub fn gaussian(start: f64, duration: f64, amplitude: f64) -> Self {
        Self { shape: PulseShape::Gaussian, start, duration, amplitude: Complex64::new(amplitude, 0.0) }
    }

    pub fn sigma(&self) -> f64 {
        self.duration / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt())
    }

    /// Half-open support `[start, end)`.
    pub fn support(&self) -> (f64, f64) {
        match self.shape {
            PulseShape::Rectangular => (self.start, self.start + self.duration),
            PulseShape::Gaussian => (self.start, self.start + 6.0 * self.sigma()),
        }
    }

    pub fn center(&self) -> f64 {
        let (a, b) = self.support();
        0.5 * (a + b)
    }

    fn profile(&self, t: f64) -> f64 {
        match self.shape {
            PulseShape::Rectangular => 1.0,
            PulseShape::Gaussian => {
                let s = self.sigma();
                let x = (t - self.center()) / s;
                (-0.5 * x * x).exp()
            }
        }
    }

    pub fn value(&self, t: f64, side: Side) -> Complex64 {
        let (a, b) = self.support();
        let inside = match side {
            Side::Right => t >= a && t < b,
            Side::Left => t > a && t <= b,
        };
        if inside {
            self.amplitude * self.profile(t)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// `∫|E(t)|² dt` over the support.
    pub fn energy(&self) -> f64 {
        let a2 = self.amplitude.norm_sqr();
        match self.shape {
            PulseShape::Rectangular => a2 * self.duration,
            PulseShape::Gaussian => {
                let (a, b) = self.support();
                a2 * simpson(|t| self.profile(t).powi(2), a, b, 4000)
            }
        }
    }
}

pub(crate) fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + k as f64 * h);
    }
    sum * h / 3.0
}

/// Input field `E_in(t)·e^{−iω_l t}`: a sum of pulse envelopes sharing one
/// carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveSpec {
    /// Carrier ω_l (rad/s); also the rotating-frame frequency.
    pub carrier: f64,
    pub pulses: Vec<Pulse>,
}

impl DriveSpec {
    pub fn new(carrier: f64, pulses: Vec<Pulse>) -> Result<Self> {
        let d = Self { carrier, pulses };
        d.validate()?;
        Ok(d)
    }

    pub fn none(carrier: f64) -> Self {
        Self { carrier, pulses: vec![] }
    }

    pub fn single(carrier: f64, pulse: Pulse) -> Result<Self> {
        Self::new(carrier, vec![pulse])
    }

    pub fn validate(&self) -> Result<()> {
        for (k, p) in self.pulses.iter().enumerate() {
            if !(p.duration > 0.0 && p.duration.is_finite()) {
                return Err(Error::invalid(&format!("pulses[{k}].duration"), "must be positive"));
            }
            if !p.start.is_finite() || p.start < 0.0 {
                return Err(Error::invalid(&format!("pulses[{k}].start"), "must be ≥ 0"));
            }
        }
        Ok(())
    }

    /// Envelope in the frame rotating at the carrier.
    pub fn envelope(&self, t: f64, side: Side) -> Complex64 {
        self.pulses.iter().map(|p| p.value(t, side)).sum()
    }

    pub fn is_rectangular(&self) -> bool {
        self.pulses.iter().all(|p| p.shape == PulseShape::Rectangular)
    }

    /// Sorted, deduplicated support edges.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .pulses
            .iter()
            .flat_map(|p| {
                let (a, e) = p.support();
                [a, e]
            })
            .collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// `∫|E_in|² dt`. Overlapping pulses are integrated numerically.
    pub fn energy(&self) -> f64 {
        let disjoint = {
            let mut s: Vec<(f64, f64)> = self.pulses.iter().map(|p| p.support()).collect();
            s.sort_by(|a, b| a.0.total_cmp(&b.0));
            s.windows(2).all(|w| w[0].1 <= w[1].0)
        };
        if disjoint {
            return self.pulses.iter().map(Pulse::energy).sum();
        }
        let b = self.breakpoints();
        // Interior samples are smooth; the endpoints take the one-sided limits.
        b.windows(2)
            .map(|w| {
                let (a, e) = (w[0], w[1]);
                let f = |t: f64| {
                    let side = if t <= a { Side::Right } else { Side::Left };
                    self.envelope(t, side).norm_sqr()
                };
                simpson(f, a, e, 4000)
            })
            .sum()
    }

    /// Support hull of all pulses, if any.
    pub fn span(&self) -> Option<(f64, f64)> {
        let b = self.breakpoints();
        Some((*b.first()?, *b.last()?))
    }

    pub fn first_start(&self) -> f64 {
        self.pulses.iter().map(|p| p.start).fold(f64::INFINITY, f64::min)
    }

    /// Longest pulse duration.
    pub fn duration(&self) -> f64 {
        self.pulses.iter().map(|p| p.duration).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangular_edges() {
        let p = Pulse::rectangular(1.0, 2.0, 3.0);
        assert_eq!(p.value(1.0, Side::Right), Complex64::new(3.0, 0.0));
        assert_eq!(p.value(1.0, Side::Left), Complex64::new(0.0, 0.0));
        assert_eq!(p.value(3.0, Side::Left), Complex64::new(3.0, 0.0));
        assert_eq!(p.value(3.0, Side::Right), Complex64::new(0.0, 0.0));
        assert_eq!(p.energy(), 18.0);
    }

    #[test]
    fn gaussian_fwhm_and_energy() {
        let p = Pulse::gaussian(0.0, 20e-9, 1.0);
        let c = p.center();
        let half = p.value(c + 10e-9, Side::Right).re;
        assert!((half - 0.5).abs() < 1e-12);
        // ∫ exp(−x²/σ²) over ±3σ = σ√π·erf(3)
        let erf3 = 0.999_977_909_503_001_4;
        let expected = p.sigma() * std::f64::consts::PI.sqrt() * erf3;
        assert!((p.energy() / expected - 1.0).abs() < 1e-10);
    }

    #[test]
    fn overlapping_pulses_sum() {
        let d = DriveSpec::new(0.0, vec![Pulse::rectangular(0.0, 2.0, 1.0), Pulse::rectangular(1.0, 2.0, 1.0)]).unwrap();
        assert_eq!(d.envelope(1.5, Side::Right), Complex64::new(2.0, 0.0));
        // 1 + 4 + 1
        assert!((d.energy() - 6.0).abs() < 1e-9);
        assert_eq!(d.breakpoints(), vec![0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn rejects_bad_pulses() {
        assert!(DriveSpec::new(0.0, vec![Pulse::rectangular(0.0, 0.0, 1.0)]).is_err());
        assert!(DriveSpec::new(0.0, vec![Pulse::rectangular(-1.0, 1.0, 1.0)]).is_err());
    }
}
