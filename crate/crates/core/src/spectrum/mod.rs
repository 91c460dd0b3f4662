//! Frequency-domain response: self-energy of the magnon comb, reflection
//! amplitude, phase and group delay, eigenmodes and bias-field maps.

mod critical;
mod eigen;
mod sweep;

pub use critical::{critical_kappa, critical_kappa_for, CriticalCoupling};
pub use eigen::eigenmodes;
pub use sweep::{bias_sweep_map, FieldAxis, SweepMap};

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{dynamics_generator, SystemConfig};

/// `Σ(ω) = Σ_j |g_j|² / (ω − ω_j + iκ_j)`.
pub fn self_energy(config: &SystemConfig, omega: f64) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for (j, m) in config.magnons.iter().enumerate() {
        let g2 = m.coupling.norm_sqr();
        if g2 == 0.0 {
            continue;
        }
        let den = Complex64::new(omega - m.omega, m.kappa);
        if den.re == 0.0 && den.im == 0.0 {
            return Err(Error::PoleOnRealAxis { omega, mode: j + 1 });
        }
        sum += g2 / den;
    }
    Ok(sum)
}

/// Reflection amplitude of the probe port at angular frequency `omega`.
///
/// On a lossless pole the amplitude takes its limiting value −1.
pub fn reflection(config: &SystemConfig, omega: f64) -> Complex64 {
    let k0 = config.cavity.kappa_int;
    let k1 = config.cavity.kappa_ext;
    match self_energy(config, omega) {
        Ok(sigma) => {
            let detuning = config.cavity.omega - omega + sigma;
            let i = Complex64::i();
            let den = -detuning + i * (k1 + k0);
            if den.norm() == 0.0 {
                return Complex64::new(-1.0, 0.0);
            }
            (detuning + i * (k1 - k0)) / den
        }
        Err(_) => Complex64::new(-1.0, 0.0),
    }
}

/// Reflection from the steady state of the full linear system,
/// `r = −1 + i√(2κ_a1)·a_ss/E_in` with `(−iω − M)·x_ss = v`.
pub fn reflection_steady_state(config: &SystemConfig, omega: f64) -> Result<Complex64> {
    let gen = dynamics_generator(config, 0.0);
    let n = gen.dim();
    let a = DMatrix::<Complex64>::identity(n, n) * Complex64::new(0.0, -omega) - &gen.matrix;
    let x = a
        .lu()
        .solve(&gen.drive)
        .ok_or_else(|| Error::Numerical(format!("singular steady-state system at ω = {omega}")))?;
    Ok(Complex64::new(-1.0, 0.0) + Complex64::i() * (2.0 * config.cavity.kappa_ext).sqrt() * x[0])
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTrace {
    pub omega: Vec<f64>,
    pub r: Vec<Complex64>,
    pub magnitude: Vec<f64>,
    /// Unwrapped phase θ(ω) (rad).
    pub phase: Vec<f64>,
    /// τ(ω) = dθ/dω (s).
    pub group_delay: Vec<f64>,
}

impl SpectrumTrace {
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    for (k, w) in grid.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(Error::NonMonotoneGrid { index: k + 1 });
        }
    }
    Ok(())
}

/// Unwraps the phase of `r` along the grid. Adjacent samples whose principal
/// phase difference reaches π are ambiguous and rejected.
pub fn unwrap_phase(r: &[Complex64]) -> Result<Vec<f64>> {
    let mut phase = Vec::with_capacity(r.len());
    let Some(first) = r.first() else {
        return Ok(phase);
    };
    let mut acc = first.arg();
    phase.push(acc);
    for (k, w) in r.windows(2).enumerate() {
        let step = (w[1] * w[0].conj()).arg();
        if step.abs() >= PI - 1e-9 {
            return Err(Error::GridTooCoarse { index: k, jump: step });
        }
        acc += step;
        phase.push(acc);
    }
    Ok(phase)
}

/// Derivative on a non-uniform grid: second-order central differences inside,
/// one-sided differences at the ends.
pub fn derivative(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    match n {
        0 => return vec![],
        1 => return vec![0.0],
        _ => {}
    }
    let mut d = vec![0.0; n];
    d[0] = (y[1] - y[0]) / (x[1] - x[0]);
    d[n - 1] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
    for k in 1..n - 1 {
        let h0 = x[k] - x[k - 1];
        let h1 = x[k + 1] - x[k];
        d[k] = (h0 * h0 * (y[k + 1] - y[k]) + h1 * h1 * (y[k] - y[k - 1])) / (h0 * h1 * (h0 + h1));
    }
    d
}

pub fn reflection_trace(config: &SystemConfig, omega_grid: &[f64]) -> Result<SpectrumTrace> {
    check_grid(omega_grid)?;
    let r: Vec<Complex64> = omega_grid.iter().map(|&w| reflection(config, w)).collect();
    let magnitude = r.iter().map(|z| z.norm()).collect();
    let phase = unwrap_phase(&r)?;
    let group_delay = derivative(omega_grid, &phase);
    Ok(SpectrumTrace { omega: omega_grid.to_vec(), r, magnitude, phase, group_delay })
}

/// Evenly spaced grid of `points` samples over `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![lo],
        _ => (0..points).map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64).collect(),
    }
}

/// Indices of resonance dips: strict local minima of `magnitude` lying below
/// `0.95 ×` the local baseline, the maximum over `±window` samples.
pub fn find_dips(magnitude: &[f64], window: usize) -> Vec<usize> {
    let n = magnitude.len();
    let mut dips = Vec::new();
    for k in 1..n.saturating_sub(1) {
        let v = magnitude[k];
        if !(v < magnitude[k - 1] && v < magnitude[k + 1]) {
            continue;
        }
        let lo = k.saturating_sub(window);
        let hi = (k + window).min(n - 1);
        let baseline = magnitude[lo..=hi].iter().cloned().fold(f64::MIN, f64::max);
        if v < 0.95 * baseline {
            dips.push(k);
        }
    }
    dips
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_gradient_system, CavityMode, MagnonMode};
    use crate::units::mhz;
    use proptest::prelude::*;

    fn bare(k0: f64, k1: f64) -> SystemConfig {
        SystemConfig::new(CavityMode::new(mhz(7520.0), k0, k1).unwrap(), vec![]).unwrap()
    }

    #[test]
    fn single_magnon_on_pole() {
        let c = SystemConfig::new(
            CavityMode::new(10.0, 0.1, 0.1).unwrap(),
            vec![MagnonMode::new(10.0, 0.5, 0.2)],
        )
        .unwrap();
        let s = self_energy(&c, 10.0).unwrap();
        assert!((s - Complex64::new(0.0, -0.25 / 0.2)).norm() < 1e-15);
    }

    #[test]
    fn zero_couplings_zero_self_energy() {
        let c = build_gradient_system(8, 10.0, 0.5, 0.0, 0.1, 0.1, 0.1).unwrap();
        assert_eq!(self_energy(&c, 10.3).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn lossless_pole_is_an_error() {
        let c = build_gradient_system(1, 10.0, 0.0, 0.5, 0.0, 0.1, 0.1).unwrap();
        assert!(matches!(self_energy(&c, 10.0), Err(Error::PoleOnRealAxis { mode: 1, .. })));
        assert_eq!(reflection(&c, 10.0), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn self_energy_matches_extended_precision_sum() {
        // Term-by-term re-summation with compensated (double-double) arithmetic.
        let c = build_gradient_system(8, mhz(7520.0), mhz(10.0), mhz(10.0), mhz(0.72), mhz(3.0), mhz(34.4)).unwrap();
        for &f in &[7480.0, 7503.3, 7520.0, 7535.0, 7561.7] {
            let w = mhz(f);
            let (mut re, mut re_c, mut im, mut im_c) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
            for m in &c.magnons {
                let d = w - m.omega;
                let g2 = m.coupling.norm_sqr();
                let den = d * d + m.kappa * m.kappa;
                for (acc, comp, term) in [(&mut re, &mut re_c, g2 * d / den), (&mut im, &mut im_c, -g2 * m.kappa / den)] {
                    let y = term - *comp;
                    let t = *acc + y;
                    *comp = (t - *acc) - y;
                    *acc = t;
                }
            }
            let s = self_energy(&c, w).unwrap();
            let scale = Complex64::new(re, im).norm();
            assert!((s - Complex64::new(re, im)).norm() / scale < 1e-13, "f={f}");
        }
    }

    #[test]
    fn impedance_matched_cavity() {
        let c = bare(mhz(3.0), mhz(3.0));
        assert!(reflection(&c, mhz(7520.0)).norm() < 1e-15);
    }

    #[test]
    fn lossless_is_unitary() {
        let c = build_gradient_system(8, mhz(7520.0), mhz(10.0), mhz(10.0), 0.0, 0.0, mhz(31.4)).unwrap();
        for k in 0..500 {
            let w = mhz(7420.0 + 0.4 * k as f64 + 0.013);
            assert!((reflection(&c, w).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dark_dip_absent_on_resonance() {
        // Two equal spheres on resonance respond like one sphere with √2·g.
        let g = mhz(6.7);
        let c = build_gradient_system(2, mhz(7520.0), 0.0, g, mhz(0.72), mhz(1.0), mhz(2.0)).unwrap();
        let bright = SystemConfig::new(c.cavity, vec![MagnonMode::new(mhz(7520.0), 2f64.sqrt() * g, mhz(0.72))]).unwrap();
        for &f in &[7500.0, 7510.0, 7520.0, 7530.0] {
            let w = mhz(f);
            assert!((reflection(&c, w) - reflection(&bright, w)).norm() < 1e-12);
        }
    }

    #[test]
    fn under_coupled_cavity_single_dip() {
        let c = bare(mhz(3.0), mhz(1.0));
        let grid = linear_grid(mhz(7500.0), mhz(7540.0), 801);
        let t = reflection_trace(&c, &grid).unwrap();
        let dips = find_dips(&t.magnitude, 100);
        assert_eq!(dips.len(), 1);
        assert_eq!(dips[0], 400);
        assert!((t.magnitude[400] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn coarse_grid_detected() {
        let k = mhz(3.0);
        let c = bare(0.0, k);
        let wa = c.cavity.omega;
        let err = reflection_trace(&c, &[wa - k, wa + k]).unwrap_err();
        assert!(matches!(err, Error::GridTooCoarse { index: 0, .. }));
        assert!(matches!(reflection_trace(&c, &[wa, wa]), Err(Error::NonMonotoneGrid { index: 1 })));
    }

    #[test]
    fn derivative_exact_for_quadratics() {
        let x = [0.0, 0.3, 1.0, 1.2, 2.0];
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v * v - v + 2.0).collect();
        let d = derivative(&x, &y);
        for k in 1..4 {
            assert!((d[k] - (6.0 * x[k] - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn lossless_phase_winding() {
        let n = 8;
        let c = build_gradient_system(n, mhz(7520.0), mhz(10.0), mhz(10.0), 0.0, 0.0, mhz(31.4)).unwrap();
        let grid = linear_grid(mhz(-2480.0), mhz(17520.0), 2_000_001);
        let t = reflection_trace(&c, &grid).unwrap();
        let total = t.phase.last().unwrap() - t.phase[0];
        // Far tails of a single Lorentzian each miss ~atan(κ/Δ) of the 2π.
        assert!((total - 2.0 * PI * (n + 1) as f64).abs() < 0.02, "{total}");
    }

    proptest! {
        #[test]
        fn steady_state_matches_closed_form(
            n in 0usize..6, dw in 0.0f64..20.0, g in 0.0f64..15.0, km in 0.01f64..2.0,
            k0 in 0.0f64..5.0, k1 in 0.0f64..40.0, f in -60.0f64..60.0
        ) {
            let c = if n == 0 {
                bare(mhz(k0), mhz(k1))
            } else {
                build_gradient_system(n, mhz(7520.0), mhz(dw), mhz(g), mhz(km), mhz(k0), mhz(k1)).unwrap()
            };
            let w = mhz(7520.0 + f);
            let a = reflection(&c, w);
            let b = reflection_steady_state(&c, w).unwrap();
            prop_assert!((a - b).norm() / a.norm().max(1e-3) < 1e-10);
        }

        #[test]
        fn passivity(
            n in 0usize..9, dw in 0.0f64..20.0, g in 0.0f64..15.0, km in 0.0f64..2.0,
            k0 in 0.0f64..5.0, k1 in 0.0f64..40.0, f in -80.0f64..80.0
        ) {
            let c = if n == 0 {
                bare(mhz(k0), mhz(k1))
            } else {
                build_gradient_system(n, mhz(7520.0), mhz(dw), mhz(g), mhz(km), mhz(k0), mhz(k1)).unwrap()
            };
            prop_assert!(reflection(&c, mhz(7520.0 + f)).norm() <= 1.0 + 1e-12);
        }
    }
}
