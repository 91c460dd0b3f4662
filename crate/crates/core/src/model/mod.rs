//! System parameterization: one cavity mode, N magnon modes, their couplings
//! and damping rates, plus the linear generator shared by every solver.

mod basis;
mod feasibility;
mod generator;
mod physical;

pub use basis::{collective_basis, CollectiveBasis};
pub use feasibility::{feasibility_check, feasibility_check_with, Constraint, FeasibilityReport, MUCH_GREATER_RATIO};
pub use generator::{dynamics_generator, Generator};
pub use physical::{coupling_from_physical, PhysicalCouplingParams};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Cavity mode. The total damping `kappa_int + kappa_ext` is always derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityMode {
    /// Resonance frequency ω_a (rad/s).
    pub omega: f64,
    /// Intrinsic amplitude damping κ_a0 (rad/s).
    pub kappa_int: f64,
    /// External (probe) amplitude coupling κ_a1 (rad/s).
    pub kappa_ext: f64,
}

impl CavityMode {
    pub fn new(omega: f64, kappa_int: f64, kappa_ext: f64) -> Result<Self> {
        let cavity = Self { omega, kappa_int, kappa_ext };
        cavity.validate()?;
        Ok(cavity)
    }

    pub fn kappa_total(&self) -> f64 {
        self.kappa_int + self.kappa_ext
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::invalid("omega_a", "must be positive"));
        }
        check_rate("kappa_a0", self.kappa_int)?;
        check_rate("kappa_a1", self.kappa_ext)
    }
}

/// One magnon (Kittel) mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnonMode {
    /// ω_j (rad/s).
    pub omega: f64,
    /// g_j (rad/s); complex for generality.
    pub coupling: Complex64,
    /// κ_j amplitude damping (rad/s).
    pub kappa: f64,
}

impl MagnonMode {
    pub fn new(omega: f64, coupling: f64, kappa: f64) -> Self {
        Self { omega, coupling: Complex64::new(coupling, 0.0), kappa }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub cavity: CavityMode,
    /// Ordered by physical sphere index (j = 1..N).
    pub magnons: Vec<MagnonMode>,
    pub label: String,
}

impl SystemConfig {
    pub fn new(cavity: CavityMode, magnons: Vec<MagnonMode>) -> Result<Self> {
        let config = Self { cavity, magnons, label: String::new() };
        config.validate()?;
        Ok(config)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn len(&self) -> usize {
        self.magnons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnons.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        self.cavity.validate()?;
        for (j, m) in self.magnons.iter().enumerate() {
            if !m.omega.is_finite() {
                return Err(Error::invalid(&format!("magnons[{}].omega", j + 1), "not finite"));
            }
            if !(m.coupling.re.is_finite() && m.coupling.im.is_finite()) {
                return Err(Error::invalid(&format!("magnons[{}].g", j + 1), "not finite"));
            }
            check_rate(&format!("magnons[{}].kappa", j + 1), m.kappa)?;
        }
        Ok(())
    }

    /// Root-mean-square coupling magnitude, the `g` of a uniform comb.
    pub fn rms_coupling(&self) -> f64 {
        if self.magnons.is_empty() {
            return 0.0;
        }
        (self.magnons.iter().map(|m| m.coupling.norm_sqr()).sum::<f64>() / self.len() as f64).sqrt()
    }

    /// Replaces the external coupling rate, keeping everything else.
    pub fn with_kappa_ext(mut self, kappa_ext: f64) -> Result<Self> {
        check_rate("kappa_a1", kappa_ext)?;
        self.cavity.kappa_ext = kappa_ext;
        Ok(self)
    }

    /// Shifts every magnon frequency by `delta` (rad/s).
    pub fn shifted_magnons(mut self, delta: f64) -> Self {
        for m in &mut self.magnons {
            m.omega += delta;
        }
        self
    }
}

fn check_rate(field: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::invalid(field, format!("rate must be ≥ 0, got {value}")));
    }
    Ok(())
}

/// Centered gradient offset `j − (N+1)/2` for a 1-based index.
pub fn gradient_offset(j: usize, n: usize) -> f64 {
    j as f64 - (n as f64 + 1.0) / 2.0
}

/// N magnons with evenly spaced frequencies `ω_a + (j − (N+1)/2)·Δω_m`, all
/// with coupling `g0` and damping `kappa_m`.
pub fn build_gradient_system(
    n: usize,
    omega_a: f64,
    delta_omega_m: f64,
    g0: f64,
    kappa_m: f64,
    kappa_a0: f64,
    kappa_a1: f64,
) -> Result<SystemConfig> {
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    check_rate("kappa_m", kappa_m)?;
    if !g0.is_finite() || g0 < 0.0 {
        return Err(Error::invalid("g0", format!("must be ≥ 0, got {g0}")));
    }
    if !delta_omega_m.is_finite() || delta_omega_m < 0.0 {
        return Err(Error::invalid("delta_omega_m", format!("must be ≥ 0, got {delta_omega_m}")));
    }
    let cavity = CavityMode::new(omega_a, kappa_a0, kappa_a1)?;
    let magnons = (1..=n)
        .map(|j| MagnonMode::new(omega_a + gradient_offset(j, n) * delta_omega_m, g0, kappa_m))
        .collect();
    SystemConfig::new(cavity, magnons)
}

/// Bias field layout `H_j = H_0 + (j − (N+1)/2)·ΔH`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldMap {
    /// γ (rad s⁻¹ Oe⁻¹).
    pub gamma: f64,
    /// Common bias H_0 (Oe).
    pub h0: f64,
    /// Per-sphere step ΔH (Oe).
    pub delta_h: f64,
}

impl FieldMap {
    pub fn new(gamma: f64, h0: f64, delta_h: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::invalid("gamma", "must be positive"));
        }
        Ok(Self { gamma, h0, delta_h })
    }

    pub fn field(&self, j: usize, n: usize) -> Result<f64> {
        if j == 0 || j > n {
            return Err(Error::IndexOutOfRange { index: j, count: n });
        }
        Ok(self.h0 + gradient_offset(j, n) * self.delta_h)
    }
}

/// Magnon frequency `γ·H_j` of sphere `j` (1-based) out of `n`.
pub fn field_to_frequency(map: &FieldMap, j: usize, n: usize) -> Result<f64> {
    Ok(map.gamma * map.field(j, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{gamma_per_oe, mhz, TWO_PI};

    #[test]
    fn eight_sphere_layout() {
        let wa = mhz(7520.0);
        let dw = mhz(10.0);
        let c = build_gradient_system(8, wa, dw, mhz(10.0), mhz(0.72), mhz(3.0), mhz(34.0)).unwrap();
        assert_eq!(c.len(), 8);
        assert!((c.magnons[0].omega - (wa - 3.5 * dw)).abs() < 1e-3);
        assert!((c.magnons[7].omega - (wa + 3.5 * dw)).abs() < 1e-3);
        for m in &c.magnons {
            assert_eq!(m.coupling, Complex64::new(mhz(10.0), 0.0));
            assert_eq!(m.kappa, mhz(0.72));
        }
    }

    #[test]
    fn single_and_degenerate() {
        let wa = mhz(7520.0);
        let one = build_gradient_system(1, wa, mhz(10.0), 1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(one.magnons[0].omega, wa);
        let two = build_gradient_system(2, wa, 0.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(two.magnons[0].omega, wa);
        assert_eq!(two.magnons[1].omega, wa);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(build_gradient_system(0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0), Err(Error::EmptySystem));
        assert!(matches!(
            build_gradient_system(2, 1.0, 1.0, 1.0, -1.0, 0.0, 0.0),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(build_gradient_system(2, 1.0, 1.0, 1.0, 0.0, -0.1, 0.0).is_err());
        assert!(build_gradient_system(2, 1.0, 1.0, 1.0, 0.0, 0.0, -0.1).is_err());
    }

    #[test]
    fn field_map_frequencies() {
        let gamma = gamma_per_oe(2.8);
        let map = FieldMap::new(gamma, 2687.0, 0.0).unwrap();
        let w = field_to_frequency(&map, 3, 8).unwrap();
        assert!((w / (TWO_PI * 1e9) - 7.5236).abs() < 1e-9);

        let off = FieldMap::new(gamma, 0.0, 0.0).unwrap();
        assert_eq!(field_to_frequency(&off, 1, 8).unwrap(), 0.0);

        let unit = FieldMap::new(gamma, 1.0, 0.0).unwrap();
        assert!((field_to_frequency(&unit, 1, 1).unwrap() - mhz(2.8)).abs() < 1e-6);

        assert_eq!(
            field_to_frequency(&map, 9, 8),
            Err(Error::IndexOutOfRange { index: 9, count: 8 })
        );
        assert!(field_to_frequency(&map, 0, 8).is_err());
        assert!(FieldMap::new(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn gradient_field_steps() {
        let map = FieldMap::new(1.0, 100.0, -14.0).unwrap();
        assert_eq!(map.field(1, 2).unwrap(), 107.0);
        assert_eq!(map.field(2, 2).unwrap(), 93.0);
    }
}
