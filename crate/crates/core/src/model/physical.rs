use crate::error::{Error, Result};
use crate::units::{GAMMA_E, HBAR, MU0};

/// Inputs of the magnetic-dipole coupling between a spin ensemble and a cavity
/// mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalCouplingParams {
    /// Spatial overlap and polarization factor, 0 ≤ η ≤ 1.
    pub eta: f64,
    /// Resonance frequency (rad/s).
    pub omega: f64,
    /// Cavity modal volume (m³).
    pub modal_volume: f64,
    /// Total number of spins in the sample.
    pub spin_count: f64,
    /// Spin number per site.
    pub spin: f64,
    /// Gyromagnetic ratio (rad s⁻¹ T⁻¹).
    pub gamma: f64,
}

impl PhysicalCouplingParams {
    pub fn new(eta: f64, omega: f64, modal_volume: f64, spin_count: f64, spin: f64) -> Self {
        Self { eta, omega, modal_volume, spin_count, spin, gamma: GAMMA_E }
    }
}

/// `g = (η/2)·γ·√(ħ·ω·μ0/V_a)·√(2·N_spins·s)`.
pub fn coupling_from_physical(p: &PhysicalCouplingParams) -> Result<f64> {
    if !(p.modal_volume > 0.0) {
        return Err(Error::invalid("V_a", "modal volume must be positive"));
    }
    if !(0.0..=1.0).contains(&p.eta) {
        return Err(Error::invalid("eta", format!("must lie in [0, 1], got {}", p.eta)));
    }
    if !(p.spin_count >= 0.0) {
        return Err(Error::invalid("N_spins", "must be ≥ 0"));
    }
    if !(p.spin >= 0.0) || !(p.omega >= 0.0) || !(p.gamma > 0.0) {
        return Err(Error::invalid("spin/omega/gamma", "must be non-negative"));
    }
    let vacuum_field = (HBAR * p.omega * MU0 / p.modal_volume).sqrt();
    Ok(0.5 * p.eta * p.gamma * vacuum_field * (2.0 * p.spin_count * p.spin).sqrt())
}
