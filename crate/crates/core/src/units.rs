//! Conversions between the angular SI units used internally and the cyclic
//! MHz / ns / Oe units used at the I/O boundary.

use std::f64::consts::PI;

pub const TWO_PI: f64 = 2.0 * PI;

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permeability (T·m/A).
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Electron gyromagnetic ratio (rad s⁻¹ T⁻¹).
pub const GAMMA_E: f64 = 1.760_859_630_23e11;
/// Gyromagnetic ratio used for field-to-frequency maps, γ/2π = 2.8 MHz/Oe.
pub const GAMMA_MHZ_PER_OE: f64 = 2.8;

/// Cyclic MHz to angular rad/s.
pub fn mhz(f: f64) -> f64 {
    TWO_PI * f * 1e6
}

/// Angular rad/s to cyclic MHz.
pub fn to_mhz(omega: f64) -> f64 {
    omega / (TWO_PI * 1e6)
}

pub fn ns(t: f64) -> f64 {
    t * 1e-9
}

pub fn to_ns(t: f64) -> f64 {
    t * 1e9
}

/// γ in rad s⁻¹ Oe⁻¹ from a cyclic MHz/Oe value.
pub fn gamma_per_oe(mhz_per_oe: f64) -> f64 {
    mhz(mhz_per_oe)
}
