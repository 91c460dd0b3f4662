use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::TWO_PI;

/// Rephasing time `T = 2π/Δω`.
pub fn storage_time(delta_omega: f64) -> Result<f64> {
    if !(delta_omega > 0.0 && delta_omega.is_finite()) {
        return Err(Error::DegenerateGradient);
    }
    Ok(TWO_PI / delta_omega)
}

/// Extra cavity decay `πg²/Δω` caused by absorption into the comb.
pub fn enhanced_decay_rate(g: f64, delta_omega: f64) -> f64 {
    std::f64::consts::PI * g * g / delta_omega
}

/// Time of the revival maximum, `T + 1/(κ_a + πg²/Δω)`.
pub fn revival_peak_time(g: f64, delta_omega: f64, kappa_a: f64) -> Result<f64> {
    Ok(storage_time(delta_omega)? + 1.0 / (kappa_a + enhanced_decay_rate(g, delta_omega)))
}

/// Cavity amplitude from the Dirac-comb approximation of the memory kernel,
/// valid on `[0, 2T]`.
///
/// `kappa_a` is the total cavity damping and `omega_a` the cavity frequency in
/// whatever frame `a0` is given in. Up to T the cavity decays at the enhanced
/// rate; on `[T, 2T]` the first echo grows linearly and decays again.
pub fn asymptotic_solution(
    g: f64,
    delta_omega: f64,
    kappa_a: f64,
    kappa_m: f64,
    omega_a: f64,
    a0: Complex64,
    t: f64,
) -> Result<Complex64> {
    let period = storage_time(delta_omega)?;
    if !(0.0..=2.0 * period).contains(&t) {
        return Err(Error::OutOfRange { t, max: 2.0 * period });
    }
    let gamma = Complex64::new(kappa_a + enhanced_decay_rate(g, delta_omega), omega_a);
    if t < period {
        return Ok(a0 * (-gamma * t).exp());
    }
    let s = t - period;
    let carry = (Complex64::new(-kappa_m, -omega_a) * period).exp();
    Ok(-2.0 * enhanced_decay_rate(g, delta_omega) * a0 * carry * s * (-gamma * s).exp())
}
