use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::SystemConfig;

/// External coupling rates that impedance-match a gradient comb.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalCoupling {
    /// `κ_a0 + π|g|²/Δω`: zero reflection of the input pulse.
    pub kappa_ext: f64,
    /// `π|g|²/Δω`: constant phase slope in the lossless limit.
    pub kappa_ext_lossless: f64,
}

/// Critical external coupling for a comb of spacing `delta_omega`; `g` is the
/// RMS coupling of `config`.
pub fn critical_kappa(config: &SystemConfig, delta_omega: f64) -> Result<CriticalCoupling> {
    critical_kappa_for(config.rms_coupling(), delta_omega, config.cavity.kappa_int)
}

pub fn critical_kappa_for(g: f64, delta_omega: f64, kappa_int: f64) -> Result<CriticalCoupling> {
    if delta_omega == 0.0 {
        return Err(Error::DegenerateGradient);
    }
    let lossless = PI * g * g / delta_omega.abs();
    Ok(CriticalCoupling { kappa_ext: kappa_int + lossless, kappa_ext_lossless: lossless })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_gradient_system;
    use crate::units::{mhz, to_mhz};

    #[test]
    fn experiment_value() {
        let c = build_gradient_system(8, mhz(7520.0), mhz(10.0), mhz(10.0), mhz(0.72), mhz(3.0), 0.0).unwrap();
        let k = critical_kappa(&c, mhz(10.0)).unwrap();
        assert!((to_mhz(k.kappa_ext) - (3.0 + 10.0 * PI)).abs() < 1e-9);
        assert!((to_mhz(k.kappa_ext) - 34.42).abs() < 5e-3);
        assert!((to_mhz(k.kappa_ext_lossless) - 10.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn uncoupled_and_degenerate() {
        let c = build_gradient_system(8, mhz(7520.0), mhz(10.0), 0.0, mhz(0.72), mhz(3.0), 0.0).unwrap();
        assert_eq!(critical_kappa(&c, mhz(10.0)).unwrap().kappa_ext, mhz(3.0));
        assert_eq!(critical_kappa(&c, 0.0), Err(Error::DegenerateGradient));
    }
}
