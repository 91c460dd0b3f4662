use std::f64::consts::PI;
use std::fmt;

use super::SystemConfig;

/// Ratio at which "much greater than" is considered satisfied.
pub const MUCH_GREATER_RATIO: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`; infinite when only `rhs` is zero.
    pub ratio: f64,
    pub required_ratio: f64,
    pub pass: bool,
}

impl Constraint {
    fn new(name: &'static str, lhs: f64, rhs: f64, required_ratio: f64) -> Self {
        let ratio = if rhs == 0.0 && lhs == 0.0 { 0.0 } else { lhs / rhs };
        Self { name, lhs, rhs, ratio, required_ratio, pass: lhs >= required_ratio * rhs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub constraints: Vec<Constraint>,
    pub cooperativity: f64,
}

impl FeasibilityReport {
    pub fn get(&self, name: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.name == name)
    }

    pub fn all_pass(&self) -> bool {
        self.constraints.iter().all(|c| c.pass)
    }
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<28} {:>14} {:>14} {:>12} {:>8}  result", "constraint", "lhs", "rhs", "ratio", "needs")?;
        for c in &self.constraints {
            writeln!(
                f,
                "{:<28} {:>14.6e} {:>14.6e} {:>12.4} {:>8}  {}",
                c.name,
                c.lhs,
                c.rhs,
                c.ratio,
                format!("≥{}", c.required_ratio),
                if c.pass { "PASS" } else { "FAIL" }
            )?;
        }
        write!(f, "cooperativity C = {:.4}", self.cooperativity)
    }
}

/// Design constraints of a gradient memory, with "≫" read as
/// [`MUCH_GREATER_RATIO`].
pub fn feasibility_check(config: &SystemConfig, delta_omega: f64) -> FeasibilityReport {
    feasibility_check_with(config, delta_omega, MUCH_GREATER_RATIO)
}

/// Same as [`feasibility_check`] with an explicit "≫" ratio.
pub fn feasibility_check_with(config: &SystemConfig, delta_omega: f64, much_greater: f64) -> FeasibilityReport {
    let n = config.len() as f64;
    let g = config.rms_coupling();
    let kappa_m = config.magnons.iter().map(|m| m.kappa).fold(0.0, f64::max);
    let kappa_a0 = config.cavity.kappa_int;
    let kappa_a1 = config.cavity.kappa_ext;
    let sqrt_n = n.sqrt();

    let cooperativity = if g == 0.0 {
        0.0
    } else {
        g * g / (kappa_a0 * kappa_m)
    };

    let constraints = vec![
        Constraint::new("delta_omega >= 2pi*kappa_m", delta_omega, 2.0 * PI * kappa_m, 1.0),
        Constraint::new("g >= sqrt(N)*delta_omega", g, sqrt_n * delta_omega, 1.0),
        Constraint::new(
            "g >> (2pi/sqrt(N))*kappa_a0",
            g,
            if n > 0.0 { 2.0 * PI / sqrt_n * kappa_a0 } else { f64::INFINITY },
            much_greater,
        ),
        Constraint::new("kappa_a1 >> N*delta_omega", kappa_a1, n * delta_omega, much_greater),
        Constraint::new("C >> 4pi^2", cooperativity, 4.0 * PI * PI, much_greater),
    ];
    FeasibilityReport { constraints, cooperativity }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_gradient_system;
    use crate::units::mhz;

    fn experiment() -> SystemConfig {
        build_gradient_system(8, mhz(7520.0), mhz(10.0), mhz(10.0), mhz(0.72), mhz(3.0), mhz(34.42)).unwrap()
    }

    #[test]
    fn experiment_cooperativity() {
        let r = feasibility_check(&experiment(), mhz(10.0));
        // 100 / (3 · 0.72)
        assert!((r.cooperativity - 46.296_296).abs() < 1e-4);
        let c = r.get("C >> 4pi^2").unwrap();
        assert!(!c.pass);
        assert!((c.ratio - 46.296_296 / (4.0 * PI * PI)).abs() < 1e-6);

        let lenient = feasibility_check_with(&experiment(), mhz(10.0), 1.0);
        assert!(lenient.get("C >> 4pi^2").unwrap().pass);
    }

    #[test]
    fn lossless_magnons_pass_spacing() {
        let c = build_gradient_system(8, mhz(7520.0), mhz(10.0), mhz(10.0), 0.0, mhz(3.0), mhz(34.0)).unwrap();
        let r = feasibility_check(&c, mhz(10.0));
        assert!(r.get("delta_omega >= 2pi*kappa_m").unwrap().pass);
    }

    #[test]
    fn uncoupled_single_sphere_fails_coupling_constraints() {
        let c = build_gradient_system(1, mhz(7520.0), mhz(10.0), 0.0, mhz(0.72), mhz(3.0), mhz(3.0)).unwrap();
        let r = feasibility_check(&c, mhz(10.0));
        for name in ["g >= sqrt(N)*delta_omega", "g >> (2pi/sqrt(N))*kappa_a0", "C >> 4pi^2"] {
            assert!(!r.get(name).unwrap().pass, "{name}");
        }
        assert!(!r.all_pass());
    }
}
