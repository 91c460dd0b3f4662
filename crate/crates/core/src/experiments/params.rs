use crate::dynamics::{
    integrate, measure_efficiency, storage_time, DriveSpec, EfficiencyReport, IntegrateOptions, Pulse, PulseShape,
    TimeTrace,
};
use crate::error::{Error, Result};
use crate::model::{build_gradient_system, SystemConfig};
use crate::spectrum::critical_kappa_for;
use crate::units::{mhz, ns};

/// External coupling policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    /// `κ_a1 = κ_a0 + πg²/Δω`, re-derived whenever g or Δω changes.
    Critical,
    /// Pinned κ_a1 (rad/s).
    Fixed(f64),
}

/// A uniform gradient memory and its probe pulse. Rates and frequencies in
/// rad/s, times in s.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryParams {
    pub n: usize,
    pub omega_a: f64,
    pub delta_omega: f64,
    pub g: f64,
    pub kappa_m: f64,
    pub kappa_a0: f64,
    pub coupling: Coupling,
    /// Carrier offset from ω_a.
    pub detuning: f64,
    pub shape: PulseShape,
    pub t_p: f64,
    pub amplitude: f64,
    pub output_step: f64,
    /// Simulated span in units of the storage time.
    pub periods: f64,
}

impl Default for MemoryParams {
    fn default() -> Self {
        Self::experiment()
    }
}

impl MemoryParams {
    /// Eight spheres, g/2π = Δω/2π = 10 MHz, κ_a0/2π = 3 MHz,
    /// κ_m/2π = 0.72 MHz, critical coupling, resonant 20 ns rectangle.
    pub fn experiment() -> Self {
        Self {
            n: 8,
            omega_a: mhz(7520.0),
            delta_omega: mhz(10.0),
            g: mhz(10.0),
            kappa_m: mhz(0.72),
            kappa_a0: mhz(3.0),
            coupling: Coupling::Critical,
            detuning: 0.0,
            shape: PulseShape::Rectangular,
            t_p: ns(20.0),
            amplitude: 1.0,
            output_step: ns(0.1),
            periods: 2.5,
        }
    }

    pub fn kappa_ext(&self) -> Result<f64> {
        match self.coupling {
            Coupling::Critical => Ok(critical_kappa_for(self.g, self.delta_omega, self.kappa_a0)?.kappa_ext),
            Coupling::Fixed(k) => Ok(k),
        }
    }

    pub fn config(&self) -> Result<SystemConfig> {
        build_gradient_system(
            self.n,
            self.omega_a,
            self.delta_omega,
            self.g,
            self.kappa_m,
            self.kappa_a0,
            self.kappa_ext()?,
        )
    }

    pub fn carrier(&self) -> f64 {
        self.omega_a + self.detuning
    }

    pub fn pulse(&self, start: f64) -> Pulse {
        match self.shape {
            PulseShape::Rectangular => Pulse::rectangular(start, self.t_p, self.amplitude),
            PulseShape::Gaussian => Pulse::gaussian(start, self.t_p, self.amplitude),
        }
    }

    pub fn drive(&self) -> Result<DriveSpec> {
        DriveSpec::single(self.carrier(), self.pulse(0.0))
    }

    pub fn storage_time(&self) -> Result<f64> {
        storage_time(self.delta_omega)
    }

    pub fn t_end(&self) -> Result<f64> {
        Ok(self.periods * self.storage_time()?)
    }

    pub fn run(&self) -> Result<MemoryRun> {
        let t = self.storage_time()?;
        run_memory(&self.config()?, &self.drive()?, t, self.t_end()?, self.output_step)
    }
}

#[derive(Debug, Clone)]
pub struct MemoryRun {
    pub config: SystemConfig,
    pub drive: DriveSpec,
    pub storage_time: f64,
    pub trace: TimeTrace,
    pub report: EfficiencyReport,
}

/// Integrates `drive` through `config` and measures the retrieval against
/// the expected storage time.
pub fn run_memory(
    config: &SystemConfig,
    drive: &DriveSpec,
    storage_time: f64,
    t_end: f64,
    output_step: f64,
) -> Result<MemoryRun> {
    if !(output_step > 0.0) {
        return Err(Error::invalid("output_step", "must be positive"));
    }
    let trace = integrate(config, drive, &IntegrateOptions::until(t_end).output_step(output_step))?;
    let report = measure_efficiency(&trace, drive, storage_time)?;
    Ok(MemoryRun { config: config.clone(), drive: drive.clone(), storage_time, trace, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_config() {
        let p = MemoryParams::experiment();
        let c = p.config().unwrap();
        assert_eq!(c.len(), 8);
        let expected = mhz(3.0 + 10.0 * std::f64::consts::PI);
        assert!((c.cavity.kappa_ext - expected).abs() < 1e-6);
        assert!((p.storage_time().unwrap() - ns(100.0)).abs() < 1e-18);
    }

    #[test]
    fn retrieval_near_storage_time() {
        let run = MemoryParams::experiment().run().unwrap();
        let t = run.report.storage_delay;
        assert!((t - ns(100.0)).abs() <= ns(10.1), "peak at {t}");
        assert!(run.report.zeta > 0.2 && run.report.zeta < 0.45);
    }

    #[test]
    fn pinned_coupling() {
        let p = MemoryParams { coupling: Coupling::Fixed(mhz(3.0)), ..MemoryParams::experiment() };
        assert_eq!(p.kappa_ext().unwrap(), mhz(3.0));
    }
}
