use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::params::{run_memory, MemoryParams, MemoryRun};
use crate::dynamics::integrate_window;
use crate::error::Result;
use crate::model::{MagnonMode, SystemConfig};
use crate::spectrum::{linear_grid, reflection_trace, SpectrumTrace};

#[derive(Debug, Clone)]
pub struct CompareCase {
    pub config: SystemConfig,
    pub spectrum: SpectrumTrace,
    pub run: MemoryRun,
    /// Detected energy after the input zone but outside the retrieval zone.
    pub ripple_energy: f64,
}

#[derive(Debug, Clone)]
pub struct CompareResult {
    pub uniform: CompareCase,
    pub random: CompareCase,
    /// Uniform over random Zone-II energy.
    pub zone2_ratio: f64,
}

/// Same span as the uniform comb: outermost frequencies kept, interior ones
/// drawn uniformly inside the span and sorted.
pub fn random_comb(params: &MemoryParams, seed: u64) -> Result<SystemConfig> {
    let uniform = params.config()?;
    let n = uniform.len();
    if n < 3 {
        return Ok(uniform);
    }
    let lo = uniform.magnons[0].omega;
    let hi = uniform.magnons[n - 1].omega;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut interior: Vec<f64> = (0..n - 2).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect();
    interior.sort_by(f64::total_cmp);
    let mut config = uniform.clone();
    for (m, omega) in config.magnons[1..n - 1].iter_mut().zip(interior) {
        *m = MagnonMode { omega, ..*m };
    }
    Ok(config.with_label("random"))
}

fn case(params: &MemoryParams, config: SystemConfig) -> Result<CompareCase> {
    let half_span = (0.5 * params.n as f64 + 3.0) * params.delta_omega;
    let grid = linear_grid(params.omega_a - half_span, params.omega_a + half_span, 20_001);
    let spectrum = reflection_trace(&config, &grid)?;
    let run = run_memory(&config, &params.drive()?, params.storage_time()?, params.t_end()?, params.output_step)?;
    let tail = integrate_window(&run.trace.t, &run.trace.intensity, run.report.zones[0].end, run.trace.t_end());
    let ripple_energy = (tail - run.report.zone_energies[1]).max(0.0);
    Ok(CompareCase { config, spectrum, run, ripple_energy })
}

/// Reflection spectra and retrieval traces of the uniform comb and of a
/// randomly filled comb with the same span.
pub fn uniform_vs_random_compare(params: &MemoryParams, seed: u64) -> Result<CompareResult> {
    let uniform = case(params, params.config()?)?;
    let random = case(params, random_comb(params, seed)?)?;
    let zone2_ratio = uniform.run.report.zone_energies[1] / random.run.report.zone_energies[1];
    Ok(CompareResult { uniform, random, zone2_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_comb_keeps_span() {
        let p = MemoryParams::experiment();
        let u = p.config().unwrap();
        let r = random_comb(&p, 5).unwrap();
        assert_eq!(r.magnons[0], u.magnons[0]);
        assert_eq!(r.magnons[7], u.magnons[7]);
        assert!(r.magnons.windows(2).all(|w| w[0].omega <= w[1].omega));
        assert_eq!(r, random_comb(&p, 5).unwrap());
    }

    #[test]
    fn single_mode_cases_identical() {
        let p = MemoryParams { n: 1, ..MemoryParams::experiment() };
        assert_eq!(random_comb(&p, 1).unwrap(), p.config().unwrap());
    }

    #[test]
    fn uniform_retrieves_better() {
        let r = uniform_vs_random_compare(&MemoryParams::experiment(), 3).unwrap();
        assert!(r.zone2_ratio > 1.0, "ratio {}", r.zone2_ratio);
    }
}
