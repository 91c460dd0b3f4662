use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::params::{run_memory, MemoryParams};
use super::with_workers;
use crate::error::{Error, Result};
use crate::model::{CavityMode, MagnonMode, SystemConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloStats {
    pub samples: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator; 0 for one sample).
    pub std: f64,
    pub seed: u64,
    pub spread: f64,
}

impl MonteCarloStats {
    pub fn from_samples(samples: Vec<f64>, seed: u64, spread: f64) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let std = if samples.len() > 1 {
            (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { samples, mean, std, seed, spread }
    }
}

/// Draws `ξ_j ∈ [−spread, spread]` for sample `index` from a ChaCha stream
/// keyed on `(seed, index)`; sphere j takes the j-th draw.
fn draws(seed: u64, index: u64, n: usize, spread: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..n).map(|_| spread * (2.0 * rng.random::<f64>() - 1.0)).collect()
}

/// One perturbed memory:
/// `g_j = g_0(1 + ξ_j)`, `ω_j = ω_a + (j − (N−1)/2)·Δω + Δω·ξ_j`, j = 1..N,
/// with κ_a1 from the unperturbed g_0.
pub fn perturbed_config(params: &MemoryParams, xi: &[f64]) -> Result<SystemConfig> {
    if xi.len() != params.n {
        return Err(Error::DimensionMismatch { expected: params.n, found: xi.len() });
    }
    let cavity = CavityMode::new(params.omega_a, params.kappa_a0, params.kappa_ext()?)?;
    let half = (params.n as f64 - 1.0) / 2.0;
    let magnons = xi
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let j = (k + 1) as f64;
            let omega = params.omega_a + (j - half) * params.delta_omega + params.delta_omega * x;
            MagnonMode::new(omega, params.g * (1.0 + x), params.kappa_m)
        })
        .collect();
    SystemConfig::new(cavity, magnons)
}

/// Efficiency statistics over `n_samples` perturbed memories. Sample lists
/// depend only on `(seed, n_samples)`, not on the worker count.
pub fn monte_carlo_imperfection(
    params: &MemoryParams,
    spread: f64,
    n_samples: usize,
    seed: u64,
    workers: Option<usize>,
) -> Result<MonteCarloStats> {
    if n_samples == 0 {
        return Err(Error::invalid("samples", "must be at least 1"));
    }
    if !(spread >= 0.0 && spread.is_finite()) {
        return Err(Error::invalid("spread", "must be ≥ 0"));
    }
    let drive = params.drive()?;
    let period = params.storage_time()?;
    let t_end = params.t_end()?;
    let results: Vec<Result<f64>> = with_workers(workers, || {
        (0..n_samples)
            .into_par_iter()
            .map(|i| {
                let config = perturbed_config(params, &draws(seed, i as u64, params.n, spread))?;
                Ok(run_memory(&config, &drive, period, t_end, params.output_step)?.report.zeta)
            })
            .collect()
    })?;
    let samples = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(MonteCarloStats::from_samples(samples, seed, spread))
}
