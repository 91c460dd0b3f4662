//! Packaged reproductions: sweeps, Monte Carlo, multi-pulse storage and
//! non-ideal coupling layouts.

mod compare;
mod fifo;
mod montecarlo;
mod params;
mod profile;
mod sweep;

pub use compare::{random_comb, uniform_vs_random_compare, CompareCase, CompareResult};
pub use fifo::{detect_peaks, multi_pulse_fifo, FifoReport, FifoRun};
pub use montecarlo::{monte_carlo_imperfection, perturbed_config, MonteCarloStats};
pub use params::{run_memory, Coupling, MemoryParams, MemoryRun};
pub use profile::{cosine_coupling_profile, sphere_positions};
pub use sweep::{run_sweep, SweepAxis, SweepPoint, SweepResult};

use crate::error::{Error, Result};

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool.
pub(crate) fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::invalid("workers", "must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}
