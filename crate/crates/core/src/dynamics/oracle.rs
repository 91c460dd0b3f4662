use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::drive::{DriveSpec, Side};
use super::integrate::{initial_vector, segments};
use super::trace::TimeTrace;
use crate::error::{Error, Result};
use crate::model::{dynamics_generator, SystemConfig};

/// Exact propagation for piecewise-constant drives. Each constant segment of
/// length h advances the state with the exponential of the augmented matrix
/// `[[M, v·E], [0, 0]]·h`, which contains both `e^{Mh}` and the integrated
/// drive term without inverting `M`.
pub fn exact_oracle(
    config: &SystemConfig,
    drive: &DriveSpec,
    t_grid: &[f64],
    initial_state: Option<&[Complex64]>,
) -> Result<TimeTrace> {
    if !drive.is_rectangular() {
        return Err(Error::UnsupportedByOracle("only rectangular pulses have piecewise-constant envelopes".into()));
    }
    if t_grid.first().is_some_and(|&t| t < 0.0) || t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("t_grid", "must be non-negative and non-decreasing"));
    }
    let gen = dynamics_generator(config, drive.carrier);
    let dim = gen.dim();
    let mut x = initial_vector(dim, initial_state)?;

    let mut cache: HashMap<u64, DMatrix<Complex64>> = HashMap::new();
    let mut propagator = |h: f64| -> DMatrix<Complex64> {
        cache
            .entry(h.to_bits())
            .or_insert_with(|| {
                let mut aug = DMatrix::zeros(dim + 1, dim + 1);
                aug.view_mut((0, 0), (dim, dim)).copy_from(&(&gen.matrix * Complex64::new(h, 0.0)));
                aug.view_mut((0, dim), (dim, 1)).copy_from(&(&gen.drive * Complex64::new(h, 0.0)));
                aug.exp()
            })
            .clone()
    };

    let breakpoints = drive.breakpoints();
    let mut states = Vec::with_capacity(t_grid.len());
    let mut t = 0.0;
    for &target in t_grid {
        for (a, b) in segments(t, target, &breakpoints) {
            let h = b - a;
            if h <= 0.0 {
                continue;
            }
            let e = drive.envelope(0.5 * (a + b), Side::Right);
            let p = propagator(h);
            let phi = p.view((0, 0), (dim, dim));
            let psi = p.view((0, dim), (dim, 1));
            let next: DVector<Complex64> = phi * &x + psi * e;
            x = next;
        }
        t = target;
        states.push(x.clone());
    }
    Ok(TimeTrace::from_states(t_grid.to_vec(), &states, drive, config.cavity.kappa_ext))
}
