use rayon::prelude::*;

use super::{check_grid, reflection};
use crate::error::{Error, Result};
use crate::model::{field_to_frequency, FieldMap, SystemConfig};

/// Which field parameter a map sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldAxis {
    /// Sweep H_0 at the map's fixed ΔH.
    Bias,
    /// Sweep ΔH at the map's fixed H_0.
    Gradient,
}

/// |r| over a (field, frequency) grid; `magnitude[i][k]` belongs to
/// `x_axis[i]` and `omega[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepMap {
    pub axis: FieldAxis,
    /// Swept field values (Oe).
    pub x_axis: Vec<f64>,
    pub omega: Vec<f64>,
    pub magnitude: Vec<Vec<f64>>,
}

/// Rebuilds the magnon frequencies from `map` at every sweep point and
/// evaluates the reflection magnitude. Points run in parallel; rows come back
/// in axis order.
pub fn bias_sweep_map(
    template: &SystemConfig,
    map: &FieldMap,
    axis: FieldAxis,
    values: &[f64],
    omega_grid: &[f64],
) -> Result<SweepMap> {
    check_grid(omega_grid)?;
    let n = template.len();
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    let magnitude = values
        .par_iter()
        .map(|&x| {
            let fm = match axis {
                FieldAxis::Bias => FieldMap { h0: x, ..*map },
                FieldAxis::Gradient => FieldMap { delta_h: x, ..*map },
            };
            let mut config = template.clone();
            for (j, m) in config.magnons.iter_mut().enumerate() {
                m.omega = field_to_frequency(&fm, j + 1, n)?;
            }
            Ok(omega_grid.iter().map(|&w| reflection(&config, w).norm()).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(SweepMap { axis, x_axis: values.to_vec(), omega: omega_grid.to_vec(), magnitude })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_gradient_system;
    use crate::spectrum::{find_dips, linear_grid};
    use crate::units::{gamma_per_oe, mhz};

    fn template(g: f64) -> SystemConfig {
        build_gradient_system(2, mhz(7520.0), 0.0, mhz(g), mhz(0.3), mhz(1.0), mhz(3.0)).unwrap()
    }

    fn h_res() -> f64 {
        7520.0 / 2.8
    }

    #[test]
    fn dims_and_order() {
        let map = FieldMap::new(gamma_per_oe(2.8), h_res(), 0.0).unwrap();
        let xs = linear_grid(h_res() - 20.0, h_res() + 20.0, 41);
        let grid = linear_grid(mhz(7460.0), mhz(7580.0), 301);
        let m = bias_sweep_map(&template(6.7), &map, FieldAxis::Bias, &xs, &grid).unwrap();
        assert_eq!(m.magnitude.len(), 41);
        assert!(m.magnitude.iter().all(|r| r.len() == 301));
        let serial: Vec<f64> = {
            let mut c = template(6.7);
            let fm = FieldMap { h0: xs[7], ..map };
            for j in 0..2 {
                c.magnons[j].omega = field_to_frequency(&fm, j + 1, 2).unwrap();
            }
            grid.iter().map(|&w| reflection(&c, w).norm()).collect()
        };
        assert_eq!(m.magnitude[7], serial);
    }

    #[test]
    fn uncoupled_template_shows_bare_cavity() {
        let map = FieldMap::new(gamma_per_oe(2.8), h_res(), 0.0).unwrap();
        let xs = linear_grid(h_res() - 20.0, h_res() + 20.0, 11);
        let grid = linear_grid(mhz(7500.0), mhz(7540.0), 401);
        let m = bias_sweep_map(&template(0.0), &map, FieldAxis::Bias, &xs, &grid).unwrap();
        for row in &m.magnitude {
            assert_eq!(row, &m.magnitude[0]);
            assert_eq!(find_dips(row, 50), vec![200]);
        }
    }

    #[test]
    fn equal_pair_has_two_branches_at_zero_gradient() {
        let map = FieldMap::new(gamma_per_oe(2.8), h_res(), 0.0).unwrap();
        let grid = linear_grid(mhz(7480.0), mhz(7560.0), 1601);
        let m = bias_sweep_map(&template(6.7), &map, FieldAxis::Bias, &[h_res()], &grid).unwrap();
        assert_eq!(find_dips(&m.magnitude[0], 100).len(), 2);

        let map = FieldMap { delta_h: -14.0, ..map };
        let m = bias_sweep_map(&template(6.7), &map, FieldAxis::Bias, &[h_res()], &grid).unwrap();
        assert_eq!(find_dips(&m.magnitude[0], 100).len(), 3);
    }

    #[test]
    fn gradient_axis() {
        let map = FieldMap::new(gamma_per_oe(2.8), h_res(), 0.0).unwrap();
        let grid = linear_grid(mhz(7480.0), mhz(7560.0), 101);
        let m = bias_sweep_map(&template(6.7), &map, FieldAxis::Gradient, &[-14.0, 0.0, 14.0], &grid).unwrap();
        assert_eq!(m.axis, FieldAxis::Gradient);
        // ±ΔH mirror each other for equal couplings.
        assert_eq!(m.magnitude[0], m.magnitude[2]);
        assert!(bias_sweep_map(&template(6.7), &map, FieldAxis::Gradient, &[0.0], &[2.0, 1.0]).is_err());
    }
}
