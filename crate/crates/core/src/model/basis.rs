use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{gradient_offset, SystemConfig};
use crate::error::{Error, Result};
use crate::units::TWO_PI;

/// Unitary change of variables from individual magnon amplitudes to one
/// bright mode and N−1 dark modes.
///
/// Row `k` defines the collective amplitude `c_k = Σ_j vectors[(k, j)]·m_j`.
/// The bright row is `g/‖g‖`, so the cavity sees `−i‖g‖·B`; every other row is
/// orthogonal to it and therefore decoupled from the cavity.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveBasis {
    pub vectors: DMatrix<Complex64>,
    pub bright_index: usize,
    /// `√Σ|g_j|² / |g_1|`; infinite when g_1 = 0.
    pub enhancement: f64,
}

impl CollectiveBasis {
    pub fn len(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.nrows() == 0
    }

    /// Collective amplitudes `V·m`.
    pub fn project(&self, m: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.len();
        if m.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.len() });
        }
        Ok((0..n)
            .map(|k| (0..n).map(|j| self.vectors[(k, j)] * m[j]).sum())
            .collect())
    }

    /// Indices of the dark rows in order.
    pub fn dark_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&k| k != self.bright_index)
    }
}

/// Dark-mode row `n` (1..N−1) of the equal-coupling basis:
/// `exp(2πi·(j − (N+1)/2)·n/N)/√N`.
fn fourier_row(n_modes: usize, n: usize) -> Vec<Complex64> {
    let norm = 1.0 / (n_modes as f64).sqrt();
    (1..=n_modes)
        .map(|j| {
            let phase = TWO_PI * gradient_offset(j, n_modes) * n as f64 / n_modes as f64;
            Complex64::from_polar(norm, phase)
        })
        .collect()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// Bright/dark basis for the configured couplings.
///
/// Dark rows are the Fourier vectors orthogonalized against the bright row, so
/// for equal couplings they are exactly the Fourier vectors. Standard basis
/// vectors fill in whenever the Fourier set loses rank.
pub fn collective_basis(config: &SystemConfig) -> Result<CollectiveBasis> {
    let n = config.len();
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    let g: Vec<Complex64> = config.magnons.iter().map(|m| m.coupling).collect();
    let norm = g.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::NoBrightMode);
    }
    let bright: Vec<Complex64> = g.iter().map(|x| x / norm).collect();

    let candidates = (1..n).map(|k| fourier_row(n, k)).chain((0..n).map(|j| {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[j] = Complex64::new(1.0, 0.0);
        e
    }));

    let mut rows = vec![bright];
    for mut v in candidates {
        if rows.len() == n {
            break;
        }
        // Two passes of modified Gram-Schmidt keep orthogonality at roundoff.
        for _ in 0..2 {
            for r in &rows {
                let c = inner(&v, r);
                for (vi, ri) in v.iter_mut().zip(r) {
                    *vi -= c * ri;
                }
            }
        }
        let len = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if len > 1e-8 {
            rows.push(v.into_iter().map(|x| x / len).collect());
        }
    }

    let vectors = DMatrix::from_fn(n, n, |k, j| rows[k][j]);
    let g1 = g[0].norm();
    let enhancement = if g1 > 0.0 { norm / g1 } else { f64::INFINITY };
    Ok(CollectiveBasis { vectors, bright_index: 0, enhancement })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_gradient_system, CavityMode, MagnonMode};
    use proptest::prelude::*;

    fn equal(n: usize) -> SystemConfig {
        build_gradient_system(n, 1.0, 0.1, 0.5, 0.0, 0.0, 0.0).unwrap()
    }

    fn max_unitarity_error(b: &CollectiveBasis) -> f64 {
        let v = &b.vectors;
        let prod = v * v.adjoint();
        let n = v.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    #[test]
    fn two_equal_spheres() {
        let b = collective_basis(&equal(2)).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((b.vectors[(0, 0)] - s).norm() < 1e-15);
        assert!((b.vectors[(0, 1)] - s).norm() < 1e-15);
        // Dark row is (m1 − m2)/√2 up to a global phase.
        let d0 = b.vectors[(1, 0)];
        let d1 = b.vectors[(1, 1)];
        assert!((d0 + d1).norm() < 1e-15);
        assert!((d0.norm() - s).abs() < 1e-15);
    }

    #[test]
    fn decoupled_sphere_is_dark() {
        let cavity = CavityMode::new(1.0, 0.0, 0.0).unwrap();
        let c = SystemConfig::new(cavity, vec![MagnonMode::new(1.0, 0.3, 0.0), MagnonMode::new(1.0, 0.0, 0.0)])
            .unwrap();
        let b = collective_basis(&c).unwrap();
        assert!((b.vectors[(0, 0)] - 1.0).norm() < 1e-15);
        assert!(b.vectors[(0, 1)].norm() < 1e-15);
        assert!((b.vectors[(1, 1)].norm() - 1.0).abs() < 1e-15);
        assert!(b.vectors[(1, 0)].norm() < 1e-15);
        assert_eq!(b.enhancement, 1.0);
    }

    #[test]
    fn eight_sphere_enhancement() {
        let b = collective_basis(&equal(8)).unwrap();
        assert!((b.enhancement - 8f64.sqrt()).abs() < 1e-12);
        assert!((b.enhancement - 2.8284).abs() < 1e-4);
    }

    #[test]
    fn equal_coupling_dark_rows_are_fourier_vectors() {
        for n in 2..=9 {
            let b = collective_basis(&equal(n)).unwrap();
            for k in 1..n {
                let f = fourier_row(n, k);
                for j in 0..n {
                    assert!((b.vectors[(k, j)] - f[j]).norm() < 1e-14, "n={n} k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn no_bright_mode() {
        let cavity = CavityMode::new(1.0, 0.0, 0.0).unwrap();
        let c = SystemConfig::new(cavity, vec![MagnonMode::new(1.0, 0.0, 0.0); 3]).unwrap();
        assert_eq!(collective_basis(&c), Err(Error::NoBrightMode));
    }

    fn config_from(gs: Vec<(f64, f64)>) -> SystemConfig {
        let cavity = CavityMode::new(1.0, 0.0, 0.0).unwrap();
        let magnons = gs
            .into_iter()
            .map(|(re, im)| MagnonMode { omega: 1.0, coupling: Complex64::new(re, im), kappa: 0.0 })
            .collect();
        SystemConfig::new(cavity, magnons).unwrap()
    }

    proptest! {
        #[test]
        fn rows_are_orthonormal(gs in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..10)) {
            prop_assume!(gs.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3));
            let c = config_from(gs);
            let b = collective_basis(&c).unwrap();
            prop_assert!(max_unitarity_error(&b) < 1e-12);
        }

        #[test]
        fn dark_rows_do_not_couple(gs in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2..10)) {
            prop_assume!(gs.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3));
            let c = config_from(gs);
            let g: Vec<Complex64> = c.magnons.iter().map(|m| m.coupling).collect();
            let b = collective_basis(&c).unwrap();
            for k in b.dark_indices() {
                let row: Vec<Complex64> = (0..c.len()).map(|j| b.vectors[(k, j)]).collect();
                prop_assert!(inner(&row, &g).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn equal_coupling_dark_rows_sum_to_zero() {
        let b = collective_basis(&equal(8)).unwrap();
        for k in b.dark_indices() {
            let s: Complex64 = (0..8).map(|j| b.vectors[(k, j)]).sum();
            assert!(s.norm() < 1e-14);
        }
    }
}
