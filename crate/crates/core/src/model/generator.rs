use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::SystemConfig;

/// Linear equations of motion `dx/dt = M·x + v·E_in(t)` for the state
/// `x = (a, m_1, …, m_N)` in a frame rotating at `frame` (rad/s).
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub matrix: DMatrix<Complex64>,
    pub drive: DVector<Complex64>,
    pub frame: f64,
}

impl Generator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `M·x + v·e`, written into `out`.
    pub fn apply(&self, x: &DVector<Complex64>, e: Complex64, out: &mut DVector<Complex64>) {
        self.matrix.mul_to(x, out);
        if e != Complex64::new(0.0, 0.0) {
            out.axpy(e, &self.drive, Complex64::new(1.0, 0.0));
        }
    }

    /// Row-sum bound on the spectral radius of `M`.
    pub fn gershgorin_radius(&self) -> f64 {
        self.matrix
            .row_iter()
            .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

pub fn dynamics_generator(config: &SystemConfig, frame: f64) -> Generator {
    let n = config.len();
    let i = Complex64::i();
    let cav = &config.cavity;
    let mut m = DMatrix::zeros(n + 1, n + 1);
    m[(0, 0)] = -i * (cav.omega - frame) - cav.kappa_total();
    for (j, mode) in config.magnons.iter().enumerate() {
        m[(0, j + 1)] = -i * mode.coupling;
        m[(j + 1, 0)] = -i * mode.coupling.conj();
        m[(j + 1, j + 1)] = -i * (mode.omega - frame) - mode.kappa;
    }
    let mut v = DVector::zeros(n + 1);
    v[0] = -i * (2.0 * cav.kappa_ext).sqrt();
    Generator { matrix: m, drive: v, frame }
}
