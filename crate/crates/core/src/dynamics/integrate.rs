use nalgebra::DVector;
use num_complex::Complex64;

use super::drive::{DriveSpec, Side};
use super::trace::TimeTrace;
use crate::error::{Error, Result};
use crate::model::{dynamics_generator, Generator, SystemConfig};
use crate::units::TWO_PI;

/// Integration step policy for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepControl {
    /// Fixed RK4 step (s).
    Fixed(f64),
    /// Start at the default step and halve until two successive runs agree
    /// to `rel_tol` (relative to the largest amplitude), at most `max_halvings`
    /// times.
    Adaptive { rel_tol: f64, max_halvings: u32 },
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl::Adaptive { rel_tol: 1e-10, max_halvings: 12 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrateOptions {
    pub t_end: f64,
    /// Output sampling interval; defaults to the base integration step.
    pub output_step: Option<f64>,
    pub step: StepControl,
    /// State `(a, m_1, …, m_N)` at t = 0; zero when absent.
    pub initial_state: Option<Vec<Complex64>>,
}

impl IntegrateOptions {
    pub fn until(t_end: f64) -> Self {
        Self { t_end, output_step: None, step: StepControl::default(), initial_state: None }
    }

    pub fn output_step(mut self, dt: f64) -> Self {
        self.output_step = Some(dt);
        self
    }

    pub fn step(mut self, step: StepControl) -> Self {
        self.step = step;
        self
    }

    pub fn initial_state(mut self, x0: Vec<Complex64>) -> Self {
        self.initial_state = Some(x0);
        self
    }
}

/// Base step: one fiftieth of the fastest period the generator supports,
/// bounded through its Gershgorin radius. For a gradient comb this is close
/// to `(2π/NΔω)/50`.
pub fn default_step(gen: &Generator) -> f64 {
    let radius = gen.gershgorin_radius();
    if radius > 0.0 {
        TWO_PI / (50.0 * radius)
    } else {
        f64::INFINITY
    }
}

/// Uniform output grid from 0 to `t_end` with spacing at most `dt`.
pub fn uniform_grid(t_end: f64, dt: f64) -> Vec<f64> {
    let n = ((t_end / dt) - 1e-9).ceil().max(1.0) as usize;
    (0..=n).map(|k| t_end * k as f64 / n as f64).collect()
}

pub(crate) fn initial_vector(dim: usize, x0: Option<&[Complex64]>) -> Result<DVector<Complex64>> {
    match x0 {
        None => Ok(DVector::zeros(dim)),
        Some(v) if v.len() == dim => Ok(DVector::from_column_slice(v)),
        Some(v) => Err(Error::DimensionMismatch { expected: dim, found: v.len() }),
    }
}

/// Splits `[t0, t1]` at the drive breakpoints lying strictly inside.
pub(crate) fn segments(t0: f64, t1: f64, breakpoints: &[f64]) -> Vec<(f64, f64)> {
    let mut cuts = vec![t0];
    cuts.extend(breakpoints.iter().copied().filter(|&b| b > t0 && b < t1));
    cuts.push(t1);
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

struct Rk4Workspace {
    k1: DVector<Complex64>,
    k2: DVector<Complex64>,
    k3: DVector<Complex64>,
    k4: DVector<Complex64>,
    tmp: DVector<Complex64>,
}

impl Rk4Workspace {
    fn new(dim: usize) -> Self {
        Self {
            k1: DVector::zeros(dim),
            k2: DVector::zeros(dim),
            k3: DVector::zeros(dim),
            k4: DVector::zeros(dim),
            tmp: DVector::zeros(dim),
        }
    }

    /// One classical RK4 step over `[t, t + h]`, inside which the drive is
    /// smooth. End-point stages use one-sided envelope limits.
    fn step(&mut self, gen: &Generator, drive: &DriveSpec, x: &mut DVector<Complex64>, t: f64, h: f64) {
        let one = Complex64::new(1.0, 0.0);
        let half = Complex64::new(0.5 * h, 0.0);
        let e0 = drive.envelope(t, Side::Right);
        let em = drive.envelope(t + 0.5 * h, Side::Right);
        let e1 = drive.envelope(t + h, Side::Left);

        gen.apply(x, e0, &mut self.k1);
        self.tmp.copy_from(x);
        self.tmp.axpy(half, &self.k1, one);
        gen.apply(&self.tmp, em, &mut self.k2);
        self.tmp.copy_from(x);
        self.tmp.axpy(half, &self.k2, one);
        gen.apply(&self.tmp, em, &mut self.k3);
        self.tmp.copy_from(x);
        self.tmp.axpy(Complex64::new(h, 0.0), &self.k3, one);
        gen.apply(&self.tmp, e1, &mut self.k4);

        let w = Complex64::new(h / 6.0, 0.0);
        x.axpy(w, &self.k1, one);
        x.axpy(w * 2.0, &self.k2, one);
        x.axpy(w * 2.0, &self.k3, one);
        x.axpy(w, &self.k4, one);
    }
}

fn rk4_states(
    gen: &Generator,
    drive: &DriveSpec,
    grid: &[f64],
    max_step: f64,
    x0: DVector<Complex64>,
) -> Vec<DVector<Complex64>> {
    let breakpoints = drive.breakpoints();
    let mut ws = Rk4Workspace::new(gen.dim());
    let mut x = x0;
    let mut out = Vec::with_capacity(grid.len());
    let mut t = 0.0;
    for &target in grid {
        for (a, b) in segments(t, target, &breakpoints) {
            let len = b - a;
            if len <= 0.0 {
                continue;
            }
            let n = (len / max_step).ceil().max(1.0) as usize;
            let h = len / n as f64;
            for k in 0..n {
                ws.step(gen, drive, &mut x, a + k as f64 * h, h);
            }
        }
        t = target;
        out.push(x.clone());
    }
    out
}

/// Solves `dx/dt = M·x + v·E_in(t)` in the frame rotating at the drive
/// carrier with classical RK4, starting from `options.initial_state` (zero by
/// default). Pulse edges are always step boundaries.
pub fn integrate(config: &SystemConfig, drive: &DriveSpec, options: &IntegrateOptions) -> Result<TimeTrace> {
    config.validate()?;
    drive.validate()?;
    if !(options.t_end > 0.0 && options.t_end.is_finite()) {
        return Err(Error::invalid("t_end", "must be positive"));
    }
    let gen = dynamics_generator(config, drive.carrier);
    let x0 = initial_vector(gen.dim(), options.initial_state.as_deref())?;

    let base = default_step(&gen).min(options.t_end / 16.0);
    let output_step = options.output_step.unwrap_or(base);
    if !(output_step > 0.0) {
        return Err(Error::invalid("output_step", "must be positive"));
    }
    let grid = uniform_grid(options.t_end, output_step);

    let states = match options.step {
        StepControl::Fixed(h) => {
            if !(h > 0.0) {
                return Err(Error::invalid("step", "must be positive"));
            }
            rk4_states(&gen, drive, &grid, h, x0)
        }
        StepControl::Adaptive { rel_tol, max_halvings } => {
            let mut h = base.min(output_step);
            let mut coarse = rk4_states(&gen, drive, &grid, h, x0.clone());
            let mut halvings = 0;
            loop {
                h *= 0.5;
                let fine = rk4_states(&gen, drive, &grid, h, x0.clone());
                let (err, at) = max_state_difference(&coarse, &fine);
                if err <= rel_tol {
                    break fine;
                }
                halvings += 1;
                if halvings >= max_halvings {
                    return Err(Error::StepControl { time: grid[at], error: err, tolerance: rel_tol });
                }
                coarse = fine;
            }
        }
    };
    Ok(TimeTrace::from_states(grid, &states, drive, config.cavity.kappa_ext))
}

/// Largest component difference relative to the largest amplitude of `b`,
/// and the sample where it occurs.
fn max_state_difference(a: &[DVector<Complex64>], b: &[DVector<Complex64>]) -> (f64, usize) {
    let scale = b.iter().flat_map(|x| x.iter().map(|z| z.norm())).fold(0.0, f64::max);
    let mut worst = (0.0, 0);
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        let d = (x - y).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if d > worst.0 {
            worst = (d, k);
        }
    }
    if scale > 0.0 {
        (worst.0 / scale, worst.1)
    } else {
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::drive::Pulse;
    use crate::model::{build_gradient_system, CavityMode};
    use crate::units::{mhz, ns};

    #[test]
    fn zero_drive_zero_trace() {
        let c = build_gradient_system(4, mhz(7520.0), mhz(10.0), mhz(10.0), mhz(0.7), mhz(3.0), mhz(20.0)).unwrap();
        let tr = integrate(&c, &DriveSpec::none(mhz(7520.0)), &IntegrateOptions::until(ns(100.0))).unwrap();
        assert!(tr.intensity.iter().all(|&v| v == 0.0));
        assert!(tr.e_out.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn cavity_ringdown_is_exponential() {
        let (k0, k1, det) = (mhz(1.0), mhz(2.0), mhz(5.0));
        let wa = mhz(7520.0);
        let c = SystemConfig::new(CavityMode::new(wa, k0, k1).unwrap(), vec![]).unwrap();
        let opts = IntegrateOptions::until(ns(200.0)).initial_state(vec![Complex64::new(1.0, 0.0)]);
        let tr = integrate(&c, &DriveSpec::none(wa - det), &opts).unwrap();
        for (t, a) in tr.t.iter().zip(&tr.cavity) {
            let exact = (Complex64::new(-(k0 + k1), -det) * *t).exp();
            assert!((a - exact).norm() < 1e-9);
        }
    }

    #[test]
    fn trace_invariants_hold() {
        let c = build_gradient_system(3, mhz(7520.0), mhz(10.0), mhz(8.0), mhz(0.7), mhz(3.0), mhz(20.0)).unwrap();
        let d = DriveSpec::single(mhz(7520.0), Pulse::rectangular(0.0, ns(20.0), 1.0)).unwrap();
        let tr = integrate(&c, &d, &IntegrateOptions::until(ns(60.0)).step(StepControl::Fixed(ns(0.05)))).unwrap();
        let s = Complex64::i() * (2.0 * c.cavity.kappa_ext).sqrt();
        for k in 0..tr.len() {
            assert!((tr.e_out[k] - (-tr.e_in[k] + s * tr.cavity[k])).norm() < 1e-15);
            assert!((tr.intensity[k] - 2.0 * c.cavity.kappa_ext * tr.cavity[k].norm_sqr()).abs() < 1e-12);
        }
        assert_eq!(tr.modes(), 3);
    }

    #[test]
    fn bad_initial_state_rejected() {
        let c = build_gradient_system(2, mhz(7520.0), mhz(10.0), mhz(8.0), 0.0, 0.0, 0.0).unwrap();
        let opts = IntegrateOptions::until(ns(10.0)).initial_state(vec![Complex64::new(1.0, 0.0)]);
        assert!(matches!(
            integrate(&c, &DriveSpec::none(mhz(7520.0)), &opts),
            Err(Error::DimensionMismatch { expected: 3, found: 1 })
        ));
    }

    #[test]
    fn unreachable_tolerance_reports_time() {
        let c = build_gradient_system(2, mhz(7520.0), mhz(10.0), mhz(8.0), 0.0, mhz(1.0), mhz(1.0)).unwrap();
        let d = DriveSpec::single(mhz(7520.0), Pulse::rectangular(0.0, ns(20.0), 1.0)).unwrap();
        let opts = IntegrateOptions::until(ns(50.0)).step(StepControl::Adaptive { rel_tol: 1e-30, max_halvings: 2 });
        match integrate(&c, &d, &opts) {
            Err(Error::StepControl { time, .. }) => assert!((0.0..=ns(50.0)).contains(&time)),
            other => panic!("expected step-control failure, got {other:?}"),
        }
    }

    #[test]
    fn grid_spacing() {
        let g = uniform_grid(1.0, 0.3);
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert_eq!(uniform_grid(1.0, 0.25).len(), 5);
    }
}
