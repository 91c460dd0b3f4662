use num_complex::Complex64;

use super::drive::{DriveSpec, Side};
use crate::error::{Error, Result};
use crate::model::SystemConfig;

/// `sin(Nx/2)/sin(x/2)` with `x = Δω·s`, continued through the zeros of the
/// denominator (value ±N there).
pub fn comb_kernel(n: usize, delta_omega: f64, s: f64) -> f64 {
    let half = 0.5 * delta_omega * s;
    let nf = n as f64;
    let den = half.sin();
    if den.abs() < 1e-6 {
        // L'Hôpital; the error of the ratio is O(den²) here.
        nf * (nf * half).cos() / half.cos()
    } else {
        (nf * half).sin() / den
    }
}

struct Uniform {
    center: f64,
    spacing: f64,
    coupling_sq: f64,
    kappa_m: f64,
}

fn uniform_parameters(config: &SystemConfig) -> Result<Uniform> {
    let m = &config.magnons;
    let first = m.first().ok_or(Error::EmptySystem)?;
    let g = first.coupling;
    if m.iter().any(|x| (x.coupling - g).norm() > 1e-12 * g.norm().max(1.0)) {
        return Err(Error::NonUniform("couplings differ".into()));
    }
    if m.iter().any(|x| (x.kappa - first.kappa).abs() > 1e-12 * first.kappa.max(1.0)) {
        return Err(Error::NonUniform("magnon damping rates differ".into()));
    }
    let n = m.len();
    let spacing = if n > 1 { (m[n - 1].omega - m[0].omega) / (n - 1) as f64 } else { 0.0 };
    for (j, x) in m.iter().enumerate() {
        let expected = m[0].omega + j as f64 * spacing;
        if (x.omega - expected).abs() > 1e-6 * spacing.abs() + 1e-12 * x.omega.abs() {
            return Err(Error::NonUniform(format!("mode {} is off the uniform grid", j + 1)));
        }
    }
    let center = m.iter().map(|x| x.omega).sum::<f64>() / n as f64;
    Ok(Uniform { center, spacing, coupling_sq: g.norm_sqr(), kappa_m: first.kappa })
}

/// Cavity amplitude from the memory-kernel equation, with the magnons
/// eliminated:
///
/// `da/dt = (−iΔ_a − κ_a)·a − |g|²∫₀ᵗ a(τ)·e^{(−iΔ_c − κ_m)(t−τ)}·K(t−τ) dτ − i√(2κ_a1)·E_in(t)`
///
/// with `K` the comb kernel and Δ_a, Δ_c the cavity and comb-centre
/// detunings from the carrier. Requires a uniform comb with equal couplings
/// and damping, and a uniform `t_grid` starting at 0. The history integral
/// and the homogeneous part of the step use the trapezoid rule (implicit,
/// second order); the drive is integrated piecewise across each step.
pub fn kernel_integrate(config: &SystemConfig, drive: &DriveSpec, t_grid: &[f64]) -> Result<Vec<Complex64>> {
    config.validate()?;
    drive.validate()?;
    let p = uniform_parameters(config)?;
    let n = t_grid.len();
    if n < 2 || t_grid[0] != 0.0 {
        return Err(Error::invalid("t_grid", "needs at least two points starting at 0"));
    }
    let h = t_grid[1] - t_grid[0];
    if !(h > 0.0) || t_grid.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h) {
        return Err(Error::invalid("t_grid", "must be uniform and increasing"));
    }

    let i = Complex64::i();
    let cav = &config.cavity;
    let c = -i * (cav.omega - drive.carrier) - cav.kappa_total();
    let d = -i * (2.0 * cav.kappa_ext).sqrt();
    let lambda = -i * (p.center - drive.carrier) - p.kappa_m;
    let modes = config.len();
    let kern: Vec<Complex64> = (0..n)
        .map(|k| {
            let s = k as f64 * h;
            (lambda * s).exp() * comb_kernel(modes, p.spacing, s)
        })
        .collect();
    let g2 = p.coupling_sq;

    let mut a = vec![Complex64::new(0.0, 0.0); n];
    let breakpoints = drive.breakpoints();
    let mut f_prev = Complex64::new(0.0, 0.0);
    let diag = Complex64::new(1.0, 0.0) - 0.5 * h * (c - g2 * 0.5 * h * kern[0]);
    for k in 1..n {
        // Known part of the history integral at t_k (everything except a_k).
        let mut hist = 0.5 * a[0] * kern[k];
        for m in 1..k {
            hist += a[m] * kern[k - m];
        }
        hist *= h;
        let drive_area = step_drive_integral(drive, &breakpoints, t_grid[k - 1], t_grid[k]);
        let rhs = a[k - 1] + 0.5 * h * (f_prev - g2 * hist) + d * drive_area;
        a[k] = rhs / diag;
        let full = hist + 0.5 * h * kern[0] * a[k];
        f_prev = c * a[k] - g2 * full;
    }
    Ok(a)
}

/// `∫E_in dt` over one step, by Simpson's rule on each smooth piece so that
/// pulse edges between grid points cost no accuracy.
fn step_drive_integral(drive: &DriveSpec, breakpoints: &[f64], t0: f64, t1: f64) -> Complex64 {
    super::integrate::segments(t0, t1, breakpoints)
        .into_iter()
        .map(|(a, b)| {
            let mid = drive.envelope(0.5 * (a + b), Side::Right);
            (drive.envelope(a, Side::Right) + 4.0 * mid + drive.envelope(b, Side::Left)) * ((b - a) / 6.0)
        })
        .sum()
}
