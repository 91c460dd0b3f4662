use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{dynamics_generator, SystemConfig};

/// Complex eigenfrequencies `ω − iγ` of the coupled system (eigenvalues of
/// `i·M` in the laboratory frame), sorted by real part.
pub fn eigenmodes(config: &SystemConfig) -> Result<Vec<Complex64>> {
    // Decompose in the cavity frame so the Schur iteration works on O(g)
    // numbers rather than O(ω_a) ones.
    let shift = config.cavity.omega;
    let h = dynamics_generator(config, shift).matrix.map(|z| z * Complex64::i());
    let ev = h
        .eigenvalues()
        .ok_or_else(|| Error::Numerical("eigenvalue iteration did not converge".into()))?;
    let mut ev: Vec<Complex64> = ev.iter().map(|z| z + shift).collect();
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_gradient_system, MagnonMode};
    use crate::units::mhz;

    /// Roots of the characteristic polynomial det(λ − H) via the companion
    /// matrix route: Faddeev–LeVerrier coefficients, then Durand–Kerner.
    fn char_poly_roots(h: &nalgebra::DMatrix<Complex64>) -> Vec<Complex64> {
        let n = h.nrows();
        let id = nalgebra::DMatrix::<Complex64>::identity(n, n);
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        let mut m = nalgebra::DMatrix::<Complex64>::zeros(n, n);
        for k in 1..=n {
            m = h * &m + &id * coeffs[k - 1];
            let c = -(h * &m).trace() / k as f64;
            coeffs.push(c);
        }
        let eval = |z: Complex64| coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
        let mut roots: Vec<Complex64> =
            (0..n).map(|k| Complex64::from_polar(1.0, 0.4 + k as f64 * 2.0 * std::f64::consts::PI / n as f64) * 3.0).collect();
        for _ in 0..2000 {
            for i in 0..n {
                let den: Complex64 = (0..n).filter(|&j| j != i).map(|j| roots[i] - roots[j]).product();
                let step = eval(roots[i]) / den;
                roots[i] -= step;
            }
        }
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        roots
    }

    #[test]
    fn lossless_pair_on_resonance() {
        let g = mhz(6.7);
        let wa = mhz(7520.0);
        let c = build_gradient_system(2, wa, 0.0, g, 0.0, 0.0, 0.0).unwrap();
        let ev = eigenmodes(&c).unwrap();
        let s = 2f64.sqrt() * g;
        assert!((ev[0].re - (wa - s)).abs() < 1e-3);
        assert!((ev[1].re - wa).abs() < 1e-3);
        assert!((ev[2].re - (wa + s)).abs() < 1e-3);
        assert!(ev.iter().all(|z| z.im.abs() < 1e-3));
    }

    #[test]
    fn linewidths_are_negative_imaginary_parts() {
        let c = build_gradient_system(1, mhz(7520.0), 0.0, 0.0, mhz(0.5), mhz(1.0), mhz(2.0)).unwrap();
        let ev = eigenmodes(&c).unwrap();
        assert_eq!(ev.len(), 2);
        let mut widths: Vec<f64> = ev.iter().map(|z| -z.im).collect();
        widths.sort_by(f64::total_cmp);
        assert!((widths[0] - mhz(0.5)).abs() < 1e-6);
        assert!((widths[1] - mhz(3.0)).abs() < 1e-6);
    }

    #[test]
    fn eight_sphere_comb_against_characteristic_polynomial() {
        let wa = mhz(7520.0);
        let dw = mhz(10.0);
        let c = build_gradient_system(8, wa, dw, mhz(3.0), mhz(0.72), mhz(3.0), mhz(9.0)).unwrap();
        let ev = eigenmodes(&c).unwrap();
        assert_eq!(ev.len(), 9);

        // Oracle in units of Δω, relative to the cavity.
        let gen = crate::model::dynamics_generator(&c, wa);
        let h = gen.matrix.map(|z| z * Complex64::i() / dw);
        let roots = char_poly_roots(&h);
        for (a, b) in ev.iter().zip(&roots) {
            let a = (a - wa) / dw;
            assert!((a - b).norm() < 1e-8, "{a} vs {b}");
        }

    }

    #[test]
    fn complex_couplings_supported() {
        let mut c = build_gradient_system(2, mhz(7520.0), 0.0, mhz(5.0), 0.0, 0.0, 0.0).unwrap();
        c.magnons[1] = MagnonMode { coupling: Complex64::from_polar(mhz(5.0), 1.1), ..c.magnons[1] };
        let ev = eigenmodes(&c).unwrap();
        let s = 2f64.sqrt() * mhz(5.0);
        assert!((ev[2].re - ev[0].re - 2.0 * s).abs() < 1e-3);
    }
}
