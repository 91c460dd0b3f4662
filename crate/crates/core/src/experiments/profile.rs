use crate::error::{Error, Result};
use crate::model::gradient_offset;

/// Sphere positions `x_j = (j − (N+1)/2)·spacing` about the cavity centre.
pub fn sphere_positions(n: usize, spacing: f64) -> Vec<f64> {
    (1..=n).map(|j| gradient_offset(j, n) * spacing).collect()
}

/// Couplings `g_max·cos(πx_j/L)` of spheres sitting in the cosine field
/// profile of a cavity of length `length`.
pub fn cosine_coupling_profile(n: usize, spacing: f64, length: f64, g_max: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    if !(length > 0.0) || !(spacing >= 0.0) {
        return Err(Error::invalid("length", "cavity length must be positive and spacing ≥ 0"));
    }
    sphere_positions(n, spacing)
        .into_iter()
        .enumerate()
        .map(|(k, x)| {
            if x.abs() > 0.5 * length {
                Err(Error::invalid(
                    "spacing",
                    format!("sphere {} at x = {x} m lies outside the cavity (L = {length} m)", k + 1),
                ))
            } else {
                Ok(g_max * (std::f64::consts::PI * x / length).cos())
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centre_sphere_gets_full_coupling() {
        assert_eq!(cosine_coupling_profile(1, 6.5e-3, 50e-3, 3.0).unwrap(), vec![3.0]);
    }

    #[test]
    fn eight_sphere_layout() {
        let g = cosine_coupling_profile(8, 6.5e-3, 50e-3, 1.0).unwrap();
        // cos(π·22.75/50)
        assert!((g[0] - 0.140_901_2).abs() < 1e-6);
        for k in 0..4 {
            assert_eq!(g[k], g[7 - k]);
        }
        assert!(g[3] > g[2] && g[2] > g[1]);
    }

    #[test]
    fn outside_cavity() {
        assert!(cosine_coupling_profile(8, 8e-3, 50e-3, 1.0).is_err());
    }
}
