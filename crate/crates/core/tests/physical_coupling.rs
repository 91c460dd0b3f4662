use std::collections::HashMap;

use magnon_memory::model::{coupling_from_physical, PhysicalCouplingParams};
use magnon_memory::units::{mhz, to_mhz};

fn golden() -> HashMap<String, f64> {
    let text = include_str!("data/yig_coupling.txt");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (k, v) = l.split_once('=').unwrap();
            (k.trim().to_string(), v.trim().parse().unwrap())
        })
        .collect()
}

fn params(g: &HashMap<String, f64>, eta: f64) -> PhysicalCouplingParams {
    PhysicalCouplingParams::new(eta, mhz(1e3 * g["omega_ghz"]), g["modal_volume_m3"], g["spin_count"], g["spin"])
}

#[test]
fn golden_inputs_give_ten_mhz() {
    let g = golden();
    let coupling = coupling_from_physical(&params(&g, g["eta"])).unwrap();
    assert!((to_mhz(coupling) / g["target_g_mhz"] - 1.0).abs() < 1e-12);
}

#[test]
fn eta_recovered_by_bisection() {
    let g = golden();
    let target = mhz(g["target_g_mhz"]);
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if coupling_from_physical(&params(&g, mid)).unwrap() < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((0.5 * (lo + hi) / g["eta"] - 1.0).abs() < 1e-12);
}
