use super::trace::TimeTrace;
use crate::error::{Error, Result};
use crate::model::CollectiveBasis;

/// Collective-mode occupations over time.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveSeries {
    pub t: Vec<f64>,
    /// `|B(t)|²`.
    pub bright: Vec<f64>,
    /// `dark[n][k] = |D_n(t_k)|²`, in basis row order without the bright row.
    pub dark: Vec<Vec<f64>>,
}

impl CollectiveSeries {
    /// Total magnon occupation at each sample.
    pub fn total(&self) -> Vec<f64> {
        (0..self.t.len())
            .map(|k| self.bright[k] + self.dark.iter().map(|d| d[k]).sum::<f64>())
            .collect()
    }
}

/// Projects the magnon amplitudes of `trace` onto the basis rows.
///
/// Amplitudes are taken in the trace's rotating frame, so for a gradient comb
/// centred on the carrier each detuned magnon keeps its own phase
/// `e^{−iδ_j t}`: the bright occupation is large right after the input,
/// drains into the dark rows, and returns at `T = 2π/Δω`.
pub fn collective_projection(trace: &TimeTrace, basis: &CollectiveBasis) -> Result<CollectiveSeries> {
    if trace.modes() != basis.len() {
        return Err(Error::DimensionMismatch { expected: basis.len(), found: trace.modes() });
    }
    let dark_rows: Vec<usize> = basis.dark_indices().collect();
    let mut bright = Vec::with_capacity(trace.len());
    let mut dark = vec![Vec::with_capacity(trace.len()); dark_rows.len()];
    for m in &trace.magnons {
        let c = basis.project(m)?;
        bright.push(c[basis.bright_index].norm_sqr());
        for (slot, &row) in dark.iter_mut().zip(&dark_rows) {
            slot.push(c[row].norm_sqr());
        }
    }
    Ok(CollectiveSeries { t: trace.t.clone(), bright, dark })
}
