//! Time-domain storage and retrieval.

mod asymptotic;
mod collective;
mod drive;
mod efficiency;
mod integrate;
mod kernel;
mod oracle;
mod trace;
mod visibility;

pub use asymptotic::{asymptotic_solution, enhanced_decay_rate, revival_peak_time, storage_time};
pub use collective::{collective_projection, CollectiveSeries};
pub use drive::{DriveSpec, Pulse, PulseShape, Side};
pub use efficiency::{efficiency_closed_form, measure_efficiency, ClosedFormEfficiency, EfficiencyReport, Window};
pub use integrate::{default_step, integrate, uniform_grid, IntegrateOptions, StepControl};
pub use kernel::{comb_kernel, kernel_integrate};
pub use oracle::exact_oracle;
pub use trace::{integrate_window, TimeTrace};
pub use visibility::{balanced_reference, interference_visibility, sample_complex};
