//! Coupled-mode simulation of N magnon modes linearly coupled to a single
//! microwave cavity mode.
//!
//! The crate covers the frequency-domain picture (self-energy, reflection,
//! group delay, eigenmodes, critical coupling) and the time-domain picture of
//! the magnon gradient memory: a comb of evenly detuned magnon modes absorbs a
//! microwave pulse, dephases into collective dark modes and rephases after
//! `T = 2π/Δω`, re-emitting the pulse through the cavity.
//!
//! Internally every frequency and rate is angular (rad/s) and every time is in
//! seconds. The [`io`] module converts from the cyclic MHz / ns / Oe units used
//! in configuration files and result tables.

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod io;
pub mod model;
pub mod spectrum;
pub mod units;

pub use error::{Error, Result};
pub use model::{CavityMode, MagnonMode, SystemConfig};
