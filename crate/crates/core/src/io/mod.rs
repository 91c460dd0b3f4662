//! Config files, CSV results and the command-line front end.

pub mod cli;
mod config;
mod output;

pub use config::{
    load_config, parse_entries, CouplingSpec, DriveSection, Entry, FieldSection, MonteCarloSection, RunConfig,
    RunSection, SpectrumSection, SweepSection, SystemSection, Value,
};
pub use output::{
    read_monte_carlo, read_table, read_table_from, read_trace, write_result, write_result_to, Metadata, Output, Table,
};
