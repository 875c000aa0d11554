//! Experiment runner: configuration, seeded test functions, execution and reporting.

pub mod bumps;
pub mod config;
pub mod rows;
pub mod run;

pub use bumps::{discriminant_lower_bound, discriminant_upper_bound, expand, seeded_bump};
pub use config::{ExperimentConfig, ExperimentId, Region, Sweep, TestFunctionSpec};
pub use rows::{emit, relative_error, rows_from_json, to_csv, to_json, Format, Knobs, ReportRow};
pub use run::{run, run_with, test_functions};
