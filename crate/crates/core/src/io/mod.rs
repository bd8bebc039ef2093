//! Experiment specs, presets, result tables and the experiment runner.

pub mod config;
pub mod presets;
pub mod runner;
pub mod table;

pub use config::{load_spec, parse_spec, ExperimentKind, ExperimentSpec, SweepParameter};
pub use presets::{preset, PRESET_NAMES};
pub use runner::{execute, run_experiment};
pub use table::{Cell, ResultTable};
