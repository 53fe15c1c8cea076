//! Experiment driver around `msrom-core`: strict JSON configs in, one CSV row
//! per instance out.

pub mod config;
pub mod experiment;
pub mod oracle;
pub mod report;

pub use config::{parse_config, ConfigError, ExperimentConfig, Mode, Plan};
pub use experiment::{run_experiment, Outcome};
pub use report::{render, Row, COLUMNS};
