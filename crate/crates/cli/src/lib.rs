//! Config parsing and sweep execution behind the `cogrelay` binary.

pub mod config;
pub mod run;

pub use config::{parse_config, serialize_config, ConfigError, McSettings, RunConfig};
pub use run::{gnuplot_stub, run, Method, RunError, RunOutput, RunSpec, Source};
