//! Sweep runner behind the `charmean` binary: prime-range sweeps over the
//! identity suite, JSON/CSV reports and the per-prime result cache.

pub mod cache;
pub mod config;
pub mod error;
pub mod report;
pub mod sweep;

pub use config::{parse_identities, OutputFormat, PrimeRange, SweepConfig};
pub use error::SweepError;
pub use report::{emit_report, RunReport, Summary};
pub use sweep::{run_sweep, TOOL_VERSION};
