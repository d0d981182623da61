//! Sweep engine, figure presets, output writers and the closed-form audit
//! behind the `qcorr` command-line tool.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod sweep;
pub mod verify;

pub use config::{parse_config, Measure, Mode, Param, SweepSpec};
pub use error::{CliError, Result};
pub use sweep::{run_sweep, SweepRow};
pub use verify::{render_text, verify_report, VerifyReport};
