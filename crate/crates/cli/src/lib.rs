//! Batch verification harness: single checks, parallel sweeps with CSV or
//! JSON output, Möbius classification dumps, and the reduction identity.

pub mod commands;
pub mod config;
pub mod sweep;

pub use commands::{run, Cli, Command, EXIT_INVALID, EXIT_MISMATCH, EXIT_OK};
pub use config::{ConfigFile, Format, IntList, Selection, SweepConfig};
pub use sweep::{render, run_sweep, RunRecord, Summary, SweepOutcome, CSV_HEADER};
