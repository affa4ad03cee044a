//! Command-line front end: run configuration, solve/audit/sweep orchestration, atomic
//! persistence and static SVG/CSV reports.

pub mod angles;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;
pub mod svg;

pub use commands::{run, run_sweep, Cli, Command, SWEEP_PASS_LINE};
pub use config::{MeshConfig, RunConfig};
pub use error::{error_json, exit, CliError, Result};
pub use output::write_atomic;
pub use pipeline::{default_lambdas, full_audit, global_rows, solve_and_audit, solve_on, solve_sector, AuditPlan};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "SECTOR_SYMMETRY_THREADS";

/// Sizes the global thread pool from [`THREADS_ENV`] when it is set.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("{THREADS_ENV} = `{v}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Internal(e.into()))
}
