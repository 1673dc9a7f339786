//! Experiment harness: configuration, seeded Monte Carlo runs, and CSV/SVG
//! output for the `ltgmm` command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod experiments;
pub mod stats;
pub mod svg;
pub mod sweep;

pub use commands::{execute, Command};
pub use config::{ExperimentConfig, LearnerKind};
pub use error::{HarnessError, Result};
pub use experiments::{
    run_boundary_grid, run_memscore, run_overparam_grid, run_scaling_n, run_shifted, run_sweep_mu,
    run_sweep_p, run_tail_shortening,
};
pub use stats::confidence_interval;
pub use svg::{render_svg, write_svg};
pub use sweep::{SweepResult, SweepRow, CSV_HEADER};
