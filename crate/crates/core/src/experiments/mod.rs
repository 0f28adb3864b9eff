//! Config-driven experiments: TOML configs, the simulate / verify /
//! best-response / sweep / fig1 commands and their CSV and SVG output.

mod commands;
mod config;
mod fig1;
mod output;
mod verify;

pub use commands::{
    argmax_line, best_response_for, cmd_best_response, cmd_fig1, cmd_simulate, cmd_sweep, cmd_verify, ledger_csv,
    ledger_header, report_csv, summary_csv, sweep, SweepAxis, SweepRow,
};
pub use config::{AnalysisConfig, ExperimentConfig, MinerConfig};
pub use fig1::{fig1_series, line_plot_svg, FIG1_POINTS, FIG1_RANGE};
pub use output::{fmt_f64, write_atomic, Table};
pub use verify::{verify, AuditVerdict, ReportRow, Theorem, VerifyReport};

/// Worker-count override read by the command-line front end.
pub const WORKERS_ENV: &str = "POOLSIM_WORKERS";
