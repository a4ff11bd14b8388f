//! Configuration-driven verification runs.
//!
//! A run reads a TOML config, builds one explicit instance or a seeded suite,
//! executes the requested verifiers and writes a JSON-lines report plus a
//! summary table. All randomness derives from the config seed, and records
//! carry no timestamps, so equal configs give byte-identical reports.

mod config;
mod plot;
mod run;

pub use config::{
    config_skeleton, BudgetSpec, ExperimentConfig, Exponent, InstanceSpec, Params, Planned, SpaceSpec, SuiteSpec,
};
pub use plot::{emit_plotdata, plot_tables, PlotTables};
pub use run::{
    exit_code, parse_jsonl, run, run_config, summary_table, to_jsonl, Num, Record, RunOutput, EXIT_ERROR,
    EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS,
};
