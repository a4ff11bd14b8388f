//! `infima`: run verification configs, derive plot tables, generate configs.
//!
//! Exit codes of `verify`: 0 all PASS, 1 config or input error, 2 any FAIL,
//! 3 any INCONCLUSIVE without FAIL.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use infima::banach::Norm;
use infima::experiment::{self, EXIT_ERROR};
use infima::functional::Regime;

#[derive(Parser)]
#[command(name = "infima", version, about = "Numerical checks of infimum identities for linear-plus-Lipschitz functionals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verifiers listed in a TOML config and write a JSON-lines report.
    Verify {
        config: PathBuf,
        /// Report path, overriding the config's `output`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write CSV plot tables (thm4_4, thm2_fix, thm1) from a report.
    Plot {
        report: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Print a config skeleton around one generated instance.
    Generate {
        #[arg(long)]
        seed: u64,
        /// EQUAL or STRICT_LESS.
        #[arg(long, value_parser = parse_regime)]
        regime: Regime,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Exponent: 1, 2, a number > 1, or inf.
        #[arg(long, default_value = "2", value_parser = parse_norm)]
        p: Norm,
    },
}

fn parse_regime(s: &str) -> Result<Regime, String> {
    match s {
        "EQUAL" => Ok(Regime::Equal),
        "STRICT_LESS" => Ok(Regime::StrictLess),
        other => Err(format!("unknown regime {other:?}; use EQUAL or STRICT_LESS")),
    }
}

fn parse_norm(s: &str) -> Result<Norm, String> {
    Norm::parse_tag(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify { config, output } => match experiment::run(&config, output.as_deref()) {
            Ok(out) => {
                print!("{}", out.summary);
                println!("report: {}", out.report_path.display());
                out.exit_code
            }
            Err(e) => {
                eprintln!("error: {}: {e}", config.display());
                EXIT_ERROR
            }
        },
        Command::Plot { report, out_dir } => {
            let result = std::fs::read_to_string(&report)
                .map_err(|e| e.to_string())
                .and_then(|src| experiment::parse_jsonl(&src).map_err(|e| e.to_string()))
                .and_then(|records| experiment::emit_plotdata(&records, &out_dir).map_err(|e| e.to_string()));
            match result {
                Ok(paths) => {
                    for p in paths {
                        println!("{}", p.display());
                    }
                    0
                }
                Err(e) => {
                    eprintln!("error: {}: {e}", report.display());
                    EXIT_ERROR
                }
            }
        }
        Command::Generate { seed, regime, n, p } => match experiment::config_skeleton(seed, regime, n, p) {
            Ok(text) => {
                print!("{text}");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_ERROR
            }
        },
    };
    ExitCode::from(code as u8)
}
