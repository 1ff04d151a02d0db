use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polariton_cli::output::write_json;
use polariton_cli::presets::{preset, PRESETS};
use polariton_cli::validate::run_suite;
use polariton_cli::{execute, CliError, RunConfig};

/// Cavity-polariton dynamics and spectroscopy.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a TOML config (or a JSON sidecar of an earlier run).
    Run {
        /// Config file; omit when using --preset.
        config: Option<PathBuf>,
        /// Bundled preset: fig2, fig2_upper, fig2_dark, fig3, fig4, fig5, fig6, validate.
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// Output directory, overriding run.output_dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the oracle suite and invariant checks at the reference parameters.
    Validate {
        /// Write the machine-readable report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print a bundled preset, or list them.
    Preset { name: Option<String> },
}

/// Honors POLARITON_THREADS; rayon's default otherwise.
fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("POLARITON_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("POLARITON_THREADS = `{value}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Run { config, preset: name, out } => {
            let cfg = match (config, name) {
                (Some(path), None) => RunConfig::load(&path)?,
                (None, Some(name)) => {
                    let text = preset(&name)
                        .ok_or_else(|| CliError::Config(format!("no preset named `{name}`")))?;
                    RunConfig::from_toml(text)?
                }
                _ => return Err(CliError::Config("give a config file or --preset".into())),
            };
            let summary = execute(&cfg, out.as_deref())?;
            for p in summary.outputs.iter().chain([&summary.sidecar]) {
                println!("{}", p.display());
            }
            Ok(())
        }
        Command::Validate { json } => {
            let report = run_suite();
            for c in &report.checks {
                println!(
                    "{} {:<60} {:>10.3e} (tol {:.0e}, {:.2} s)",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.quantity,
                    c.deviation,
                    c.tolerance,
                    c.runtime
                );
            }
            println!(
                "dim(L) = {}, n_bar = {:.4}",
                report.derived.liouvillian_dim, report.derived.thermal_occupation[0]
            );
            if let Some(path) = json {
                write_json(&path, &report)?;
            }
            match report.failed() {
                0 => Ok(()),
                n => Err(CliError::Validation(n)),
            }
        }
        Command::Preset { name: None } => {
            for (name, _) in PRESETS {
                println!("{name}");
            }
            Ok(())
        }
        Command::Preset { name: Some(name) } => {
            let text = preset(&name).ok_or_else(|| CliError::Config(format!("no preset named `{name}`")))?;
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
