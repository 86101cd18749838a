use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use pacs_cli::config::RunConfig;
use pacs_cli::output::{panel_path, plot_script, write_tables};
use pacs_cli::{commands, exit, verify, Command};

/// Photon-added coherent states for shape-invariant potentials: figure data,
/// statistics, weights and verification.
#[derive(Debug, Parser)]
#[command(name = "pacs", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// key = value configuration file (`#` starts a comment).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path (second panels get a `_b` suffix).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override a configuration key, e.g. `--param rho=-3`.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long)]
    emit_plot_script: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match RunConfig::resolve(cli.command, cli.config.as_deref(), &cli.params, cli.out.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(exit::CONFIG_ERROR);
        }
    };

    if cfg.command == Command::Verify {
        let checks = verify::run_checks(&cfg);
        let report = verify::format_report(&cfg, &checks);
        print!("{report}");
        if let Some(out) = &cli.out {
            if let Err(e) = std::fs::write(out, &report) {
                eprintln!("cannot write {}: {e}", out.display());
                return ExitCode::from(exit::NUMERICAL_FAILURE);
            }
        }
        return if checks.iter().all(|c| c.pass()) {
            ExitCode::from(exit::SUCCESS)
        } else {
            ExitCode::from(exit::VERIFICATION_FAILURE)
        };
    }

    let tables = commands::run(&cfg);
    let paths = match write_tables(&cfg.output_path, &tables) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("cannot write {}: {e}", cfg.output_path.display());
            return ExitCode::from(exit::NUMERICAL_FAILURE);
        }
    };
    for p in &paths {
        println!("wrote {}", p.display());
    }
    if cli.emit_plot_script {
        let script = panel_path(&cfg.output_path, 0).with_extension("gp");
        if let Err(e) = std::fs::write(&script, plot_script(&tables, &paths)) {
            eprintln!("cannot write {}: {e}", script.display());
            return ExitCode::from(exit::NUMERICAL_FAILURE);
        }
        println!("wrote {}", script.display());
    }
    let failures: usize = tables.iter().map(|t| t.failures()).sum();
    if failures > 0 {
        eprintln!("{failures} values could not be evaluated and were written as NaN");
        return ExitCode::from(exit::NUMERICAL_FAILURE);
    }
    ExitCode::from(exit::SUCCESS)
}
