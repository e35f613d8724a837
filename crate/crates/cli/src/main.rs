use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use semilag_cli::config::{Cli, CliCommand, Command};
use semilag_cli::{converge, phase, svg, CliError, ExperimentConfig, Result};

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Write { path: path.into(), source })
}

fn emit(config: &ExperimentConfig, csv: &str) -> Result<()> {
    match &config.out {
        Some(p) => write(p, csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn converge(config: &ExperimentConfig) -> Result<bool> {
    let report = converge::run_convergence(config)?;
    emit(config, &report.to_csv())?;
    if config.out.is_some() {
        print!("{}", converge::render_table(&report));
    }
    let failures = report.failures();
    if failures > 0 {
        log::error!("{failures} of {} rows failed", report.rows.len());
    }
    Ok(failures == 0)
}

fn phase(config: &ExperimentConfig) -> Result<bool> {
    let rows = phase::run_phase(config)?;
    emit(config, &phase::to_csv(&rows))?;
    if let Some(p) = &config.svg {
        write(p, &svg::phase_chart(&rows, config.mu, config.m))?;
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        CliCommand::Converge(args) => args.resolve(Command::Converge).and_then(|c| converge(&c)),
        CliCommand::Phase(args) => args.resolve(Command::Phase).and_then(|c| phase(&c)),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
