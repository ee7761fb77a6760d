use std::process::ExitCode;

use clap::Parser;
use zkamp_cli::config::{Cli, RunConfig, SEED_ENV};
use zkamp_cli::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = cli.command.split();
    let env_seed = std::env::var(SEED_ENV).ok();
    let result = RunConfig::new(kind, args, env_seed.as_deref()).and_then(|cfg| {
        let report = zkamp_cli::run(&cfg)?;
        let json = report.to_json();
        match &cfg.output {
            Some(path) => std::fs::write(path, json)?,
            None => print!("{json}"),
        }
        Ok::<_, CliError>(report.exit_code())
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("zkamp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
