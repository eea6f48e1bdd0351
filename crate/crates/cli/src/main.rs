mod cli;
mod commands;
mod report;
mod session;

use std::process::ExitCode;

use archord::symreal::RefineConfig;
use clap::Parser;

use cli::Cli;
use report::{CliError, Report};
use session::Session;

fn execute(cli: &Cli) -> Result<Report, CliError> {
    let opts = commands::settings(cli)?;
    let mut config = RefineConfig::default();
    if let Some(n) = cli.refine_cap {
        config.max_rounds = n;
    }
    let mut session = match &cli.session {
        Some(path) => Session::open(path, config)?,
        None => Session::new(config),
    };
    commands::run(&mut session, &cli.command, &opts)
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                println!("{}", e.to_json());
            }
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
