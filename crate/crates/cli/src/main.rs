use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = abem_cli::Cli::parse();
    match abem_cli::run(&cli) {
        Ok(outcome) => {
            for path in &outcome.written {
                println!("{}", path.display());
            }
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            if outcome.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
