use std::process::ExitCode;

use clap::Parser;
use nlocal::cli::{execute, Cli};

fn main() -> ExitCode {
    // Exit code 2 is reserved for campaign counterexamples, so usage errors
    // exit with 1 like any other failure.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli, &mut std::io::stdout().lock()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
