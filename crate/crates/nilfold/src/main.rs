//! `nilfold`: reproduces the splitting integrals, tail bounds, homoclinic
//! diagnostics, Hamiltonian checks and spectral classifications of
//! `nilfold-core` from the command line.

mod cli;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Outcome};

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { cli::EXIT_USAGE } else { cli::EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli::run(&args) {
        Ok(Outcome::Passed) => ExitCode::from(cli::EXIT_OK),
        Ok(Outcome::Failed(names)) => {
            eprintln!("failed checks: {}", names.join(", "));
            ExitCode::from(cli::EXIT_NUMERIC)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(cli::exit_code(&e))
        }
    }
}
