mod commands;
mod error;
mod options;

use std::io::Write as _;
use std::process::ExitCode;

use error::CliError;

fn run() -> Result<String, CliError> {
    let cfg = options::parse_config(std::env::args_os())?;
    eprint!("{}", cfg.echo());
    commands::dispatch(&cfg)
}

fn main() -> ExitCode {
    let err = match run() {
        Ok(out) => {
            print!("{out}");
            return ExitCode::SUCCESS;
        }
        Err(e) => e,
    };
    let code = err.exit_code() as u8;
    match err {
        CliError::Clap(e) => {
            let _ = e.print();
        }
        e => {
            let _ = writeln!(std::io::stderr(), "error: {e}");
        }
    }
    ExitCode::from(code)
}
