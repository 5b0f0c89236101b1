use std::process::ExitCode;

use amoeba_lab::error::{CliError, EXIT_OK, EXIT_USAGE};
use amoeba_lab::{run, Cli};
use clap::Parser;

fn real_main() -> Result<i32, CliError> {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return Ok(code);
        }
    };
    let cfg = cli.resolve()?;
    let report = run::execute(&cfg)?;
    run::finish(&report, &cfg)
}

fn main() -> ExitCode {
    let code = real_main().unwrap_or_else(|e| {
        eprintln!("amoeba-lab: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
