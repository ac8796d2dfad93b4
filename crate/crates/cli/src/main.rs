use std::process::ExitCode;

use clap::Parser;
use dephasing::{run, write_outputs, Cli, CliError, RunConfig};

fn main() -> ExitCode {
    match try_main() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn try_main() -> Result<u8, CliError> {
    let config = RunConfig::from_cli(Cli::parse())?;
    let output = run(&config)?;
    let written = write_outputs(&config, &output)?;
    print!("{}", output.summary);
    println!("wrote {} files to {}", written.len(), config.out_dir.display());
    Ok(if output.summary.all_pass() { 0 } else { 4 })
}
