use clap::Parser;
use simplederiv::cli::{run, Cli, CliError};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let report = run(&cli.job()?)?;
    print!("{}", report.text);
    if let Some(path) = &cli.json {
        let body = serde_json::to_string_pretty(&report.json).expect("report serialises");
        std::fs::write(path, body + "\n").map_err(|e| CliError::Usage(format!("writing {}: {e}", path.display())))?;
    }
    Ok(())
}
