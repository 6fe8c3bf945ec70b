use std::process::ExitCode;

use sociosynth::cli::{parse_cli, run_command, CliError, CommandOutcome};

fn main() -> ExitCode {
    let spec = match parse_cli(std::env::args_os()) {
        Ok(spec) => spec,
        Err(CliError::HelpRequested(text)) => {
            print!("{text}");
            return ExitCode::SUCCESS;
        }
        Err(error) => {
            eprintln!("{error}");
            return ExitCode::from(2);
        }
    };
    match run_command(&spec) {
        Ok(CommandOutcome::Success) => ExitCode::SUCCESS,
        Ok(CommandOutcome::ValidationFailed) => ExitCode::from(1),
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(2)
        }
    }
}
