use std::process::ExitCode;

use clap::error::ErrorKind;
use jetspace_cli::{run_from_args, EXIT_FAILURE};

fn main() -> ExitCode {
    match run_from_args(std::env::args_os()) {
        Ok(outcome) => {
            let text = outcome.render();
            if matches!(outcome.report, jetspace_cli::Report::Error(_))
                && outcome.format == jetspace_cli::Format::Text
            {
                eprint!("{text}");
            } else {
                print!("{text}");
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            let _ = e.print();
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_FAILURE as u8),
            }
        }
    }
}
