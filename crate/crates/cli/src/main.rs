use std::process::ExitCode;

use badmm_cli::{parse_config, run_experiment, CliError};

fn main() -> ExitCode {
    let result = parse_config(std::env::args_os(), None).and_then(|c| run_experiment(&c));
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(err) => {
            match &err {
                CliError::Args(e) => {
                    let _ = e.print();
                }
                other => eprintln!("error: {other}"),
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
