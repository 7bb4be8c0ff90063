use std::process::ExitCode;

use flagorbit_cli::{run, to_json, CliError};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(output) => {
            if let Some(path) = &output.out {
                if let Err(e) = std::fs::write(path, to_json(&output.document)) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            print!("{}", output.stdout());
            ExitCode::SUCCESS
        }
        Err(CliError::Help(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message().trim_end());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
