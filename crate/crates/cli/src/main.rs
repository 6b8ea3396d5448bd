use std::process::ExitCode;

use clap::Parser;
use gorilla::cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match gorilla::run(&cli) {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
