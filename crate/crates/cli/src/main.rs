use std::process::ExitCode;

use clap::Parser;
use deformed_spectra_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match cli.into_config().and_then(run) {
        Ok(summary) => {
            for f in &summary.files {
                println!("{}", f.display());
            }
            println!("{}", summary.manifest_path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
