use std::process::ExitCode;

use clap::Parser;

use semdep_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(done) => {
            println!("{}", done.document.to_json());
            eprintln!("{}", done.summary);
            ExitCode::from(done.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
