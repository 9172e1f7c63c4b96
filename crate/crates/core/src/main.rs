use std::process::ExitCode;

use clap::Parser;
use curvlab::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("curvlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
