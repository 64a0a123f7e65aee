use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use wreath_hsp_cli::{out_path, run, Cli, EXIT_FAILURE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(&cli);
    eprint!("{}", out.stderr);
    let written = match out_path(&cli) {
        Some(path) => std::fs::write(path, &out.stdout),
        None => std::io::stdout().write_all(out.stdout.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_FAILURE as u8);
    }
    ExitCode::from(out.code as u8)
}
