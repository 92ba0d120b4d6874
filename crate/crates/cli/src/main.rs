use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lamp_cli::cli::{execute, render, Cli};
use lamp_cli::style::Style;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::iter::once("lamp".to_string())
        .chain(std::env::args().skip(1))
        .collect::<Vec<_>>()
        .join(" ");
    let style = Style::from_env();
    match execute(&cli, &echo, style) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(render(&out, cli.format).as_bytes());
            let _ = stdout.flush();
            match out.failure {
                None => ExitCode::SUCCESS,
                Some(msg) => {
                    eprintln!("lamp: {msg}");
                    ExitCode::FAILURE
                }
            }
        }
        Err(e) => {
            eprintln!("lamp: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
