use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use su21_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let outcome = match run(&cli, &mut out) {
        Ok(o) => o,
        Err(e) => {
            let _ = out.flush();
            let err = serde_json::json!({ "error": { "code": e.code(), "message": e.to_string() } });
            eprintln!("{err}");
            e.outcome()
        }
    };
    if out.flush().is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(outcome as u8)
}
