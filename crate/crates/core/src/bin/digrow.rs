use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use digrow::cli::{run, Command, EXIT_INVALID};

fn main() -> ExitCode {
    let cmd = match Command::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    if let Ok(v) = std::env::var("DIGROW_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("DIGROW_THREADS must be a positive integer, found {v:?}");
                return ExitCode::from(EXIT_INVALID as u8);
            }
        }
    }
    let outcome = run(&cmd);
    eprint!("{}", outcome.messages);
    if !outcome.output.is_empty() {
        let written = match &cmd.out {
            Some(path) => std::fs::write(path, &outcome.output),
            None => std::io::stdout().write_all(outcome.output.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("cannot write output: {e}");
            return ExitCode::from(EXIT_INVALID as u8);
        }
    }
    ExitCode::from(outcome.code as u8)
}
