use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use pencilrange_cli::{run, Cli};

fn main() -> ExitCode {
    #[cfg(feature = "parallel")]
    if let Some(threads) = std::env::var("PENCILRANGE_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // Ignore the error if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }

    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &outcome.text),
                None => std::io::stdout().write_all(outcome.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(pencilrange_cli::exit::INPUT_ERROR);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
