use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use paircollect_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match &cli.out {
        Some(path) => File::create(path)
            .map_err(CliError::Io)
            .and_then(|mut f| run(&cli, &mut f)),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            run(&cli, &mut lock).and_then(|()| lock.flush().map_err(CliError::Io))
        }
    };
    // timing stays on stderr so that reports are byte-reproducible
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
