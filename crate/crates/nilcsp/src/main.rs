use std::io;
use std::process::ExitCode;

use clap::Parser;
use nilcsp::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    run(cli, io::BufReader::new(io::stdin()), io::stdout().lock(), io::stderr().lock()).into()
}
