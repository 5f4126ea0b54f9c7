use clap::Parser;

use edenlab::cli::{exit_code, run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("edenlab: {e}");
        std::process::exit(exit_code(&e));
    }
}
