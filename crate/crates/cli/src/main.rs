use clap::Parser;
use relspin_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("relspin: {e}");
        std::process::exit(e.exit_code());
    }
}
