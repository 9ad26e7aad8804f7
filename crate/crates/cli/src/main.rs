use clap::Parser;
use hawkdove_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("hawkdove: {e}");
        std::process::exit(e.exit_code());
    }
}
