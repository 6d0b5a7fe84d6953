use clap::Parser;
use stochmat_cli::args::Cli;
use stochmat_cli::commands::run;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli.command) {
        eprintln!("stochmat: {e}");
        std::process::exit(e.exit_code());
    }
}
