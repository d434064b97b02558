use clap::Parser;
use disclab::config::Cli;

fn main() {
    let cli = Cli::parse();
    std::process::exit(disclab::dispatch::run(&cli));
}
