use clap::Parser;

fn main() {
    std::process::exit(qso::cli::run(qso::cli::Cli::parse()));
}
