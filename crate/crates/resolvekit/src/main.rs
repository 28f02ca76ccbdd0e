use clap::Parser;
use resolvekit::cli;

fn main() {
    let args = cli::Args::parse();
    std::process::exit(cli::run(args));
}
