use clap::Parser;

fn main() {
    let cli = asymstop::cli::Cli::parse();
    std::process::exit(asymstop::cli::run(cli));
}
