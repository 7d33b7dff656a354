use clap::Parser;

fn main() {
    let cli = charevo_cli::Cli::parse();
    std::process::exit(charevo_cli::run(&cli));
}
