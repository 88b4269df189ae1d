use clap::Parser;

fn main() {
    std::process::exit(shfc_cli::main_with(&shfc_cli::Cli::parse()));
}
