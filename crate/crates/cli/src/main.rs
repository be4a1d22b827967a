use clap::Parser;

fn main() {
    let cli = fadingbc_cli::Cli::parse();
    std::process::exit(fadingbc_cli::run(cli));
}
