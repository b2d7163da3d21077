use clap::Parser;

fn main() {
    let cli = entangle_cli::commands::Cli::parse();
    if let Err(err) = entangle_cli::commands::run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
