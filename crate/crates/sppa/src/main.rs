use clap::Parser;

fn main() -> std::process::ExitCode {
    sppa::cli::init_threads();
    let cli = sppa::cli::Cli::parse();
    std::process::ExitCode::from(sppa::cli::run(cli))
}
