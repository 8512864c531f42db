use clap::Parser;

fn main() {
    let config = catenoid::cli::RunConfig::parse();
    if let Err(e) = catenoid::cli::run(config) {
        eprintln!("catenoid: {e}");
        std::process::exit(e.exit_code());
    }
}
