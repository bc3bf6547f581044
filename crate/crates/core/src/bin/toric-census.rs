use clap::Parser;
use toric_census::cli::{self, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    match cli::run(&cfg) {
        Ok(out) => print!("{out}"),
        Err(e) => {
            eprintln!("toric-census: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
