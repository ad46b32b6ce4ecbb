//! Runs one verification suite and prints its report as JSON.
//!
//! `cargo run --example verify_suite -- orbit`

use fockweyl::verify::{run_suite, Config, RunOptions};

fn main() -> fockweyl::Result<()> {
    let suite = std::env::args().nth(1).unwrap_or_else(|| "group".into());
    let report = run_suite(&suite, &Config::default(), RunOptions::default())?;
    println!("{}", report.to_json());
    if !report.passed() {
        std::process::exit(1);
    }
    Ok(())
}
