use std::io::Write;

use anyhow::Context;
use clap::Parser;
use tnorm::cli::{run, RunConfig};

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let config = RunConfig::parse();
    let outcome = run(&config);
    let text = serde_json::to_string_pretty(&outcome.output).context("serializing output")?;
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "{text}").context("writing output")?;
    stdout.flush()?;
    std::process::exit(outcome.code);
}
