use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand};
use miriam_core::config::read_file;
use miriam_core::mission::load_plan;
use miriam_core::sim::{Scenario, Simulator};

/// Deterministic mission simulator emitting NDJSON telemetry and events.
#[derive(Parser)]
#[command(name = "sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario to completion.
    Run {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        /// Output file, or - for stdout.
        #[arg(long, default_value = "-")]
        out: String,
    },
}

fn main() -> anyhow::Result<()> {
    let Command::Run { plan, scenario, out } = Cli::parse().command;
    let plan = load_plan(&read_file(&plan).with_context(|| format!("reading {}", plan.display()))?)?;
    let scenario =
        Scenario::parse(&read_file(&scenario).with_context(|| format!("reading {}", scenario.display()))?)?;
    let mut sim = Simulator::new(plan, scenario)?;
    let mut sink: Box<dyn Write> = if out == "-" {
        Box::new(BufWriter::new(io::stdout().lock()))
    } else {
        Box::new(BufWriter::new(
            File::create(&out).with_context(|| format!("creating {out}"))?,
        ))
    };
    let summary = sim.run(&mut sink)?;
    eprintln!(
        "{} ticks, {} events, {} objectives completed",
        summary.ticks, summary.events, summary.completed_objectives
    );
    Ok(())
}
