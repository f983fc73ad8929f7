use std::io::{self, IsTerminal, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use miriam::http::HEARTBEAT;
use miriam::hub::Hub;
use miriam::repl::{self, ReplOptions};
use miriam::serve::{serve, ServeOptions};

/// Chat-based monitoring of a simulated vehicle mission.
#[derive(Parser)]
#[command(name = "miriam", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Mission {
    /// Mission plan JSON; defaults to the bundled demo plan.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Scenario JSON; defaults to the bundled demo scenario.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Fast-forward the simulation to this mission time before accepting input.
    #[arg(long, default_value_t = 0.0)]
    start_at: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Serve the HTTP API and event stream.
    Serve {
        #[command(flatten)]
        mission: Mission,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Simulated seconds per wall-clock second; 0 freezes the clock.
        #[arg(long, default_value_t = 1.0)]
        speed: f64,
    },
    /// Chat on stdin/stdout with the simulation running in-process.
    Repl {
        #[command(flatten)]
        mission: Mission,
        /// Run the clock in real time at this multiplier instead of /advance.
        #[arg(long)]
        speed: Option<f64>,
    },
}

fn main() -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(io::stderr)
        .init();
    match Cli::parse().command {
        Command::Serve {
            mission,
            port,
            host,
            speed,
        } => {
            anyhow::ensure!(
                speed >= 0.0 && speed.is_finite(),
                "--speed must be a non-negative number"
            );
            let runtime = miriam::load::runtime(mission.plan.as_deref(), mission.scenario.as_deref())?;
            let hub = Hub::shared(runtime);
            hub.lock().unwrap().advance_to(mission.start_at);
            let opts = ServeOptions {
                addr: SocketAddr::new(host, port),
                speed,
                heartbeat: HEARTBEAT,
            };
            tokio::runtime::Runtime::new()?.block_on(serve(hub, opts, |addr| {
                println!("listening on http://{addr}");
                let _ = io::stdout().flush();
            }))
        }
        Command::Repl { mission, speed } => {
            let mut runtime = miriam::load::runtime(mission.plan.as_deref(), mission.scenario.as_deref())?;
            runtime.advance_to(mission.start_at);
            let opts = ReplOptions {
                speed,
                prompt: io::stdin().is_terminal(),
            };
            repl::run(runtime, io::stdin().lock(), io::stdout(), &opts)?;
            Ok(())
        }
    }
}
