use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use covsim::harness::{metrics, render_svg, run_to_writer, write_bsm_log, write_metrics_csv, HarnessError, RunOptions};
use covsim::{load_scenario_file, ScenarioError};

#[derive(Parser)]
#[command(name = "covsim", version, about = "Collaborative-perception co-simulation runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its JSONL trace.
    Run {
        scenario: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        metrics: Option<PathBuf>,
        #[arg(long, requires = "svg_out")]
        svg_at: Option<f64>,
        #[arg(long, requires = "svg_at")]
        svg_out: Option<PathBuf>,
        /// Directory for binary point-cloud sidecars, one per scan.
        #[arg(long)]
        dump_clouds: Option<PathBuf>,
        /// Length-prefixed binary log of every broadcast message.
        #[arg(long)]
        bsm_log: Option<PathBuf>,
        /// Run per-host pipelines on all cores. Output is identical either way.
        #[arg(long)]
        parallel: bool,
    },
    /// Parse and validate a scenario without running it.
    Validate { scenario: PathBuf },
}

enum Failure {
    Invalid(ScenarioError),
    Runtime(HarnessError),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Scenario(s) => Failure::Invalid(s),
            other => Failure::Runtime(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Validate { scenario } => {
            let s = load_scenario_file(&scenario).map_err(Failure::Invalid)?;
            println!("{}: ok ({} actors, {} steps)", scenario.display(), s.actors.len(), s.step_count());
            Ok(())
        }
        Command::Run { scenario, seed, out, metrics: metrics_out, svg_at, svg_out, dump_clouds, bsm_log, parallel } => {
            let sc = load_scenario_file(&scenario).map_err(Failure::Invalid)?;
            let opts = RunOptions { seed, parallel, dump_clouds };
            let started = Instant::now();
            let trace = run_to_writer(&sc, opts, BufWriter::new(File::create(&out)?))?;
            let elapsed = started.elapsed().as_secs_f64();
            log::info!(
                "{} steps in {:.2} s ({:.2} ms/step), trace at {}",
                trace.len(),
                elapsed,
                1e3 * elapsed / trace.len().max(1) as f64,
                out.display()
            );
            if let Some(path) = metrics_out {
                let m = metrics(&trace, &sc.collab)?;
                write_metrics_csv(BufWriter::new(File::create(&path)?), &m)?;
                if let Some(h) = m.host(sc.host_id) {
                    log::info!(
                        "host {} awareness: own sensors {:.3}, collaborative {:.3}",
                        h.host_id,
                        h.awareness_host_only,
                        h.awareness_collaborative
                    );
                }
            }
            if let (Some(t), Some(path)) = (svg_at, svg_out) {
                render_svg(&trace, &sc, t, &path)?;
            }
            if let Some(path) = bsm_log {
                write_bsm_log(BufWriter::new(File::create(&path)?), &trace)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("COVSIM_LOG", "info")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            log::error!("{e}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            log::error!("{e}");
            ExitCode::from(3)
        }
    }
}
