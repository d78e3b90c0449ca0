//! Command line front end: run the training protocol and write metrics, or
//! replay a script against a fresh engine.

use clap::Parser;
use relnar::mts::PhaseId;
use relnar::runner::{metrics_csv, replay, run_experiment, ReplayError, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

/// Same/opposite relational training and testing with a NARS-style engine.
#[derive(Parser, Debug)]
#[command(name = "relnar", version, about)]
struct Cli {
    /// Seed for the run (also seeds replay exploration)
    #[arg(long, default_value_t = 7)]
    seed: u64,

    /// Inclusive seed range `A..B` to sweep; writes one CSV per seed into
    /// the --out directory
    #[arg(long, value_name = "A..B")]
    seeds: Option<String>,

    /// Blocks per phase
    #[arg(long, default_value_t = 4)]
    blocks: usize,

    /// Trials per block
    #[arg(long, default_value_t = 16)]
    trials_per_block: usize,

    /// Metrics CSV destination: a file for a single run, a directory for a
    /// sweep. Defaults to stdout for single runs.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Write the engine trace to this file
    #[arg(long)]
    trace: Option<PathBuf>,

    /// Comma-separated phase subset in run order, e.g. `XY,YX`
    /// (default: all seven)
    #[arg(long)]
    phases: Option<String>,

    /// Replay a script (Narsese lines, `!action left|right`,
    /// `//expect <substring>`) instead of running the protocol
    #[arg(long)]
    replay: Option<PathBuf>,
}

fn parse_phases(text: &str) -> Result<Vec<PhaseId>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(PhaseId::from_str)
        .collect()
}

fn parse_seed_range(text: &str) -> Result<(u64, u64), String> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| format!("expected `A..B`, got `{text}`"))?;
    let a: u64 = a.trim().parse().map_err(|e| format!("bad start seed: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("bad end seed: {e}"))?;
    if a > b {
        return Err(format!("empty seed range {a}..{b}"));
    }
    Ok((a, b))
}

fn run(cli: Cli) -> Result<(), String> {
    if let Some(script_path) = &cli.replay {
        let script = std::fs::read_to_string(script_path)
            .map_err(|e| format!("cannot read {}: {e}", script_path.display()))?;
        return match replay(&script, cli.seed) {
            Ok(outcome) => {
                for line in &outcome.trace {
                    println!("{line}");
                }
                eprintln!("replay ok: {} expectations checked", outcome.checks);
                Ok(())
            }
            Err(ReplayError::Expectation { line, expected }) => Err(format!(
                "replay failed at line {line}: trace does not contain `{expected}`"
            )),
            Err(e) => Err(format!("replay failed: {e}")),
        };
    }

    let phases = match &cli.phases {
        Some(text) => parse_phases(text)?,
        None => PhaseId::ALL.to_vec(),
    };
    if phases.is_empty() {
        return Err("no phases selected".to_string());
    }

    let base = RunConfig {
        seed: cli.seed,
        blocks: cli.blocks,
        trials_per_block: cli.trials_per_block,
        phases,
    };

    if let Some(range) = &cli.seeds {
        let (first, last) = parse_seed_range(range)?;
        let dir = cli
            .out
            .as_ref()
            .ok_or("a seed sweep needs --out <directory>")?;
        std::fs::create_dir_all(dir)
            .map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
        for seed in first..=last {
            let cfg = RunConfig { seed, ..base.clone() };
            let outcome = run_experiment(&cfg).map_err(|e| format!("seed {seed}: {e}"))?;
            let path = dir.join(format!("metrics_seed{seed}.csv"));
            std::fs::write(&path, metrics_csv(&outcome.records))
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            println!("seed {seed}: wrote {}", path.display());
        }
        return Ok(());
    }

    let outcome = run_experiment(&base).map_err(|e| e.to_string())?;
    let csv = metrics_csv(&outcome.records);
    match &cli.out {
        Some(path) => std::fs::write(path, &csv)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{csv}"),
    }
    if let Some(path) = &cli.trace {
        let mut text = outcome.trace.join("\n");
        text.push('\n');
        std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
