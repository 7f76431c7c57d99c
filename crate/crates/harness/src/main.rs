use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use arise_core::checkpoint;
use arise_harness::config::ExperimentConfig;
use arise_harness::{runner, summary, HarnessError};

/// Hybrid PPO + particle-swarm training benchmark harness.
#[derive(Parser)]
#[command(name = "arise", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a training grid (variants x environments x seeds).
    Train {
        /// Key-value config file; flags below override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Environment id(s), comma-separated.
        #[arg(long)]
        env: Option<String>,
        /// Variant(s), comma-separated.
        #[arg(long)]
        variant: Option<String>,
        /// Seeds, comma-separated.
        #[arg(long)]
        seeds: Option<String>,
        /// Output directory for CSVs, checkpoints, and summaries.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Resume a single run from a checkpoint bundle directory instead of
        /// starting a grid; grid axes are ignored.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Aggregate the CSVs in a directory into a summary report.
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Greedy evaluation of a checkpointed policy.
    Eval {
        /// Checkpoint bundle directory (or its manifest.json).
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long, default_value_t = 10)]
        episodes: usize,
    },
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Train { config, env, variant, seeds, out, resume } => {
            let mut cfg = match config {
                Some(path) => ExperimentConfig::from_file(&path)?,
                None => ExperimentConfig::default(),
            };
            if let Some(env) = env {
                cfg.set("env", &env)?;
            }
            if let Some(variant) = variant {
                cfg.set("variant", &variant)?;
            }
            if let Some(seeds) = seeds {
                cfg.set("seeds", &seeds)?;
            }
            if let Some(out) = out {
                cfg.out_dir = out;
            }
            if let Some(ckpt) = resume {
                let dir = normalize_bundle_path(ckpt);
                let (report, csv) =
                    runner::resume_run(&dir, &cfg.out_dir, cfg.checkpoint_interval)?;
                println!(
                    "resumed {}: {} iterations, {} episodes, final eval {:.2} (rows: {})",
                    report.run_id,
                    report.iterations_run,
                    report.episodes_done,
                    report.final_eval_return,
                    csv.display()
                );
                return Ok(());
            }
            let outcome = runner::run_grid(&cfg)?;
            let failures: Vec<_> =
                outcome.outcomes.iter().filter(|o| o.result.is_err()).collect();
            for f in &failures {
                eprintln!("warning: run {} failed: {:?}", f.run_id, f.result);
            }
            print!("{}", outcome.table);
            println!("summary written to {}", outcome.summary_json_path.display());
            if !failures.is_empty() {
                return Err(HarnessError::Runtime(format!(
                    "{} of {} runs failed",
                    failures.len(),
                    outcome.outcomes.len()
                )));
            }
            Ok(())
        }
        Command::Summarize { input } => {
            let report = summary::summarize_dir(&input)?;
            print!("{}", report.table());
            Ok(())
        }
        Command::Eval { checkpoint: ckpt, episodes } => {
            if episodes == 0 {
                return Err(HarnessError::Config("episodes must be at least 1".into()));
            }
            let dir = normalize_bundle_path(ckpt);
            let mut trainer: arise_core::Trainer64 = checkpoint::load(&dir)?;
            let mean = trainer.evaluate_episodes(episodes)?;
            println!(
                "run {} ({} on {}): mean greedy return over {} episodes = {:.3}",
                trainer.meta().run_id,
                trainer.meta().variant,
                trainer.env_id(),
                episodes,
                mean
            );
            Ok(())
        }
    }
}

fn normalize_bundle_path(path: PathBuf) -> PathBuf {
    if path.file_name().is_some_and(|n| n == "manifest.json") {
        path.parent().map(PathBuf::from).unwrap_or(path)
    } else {
        path
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
