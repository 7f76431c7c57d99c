//! Grid execution: one run per (variant, environment, seed) cell, scheduled
//! on a small worker pool, each writing its own metrics CSV and checkpoints.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use arise_core::checkpoint;
use arise_core::envs::Env;
use arise_core::metrics::MetricsRow;
use arise_core::orchestrator::{RunMeta, RunReport};
use arise_core::Trainer64;

use crate::config::{sanitize, ExperimentConfig, Variant};
use crate::summary::{self, SummaryReport};
use crate::{HarnessError, Result};

/// One grid cell.
#[derive(Debug, Clone)]
pub struct RunPlan {
    pub variant: Variant,
    pub env_id: String,
    pub seed: u64,
}

/// Result of one run; failures keep the grid going.
#[derive(Debug)]
pub struct RunOutcome {
    pub plan: RunPlan,
    pub run_id: String,
    pub result: std::result::Result<RunReport, String>,
}

#[derive(Debug)]
pub struct GridOutcome {
    pub outcomes: Vec<RunOutcome>,
    pub summary: SummaryReport,
    pub summary_json_path: PathBuf,
    pub table: String,
}

/// Environment variable controlling the worker count.
pub const WORKERS_ENV: &str = "ARISE_WORKERS";

fn worker_count(cfg: &ExperimentConfig, runs: usize) -> usize {
    let configured = cfg.workers.or_else(|| {
        std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0)
    });
    let hw = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    configured.unwrap_or(hw).max(1).min(runs.max(1))
}

/// Runs the full grid, writes per-run CSVs plus `summary.json` and
/// `summary.txt`, and returns everything. Failed runs are logged, their
/// partial outputs removed, and the rest aggregated.
pub fn run_grid(cfg: &ExperimentConfig) -> Result<GridOutcome> {
    let plans: Vec<RunPlan> = cfg
        .variants
        .iter()
        .flat_map(|&variant| {
            cfg.envs.iter().flat_map(move |env_id| {
                cfg.seeds
                    .iter()
                    .map(move |&seed| RunPlan { variant, env_id: env_id.clone(), seed })
            })
        })
        .collect();
    if plans.is_empty() {
        return Err(HarnessError::Config("empty grid: no variants, envs, or seeds".into()));
    }
    // Validate every cell before spending compute on any of them.
    for plan in &plans {
        cfg.run_config(plan.variant, &plan.env_id, plan.seed)?;
    }
    fs::create_dir_all(&cfg.out_dir)?;

    let next = AtomicUsize::new(0);
    let outcomes: Mutex<Vec<Option<RunOutcome>>> =
        Mutex::new((0..plans.len()).map(|_| None).collect());
    let workers = worker_count(cfg, plans.len());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= plans.len() {
                    break;
                }
                let plan = &plans[i];
                let run_id = ExperimentConfig::run_id(plan.variant, &plan.env_id, plan.seed);
                let result = run_single(cfg, plan).map_err(|e| e.to_string());
                if let Err(msg) = &result {
                    log::warn!("run {run_id} failed and is excluded from aggregates: {msg}");
                    let csv = cfg.out_dir.join(format!("{}.csv", sanitize(&run_id)));
                    let _ = fs::remove_file(csv);
                }
                outcomes.lock().unwrap()[i] =
                    Some(RunOutcome { plan: plan.clone(), run_id, result });
            });
        }
    });
    let outcomes: Vec<RunOutcome> =
        outcomes.into_inner().unwrap().into_iter().map(|o| o.expect("worker filled slot")).collect();

    let summary = summary::summarize_dir(&cfg.out_dir)?;
    let table = summary.table();
    let json = serde_json::to_string_pretty(&summary)
        .map_err(|e| HarnessError::Runtime(format!("summary encode: {e}")))?;
    let summary_json_path = cfg.out_dir.join("summary.json");
    fs::write(&summary_json_path, &json)?;
    fs::write(cfg.out_dir.join("summary.txt"), &table)?;
    Ok(GridOutcome { outcomes, summary, summary_json_path, table })
}

/// Executes one run: initial checkpoint, training with per-iteration CSV
/// rows (and periodic checkpoints when configured), final checkpoint.
pub fn run_single(cfg: &ExperimentConfig, plan: &RunPlan) -> Result<RunReport> {
    let arise = cfg.run_config(plan.variant, &plan.env_id, plan.seed)?;
    let env = Env::<f64>::make(&plan.env_id)?;
    let run_id = ExperimentConfig::run_id(plan.variant, &plan.env_id, plan.seed);
    let meta = RunMeta { run_id: run_id.clone(), variant: plan.variant.as_str().to_string() };
    let mut trainer = Trainer64::new(arise, cfg.ppo.clone(), env, meta)?;

    let safe_id = sanitize(&run_id);
    let ckpt_root = cfg.out_dir.join("checkpoints").join(&safe_id);
    checkpoint::save(&trainer, &ckpt_root.join("initial"))?;

    let csv_path = cfg.out_dir.join(format!("{safe_id}.csv"));
    let report = write_run(
        &mut trainer,
        &csv_path,
        cfg.checkpoint_interval,
        &ckpt_root,
    )?;
    // A zero-iteration run leaves only the initial checkpoint.
    if report.iterations_run > 0 {
        checkpoint::save(&trainer, &ckpt_root.join("final"))?;
    }
    Ok(report)
}

/// Resumes a checkpoint bundle and trains it to completion, writing the
/// continued rows to a fresh CSV under `out_dir`.
pub fn resume_run(
    checkpoint_dir: &Path,
    out_dir: &Path,
    checkpoint_interval: usize,
) -> Result<(RunReport, PathBuf)> {
    let mut trainer: Trainer64 = checkpoint::load(checkpoint_dir)?;
    fs::create_dir_all(out_dir)?;
    let safe_id = sanitize(&trainer.meta().run_id.clone());
    let ckpt_root = out_dir.join("checkpoints").join(&safe_id);
    let csv_path = out_dir.join(format!("{safe_id}.csv"));
    let report = write_run(&mut trainer, &csv_path, checkpoint_interval, &ckpt_root)?;
    checkpoint::save(&trainer, &ckpt_root.join("final"))?;
    Ok((report, csv_path))
}

fn write_run(
    trainer: &mut Trainer64,
    csv_path: &Path,
    checkpoint_interval: usize,
    ckpt_root: &Path,
) -> Result<RunReport> {
    let file = fs::File::create(csv_path)?;
    let mut out = std::io::BufWriter::new(file);
    writeln!(out, "{}", MetricsRow::csv_header(trainer.config().num_agents))?;

    let mut sink_err: Option<String> = None;
    let report = trainer.run(|tr, row| {
        if sink_err.is_some() {
            return;
        }
        if let Err(e) = writeln!(out, "{}", row.to_csv()) {
            sink_err = Some(e.to_string());
            return;
        }
        if checkpoint_interval > 0 && row.iteration % checkpoint_interval == 0 {
            let dir = ckpt_root.join(format!("iter_{:06}", row.iteration));
            if let Err(e) = checkpoint::save(tr, &dir) {
                sink_err = Some(e.to_string());
            }
        }
    });
    if let Some(msg) = sink_err {
        return Err(HarnessError::Runtime(format!("metrics sink: {msg}")));
    }
    let report = report?;
    out.flush()?;
    Ok(report)
}
