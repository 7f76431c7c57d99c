//! Aggregation of run CSVs into a summary report: per (env, variant) means
//! and spreads, convergence episodes, and pairwise variant deltas.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use arise_core::metrics::MetricsRow;
use serde::{Deserialize, Serialize};

use crate::{HarnessError, Result};

/// One parsed run CSV.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub run_id: String,
    pub variant: String,
    pub env: String,
    pub seed: u64,
    pub rows: Vec<MetricsRow>,
}

impl RunRecord {
    /// Evaluation return reported on the final row.
    pub fn final_eval(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.eval_return)
    }

    /// Episodes completed at the first row whose evaluation return reaches
    /// 90% of the run's maximum evaluation return.
    pub fn convergence_episodes(&self) -> Option<usize> {
        let max = self
            .rows
            .iter()
            .map(|r| r.eval_return)
            .filter(|v| v.is_finite())
            .fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return None;
        }
        let threshold = 0.9 * max;
        self.rows
            .iter()
            .find(|r| r.eval_return.is_finite() && r.eval_return >= threshold)
            .map(|r| r.episodes_done)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSummary {
    pub env: String,
    pub variant: String,
    pub seeds: Vec<u64>,
    pub runs: usize,
    /// Mean and population std of the final evaluation return over seeds.
    pub final_eval_mean: f64,
    pub final_eval_std: f64,
    /// Per-seed convergence episodes (aligned with `seeds`).
    pub convergence_episodes: Vec<Option<usize>>,
    /// Mean over the seeds that converged.
    pub convergence_mean: Option<f64>,
    /// Final-eval delta against the `ppo` group on the same environment.
    pub vs_baseline: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VariantDelta {
    pub env: String,
    pub variant_a: String,
    pub variant_b: String,
    /// `final_eval_mean(a) - final_eval_mean(b)`.
    pub delta_final_eval: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryReport {
    pub groups: Vec<GroupSummary>,
    pub deltas: Vec<VariantDelta>,
}

fn population_std(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt()
}

/// Loads every `*.csv` under `dir` (sorted by file name for determinism).
pub fn load_runs(dir: &Path) -> Result<Vec<RunRecord>> {
    let mut paths: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    paths.sort();
    let mut runs = Vec::new();
    for path in paths {
        let text = fs::read_to_string(&path)?;
        let mut lines = text.lines();
        let Some(header) = lines.next() else { continue };
        let mut rows = Vec::new();
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            rows.push(
                MetricsRow::parse_csv(header, line)
                    .map_err(|e| HarnessError::Runtime(format!("{}: {e}", path.display())))?,
            );
        }
        let Some(first) = rows.first() else { continue };
        runs.push(RunRecord {
            run_id: first.run_id.clone(),
            variant: first.variant.clone(),
            env: first.env.clone(),
            seed: first.seed,
            rows,
        });
    }
    Ok(runs)
}

/// Aggregates a set of runs; errors on an empty set.
pub fn summarize(runs: &[RunRecord]) -> Result<SummaryReport> {
    if runs.is_empty() {
        return Err(HarnessError::Runtime("no completed runs to summarize".into()));
    }
    let mut by_group: BTreeMap<(String, String), Vec<&RunRecord>> = BTreeMap::new();
    for run in runs {
        by_group.entry((run.env.clone(), run.variant.clone())).or_default().push(run);
    }

    let mut groups = Vec::new();
    for ((env, variant), mut members) in by_group {
        members.sort_by_key(|r| r.seed);
        let finals: Vec<f64> =
            members.iter().map(|r| r.final_eval()).filter(|v| v.is_finite()).collect();
        let convergence: Vec<Option<usize>> =
            members.iter().map(|r| r.convergence_episodes()).collect();
        let converged: Vec<f64> =
            convergence.iter().flatten().map(|&e| e as f64).collect();
        groups.push(GroupSummary {
            env,
            variant,
            seeds: members.iter().map(|r| r.seed).collect(),
            runs: members.len(),
            final_eval_mean: if finals.is_empty() {
                f64::NAN
            } else {
                finals.iter().sum::<f64>() / finals.len() as f64
            },
            final_eval_std: population_std(&finals),
            convergence_episodes: convergence,
            convergence_mean: if converged.is_empty() {
                None
            } else {
                Some(converged.iter().sum::<f64>() / converged.len() as f64)
            },
            vs_baseline: None,
        });
    }

    // Baseline deltas against the `ppo` group per environment.
    let baselines: BTreeMap<String, f64> = groups
        .iter()
        .filter(|g| g.variant == "ppo")
        .map(|g| (g.env.clone(), g.final_eval_mean))
        .collect();
    for g in &mut groups {
        if g.variant != "ppo" {
            g.vs_baseline = baselines.get(&g.env).map(|b| g.final_eval_mean - b);
        }
    }

    let mut deltas = Vec::new();
    let envs: Vec<String> = {
        let mut e: Vec<String> = groups.iter().map(|g| g.env.clone()).collect();
        e.dedup();
        e
    };
    for env in envs {
        let members: Vec<&GroupSummary> = groups.iter().filter(|g| g.env == env).collect();
        for a in &members {
            for b in &members {
                if a.variant != b.variant {
                    deltas.push(VariantDelta {
                        env: env.clone(),
                        variant_a: a.variant.clone(),
                        variant_b: b.variant.clone(),
                        delta_final_eval: a.final_eval_mean - b.final_eval_mean,
                    });
                }
            }
        }
    }
    Ok(SummaryReport { groups, deltas })
}

pub fn summarize_dir(dir: &Path) -> Result<SummaryReport> {
    summarize(&load_runs(dir)?)
}

impl SummaryReport {
    /// Human-readable comparison table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<44} {:<20} {:>5} {:>12} {:>10} {:>12} {:>12}\n",
            "env", "variant", "runs", "final_eval", "std", "conv_eps", "vs_ppo"
        ));
        for g in &self.groups {
            let conv = g
                .convergence_mean
                .map_or_else(|| "-".to_string(), |c| format!("{c:.0}"));
            let vs = g
                .vs_baseline
                .map_or_else(|| "-".to_string(), |d| format!("{d:+.2}"));
            out.push_str(&format!(
                "{:<44} {:<20} {:>5} {:>12.2} {:>10.2} {:>12} {:>12}\n",
                g.env, g.variant, g.runs, g.final_eval_mean, g.final_eval_std, conv, vs
            ));
        }
        out
    }

    pub fn group(&self, env: &str, variant: &str) -> Option<&GroupSummary> {
        self.groups.iter().find(|g| g.env == env && g.variant == variant)
    }
}
