//! Per-iteration training metrics and their CSV schema.
//!
//! The column order is fixed; the only run-dependent part is the number of
//! `fitness_<i>` columns, one per agent. `wall_ms` is measured wall time and
//! is the single column excluded from determinism comparisons.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub run_id: String,
    pub seed: u64,
    pub variant: String,
    pub env: String,
    pub iteration: usize,
    pub episodes_done: usize,
    /// Mean raw episodic return over episodes completed this iteration.
    pub mean_return_raw: f64,
    /// Same, over novelty-augmented returns.
    pub mean_return_aug: f64,
    /// Most recent evaluation return (NaN before the first evaluation).
    pub eval_return: f64,
    pub fitness: Vec<f64>,
    pub var_reward: f64,
    pub diversity: f64,
    pub w: f64,
    pub c1: f64,
    pub c2: f64,
    pub mean_entropy: f64,
    pub policy_loss: f64,
    pub value_loss: f64,
    pub wall_ms: f64,
}

impl MetricsRow {
    pub fn csv_header(num_agents: usize) -> String {
        let mut cols = vec![
            "run_id".to_string(),
            "seed".into(),
            "variant".into(),
            "env".into(),
            "iteration".into(),
            "episodes_done".into(),
            "mean_return_raw".into(),
            "mean_return_aug".into(),
            "eval_return".into(),
        ];
        for i in 0..num_agents {
            cols.push(format!("fitness_{i}"));
        }
        cols.extend(
            [
                "var_reward",
                "diversity",
                "w",
                "c1",
                "c2",
                "mean_entropy",
                "policy_loss",
                "value_loss",
                "wall_ms",
            ]
            .map(String::from),
        );
        cols.join(",")
    }

    pub fn to_csv(&self) -> String {
        let mut fields = vec![
            self.run_id.clone(),
            self.seed.to_string(),
            self.variant.clone(),
            self.env.clone(),
            self.iteration.to_string(),
            self.episodes_done.to_string(),
            self.mean_return_raw.to_string(),
            self.mean_return_aug.to_string(),
            self.eval_return.to_string(),
        ];
        fields.extend(self.fitness.iter().map(|f| f.to_string()));
        fields.extend(
            [
                self.var_reward,
                self.diversity,
                self.w,
                self.c1,
                self.c2,
                self.mean_entropy,
                self.policy_loss,
                self.value_loss,
                self.wall_ms,
            ]
            .map(|v| v.to_string()),
        );
        fields.join(",")
    }

    /// Parses one data line against a header produced by
    /// [`MetricsRow::csv_header`].
    pub fn parse_csv(header: &str, line: &str) -> Result<Self> {
        let cols: Vec<&str> = header.trim_end().split(',').collect();
        let vals: Vec<&str> = line.trim_end().split(',').collect();
        if cols.len() != vals.len() {
            return Err(Error::Config(format!(
                "row has {} fields, header has {}",
                vals.len(),
                cols.len()
            )));
        }
        let get = |name: &str| -> Result<&str> {
            cols.iter()
                .position(|c| *c == name)
                .map(|i| vals[i])
                .ok_or_else(|| Error::Config(format!("missing column {name}")))
        };
        let num = |name: &str| -> Result<f64> {
            get(name)?
                .parse()
                .map_err(|_| Error::Config(format!("column {name} is not a number")))
        };
        let mut fitness = Vec::new();
        for (c, v) in cols.iter().zip(&vals) {
            if c.starts_with("fitness_") {
                fitness.push(
                    v.parse()
                        .map_err(|_| Error::Config(format!("column {c} is not a number")))?,
                );
            }
        }
        Ok(Self {
            run_id: get("run_id")?.to_string(),
            seed: get("seed")?
                .parse()
                .map_err(|_| Error::Config("seed is not an integer".into()))?,
            variant: get("variant")?.to_string(),
            env: get("env")?.to_string(),
            iteration: num("iteration")? as usize,
            episodes_done: num("episodes_done")? as usize,
            mean_return_raw: num("mean_return_raw")?,
            mean_return_aug: num("mean_return_aug")?,
            eval_return: num("eval_return")?,
            fitness,
            var_reward: num("var_reward")?,
            diversity: num("diversity")?,
            w: num("w")?,
            c1: num("c1")?,
            c2: num("c2")?,
            mean_entropy: num("mean_entropy")?,
            policy_loss: num("policy_loss")?,
            value_loss: num("value_loss")?,
            wall_ms: num("wall_ms")?,
        })
    }

    /// Serialized form with the wall-clock column zeroed; equality of these
    /// strings is the determinism contract between identical runs.
    pub fn csv_without_wall_ms(&self) -> String {
        let mut clone = self.clone();
        clone.wall_ms = 0.0;
        clone.to_csv()
    }
}
