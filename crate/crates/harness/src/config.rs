//! Experiment configuration: a flat key-value text document plus CLI
//! overrides.
//!
//! Format: one `key = value` per line, `#` starts a comment. Lists are
//! comma-separated. Unknown keys are rejected with their key path.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;

use arise_core::envs::Env;
use arise_core::{AriseConfig64, PpoConfig64};

use crate::{HarnessError, Result};

/// Algorithm variants; each maps to a fixed set of ablation flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Variant {
    Arise,
    AriseNoAdaptive,
    AriseNoSwarm,
    AriseNoNovelty,
    AriseNoBroadcast,
    Ppo,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Arise,
        Variant::AriseNoAdaptive,
        Variant::AriseNoSwarm,
        Variant::AriseNoNovelty,
        Variant::AriseNoBroadcast,
        Variant::Ppo,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "arise" => Ok(Self::Arise),
            "arise_no_adaptive" => Ok(Self::AriseNoAdaptive),
            "arise_no_swarm" => Ok(Self::AriseNoSwarm),
            "arise_no_novelty" => Ok(Self::AriseNoNovelty),
            "arise_no_broadcast" => Ok(Self::AriseNoBroadcast),
            "ppo" => Ok(Self::Ppo),
            other => Err(HarnessError::Config(format!(
                "variant: unknown variant {other:?} (expected one of arise, arise_no_adaptive, \
                 arise_no_swarm, arise_no_novelty, arise_no_broadcast, ppo)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Arise => "arise",
            Self::AriseNoAdaptive => "arise_no_adaptive",
            Self::AriseNoSwarm => "arise_no_swarm",
            Self::AriseNoNovelty => "arise_no_novelty",
            Self::AriseNoBroadcast => "arise_no_broadcast",
            Self::Ppo => "ppo",
        }
    }

    /// Applies this variant's ablation flags. The swarm-free variants
    /// collapse to a single agent; the `ppo` baseline additionally zeroes
    /// the mixing and novelty coefficients so it is plain PPO with the same
    /// architecture.
    pub fn apply(&self, arise: &mut AriseConfig64) {
        match self {
            Self::Arise => {}
            Self::AriseNoAdaptive => arise.no_adaptive = true,
            Self::AriseNoSwarm => {
                arise.no_swarm = true;
                arise.num_agents = 1;
                arise.alpha = 0.0;
            }
            Self::AriseNoNovelty => arise.no_novelty = true,
            Self::AriseNoBroadcast => arise.no_broadcast = true,
            Self::Ppo => {
                arise.no_swarm = true;
                arise.no_adaptive = true;
                arise.no_novelty = true;
                arise.no_broadcast = true;
                arise.num_agents = 1;
                arise.alpha = 0.0;
                arise.beta = 0.0;
            }
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Full experiment description: the grid axes plus shared hyperparameters.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub envs: Vec<String>,
    pub variants: Vec<Variant>,
    pub seeds: Vec<u64>,
    pub out_dir: PathBuf,
    pub arise: AriseConfig64,
    pub ppo: PpoConfig64,
    /// When unset, the horizon defaults per environment: 2048 steps for
    /// discrete action spaces, 512 for continuous.
    pub horizon_override: Option<usize>,
    /// Checkpoint every this many iterations (0 = initial and final only).
    pub checkpoint_interval: usize,
    pub workers: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            envs: vec!["cartpole".into()],
            variants: vec![Variant::Arise],
            seeds: vec![0, 1, 2, 3, 4],
            out_dir: PathBuf::from("runs"),
            arise: AriseConfig64::default(),
            ppo: PpoConfig64::default(),
            horizon_override: None,
            checkpoint_interval: 0,
            workers: None,
        }
    }
}

impl ExperimentConfig {
    /// Parses a config document; later lines override earlier ones.
    pub fn from_str_document(doc: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in doc.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let doc = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str_document(&doc)
    }

    /// Sets one key; this is also how CLI flags override file values.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |msg: &str| Err(HarnessError::Config(format!("{key}: {msg}")));
        let parse_f64 = |v: &str| -> Result<f64> {
            v.parse().map_err(|_| HarnessError::Config(format!("{key}: not a number: {v:?}")))
        };
        let parse_usize = |v: &str| -> Result<usize> {
            v.parse().map_err(|_| HarnessError::Config(format!("{key}: not an integer: {v:?}")))
        };
        match key {
            "env" => {
                self.envs = value.split(',').map(|s| s.trim().to_string()).collect();
                if self.envs.iter().any(|e| e.is_empty()) {
                    return bad("empty environment id");
                }
                for id in &self.envs {
                    Env::<f64>::make(id).map_err(|e| HarnessError::Config(format!("env: {e}")))?;
                }
            }
            "variant" => {
                let mut variants = Vec::new();
                for v in value.split(',') {
                    variants.push(Variant::parse(v.trim())?);
                }
                let unique: BTreeSet<_> = variants.iter().copied().collect();
                if unique.len() != variants.len() {
                    return bad("duplicate variant");
                }
                self.variants = variants;
            }
            "seeds" => {
                let mut seeds = Vec::new();
                for s in value.split(',') {
                    seeds.push(s.trim().parse::<u64>().map_err(|_| {
                        HarnessError::Config(format!("seeds: not an integer: {s:?}"))
                    })?);
                }
                if seeds.is_empty() {
                    return bad("need at least one seed");
                }
                self.seeds = seeds;
            }
            "out" => self.out_dir = PathBuf::from(value),
            "num_agents" => {
                let n = parse_usize(value)?;
                if n == 0 {
                    return bad("must be at least 1");
                }
                self.arise.num_agents = n;
            }
            "alpha" => {
                let a = parse_f64(value)?;
                if !(0.0..=1.0).contains(&a) {
                    return bad("must be in [0, 1]");
                }
                self.arise.alpha = a;
            }
            "beta" => {
                let b = parse_f64(value)?;
                if b < 0.0 {
                    return bad("must be non-negative");
                }
                self.arise.beta = b;
            }
            "horizon" => {
                let h = parse_usize(value)?;
                if h == 0 {
                    return bad("must be at least 1");
                }
                self.horizon_override = Some(h);
            }
            "total_iterations" => self.arise.total_iterations = parse_usize(value)?,
            "max_episodes" => self.arise.max_episodes = Some(parse_usize(value)?),
            "target_return" => self.arise.target_return = Some(parse_f64(value)?),
            "broadcast_interval" => {
                let b = parse_usize(value)?;
                if b == 0 {
                    return bad("must be at least 1");
                }
                self.arise.broadcast_interval = b;
            }
            "hidden" => {
                let mut hidden = Vec::new();
                for h in value.split(',') {
                    let w: usize = h.trim().parse().map_err(|_| {
                        HarnessError::Config(format!("hidden: not an integer: {h:?}"))
                    })?;
                    if w == 0 {
                        return bad("layer widths must be positive");
                    }
                    hidden.push(w);
                }
                if hidden.is_empty() {
                    return bad("need at least one layer width");
                }
                self.arise.hidden = hidden;
            }
            "gamma" => {
                let g = parse_f64(value)?;
                if !(0.0..=1.0).contains(&g) {
                    return bad("must be in [0, 1]");
                }
                self.ppo.gamma = g;
            }
            "lambda" => {
                let l = parse_f64(value)?;
                if !(0.0..=1.0).contains(&l) {
                    return bad("must be in [0, 1]");
                }
                self.ppo.lambda = l;
            }
            "clip_epsilon" => {
                let e = parse_f64(value)?;
                if !(e > 0.0 && e < 1.0) {
                    return bad("must be in (0, 1)");
                }
                self.ppo.clip_epsilon = e;
            }
            "entropy_coef" => {
                let e = parse_f64(value)?;
                if e < 0.0 {
                    return bad("must be non-negative");
                }
                self.ppo.entropy_coef = e;
            }
            "value_coef" => {
                let v = parse_f64(value)?;
                if v < 0.0 {
                    return bad("must be non-negative");
                }
                self.ppo.value_coef = v;
            }
            "epochs" => {
                let e = parse_usize(value)?;
                if e == 0 {
                    return bad("must be at least 1");
                }
                self.ppo.epochs = e;
            }
            "batch_size" => {
                let b = parse_usize(value)?;
                if b == 0 {
                    return bad("must be at least 1");
                }
                self.ppo.batch_size = b;
            }
            "learning_rate" => {
                let lr = parse_f64(value)?;
                if lr <= 0.0 {
                    return bad("must be positive");
                }
                self.ppo.learning_rate = lr;
            }
            "max_grad_norm" => {
                let m = parse_f64(value)?;
                if m <= 0.0 {
                    return bad("must be positive");
                }
                self.ppo.max_grad_norm = m;
            }
            "eval.interval" => {
                let i = parse_usize(value)?;
                if i == 0 {
                    return bad("must be at least 1");
                }
                self.arise.eval_interval = i;
            }
            "eval.episodes" => {
                let e = parse_usize(value)?;
                if e == 0 {
                    return bad("must be at least 1");
                }
                self.arise.eval_episodes = e;
            }
            "checkpoint.interval" => self.checkpoint_interval = parse_usize(value)?,
            "workers" => {
                let w = parse_usize(value)?;
                if w == 0 {
                    return bad("must be at least 1");
                }
                self.workers = Some(w);
            }
            other => {
                return Err(HarnessError::Config(format!("unknown key {other:?}")));
            }
        }
        Ok(())
    }

    /// Builds the per-run training config for one grid cell.
    pub fn run_config(&self, variant: Variant, env_id: &str, seed: u64) -> Result<AriseConfig64> {
        let env = Env::<f64>::make(env_id)?;
        let mut arise = self.arise.clone();
        arise.seed = seed;
        arise.horizon = match self.horizon_override {
            Some(h) => h,
            None => {
                if env.spec().action_spec.is_discrete() {
                    2048
                } else {
                    512
                }
            }
        };
        variant.apply(&mut arise);
        arise.validate()?;
        self.ppo.validate()?;
        Ok(arise)
    }

    pub fn run_id(variant: Variant, env_id: &str, seed: u64) -> String {
        format!("{}__{}__seed{}", variant.as_str(), env_id, seed)
    }
}

/// Filesystem-safe version of a run id.
pub fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') { c } else { '-' })
        .collect()
}
