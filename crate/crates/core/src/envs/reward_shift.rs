//! Non-stationary wrapper: rewards pass through until a scheduled episode,
//! then a preset transform applies for the rest of training.

use rand::Rng;

use super::{Env, EnvSpec, StepResult};
use crate::error::{Error, Result};
use crate::policy::Action;
use crate::scalar::Scalar;

/// Reward transforms applied from the shift episode onward.
#[derive(Debug, Clone, PartialEq)]
pub enum ShiftPreset {
    /// `r -> r - 0.5 * |obs[0]| / 2.4`: penalizes distance from the track
    /// center, so a balanced but drifting cart-pole policy loses reward.
    CenterPenaltyV1,
    /// `r -> a * r + b`.
    Affine { a: f64, b: f64 },
}

impl ShiftPreset {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "center-penalty-v1" {
            return Ok(Self::CenterPenaltyV1);
        }
        // Parameters are ';'-separated so ids stay comma-free (they appear in
        // comma-separated config lists and CSV columns).
        if let Some(args) = s.strip_prefix("affine(").and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = args.split(';').collect();
            if parts.len() == 2 {
                let a = parts[0].trim().parse().ok();
                let b = parts[1].trim().parse().ok();
                if let (Some(a), Some(b)) = (a, b) {
                    return Ok(Self::Affine { a, b });
                }
            }
            return Err(Error::Config(format!("malformed affine preset {s:?}")));
        }
        Err(Error::Config(format!("unknown reward-shift preset {s:?}")))
    }

    pub fn id(&self) -> String {
        match self {
            Self::CenterPenaltyV1 => "center-penalty-v1".into(),
            Self::Affine { a, b } => format!("affine({a};{b})"),
        }
    }

    fn apply<F: Scalar>(&self, reward: F, observation: &[F]) -> F {
        match self {
            Self::CenterPenaltyV1 => {
                let x = observation.first().copied().unwrap_or_else(F::zero);
                reward - F::c(0.5) * x.abs() / F::c(2.4)
            }
            Self::Affine { a, b } => F::c(*a) * reward + F::c(*b),
        }
    }
}

/// Wraps an inner environment and counts episodes via `reset` calls; the
/// transform activates on the episode whose zero-based index reaches
/// `shift_episode`.
#[derive(Debug, Clone)]
pub struct RewardShift<F: Scalar> {
    inner: Box<Env<F>>,
    preset: ShiftPreset,
    shift_episode: usize,
    episodes_started: usize,
}

impl<F: Scalar> RewardShift<F> {
    pub fn new(inner: Env<F>, preset: ShiftPreset, shift_episode: usize) -> Self {
        Self { inner: Box::new(inner), preset, shift_episode, episodes_started: 0 }
    }

    pub fn id(&self) -> String {
        format!("{}+shift:{}:{}", self.inner.id(), self.preset.id(), self.shift_episode)
    }

    pub fn spec(&self) -> EnvSpec<F> {
        self.inner.spec()
    }

    pub fn shift_active(&self) -> bool {
        self.episodes_started > 0 && self.episodes_started - 1 >= self.shift_episode
    }

    pub fn reset<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Vec<F> {
        self.episodes_started += 1;
        self.inner.reset(rng)
    }

    pub fn step(&mut self, action: &Action<F>) -> Result<StepResult<F>> {
        let mut sr = self.inner.step(action)?;
        if self.shift_active() {
            sr.reward = self.preset.apply(sr.reward, &sr.observation);
        }
        Ok(sr)
    }

    pub fn snapshot(&self) -> Vec<f64> {
        let mut v = vec![self.episodes_started as f64];
        v.extend(self.inner.snapshot());
        v
    }

    pub fn restore(&mut self, values: &[f64]) -> Result<()> {
        if values.is_empty() {
            return Err(Error::Checkpoint("reward-shift snapshot is empty".into()));
        }
        self.episodes_started = values[0] as usize;
        self.inner.restore(&values[1..])
    }

    /// Fresh instance whose shift regime is pinned to the current one, for
    /// evaluation episodes that must see today's reward function.
    pub fn pinned_eval_instance(&self) -> Self {
        let shift_episode = if self.shift_active() { 0 } else { usize::MAX };
        Self {
            inner: Box::new(self.inner.eval_instance()),
            preset: self.preset.clone(),
            shift_episode,
            episodes_started: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shifted_cartpole(shift_episode: usize) -> Env<f64> {
        Env::make(&format!("cartpole+shift:center-penalty-v1:{shift_episode}")).unwrap()
    }

    #[test]
    fn rewards_pass_through_before_shift_episode() {
        let mut env = shifted_cartpole(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        env.reset(&mut rng); // episode 0
        let sr = env.step(&Action::Discrete(1)).unwrap();
        assert_eq!(sr.reward, 1.0);
        env.reset(&mut rng); // episode 1
        let sr = env.step(&Action::Discrete(1)).unwrap();
        assert_eq!(sr.reward, 1.0);
        env.reset(&mut rng); // episode 2: shift active
        let sr = env.step(&Action::Discrete(1)).unwrap();
        assert!(sr.reward < 1.0 || sr.observation[0] == 0.0);
    }

    #[test]
    fn center_penalty_formula_endpoints() {
        let preset = ShiftPreset::CenterPenaltyV1;
        assert_eq!(preset.apply(1.0, &[0.0, 0.0, 0.0, 0.0]), 1.0);
        assert!((preset.apply(1.0f64, &[2.4, 0.0, 0.0, 0.0]) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn affine_preset_parses_and_applies() {
        let preset = ShiftPreset::parse("affine(0.5; -1)").unwrap();
        assert_eq!(preset, ShiftPreset::Affine { a: 0.5, b: -1.0 });
        assert_eq!(preset.apply(2.0, &[0.0]), 0.0);
    }

    #[test]
    fn unknown_preset_is_config_error() {
        assert!(matches!(ShiftPreset::parse("doubler"), Err(Error::Config(_))));
        assert!(matches!(ShiftPreset::parse("affine(1)"), Err(Error::Config(_))));
    }

    #[test]
    fn pinned_eval_instance_freezes_regime() {
        let mut env = shifted_cartpole(1);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        env.reset(&mut rng); // episode 0: pre-shift
        if let Env::Shifted(s) = &env {
            let pinned = s.pinned_eval_instance();
            assert_eq!(pinned.shift_episode, usize::MAX);
        }
        env.reset(&mut rng); // episode 1: shift active
        if let Env::Shifted(s) = &env {
            assert!(s.shift_active());
            let pinned = s.pinned_eval_instance();
            assert_eq!(pinned.shift_episode, 0);
        }
    }
}
