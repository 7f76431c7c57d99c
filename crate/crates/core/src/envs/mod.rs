//! Native environment implementations with a uniform reset/step interface,
//! plus a non-stationary reward-shift wrapper.
//!
//! Environments are selected by string id: `cartpole`, `mountaincar-cont`,
//! `pendulum`, with an optional `+shift:<preset>:<episode>` suffix, e.g.
//! `cartpole+shift:center-penalty-v1:500`. The affine preset takes its
//! parameters inline: `+shift:affine(0.9,-0.1):200`.

mod cartpole;
mod mountain_car;
mod pendulum;
mod reward_shift;

pub use cartpole::CartPole;
pub use mountain_car::MountainCarCont;
pub use pendulum::Pendulum;
pub use reward_shift::{RewardShift, ShiftPreset};

use rand::Rng;

use crate::error::{Error, Result};
use crate::policy::{Action, ActionSpec};
use crate::scalar::Scalar;

/// Static description of an environment.
#[derive(Debug, Clone)]
pub struct EnvSpec<F: Scalar> {
    pub obs_dim: usize,
    pub action_spec: ActionSpec<F>,
    pub max_episode_steps: usize,
}

/// Result of one environment step.
#[derive(Debug, Clone)]
pub struct StepResult<F: Scalar> {
    pub observation: Vec<F>,
    pub reward: F,
    pub terminated: bool,
    pub truncated: bool,
}

impl<F: Scalar> StepResult<F> {
    pub fn done(&self) -> bool {
        self.terminated || self.truncated
    }
}

/// Closed set of environments; enum dispatch keeps cloning, checkpointing,
/// and determinism straightforward.
#[derive(Debug, Clone)]
pub enum Env<F: Scalar> {
    CartPole(CartPole<F>),
    MountainCarCont(MountainCarCont<F>),
    Pendulum(Pendulum<F>),
    Shifted(RewardShift<F>),
}

impl<F: Scalar> Env<F> {
    /// Builds an environment from its string id.
    pub fn make(id: &str) -> Result<Self> {
        match id.split_once("+shift:") {
            None => Self::make_base(id),
            Some((base, shift)) => {
                let inner = Self::make_base(base)?;
                let (preset_str, episode_str) = shift
                    .rsplit_once(':')
                    .ok_or_else(|| Error::Config(format!("malformed shift suffix {shift:?}")))?;
                let preset = ShiftPreset::parse(preset_str)?;
                let shift_episode: usize = episode_str.parse().map_err(|_| {
                    Error::Config(format!("invalid shift episode {episode_str:?}"))
                })?;
                Ok(Self::Shifted(RewardShift::new(inner, preset, shift_episode)))
            }
        }
    }

    fn make_base(id: &str) -> Result<Self> {
        match id {
            "cartpole" => Ok(Self::CartPole(CartPole::new())),
            "mountaincar-cont" => Ok(Self::MountainCarCont(MountainCarCont::new())),
            "pendulum" => Ok(Self::Pendulum(Pendulum::new())),
            other => Err(Error::Config(format!("unknown environment id {other:?}"))),
        }
    }

    pub fn id(&self) -> String {
        match self {
            Self::CartPole(_) => "cartpole".into(),
            Self::MountainCarCont(_) => "mountaincar-cont".into(),
            Self::Pendulum(_) => "pendulum".into(),
            Self::Shifted(s) => s.id(),
        }
    }

    pub fn spec(&self) -> EnvSpec<F> {
        match self {
            Self::CartPole(e) => e.spec(),
            Self::MountainCarCont(e) => e.spec(),
            Self::Pendulum(e) => e.spec(),
            Self::Shifted(s) => s.spec(),
        }
    }

    pub fn reset<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Vec<F> {
        match self {
            Self::CartPole(e) => e.reset(rng),
            Self::MountainCarCont(e) => e.reset(rng),
            Self::Pendulum(e) => e.reset(rng),
            Self::Shifted(s) => s.reset(rng),
        }
    }

    pub fn step(&mut self, action: &Action<F>) -> Result<StepResult<F>> {
        match self {
            Self::CartPole(e) => e.step(action),
            Self::MountainCarCont(e) => e.step(action),
            Self::Pendulum(e) => e.step(action),
            Self::Shifted(s) => s.step(action),
        }
    }

    /// Serializes the full dynamic state as plain f64s; layout is
    /// environment-specific and matched by [`Env::restore`].
    pub fn snapshot(&self) -> Vec<f64> {
        match self {
            Self::CartPole(e) => e.snapshot(),
            Self::MountainCarCont(e) => e.snapshot(),
            Self::Pendulum(e) => e.snapshot(),
            Self::Shifted(s) => s.snapshot(),
        }
    }

    pub fn restore(&mut self, values: &[f64]) -> Result<()> {
        match self {
            Self::CartPole(e) => e.restore(values),
            Self::MountainCarCont(e) => e.restore(values),
            Self::Pendulum(e) => e.restore(values),
            Self::Shifted(s) => s.restore(values),
        }
    }

    /// Fresh instance for evaluation episodes. A reward-shift wrapper is
    /// pinned to its current regime so evaluations always see the reward
    /// function training currently sees.
    pub fn eval_instance(&self) -> Self {
        match self {
            Self::CartPole(_) => Self::CartPole(CartPole::new()),
            Self::MountainCarCont(_) => Self::MountainCarCont(MountainCarCont::new()),
            Self::Pendulum(_) => Self::Pendulum(Pendulum::new()),
            Self::Shifted(s) => Self::Shifted(s.pinned_eval_instance()),
        }
    }
}
