//! Continuous mountain car with the standard constants.

use rand::Rng;

use super::{EnvSpec, StepResult};
use crate::error::{Error, Result};
use crate::policy::{Action, ActionSpec};
use crate::scalar::{all_finite, Scalar};

const POWER: f64 = 0.0015;
const GRAVITY_TERM: f64 = 0.0025;
const MIN_POSITION: f64 = -1.2;
const MAX_POSITION: f64 = 0.6;
const MAX_SPEED: f64 = 0.07;
const GOAL_POSITION: f64 = 0.45;
const MAX_STEPS: usize = 999;

/// State is `(position, velocity)`; the action is a 1-D thrust in `[-1, 1]`.
/// Each step costs `0.1 * action^2`; reaching the goal position adds +100 and
/// terminates. Episodes truncate at 999 steps.
#[derive(Debug, Clone)]
pub struct MountainCarCont<F: Scalar> {
    position: F,
    velocity: F,
    steps: usize,
}

impl<F: Scalar> Default for MountainCarCont<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Scalar> MountainCarCont<F> {
    pub fn new() -> Self {
        Self { position: F::c(-0.5), velocity: F::zero(), steps: 0 }
    }

    pub fn spec(&self) -> EnvSpec<F> {
        EnvSpec {
            obs_dim: 2,
            action_spec: ActionSpec::Continuous { low: vec![F::c(-1.0)], high: vec![F::one()] },
            max_episode_steps: MAX_STEPS,
        }
    }

    pub fn reset<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Vec<F> {
        self.position = F::sample_uniform(rng, F::c(-0.6), F::c(-0.4));
        self.velocity = F::zero();
        self.steps = 0;
        vec![self.position, self.velocity]
    }

    pub fn step(&mut self, action: &Action<F>) -> Result<StepResult<F>> {
        let raw = match action {
            Action::Continuous(a) if a.len() == 1 => a[0],
            Action::Continuous(a) => {
                return Err(Error::InvalidAction(format!(
                    "mountain car takes a 1-D action, got {}",
                    a.len()
                )))
            }
            Action::Discrete(_) => {
                return Err(Error::InvalidAction("mountain car takes a continuous action".into()))
            }
        };
        if !raw.is_finite() {
            return Err(Error::EnvFault("non-finite action".into()));
        }
        let force = raw.max(F::c(-1.0)).min(F::one());

        let mut velocity = self.velocity + force * F::c(POWER)
            - F::c(GRAVITY_TERM) * (F::c(3.0) * self.position).cos();
        velocity = velocity.max(F::c(-MAX_SPEED)).min(F::c(MAX_SPEED));
        let mut position = self.position + velocity;
        position = position.max(F::c(MIN_POSITION)).min(F::c(MAX_POSITION));
        if position == F::c(MIN_POSITION) && velocity < F::zero() {
            velocity = F::zero();
        }
        self.position = position;
        self.velocity = velocity;
        self.steps += 1;

        let terminated = position >= F::c(GOAL_POSITION);
        let truncated = !terminated && self.steps >= MAX_STEPS;
        let mut reward = -F::c(0.1) * force * force;
        if terminated {
            reward = reward + F::c(100.0);
        }
        Ok(StepResult {
            observation: vec![self.position, self.velocity],
            reward,
            terminated,
            truncated,
        })
    }

    pub fn snapshot(&self) -> Vec<f64> {
        vec![self.position.to_f64().unwrap(), self.velocity.to_f64().unwrap(), self.steps as f64]
    }

    pub fn restore(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != 3 || !all_finite(values) {
            return Err(Error::Checkpoint("mountain car snapshot needs 3 finite values".into()));
        }
        self.position = F::c(values[0]);
        self.velocity = F::c(values[1]);
        self.steps = values[2] as usize;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_action_costs_nothing() {
        let mut env = MountainCarCont::<f64>::new();
        let sr = env.step(&Action::Continuous(vec![0.0])).unwrap();
        assert_eq!(sr.reward, -0.0);
    }

    #[test]
    fn reaching_goal_terminates_with_bonus() {
        let mut env = MountainCarCont::<f64>::new();
        env.restore(&[0.44, 0.05, 10.0]).unwrap();
        let sr = env.step(&Action::Continuous(vec![1.0])).unwrap();
        assert!(sr.terminated);
        assert!((sr.reward - (100.0 - 0.1)).abs() < 1e-12);
    }

    #[test]
    fn velocity_never_exceeds_clamp_under_fuzz() {
        let mut env = MountainCarCont::<f64>::new();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        env.reset(&mut rng);
        for _ in 0..10_000 {
            let a = rng.gen_range(-1.0..1.0);
            let sr = env.step(&Action::Continuous(vec![a])).unwrap();
            assert!(sr.observation[1].abs() <= MAX_SPEED + 1e-15);
            if sr.done() {
                env.reset(&mut rng);
            }
        }
    }

    #[test]
    fn out_of_range_action_is_clamped_not_rejected() {
        let mut env = MountainCarCont::<f64>::new();
        let a = env.step(&Action::Continuous(vec![5.0])).unwrap();
        let mut env2 = MountainCarCont::<f64>::new();
        let b = env2.step(&Action::Continuous(vec![1.0])).unwrap();
        assert_eq!(a.observation, b.observation);
    }

    #[test]
    fn non_finite_action_is_env_fault() {
        let mut env = MountainCarCont::<f64>::new();
        assert!(matches!(
            env.step(&Action::Continuous(vec![f64::NAN])),
            Err(Error::EnvFault(_))
        ));
    }
}
