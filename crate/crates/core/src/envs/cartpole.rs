//! Cart-pole balancing with the canonical classic-control constants.

use rand::Rng;

use super::{EnvSpec, StepResult};
use crate::error::{Error, Result};
use crate::policy::{Action, ActionSpec};
use crate::scalar::Scalar;

const GRAVITY: f64 = 9.8;
const MASS_CART: f64 = 1.0;
const MASS_POLE: f64 = 0.1;
const TOTAL_MASS: f64 = MASS_CART + MASS_POLE;
/// Half the pole's length.
const LENGTH: f64 = 0.5;
const POLE_MASS_LENGTH: f64 = MASS_POLE * LENGTH;
const FORCE_MAG: f64 = 10.0;
const TAU: f64 = 0.02;
const X_THRESHOLD: f64 = 2.4;
const THETA_THRESHOLD: f64 = 12.0 * std::f64::consts::PI / 180.0;
const MAX_STEPS: usize = 500;

/// State is `(x, x_dot, theta, theta_dot)`; reward is +1 per step; episodes
/// terminate at `|x| > 2.4` or `|theta| > 12 degrees` and truncate at 500
/// steps.
#[derive(Debug, Clone)]
pub struct CartPole<F: Scalar> {
    state: [F; 4],
    steps: usize,
}

impl<F: Scalar> Default for CartPole<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Scalar> CartPole<F> {
    pub fn new() -> Self {
        Self { state: [F::zero(); 4], steps: 0 }
    }

    pub fn spec(&self) -> EnvSpec<F> {
        EnvSpec {
            obs_dim: 4,
            action_spec: ActionSpec::Discrete { n: 2 },
            max_episode_steps: MAX_STEPS,
        }
    }

    pub fn reset<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Vec<F> {
        for s in &mut self.state {
            *s = F::sample_uniform(rng, F::c(-0.05), F::c(0.05));
        }
        self.steps = 0;
        self.state.to_vec()
    }

    pub fn step(&mut self, action: &Action<F>) -> Result<StepResult<F>> {
        let push_right = match action {
            Action::Discrete(0) => false,
            Action::Discrete(1) => true,
            Action::Discrete(k) => {
                return Err(Error::InvalidAction(format!("cartpole action {k} not in {{0,1}}")))
            }
            Action::Continuous(_) => {
                return Err(Error::InvalidAction("cartpole takes a discrete action".into()))
            }
        };
        let force = if push_right { F::c(FORCE_MAG) } else { F::c(-FORCE_MAG) };
        let [mut x, mut x_dot, mut theta, mut theta_dot] = self.state;

        let cos_theta = theta.cos();
        let sin_theta = theta.sin();
        let temp = (force + F::c(POLE_MASS_LENGTH) * theta_dot * theta_dot * sin_theta)
            / F::c(TOTAL_MASS);
        let theta_acc = (F::c(GRAVITY) * sin_theta - cos_theta * temp)
            / (F::c(LENGTH)
                * (F::c(4.0 / 3.0) - F::c(MASS_POLE) * cos_theta * cos_theta / F::c(TOTAL_MASS)));
        let x_acc = temp - F::c(POLE_MASS_LENGTH) * theta_acc * cos_theta / F::c(TOTAL_MASS);

        // Euler kinematics: positions advance with the old velocities.
        x = x + F::c(TAU) * x_dot;
        x_dot = x_dot + F::c(TAU) * x_acc;
        theta = theta + F::c(TAU) * theta_dot;
        theta_dot = theta_dot + F::c(TAU) * theta_acc;
        self.state = [x, x_dot, theta, theta_dot];
        self.steps += 1;

        let terminated = x < F::c(-X_THRESHOLD)
            || x > F::c(X_THRESHOLD)
            || theta < F::c(-THETA_THRESHOLD)
            || theta > F::c(THETA_THRESHOLD);
        let truncated = !terminated && self.steps >= MAX_STEPS;
        Ok(StepResult {
            observation: self.state.to_vec(),
            reward: F::one(),
            terminated,
            truncated,
        })
    }

    pub fn snapshot(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.state.iter().map(|s| s.to_f64().unwrap()).collect();
        v.push(self.steps as f64);
        v
    }

    pub fn restore(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != 5 {
            return Err(Error::Checkpoint("cartpole snapshot needs 5 values".into()));
        }
        for (s, v) in self.state.iter_mut().zip(values) {
            *s = F::c(*v);
        }
        self.steps = values[4] as usize;
        Ok(())
    }
}
