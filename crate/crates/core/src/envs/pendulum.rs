//! Torque-controlled pendulum swing-up with the standard constants.

use rand::Rng;

use super::{EnvSpec, StepResult};
use crate::error::{Error, Result};
use crate::policy::{Action, ActionSpec};
use crate::scalar::{all_finite, Scalar};

const GRAVITY: f64 = 10.0;
const MASS: f64 = 1.0;
const LENGTH: f64 = 1.0;
const DT: f64 = 0.05;
const MAX_TORQUE: f64 = 2.0;
const MAX_SPEED: f64 = 8.0;
const MAX_STEPS: usize = 200;

/// Internal state is `(theta, theta_dot)` with theta 0 upright; the
/// observation is `(cos theta, sin theta, theta_dot)`. Reward is
/// `-(theta^2 + 0.1 theta_dot^2 + 0.001 u^2)` with theta normalized to
/// `[-pi, pi]`. Episodes truncate at 200 steps and never terminate.
#[derive(Debug, Clone)]
pub struct Pendulum<F: Scalar> {
    theta: F,
    theta_dot: F,
    steps: usize,
}

impl<F: Scalar> Default for Pendulum<F> {
    fn default() -> Self {
        Self::new()
    }
}

fn angle_normalize<F: Scalar>(x: F) -> F {
    let two_pi = F::c(2.0 * std::f64::consts::PI);
    let pi = F::c(std::f64::consts::PI);
    let mut a = (x + pi) % two_pi;
    if a < F::zero() {
        a = a + two_pi;
    }
    a - pi
}

impl<F: Scalar> Pendulum<F> {
    pub fn new() -> Self {
        Self { theta: F::zero(), theta_dot: F::zero(), steps: 0 }
    }

    pub fn spec(&self) -> EnvSpec<F> {
        EnvSpec {
            obs_dim: 3,
            action_spec: ActionSpec::Continuous {
                low: vec![F::c(-MAX_TORQUE)],
                high: vec![F::c(MAX_TORQUE)],
            },
            max_episode_steps: MAX_STEPS,
        }
    }

    fn observation(&self) -> Vec<F> {
        vec![self.theta.cos(), self.theta.sin(), self.theta_dot]
    }

    pub fn reset<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Vec<F> {
        let pi = std::f64::consts::PI;
        self.theta = F::sample_uniform(rng, F::c(-pi), F::c(pi));
        self.theta_dot = F::sample_uniform(rng, F::c(-1.0), F::c(1.0));
        self.steps = 0;
        self.observation()
    }

    pub fn step(&mut self, action: &Action<F>) -> Result<StepResult<F>> {
        let raw = match action {
            Action::Continuous(a) if a.len() == 1 => a[0],
            Action::Continuous(a) => {
                return Err(Error::InvalidAction(format!(
                    "pendulum takes a 1-D torque, got {}",
                    a.len()
                )))
            }
            Action::Discrete(_) => {
                return Err(Error::InvalidAction("pendulum takes a continuous action".into()))
            }
        };
        if !raw.is_finite() {
            return Err(Error::EnvFault("non-finite torque".into()));
        }
        let u = raw.max(F::c(-MAX_TORQUE)).min(F::c(MAX_TORQUE));

        // Cost uses the pre-update state.
        let th_norm = angle_normalize(self.theta);
        let cost = th_norm * th_norm
            + F::c(0.1) * self.theta_dot * self.theta_dot
            + F::c(0.001) * u * u;

        let new_theta_dot = self.theta_dot
            + (F::c(3.0 * GRAVITY / (2.0 * LENGTH)) * self.theta.sin()
                + F::c(3.0 / (MASS * LENGTH * LENGTH)) * u)
                * F::c(DT);
        let new_theta_dot = new_theta_dot.max(F::c(-MAX_SPEED)).min(F::c(MAX_SPEED));
        self.theta = self.theta + new_theta_dot * F::c(DT);
        self.theta_dot = new_theta_dot;
        self.steps += 1;

        Ok(StepResult {
            observation: self.observation(),
            reward: -cost,
            terminated: false,
            truncated: self.steps >= MAX_STEPS,
        })
    }

    pub fn snapshot(&self) -> Vec<f64> {
        vec![self.theta.to_f64().unwrap(), self.theta_dot.to_f64().unwrap(), self.steps as f64]
    }

    pub fn restore(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != 3 || !all_finite(values) {
            return Err(Error::Checkpoint("pendulum snapshot needs 3 finite values".into()));
        }
        self.theta = F::c(values[0]);
        self.theta_dot = F::c(values[1]);
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
    fn upright_at_rest_with_zero_torque_is_free() {
        let mut env = Pendulum::<f64>::new();
        let sr = env.step(&Action::Continuous(vec![0.0])).unwrap();
        assert_eq!(sr.reward, -0.0);
    }

    #[test]
    fn reward_is_never_positive() {
        let mut env = Pendulum::<f64>::new();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        env.reset(&mut rng);
        for _ in 0..1000 {
            let a = rng.gen_range(-2.0..2.0);
            let sr = env.step(&Action::Continuous(vec![a])).unwrap();
            assert!(sr.reward <= 0.0);
            if sr.done() {
                env.reset(&mut rng);
            }
        }
    }

    #[test]
    fn free_swing_oscillates() {
        // Released from the side with no torque, the angular velocity must
        // change sign repeatedly (no damping in the model).
        let mut env = Pendulum::<f64>::new();
        env.restore(&[std::f64::consts::FRAC_PI_2, 0.0, 0.0]).unwrap();
        let mut sign_changes = 0;
        let mut last_sign = 0i32;
        for _ in 0..200 {
            let sr = env.step(&Action::Continuous(vec![0.0])).unwrap();
            let s = if sr.observation[2] > 0.0 { 1 } else { -1 };
            if last_sign != 0 && s != last_sign {
                sign_changes += 1;
            }
            last_sign = s;
        }
        assert!(sign_changes >= 2, "only {sign_changes} sign changes");
    }

    #[test]
    fn truncates_at_200_steps() {
        let mut env = Pendulum::<f64>::new();
        for i in 0..200 {
            let sr = env.step(&Action::Continuous(vec![0.0])).unwrap();
            assert_eq!(sr.truncated, i == 199);
            assert!(!sr.terminated);
        }
    }

    #[test]
    fn angle_normalize_wraps() {
        let pi = std::f64::consts::PI;
        assert!((angle_normalize(3.0 * pi) - pi).abs() < 1e-12 || (angle_normalize(3.0 * pi) + pi).abs() < 1e-12);
        assert!((angle_normalize(0.5f64) - 0.5).abs() < 1e-12);
        assert!((angle_normalize(-0.5f64) + 0.5).abs() < 1e-12);
    }
}
