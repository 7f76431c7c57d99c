//! Per-agent trajectory buffer plus advantage and return computation (GAE).

use rand::Rng;

use crate::error::{Error, Result};
use crate::policy::Action;
use crate::scalar::Scalar;

/// One environment step as stored for training.
#[derive(Debug, Clone)]
pub struct Transition<F: Scalar> {
    pub state: Vec<F>,
    pub action: Action<F>,
    /// Raw environment reward, kept for evaluation metrics.
    pub reward_env: F,
    /// Novelty-augmented reward; this is what GAE consumes.
    pub reward_aug: F,
    pub done: bool,
    pub log_prob: F,
    pub value: F,
    pub agent_id: usize,
    pub novelty: F,
}

/// Ordered transition store for one agent, with an optional bootstrap value
/// for a trajectory truncated at the horizon.
#[derive(Debug, Clone)]
pub struct AgentBuffer<F: Scalar> {
    transitions: Vec<Transition<F>>,
    bootstrap_value: Option<F>,
    capacity: usize,
}

impl<F: Scalar> AgentBuffer<F> {
    pub fn new(capacity: usize) -> Self {
        Self { transitions: Vec::new(), bootstrap_value: None, capacity }
    }

    pub fn push(&mut self, t: Transition<F>) {
        debug_assert!(self.transitions.len() < self.capacity, "buffer past capacity");
        self.transitions.push(t);
    }

    pub fn set_bootstrap(&mut self, value: F) {
        self.bootstrap_value = Some(value);
    }

    pub fn bootstrap_value(&self) -> Option<F> {
        self.bootstrap_value
    }

    pub fn transitions(&self) -> &[Transition<F>] {
        &self.transitions
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn clear(&mut self) {
        self.transitions.clear();
        self.bootstrap_value = None;
    }

    /// Mean raw reward and mean novelty over the stored transitions.
    pub fn means(&self) -> Option<(F, F)> {
        if self.transitions.is_empty() {
            return None;
        }
        let n = F::c(self.transitions.len() as f64);
        let r: F = self.transitions.iter().map(|t| t.reward_env).sum();
        let nov: F = self.transitions.iter().map(|t| t.novelty).sum();
        Some((r / n, nov / n))
    }

    /// GAE advantages via the backward recursion
    /// `A_t = delta_t + gamma * lambda * (1 - d_t) * A_{t+1}` with
    /// `delta_t = r_aug_t + gamma * (1 - d_t) * V(s_{t+1}) - V(s_t)`,
    /// over the augmented rewards.
    pub fn compute_gae(&self, gamma: F, lambda: F) -> Result<Vec<F>> {
        if self.transitions.is_empty() {
            return Err(Error::EmptyBuffer);
        }
        let last_done = self.transitions.last().unwrap().done;
        let bootstrap = if last_done {
            F::zero()
        } else {
            self.bootstrap_value.ok_or(Error::MissingBootstrap)?
        };

        let n = self.transitions.len();
        let mut advantages = vec![F::zero(); n];
        let mut next_adv = F::zero();
        for t in (0..n).rev() {
            let tr = &self.transitions[t];
            let not_done = if tr.done { F::zero() } else { F::one() };
            let next_value =
                if t + 1 < n { self.transitions[t + 1].value } else { bootstrap };
            let delta = tr.reward_aug + gamma * not_done * next_value - tr.value;
            let adv = delta + gamma * lambda * not_done * next_adv;
            advantages[t] = adv;
            next_adv = adv;
        }
        Ok(advantages)
    }

    pub fn values(&self) -> Vec<F> {
        self.transitions.iter().map(|t| t.value).collect()
    }
}

/// Returns `R_t = A_t + V(s_t)` elementwise.
pub fn compute_returns<F: Scalar>(advantages: &[F], values: &[F]) -> Result<Vec<F>> {
    if advantages.len() != values.len() {
        return Err(Error::Shape(format!(
            "{} advantages vs {} values",
            advantages.len(),
            values.len()
        )));
    }
    Ok(advantages.iter().zip(values).map(|(a, v)| *a + *v).collect())
}

/// Shuffled index batches covering `0..len` exactly once.
pub fn minibatches<R: Rng + ?Sized>(len: usize, batch_size: usize, rng: &mut R) -> Vec<Vec<usize>> {
    use rand::seq::SliceRandom;
    let batch_size = batch_size.max(1);
    let mut indices: Vec<usize> = (0..len).collect();
    indices.shuffle(rng);
    indices.chunks(batch_size).map(|c| c.to_vec()).collect()
}

/// Normalizes to mean 0, std 1 (population std). The 1e-8 floor only guards
/// degenerate all-equal batches, which normalize to zeros.
pub fn normalize_advantages<F: Scalar>(advantages: &mut [F]) {
    if advantages.is_empty() {
        return;
    }
    let n = F::c(advantages.len() as f64);
    let mean = advantages.iter().copied().sum::<F>() / n;
    let var = advantages.iter().map(|a| (*a - mean) * (*a - mean)).sum::<F>() / n;
    let denom = var.sqrt().max(F::c(1e-8));
    for a in advantages.iter_mut() {
        *a = (*a - mean) / denom;
    }
}
