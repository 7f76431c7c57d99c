//! Clipped-surrogate PPO update applied independently to each agent's own
//! buffer.
//!
//! The objective maximized per minibatch is
//! `surrogate + entropy_coef * H - value_coef * MSE(R, V)`; gradients are
//! assembled analytically through the policy's distribution derivatives and
//! the dense-net backward pass.

use rand::Rng;

use crate::error::{Error, Result};
use crate::nn::{clip_global_norm, AdamState};
use crate::policy::{Action, ActorCriticPolicy};
use crate::rollout::{compute_returns, minibatches, normalize_advantages, AgentBuffer};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct PpoConfig<F: Scalar> {
    pub clip_epsilon: F,
    pub entropy_coef: F,
    pub value_coef: F,
    pub gamma: F,
    pub lambda: F,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: F,
    pub max_grad_norm: F,
}

impl<F: Scalar> Default for PpoConfig<F> {
    fn default() -> Self {
        Self {
            clip_epsilon: F::c(0.2),
            entropy_coef: F::c(0.01),
            value_coef: F::c(0.5),
            gamma: F::c(0.99),
            lambda: F::c(0.95),
            epochs: 10,
            batch_size: 64,
            learning_rate: F::c(3e-4),
            max_grad_norm: F::c(0.5),
        }
    }
}

impl<F: Scalar> PpoConfig<F> {
    pub fn validate(&self) -> Result<()> {
        let in_unit = |x: F| x >= F::zero() && x <= F::one();
        if !(self.clip_epsilon > F::zero() && self.clip_epsilon < F::one()) {
            return Err(Error::Config("clip_epsilon must be in (0, 1)".into()));
        }
        if !in_unit(self.gamma) {
            return Err(Error::Config("gamma must be in [0, 1]".into()));
        }
        if !in_unit(self.lambda) {
            return Err(Error::Config("lambda must be in [0, 1]".into()));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch_size must be at least 1".into()));
        }
        if !(self.learning_rate > F::zero()) {
            return Err(Error::Config("learning_rate must be positive".into()));
        }
        if self.entropy_coef < F::zero() || self.value_coef < F::zero() {
            return Err(Error::Config("loss coefficients must be non-negative".into()));
        }
        if !(self.max_grad_norm > F::zero()) {
            return Err(Error::Config("max_grad_norm must be positive".into()));
        }
        Ok(())
    }
}

/// Diagnostics from one agent update.
#[derive(Debug, Clone, Copy, Default)]
pub struct UpdateStats {
    /// Negated clipped surrogate (the quantity descended on), averaged.
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
    /// `mean(rho - 1 - log rho)`; non-negative by construction.
    pub approx_kl: f64,
    pub gradient_steps: usize,
    pub transitions: usize,
}

/// Borrowed minibatch view; `advantages` are expected to be normalized.
#[derive(Debug, Clone, Copy)]
pub struct Batch<'a, F: Scalar> {
    pub states: &'a [Vec<F>],
    pub actions: &'a [Action<F>],
    pub log_probs_old: &'a [F],
    pub advantages: &'a [F],
    pub returns: &'a [F],
}

/// Scalar pieces of the PPO objective on one batch.
#[derive(Debug, Clone, Copy)]
pub struct Objective<F: Scalar> {
    pub surrogate: F,
    pub entropy: F,
    pub value_mse: F,
    pub approx_kl: F,
}

impl<F: Scalar> Objective<F> {
    pub fn is_finite(&self) -> bool {
        self.surrogate.is_finite()
            && self.entropy.is_finite()
            && self.value_mse.is_finite()
            && self.approx_kl.is_finite()
    }
}

/// Gradient of the objective in ascent direction, split by parameter group.
#[derive(Debug, Clone)]
pub struct PolicyGradient<F: Scalar> {
    pub actor: Vec<F>,
    pub log_std: Vec<F>,
    pub critic: Vec<F>,
}

/// Mean over the batch of `min(rho * A, clip(rho, 1 - eps, 1 + eps) * A)`,
/// returned as a quantity to maximize.
pub fn surrogate_loss<F: Scalar>(
    log_probs_new: &[F],
    log_probs_old: &[F],
    advantages: &[F],
    epsilon: F,
) -> Result<F> {
    if log_probs_new.len() != log_probs_old.len() || log_probs_new.len() != advantages.len() {
        return Err(Error::Shape("surrogate inputs must have equal lengths".into()));
    }
    if log_probs_new.is_empty() {
        return Err(Error::EmptyBuffer);
    }
    let mut total = F::zero();
    for ((new, old), adv) in log_probs_new.iter().zip(log_probs_old).zip(advantages) {
        let ratio = (*new - *old).exp();
        if !ratio.is_finite() {
            return Err(Error::Numeric("non-finite probability ratio".into()));
        }
        let clipped = ratio.max(F::one() - epsilon).min(F::one() + epsilon);
        total = total + (ratio * *adv).min(clipped * *adv);
    }
    Ok(total / F::c(log_probs_new.len() as f64))
}

/// Mean squared error between returns and values.
pub fn value_loss<F: Scalar>(returns: &[F], values: &[F]) -> Result<F> {
    if returns.len() != values.len() {
        return Err(Error::Shape("returns and values must have equal lengths".into()));
    }
    if returns.is_empty() {
        return Err(Error::EmptyBuffer);
    }
    let total: F = returns.iter().zip(values).map(|(r, v)| (*r - *v) * (*r - *v)).sum();
    Ok(total / F::c(returns.len() as f64))
}

/// Evaluates `w_s * surrogate + w_e * H - w_v * MSE` by pure forward passes.
/// This is the function the finite-difference oracle perturbs in tests.
pub fn objective_value<F: Scalar>(
    policy: &ActorCriticPolicy<F>,
    batch: &Batch<'_, F>,
    epsilon: F,
    surrogate_weight: F,
    entropy_weight: F,
    value_weight: F,
) -> Result<F> {
    let (log_probs, entropies, values) = policy.evaluate(batch.states, batch.actions)?;
    let sur = surrogate_loss(&log_probs, batch.log_probs_old, batch.advantages, epsilon)?;
    let n = F::c(batch.states.len() as f64);
    let ent = entropies.iter().copied().sum::<F>() / n;
    let mse = value_loss(batch.returns, &values)?;
    Ok(surrogate_weight * sur + entropy_weight * ent - value_weight * mse)
}

/// Analytic objective pieces and gradient (ascent direction) on one batch.
pub fn objective_and_gradient<F: Scalar>(
    policy: &ActorCriticPolicy<F>,
    batch: &Batch<'_, F>,
    epsilon: F,
    surrogate_weight: F,
    entropy_weight: F,
    value_weight: F,
) -> Result<(Objective<F>, PolicyGradient<F>)> {
    let n = batch.states.len();
    if n == 0 {
        return Err(Error::EmptyBuffer);
    }
    if batch.actions.len() != n
        || batch.log_probs_old.len() != n
        || batch.advantages.len() != n
        || batch.returns.len() != n
    {
        return Err(Error::Shape("batch arrays must have equal lengths".into()));
    }
    let inv_n = F::one() / F::c(n as f64);

    let mut actor_grad = vec![F::zero(); policy.actor().param_count()];
    let mut log_std_grad = vec![F::zero(); policy.log_std().len()];
    let mut critic_grad = vec![F::zero(); policy.critic().param_count()];

    let mut surrogate = F::zero();
    let mut entropy_sum = F::zero();
    let mut mse = F::zero();
    let mut kl = F::zero();

    for j in 0..n {
        let state = &batch.states[j];
        let actor_trace = policy.actor().forward_trace(state)?;
        let critic_trace = policy.critic().forward_trace(state)?;
        let value = critic_trace.output()[0];

        let dist = match policy.spec() {
            crate::policy::ActionSpec::Discrete { .. } => {
                categorical(actor_trace.output())
            }
            crate::policy::ActionSpec::Continuous { .. } => {
                crate::policy::ActionDistribution::Gaussian {
                    mean: actor_trace.output().to_vec(),
                    log_std: policy.log_std().to_vec(),
                }
            }
        };

        let lp_new = dist.log_prob(&batch.actions[j])?;
        let log_ratio = lp_new - batch.log_probs_old[j];
        let ratio = log_ratio.exp();
        if !ratio.is_finite() {
            return Err(Error::Numeric("non-finite probability ratio".into()));
        }
        let adv = batch.advantages[j];
        let unclipped = ratio * adv;
        let clipped = ratio.max(F::one() - epsilon).min(F::one() + epsilon) * adv;
        let (term, dsur_dlp) = if unclipped <= clipped {
            (unclipped, ratio * adv)
        } else {
            // The clipped branch is active and saturated: zero gradient.
            (clipped, F::zero())
        };
        surrogate = surrogate + term;
        kl = kl + (ratio - F::one() - log_ratio);

        let h = dist.entropy();
        entropy_sum = entropy_sum + h;

        let diff = value - batch.returns[j];
        mse = mse + diff * diff;

        // Actor head gradient: surrogate chain plus entropy term.
        let (dlp_head, dlp_ls) = dist.log_prob_grad(&batch.actions[j])?;
        let (dh_head, dh_ls) = dist.entropy_grad();
        let s_coef = surrogate_weight * dsur_dlp * inv_n;
        let e_coef = entropy_weight * inv_n;
        let head_grad: Vec<F> = dlp_head
            .iter()
            .zip(dh_head.iter())
            .map(|(dl, dh)| s_coef * *dl + e_coef * *dh)
            .collect();
        let (flat, _) = policy.actor().backward(&actor_trace, &head_grad)?;
        for (g, f) in actor_grad.iter_mut().zip(flat) {
            *g = *g + f;
        }
        for ((g, dl), dh) in log_std_grad.iter_mut().zip(dlp_ls.iter()).zip(dh_ls.iter()) {
            *g = *g + s_coef * *dl + e_coef * *dh;
        }

        // Critic gradient: objective holds -value_weight * MSE.
        let dv = -value_weight * F::c(2.0) * diff * inv_n;
        let (flat, _) = policy.critic().backward(&critic_trace, &[dv])?;
        for (g, f) in critic_grad.iter_mut().zip(flat) {
            *g = *g + f;
        }
    }

    let objective = Objective {
        surrogate: surrogate * inv_n,
        entropy: entropy_sum * inv_n,
        value_mse: mse * inv_n,
        approx_kl: kl * inv_n,
    };
    Ok((objective, PolicyGradient { actor: actor_grad, log_std: log_std_grad, critic: critic_grad }))
}

fn categorical<F: Scalar>(logits: &[F]) -> crate::policy::ActionDistribution<F> {
    let max = logits.iter().cloned().fold(F::neg_infinity(), F::max);
    let shifted: Vec<F> = logits.iter().map(|l| *l - max).collect();
    let log_z: F = shifted.iter().map(|l| l.exp()).sum::<F>().ln();
    let log_probs: Vec<F> = shifted.iter().map(|l| *l - log_z).collect();
    let probs = log_probs.iter().map(|lp| lp.exp()).collect();
    crate::policy::ActionDistribution::Categorical { log_probs, probs }
}

/// Runs `epochs x minibatch` gradient steps on the combined objective over
/// the agent's own buffer, then clears the buffer. On any non-finite loss or
/// gradient the parameters and optimizer states roll back unchanged.
pub fn update_agent<F: Scalar, R: Rng + ?Sized>(
    policy: &mut ActorCriticPolicy<F>,
    actor_opt: &mut AdamState<F>,
    critic_opt: &mut AdamState<F>,
    buffer: &mut AgentBuffer<F>,
    cfg: &PpoConfig<F>,
    rng: &mut R,
) -> Result<UpdateStats> {
    if buffer.is_empty() {
        return Err(Error::EmptyBuffer);
    }
    let advantages = buffer.compute_gae(cfg.gamma, cfg.lambda)?;
    let values = buffer.values();
    let returns = compute_returns(&advantages, &values)?;

    let transitions = buffer.len();
    let states: Vec<Vec<F>> =
        buffer.transitions().iter().map(|t| t.state.clone()).collect();
    let actions: Vec<Action<F>> =
        buffer.transitions().iter().map(|t| t.action.clone()).collect();
    let log_probs_old: Vec<F> = buffer.transitions().iter().map(|t| t.log_prob).collect();

    let snapshot = (policy.clone(), actor_opt.clone(), critic_opt.clone());
    let mut stats = UpdateStats { transitions, ..Default::default() };

    let result = (|| -> Result<()> {
        for _ in 0..cfg.epochs {
            for batch_idx in minibatches(transitions, cfg.batch_size, rng) {
                let mb_states: Vec<Vec<F>> =
                    batch_idx.iter().map(|&i| states[i].clone()).collect();
                let mb_actions: Vec<Action<F>> =
                    batch_idx.iter().map(|&i| actions[i].clone()).collect();
                let mb_lp_old: Vec<F> = batch_idx.iter().map(|&i| log_probs_old[i]).collect();
                let mut mb_adv: Vec<F> = batch_idx.iter().map(|&i| advantages[i]).collect();
                let mb_ret: Vec<F> = batch_idx.iter().map(|&i| returns[i]).collect();
                normalize_advantages(&mut mb_adv);

                let batch = Batch {
                    states: &mb_states,
                    actions: &mb_actions,
                    log_probs_old: &mb_lp_old,
                    advantages: &mb_adv,
                    returns: &mb_ret,
                };
                let (objective, grad) = objective_and_gradient(
                    policy,
                    &batch,
                    cfg.clip_epsilon,
                    F::one(),
                    cfg.entropy_coef,
                    cfg.value_coef,
                )?;
                if !objective.is_finite() {
                    return Err(Error::Numeric("non-finite loss, update aborted".into()));
                }

                // Descend on the negated objective.
                let mut actor_loss_grad: Vec<F> = grad.actor.iter().map(|g| -*g).collect();
                let mut log_std_loss_grad: Vec<F> =
                    grad.log_std.iter().map(|g| -*g).collect();
                let mut critic_loss_grad: Vec<F> = grad.critic.iter().map(|g| -*g).collect();
                clip_global_norm(
                    &mut [&mut actor_loss_grad, &mut log_std_loss_grad, &mut critic_loss_grad],
                    cfg.max_grad_norm,
                );

                // Actor optimizer covers the actor net plus log-std.
                let mut actor_params = policy.actor().get_flat();
                actor_params.extend_from_slice(policy.log_std());
                let mut combined_grad = actor_loss_grad;
                combined_grad.extend_from_slice(&log_std_loss_grad);
                actor_opt.step(&mut actor_params, &combined_grad)?;
                let split = policy.actor().param_count();
                policy.actor_mut().set_flat(&actor_params[..split])?;
                policy.log_std_mut().copy_from_slice(&actor_params[split..]);
                policy.clamp_log_std();

                let mut critic_params = policy.critic().get_flat();
                critic_opt.step(&mut critic_params, &critic_loss_grad)?;
                policy.critic_mut().set_flat(&critic_params)?;

                stats.policy_loss += -objective.surrogate.to_f64().unwrap_or(f64::NAN);
                stats.value_loss += objective.value_mse.to_f64().unwrap_or(f64::NAN);
                stats.entropy += objective.entropy.to_f64().unwrap_or(f64::NAN);
                stats.approx_kl += objective.approx_kl.to_f64().unwrap_or(f64::NAN);
                stats.gradient_steps += 1;
            }
        }
        Ok(())
    })();

    match result {
        Ok(()) => {
            let n = stats.gradient_steps.max(1) as f64;
            stats.policy_loss /= n;
            stats.value_loss /= n;
            stats.entropy /= n;
            stats.approx_kl /= n;
            buffer.clear();
            Ok(stats)
        }
        Err(e) => {
            let (p, a, c) = snapshot;
            *policy = p;
            *actor_opt = a;
            *critic_opt = c;
            Err(e)
        }
    }
}
