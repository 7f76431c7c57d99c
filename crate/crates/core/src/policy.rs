//! Actor-critic policy: Gaussian head for continuous actions, categorical
//! head for discrete actions, with sampling, log-probabilities, entropy, and
//! the gradient hooks the PPO update needs.

use std::f64::consts::PI;
use std::io::{Read, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nn::{self, DenseNet};
use crate::scalar::{all_finite, Scalar};

pub const LOG_STD_MIN: f64 = -5.0;
pub const LOG_STD_MAX: f64 = 2.0;

/// Action-space description.
#[derive(Debug, Clone, PartialEq)]
pub enum ActionSpec<F: Scalar> {
    Discrete { n: usize },
    Continuous { low: Vec<F>, high: Vec<F> },
}

impl<F: Scalar> ActionSpec<F> {
    pub fn continuous(low: Vec<F>, high: Vec<F>) -> Result<Self> {
        if low.len() != high.len() || low.is_empty() {
            return Err(Error::Shape("continuous bounds must be equal-length and non-empty".into()));
        }
        if low.iter().zip(high.iter()).any(|(l, h)| !(*l < *h)) {
            return Err(Error::Config("continuous bounds require low < high elementwise".into()));
        }
        Ok(Self::Continuous { low, high })
    }

    pub fn discrete(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("discrete action space needs at least one action".into()));
        }
        Ok(Self::Discrete { n })
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Self::Discrete { .. })
    }

    /// Dimension of the action itself (1 per index for discrete).
    pub fn action_dim(&self) -> usize {
        match self {
            Self::Discrete { .. } => 1,
            Self::Continuous { low, .. } => low.len(),
        }
    }

    /// Dimension of the actor head output and of swarm particles: the number
    /// of actions for discrete spaces, the action dimension otherwise.
    pub fn head_dim(&self) -> usize {
        match self {
            Self::Discrete { n } => *n,
            Self::Continuous { low, .. } => low.len(),
        }
    }

    /// Clamps a continuous action into bounds; identity for discrete.
    pub fn clamp(&self, action: &mut [F]) {
        if let Self::Continuous { low, high } = self {
            for ((a, l), h) in action.iter_mut().zip(low).zip(high) {
                if *a < *l {
                    *a = *l;
                }
                if *a > *h {
                    *a = *h;
                }
            }
        }
    }
}

/// One executed action.
#[derive(Debug, Clone, PartialEq)]
pub enum Action<F: Scalar> {
    Discrete(usize),
    Continuous(Vec<F>),
}

impl<F: Scalar> Action<F> {
    /// Embedding in particle space: one-hot for discrete, the vector itself
    /// for continuous.
    pub fn embed(&self, spec: &ActionSpec<F>) -> Vec<F> {
        match (self, spec) {
            (Action::Discrete(k), ActionSpec::Discrete { n }) => {
                let mut v = vec![F::zero(); *n];
                if *k < *n {
                    v[*k] = F::one();
                }
                v
            }
            (Action::Continuous(a), _) => a.clone(),
            (Action::Discrete(k), ActionSpec::Continuous { low, .. }) => {
                // Mismatched pairing; degrade to a zero vector of the right size.
                let _ = k;
                vec![F::zero(); low.len()]
            }
        }
    }
}

/// Sampled distribution at one state.
#[derive(Debug, Clone)]
pub enum ActionDistribution<F: Scalar> {
    Gaussian { mean: Vec<F>, log_std: Vec<F> },
    Categorical { log_probs: Vec<F>, probs: Vec<F> },
}

impl<F: Scalar> ActionDistribution<F> {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Action<F> {
        match self {
            Self::Gaussian { mean, log_std } => {
                let a = mean
                    .iter()
                    .zip(log_std.iter())
                    .map(|(m, ls)| *m + ls.exp() * F::sample_standard_normal(rng))
                    .collect();
                Action::Continuous(a)
            }
            Self::Categorical { probs, .. } => {
                let u = F::sample_unit(rng);
                let mut acc = F::zero();
                for (k, p) in probs.iter().enumerate() {
                    acc = acc + *p;
                    if u < acc {
                        return Action::Discrete(k);
                    }
                }
                Action::Discrete(probs.len() - 1)
            }
        }
    }

    /// Greedy action: distribution mean / argmax.
    pub fn greedy(&self) -> Action<F> {
        match self {
            Self::Gaussian { mean, .. } => Action::Continuous(mean.clone()),
            Self::Categorical { probs, .. } => {
                let mut best = 0;
                for (k, p) in probs.iter().enumerate() {
                    if *p > probs[best] {
                        best = k;
                    }
                }
                Action::Discrete(best)
            }
        }
    }

    /// Log density (diagonal Gaussian) or log mass (categorical) of `action`.
    pub fn log_prob(&self, action: &Action<F>) -> Result<F> {
        match (self, action) {
            (Self::Gaussian { mean, log_std }, Action::Continuous(a)) => {
                if a.len() != mean.len() {
                    return Err(Error::Shape(format!(
                        "action dim {} vs distribution dim {}",
                        a.len(),
                        mean.len()
                    )));
                }
                let half_ln_2pi = F::c(0.5 * (2.0 * PI).ln());
                let mut lp = F::zero();
                for ((x, m), ls) in a.iter().zip(mean).zip(log_std) {
                    let z = (*x - *m) / ls.exp();
                    lp = lp - half_ln_2pi - *ls - F::c(0.5) * z * z;
                }
                Ok(lp)
            }
            (Self::Categorical { log_probs, .. }, Action::Discrete(k)) => log_probs
                .get(*k)
                .copied()
                .ok_or_else(|| Error::InvalidAction(format!("index {k} out of range"))),
            _ => Err(Error::InvalidAction("action kind does not match distribution".into())),
        }
    }

    pub fn entropy(&self) -> F {
        match self {
            Self::Gaussian { log_std, .. } => {
                // Sum over dims of 0.5 ln(2 pi e) + log_std.
                let base = F::c(0.5 * (2.0 * PI * std::f64::consts::E).ln());
                log_std.iter().map(|ls| base + *ls).sum()
            }
            Self::Categorical { log_probs, probs } => {
                let mut h = F::zero();
                for (p, lp) in probs.iter().zip(log_probs) {
                    if *p > F::zero() {
                        h = h - *p * *lp;
                    }
                }
                h
            }
        }
    }

    /// Gradient of `log_prob(action)` with respect to the actor head output
    /// (mean or logits) and, for Gaussian policies, the log-std vector.
    pub fn log_prob_grad(&self, action: &Action<F>) -> Result<(Vec<F>, Vec<F>)> {
        match (self, action) {
            (Self::Gaussian { mean, log_std }, Action::Continuous(a)) => {
                let mut d_mean = Vec::with_capacity(mean.len());
                let mut d_log_std = Vec::with_capacity(mean.len());
                for ((x, m), ls) in a.iter().zip(mean).zip(log_std) {
                    let inv_var = (F::c(-2.0) * *ls).exp();
                    let diff = *x - *m;
                    d_mean.push(diff * inv_var);
                    d_log_std.push(diff * diff * inv_var - F::one());
                }
                Ok((d_mean, d_log_std))
            }
            (Self::Categorical { probs, .. }, Action::Discrete(k)) => {
                if *k >= probs.len() {
                    return Err(Error::InvalidAction(format!("index {k} out of range")));
                }
                let d_logits = probs
                    .iter()
                    .enumerate()
                    .map(|(i, p)| if i == *k { F::one() - *p } else { -*p })
                    .collect();
                Ok((d_logits, Vec::new()))
            }
            _ => Err(Error::InvalidAction("action kind does not match distribution".into())),
        }
    }

    /// Gradient of the entropy with respect to the actor head output and the
    /// log-std vector.
    pub fn entropy_grad(&self) -> (Vec<F>, Vec<F>) {
        match self {
            Self::Gaussian { mean, log_std } => {
                (vec![F::zero(); mean.len()], vec![F::one(); log_std.len()])
            }
            Self::Categorical { log_probs, probs } => {
                let h = self.entropy();
                let d = probs
                    .iter()
                    .zip(log_probs)
                    .map(|(p, lp)| -*p * (*lp + h))
                    .collect();
                (d, Vec::new())
            }
        }
    }
}

/// Actor-critic pair over [`DenseNet`] backbones with a state-independent
/// learned log-std for continuous control.
#[derive(Debug, Clone, PartialEq)]
pub struct ActorCriticPolicy<F: Scalar> {
    actor: DenseNet<F>,
    critic: DenseNet<F>,
    log_std: Vec<F>,
    spec: ActionSpec<F>,
}

impl<F: Scalar> ActorCriticPolicy<F> {
    /// Builds actor and critic MLPs with the standard gains: sqrt(2) for
    /// hidden layers, 0.01 for the actor head, 1.0 for the critic head.
    /// log-std starts at zero.
    pub fn new<R: Rng + ?Sized>(
        obs_dim: usize,
        spec: ActionSpec<F>,
        hidden: &[usize],
        rng: &mut R,
    ) -> Result<Self> {
        if obs_dim == 0 {
            return Err(Error::InvalidArchitecture("observation dim must be positive".into()));
        }
        let mut actor_dims = vec![obs_dim];
        actor_dims.extend_from_slice(hidden);
        actor_dims.push(spec.head_dim());
        let mut critic_dims = vec![obs_dim];
        critic_dims.extend_from_slice(hidden);
        critic_dims.push(1);

        let hidden_gain = F::c(std::f64::consts::SQRT_2);
        let mut actor_gains = vec![hidden_gain; actor_dims.len() - 1];
        *actor_gains.last_mut().unwrap() = F::c(0.01);
        let mut critic_gains = vec![hidden_gain; critic_dims.len() - 1];
        *critic_gains.last_mut().unwrap() = F::one();

        let actor = DenseNet::init_orthogonal_with_rng(&actor_dims, &actor_gains, rng)?;
        let critic = DenseNet::init_orthogonal_with_rng(&critic_dims, &critic_gains, rng)?;
        let log_std = if spec.is_discrete() { Vec::new() } else { vec![F::zero(); spec.head_dim()] };
        Ok(Self { actor, critic, log_std, spec })
    }

    pub fn spec(&self) -> &ActionSpec<F> {
        &self.spec
    }

    pub fn actor(&self) -> &DenseNet<F> {
        &self.actor
    }

    pub fn actor_mut(&mut self) -> &mut DenseNet<F> {
        &mut self.actor
    }

    pub fn critic(&self) -> &DenseNet<F> {
        &self.critic
    }

    pub fn critic_mut(&mut self) -> &mut DenseNet<F> {
        &mut self.critic
    }

    pub fn log_std(&self) -> &[F] {
        &self.log_std
    }

    pub fn log_std_mut(&mut self) -> &mut [F] {
        &mut self.log_std
    }

    /// Re-applies the log-std clamp after an optimizer step.
    pub fn clamp_log_std(&mut self) {
        for ls in &mut self.log_std {
            if *ls < F::c(LOG_STD_MIN) {
                *ls = F::c(LOG_STD_MIN);
            }
            if *ls > F::c(LOG_STD_MAX) {
                *ls = F::c(LOG_STD_MAX);
            }
        }
    }

    /// Actor distribution and critic value at one state.
    pub fn distribution(&self, state: &[F]) -> Result<(ActionDistribution<F>, F)> {
        if !all_finite(state) {
            return Err(Error::Numeric("non-finite state".into()));
        }
        let head = self.actor.forward(state)?;
        let value = self.critic.forward(state)?[0];
        let dist = match &self.spec {
            ActionSpec::Discrete { .. } => categorical_from_logits(&head),
            ActionSpec::Continuous { .. } => {
                ActionDistribution::Gaussian { mean: head, log_std: self.log_std.clone() }
            }
        };
        Ok((dist, value))
    }

    /// Critic value alone (bootstrapping).
    pub fn value(&self, state: &[F]) -> Result<F> {
        if !all_finite(state) {
            return Err(Error::Numeric("non-finite state".into()));
        }
        Ok(self.critic.forward(state)?[0])
    }

    /// Samples an action: returns it with its log-probability and the value.
    pub fn act<R: Rng + ?Sized>(&self, state: &[F], rng: &mut R) -> Result<(Action<F>, F, F)> {
        let (dist, value) = self.distribution(state)?;
        let action = dist.sample(rng);
        let log_prob = dist.log_prob(&action)?;
        Ok((action, log_prob, value))
    }

    /// Per-sample log-probabilities, entropies, and values for a batch of
    /// state/action pairs under the current parameters.
    pub fn evaluate(
        &self,
        states: &[Vec<F>],
        actions: &[Action<F>],
    ) -> Result<(Vec<F>, Vec<F>, Vec<F>)> {
        if states.len() != actions.len() {
            return Err(Error::Shape(format!(
                "{} states vs {} actions",
                states.len(),
                actions.len()
            )));
        }
        let mut log_probs = Vec::with_capacity(states.len());
        let mut entropies = Vec::with_capacity(states.len());
        let mut values = Vec::with_capacity(states.len());
        for (s, a) in states.iter().zip(actions) {
            let (dist, v) = self.distribution(s)?;
            log_probs.push(dist.log_prob(a)?);
            entropies.push(dist.entropy());
            values.push(v);
        }
        Ok((log_probs, entropies, values))
    }

    /// Total parameter count across actor, critic, and log-std.
    pub fn param_count(&self) -> usize {
        self.actor.param_count() + self.critic.param_count() + self.log_std.len()
    }

    /// Flat parameters in checkpoint order: actor, critic, log-std.
    pub fn get_flat(&self) -> Vec<F> {
        let mut flat = self.actor.get_flat();
        flat.extend(self.critic.get_flat());
        flat.extend_from_slice(&self.log_std);
        flat
    }

    pub fn set_flat(&mut self, flat: &[F]) -> Result<()> {
        if flat.len() != self.param_count() {
            return Err(Error::Shape(format!(
                "flat vector has {} entries, policy has {}",
                flat.len(),
                self.param_count()
            )));
        }
        let a = self.actor.param_count();
        let c = self.critic.param_count();
        self.actor.set_flat(&flat[..a])?;
        self.critic.set_flat(&flat[a..a + c])?;
        self.log_std.copy_from_slice(&flat[a + c..]);
        Ok(())
    }

    /// Writes the policy checkpoint: one JSON header, then the actor
    /// fragment, critic fragment, and log-std array as little-endian f64.
    pub fn write_checkpoint<W: Write>(&self, w: &mut W) -> Result<()> {
        let header = PolicyHeader {
            actor_layer_dims: self.actor.layer_dims().to_vec(),
            critic_layer_dims: self.critic.layer_dims().to_vec(),
            log_std_len: self.log_std.len(),
            spec: SpecHeader::from_spec(&self.spec),
        };
        nn::write_fragment_header(w, &header)?;
        nn::write_f64_array(w, &self.actor.get_flat())?;
        nn::write_f64_array(w, &self.critic.get_flat())?;
        nn::write_f64_array(w, &self.log_std)?;
        Ok(())
    }

    pub fn read_checkpoint<R: Read>(r: &mut R) -> Result<Self> {
        let header: PolicyHeader = nn::read_fragment_header(r)?;
        let mut actor = DenseNet::zeros(&header.actor_layer_dims)?;
        let mut critic = DenseNet::zeros(&header.critic_layer_dims)?;
        let av = nn::read_f64_array(r, actor.param_count())?;
        actor.set_flat(&av.iter().map(|&v| F::c(v)).collect::<Vec<_>>())?;
        let cv = nn::read_f64_array(r, critic.param_count())?;
        critic.set_flat(&cv.iter().map(|&v| F::c(v)).collect::<Vec<_>>())?;
        let ls = nn::read_f64_array(r, header.log_std_len)?;
        let spec = header.spec.into_spec()?;
        Ok(Self { actor, critic, log_std: ls.iter().map(|&v| F::c(v)).collect(), spec })
    }
}

fn categorical_from_logits<F: Scalar>(logits: &[F]) -> ActionDistribution<F> {
    let max = logits.iter().cloned().fold(F::neg_infinity(), F::max);
    let shifted: Vec<F> = logits.iter().map(|l| *l - max).collect();
    let log_z: F = shifted.iter().map(|l| l.exp()).sum::<F>().ln();
    let log_probs: Vec<F> = shifted.iter().map(|l| *l - log_z).collect();
    let probs = log_probs.iter().map(|lp| lp.exp()).collect();
    ActionDistribution::Categorical { log_probs, probs }
}

#[derive(Debug, Serialize, Deserialize)]
struct PolicyHeader {
    actor_layer_dims: Vec<usize>,
    critic_layer_dims: Vec<usize>,
    log_std_len: usize,
    spec: SpecHeader,
}

#[derive(Debug, Serialize, Deserialize)]
struct SpecHeader {
    kind: String,
    n: usize,
    low: Vec<f64>,
    high: Vec<f64>,
}

impl SpecHeader {
    fn from_spec<F: Scalar>(spec: &ActionSpec<F>) -> Self {
        match spec {
            ActionSpec::Discrete { n } => {
                Self { kind: "discrete".into(), n: *n, low: Vec::new(), high: Vec::new() }
            }
            ActionSpec::Continuous { low, high } => Self {
                kind: "continuous".into(),
                n: low.len(),
                low: low.iter().map(|v| v.to_f64().unwrap()).collect(),
                high: high.iter().map(|v| v.to_f64().unwrap()).collect(),
            },
        }
    }

    fn into_spec<F: Scalar>(self) -> Result<ActionSpec<F>> {
        match self.kind.as_str() {
            "discrete" => ActionSpec::discrete(self.n),
            "continuous" => ActionSpec::continuous(
                self.low.iter().map(|&v| F::c(v)).collect(),
                self.high.iter().map(|&v| F::c(v)).collect(),
            ),
            other => Err(Error::Checkpoint(format!("unknown action spec kind {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn discrete_policy(n: usize, seed: u64) -> ActorCriticPolicy<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ActorCriticPolicy::new(3, ActionSpec::discrete(n).unwrap(), &[8, 8], &mut rng).unwrap()
    }

    fn continuous_policy(dim: usize, seed: u64) -> ActorCriticPolicy<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = ActionSpec::continuous(vec![-2.0; dim], vec![2.0; dim]).unwrap();
        ActorCriticPolicy::new(3, spec, &[8, 8], &mut rng).unwrap()
    }

    #[test]
    fn uniform_logits_give_log_half() {
        let mut policy = discrete_policy(2, 1);
        // Zero the actor head so logits are uniform.
        let flat = vec![0.0; policy.actor.param_count()];
        policy.actor.set_flat(&flat).unwrap();
        let (dist, _) = policy.distribution(&[0.1, 0.2, 0.3]).unwrap();
        for k in 0..2 {
            let lp = dist.log_prob(&Action::Discrete(k)).unwrap();
            assert!((lp - 0.5f64.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_log_prob_at_mean() {
        let dist = ActionDistribution::Gaussian { mean: vec![0.0, 0.0], log_std: vec![0.0, 0.0] };
        let lp = dist.log_prob(&Action::Continuous(vec![0.0, 0.0])).unwrap();
        let expect = -0.5 * (2.0 * PI).ln() * 2.0;
        assert!((lp - expect).abs() < 1e-12);
    }

    #[test]
    fn discrete_probabilities_sum_to_one() {
        let policy = discrete_policy(5, 7);
        let (dist, _) = policy.distribution(&[0.4, -0.1, 0.9]).unwrap();
        if let ActionDistribution::Categorical { probs, .. } = dist {
            let total: f64 = probs.iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        } else {
            panic!("expected categorical");
        }
    }

    #[test]
    fn empirical_frequencies_match_distribution() {
        // Known probabilities via explicit logits [0, ln 2, ln 3]: p = k/6.
        let dist = categorical_from_logits(&[0.0f64, 2.0f64.ln(), 3.0f64.ln()]);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = 100_000usize;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            if let Action::Discrete(k) = dist.sample(&mut rng) {
                counts[k] += 1;
            }
        }
        let expect = [1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0];
        for k in 0..3 {
            let freq = counts[k] as f64 / n as f64;
            let sigma = (expect[k] * (1.0 - expect[k]) / n as f64).sqrt();
            assert!(
                (freq - expect[k]).abs() < 3.0 * sigma,
                "action {k}: freq {freq} vs {}",
                expect[k]
            );
        }
    }

    #[test]
    fn act_then_evaluate_reproduces_log_prob() {
        for policy in [discrete_policy(4, 3), continuous_policy(2, 4)] {
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let state = vec![0.2, -0.4, 0.6];
            let (action, lp, value) = policy.act(&state, &mut rng).unwrap();
            let (lps, _, values) = policy.evaluate(&[state], &[action]).unwrap();
            assert!((lps[0] - lp).abs() < 1e-12);
            assert!((values[0] - value).abs() < 1e-12);
        }
    }

    #[test]
    fn act_rejects_non_finite_state() {
        let policy = discrete_policy(2, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = policy.act(&[f64::INFINITY, 0.0, 0.0], &mut rng).unwrap_err();
        assert!(matches!(err, Error::Numeric(_)));
    }

    #[test]
    fn evaluate_rejects_out_of_range_discrete_action() {
        let policy = discrete_policy(3, 6);
        let err = policy
            .evaluate(&[vec![0.0, 0.0, 0.0]], &[Action::Discrete(3)])
            .unwrap_err();
        assert!(matches!(err, Error::InvalidAction(_)));
    }

    #[test]
    fn uniform_entropy_is_ln_n() {
        for n in [2usize, 3, 7] {
            let dist = categorical_from_logits(&vec![0.0f64; n]);
            assert!((dist.entropy() - (n as f64).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_entropy_closed_form() {
        let log_std = vec![0.3, -0.7];
        let dist = ActionDistribution::Gaussian { mean: vec![0.0, 0.0], log_std: log_std.clone() };
        let expect: f64 =
            log_std.iter().map(|ls| 0.5 * (2.0 * PI * std::f64::consts::E).ln() + ls).sum();
        assert!((dist.entropy() - expect).abs() < 1e-12);
    }

    #[test]
    fn discrete_entropy_non_negative() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let logits: Vec<f64> = (0..4).map(|_| rng.gen_range(-6.0..6.0)).collect();
            let dist = categorical_from_logits(&logits);
            assert!(dist.entropy() >= -1e-15);
        }
    }

    /// Finite-difference check of log-prob and entropy gradients through the
    /// full network, via the flat-parameter interface.
    #[test]
    fn log_prob_and_entropy_gradients_match_finite_differences() {
        let h = 1e-6;
        for (policy, action) in [
            (discrete_policy(3, 31), Action::Discrete(1)),
            (continuous_policy(2, 32), Action::Continuous(vec![0.5, -0.3])),
        ] {
            let state = vec![0.3, -0.5, 0.8];
            let (dist, _) = policy.distribution(&state).unwrap();

            // Analytic gradient w.r.t. actor params (+ log_std).
            let (d_head_lp, d_ls_lp) = dist.log_prob_grad(&action).unwrap();
            let (d_head_h, d_ls_h) = dist.entropy_grad();
            let lp_actor = policy.actor.backward_from_input(&state, &d_head_lp).unwrap();
            let h_actor = policy.actor.backward_from_input(&state, &d_head_h).unwrap();

            let mut probe = policy.clone();
            let a_count = policy.actor.param_count();
            let eval = |probe: &ActorCriticPolicy<f64>| -> (f64, f64) {
                let (d, _) = probe.distribution(&state).unwrap();
                (d.log_prob(&action).unwrap(), d.entropy())
            };
            // Actor parameters.
            for p in (0..a_count).step_by(7) {
                let mut flat = policy.get_flat();
                flat[p] += h;
                probe.set_flat(&flat).unwrap();
                let (lp_plus, h_plus) = eval(&probe);
                flat[p] -= 2.0 * h;
                probe.set_flat(&flat).unwrap();
                let (lp_minus, h_minus) = eval(&probe);
                let fd_lp = (lp_plus - lp_minus) / (2.0 * h);
                let fd_h = (h_plus - h_minus) / (2.0 * h);
                let close = |a: f64, b: f64| {
                    let d = (a - b).abs();
                    d <= 1e-8 || d <= 1e-5 * a.abs().max(b.abs())
                };
                assert!(close(lp_actor[p], fd_lp), "lp param {p}: {} vs {fd_lp}", lp_actor[p]);
                assert!(close(h_actor[p], fd_h), "H param {p}: {} vs {fd_h}", h_actor[p]);
            }
            // log-std parameters (continuous only).
            let c_count = policy.critic.param_count();
            for (j, (dl, dh)) in d_ls_lp.iter().zip(&d_ls_h).enumerate() {
                let p = a_count + c_count + j;
                let mut flat = policy.get_flat();
                flat[p] += h;
                probe.set_flat(&flat).unwrap();
                let (lp_plus, h_plus) = eval(&probe);
                flat[p] -= 2.0 * h;
                probe.set_flat(&flat).unwrap();
                let (lp_minus, h_minus) = eval(&probe);
                let fd_lp = (lp_plus - lp_minus) / (2.0 * h);
                let fd_h = (h_plus - h_minus) / (2.0 * h);
                assert!((dl - fd_lp).abs() < 1e-5 * dl.abs().max(fd_lp.abs()).max(1e-3));
                assert!((dh - fd_h).abs() < 1e-5 * dh.abs().max(fd_h.abs()).max(1e-3));
            }
        }
    }

    #[test]
    fn flat_round_trip_is_exact() {
        let policy = continuous_policy(2, 40);
        let flat = policy.get_flat();
        let mut other = continuous_policy(2, 41);
        other.set_flat(&flat).unwrap();
        assert_eq!(flat, other.get_flat());
    }

    #[test]
    fn checkpoint_round_trips() {
        let policy = continuous_policy(2, 50);
        let mut buf = Vec::new();
        policy.write_checkpoint(&mut buf).unwrap();
        let back = ActorCriticPolicy::<f64>::read_checkpoint(&mut buf.as_slice()).unwrap();
        assert_eq!(policy.get_flat(), back.get_flat());
        assert_eq!(policy.spec(), back.spec());
    }

    #[test]
    fn clamp_log_std_projects_into_range() {
        let mut policy = continuous_policy(2, 60);
        policy.log_std_mut().copy_from_slice(&[-9.0, 4.0]);
        policy.clamp_log_std();
        assert_eq!(policy.log_std(), &[LOG_STD_MIN, LOG_STD_MAX]);
    }
}
