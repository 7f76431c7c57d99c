//! The training loop: biased driver selection, RL/PSO action mixing, rollout
//! collection, per-agent PPO updates, fitness and swarm updates, best-policy
//! broadcasting, and adaptive scheduling, with ablation switches for each
//! mechanism.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::envs::{Env, EnvSpec};
use crate::error::{Error, Result};
use crate::metrics::MetricsRow;
use crate::nn::AdamState;
use crate::novelty::{augment_reward, novelty_bonus};
use crate::policy::{Action, ActionSpec, ActorCriticPolicy};
use crate::ppo::{self, PpoConfig, UpdateStats};
use crate::rollout::{AgentBuffer, Transition};
use crate::scalar::Scalar;
use crate::swarm::{decay_inertia, population_variance, pso_action, FitnessRecord, SwarmState};

/// Rolling window used for the solve criterion and reporting.
pub const RETURN_WINDOW: usize = 100;

/// Training configuration. Hyperparameter defaults follow the reference
/// setup: 3 agents, alpha 0.12, beta 0.01, selection probabilities
/// (0.70, 0.20, 0.10).
#[derive(Debug, Clone, PartialEq)]
pub struct AriseConfig<F: Scalar> {
    pub num_agents: usize,
    /// RL/PSO action mixing coefficient.
    pub alpha: F,
    /// Novelty reward coefficient.
    pub beta: F,
    /// Environment steps collected per training iteration.
    pub horizon: usize,
    pub total_iterations: usize,
    /// Optional stop once this many episodes have completed.
    pub max_episodes: Option<usize>,
    /// Optional stop once the mean raw return over the last
    /// [`RETURN_WINDOW`] episodes reaches this value.
    pub target_return: Option<f64>,
    /// (best, second-best, uniform) selection probabilities.
    pub selection_probs: (F, F, F),
    pub no_swarm: bool,
    pub no_adaptive: bool,
    pub no_novelty: bool,
    pub no_broadcast: bool,
    pub broadcast_interval: usize,
    /// Evaluation period, in completed episodes.
    pub eval_interval: usize,
    pub eval_episodes: usize,
    /// Hidden layer widths for both actor and critic.
    pub hidden: Vec<usize>,
    pub seed: u64,
}

impl<F: Scalar> Default for AriseConfig<F> {
    fn default() -> Self {
        Self {
            num_agents: 3,
            alpha: F::c(0.12),
            beta: F::c(0.01),
            horizon: 2048,
            total_iterations: 100,
            max_episodes: None,
            target_return: None,
            selection_probs: (F::c(0.70), F::c(0.20), F::c(0.10)),
            no_swarm: false,
            no_adaptive: false,
            no_novelty: false,
            no_broadcast: false,
            broadcast_interval: 1,
            eval_interval: 50,
            eval_episodes: 10,
            hidden: vec![64, 64],
            seed: 0,
        }
    }
}

impl<F: Scalar> AriseConfig<F> {
    pub fn validate(&self) -> Result<()> {
        if self.num_agents == 0 {
            return Err(Error::Config("num_agents must be at least 1".into()));
        }
        if self.num_agents < 2 && !self.no_swarm {
            return Err(Error::Config("num_agents must be at least 2 unless no_swarm".into()));
        }
        if self.alpha < F::zero() || self.alpha > F::one() {
            return Err(Error::Config("alpha must be in [0, 1]".into()));
        }
        if self.beta < F::zero() {
            return Err(Error::Config("beta must be non-negative".into()));
        }
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        let (b, s, u) = self.selection_probs;
        let sum = b + s + u;
        if (sum - F::one()).abs() > F::c(1e-9) || b < F::zero() || s < F::zero() || u < F::zero() {
            return Err(Error::Config("selection probabilities must be non-negative and sum to 1".into()));
        }
        if self.broadcast_interval == 0 {
            return Err(Error::Config("broadcast_interval must be at least 1".into()));
        }
        if self.eval_interval == 0 || self.eval_episodes == 0 {
            return Err(Error::Config("evaluation settings must be at least 1".into()));
        }
        if self.hidden.is_empty() || self.hidden.contains(&0) {
            return Err(Error::Config("hidden layer widths must be positive".into()));
        }
        Ok(())
    }
}

/// Identifying strings carried into metrics rows and checkpoints.
#[derive(Debug, Clone, Default)]
pub struct RunMeta {
    pub run_id: String,
    pub variant: String,
}

/// One swarm member: policy, optimizers, buffer, and fitness record.
#[derive(Debug, Clone)]
pub struct AgentState<F: Scalar> {
    pub policy: ActorCriticPolicy<F>,
    pub actor_opt: AdamState<F>,
    pub critic_opt: AdamState<F>,
    pub buffer: AgentBuffer<F>,
    pub fitness: FitnessRecord<F>,
    pub particle_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub episodes_done: usize,
    pub mean_return: f64,
}

/// Everything that mutates during training; cloned wholesale for the
/// pre-iteration rollback checkpoint.
#[derive(Debug, Clone)]
pub(crate) struct TrainingState<F: Scalar> {
    pub(crate) env: Env<F>,
    pub(crate) agents: Vec<AgentState<F>>,
    pub(crate) swarm: Option<SwarmState<F>>,
    pub(crate) rng: ChaCha8Rng,
    pub(crate) iteration: usize,
    pub(crate) episodes_done: usize,
    // In-flight episode.
    pub(crate) obs: Vec<F>,
    pub(crate) driver: usize,
    pub(crate) episode_live: bool,
    pub(crate) ep_raw_return: f64,
    pub(crate) ep_aug_return: f64,
    // Rankings and histories.
    pub(crate) fitness_ready: bool,
    pub(crate) ranking: Vec<usize>,
    pub(crate) episode_returns: Vec<f64>,
    pub(crate) eval_history: Vec<EvalPoint>,
    pub(crate) next_eval_at: usize,
    pub(crate) latest_eval: f64,
    pub(crate) solved_at: Option<usize>,
    pub(crate) swarm_calls: u64,
}

/// Final report of one training run.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub run_id: String,
    pub variant: String,
    pub env: String,
    pub seed: u64,
    pub iterations_run: usize,
    pub episodes_done: usize,
    pub final_eval_return: f64,
    pub max_eval_return: f64,
    /// Index into `eval_history` of the first evaluation reaching 90% of the
    /// run's maximum evaluation return.
    pub convergence_eval_index: Option<usize>,
    /// Episodes completed at that evaluation.
    pub convergence_episodes: Option<usize>,
    pub solved_at_episode: Option<usize>,
    pub eval_history: Vec<EvalPoint>,
    pub episode_returns: Vec<f64>,
}

/// Picks the driving agent for one episode: best with probability
/// `probs.0`, second-best with `probs.1`, uniform over all agents otherwise.
/// Before any fitness exists the draw is uniform.
pub fn select_agent<F: Scalar, R: Rng + ?Sized>(
    ranking: &[usize],
    probs: (F, F, F),
    fitness_ready: bool,
    rng: &mut R,
) -> usize {
    let m = ranking.len();
    if m == 1 {
        return ranking[0];
    }
    if !fitness_ready {
        return ranking[rng.gen_range(0..m)];
    }
    let u = F::sample_unit(rng);
    if u < probs.0 {
        ranking[0]
    } else if u < probs.0 + probs.1 {
        ranking[1]
    } else {
        ranking[rng.gen_range(0..m)]
    }
}

/// Blends the RL and PSO proposals: convex combination then clamp for
/// continuous actions, probabilistic switch for discrete ones.
pub fn mix_action<F: Scalar, R: Rng + ?Sized>(
    a_rl: &Action<F>,
    a_pso: &Action<F>,
    alpha: F,
    spec: &ActionSpec<F>,
    rng: &mut R,
) -> Action<F> {
    match (a_rl, a_pso) {
        (Action::Continuous(rl), Action::Continuous(pso)) => {
            let mut mixed: Vec<F> = rl
                .iter()
                .zip(pso.iter())
                .map(|(r, p)| (F::one() - alpha) * *r + alpha * *p)
                .collect();
            spec.clamp(&mut mixed);
            Action::Continuous(mixed)
        }
        _ => {
            if F::sample_unit(rng) < alpha {
                a_pso.clone()
            } else {
                a_rl.clone()
            }
        }
    }
}

/// Copies the best agent's full parameter vector to every other agent and
/// resets the receivers' optimizer states. Ties go to the lowest index.
/// Returns the broadcasting agent's index.
pub fn broadcast_best<F: Scalar>(agents: &mut [AgentState<F>]) -> usize {
    let mut best = 0;
    for (i, a) in agents.iter().enumerate().skip(1) {
        if a.fitness.fitness > agents[best].fitness.fitness {
            best = i;
        }
    }
    let flat = agents[best].policy.get_flat();
    for (i, agent) in agents.iter_mut().enumerate() {
        if i != best {
            agent.policy.set_flat(&flat).expect("identical architectures");
            agent.actor_opt.reset();
            agent.critic_opt.reset();
        }
    }
    best
}

/// The ARISE trainer for one run.
pub struct Trainer<F: Scalar> {
    pub(crate) config: AriseConfig<F>,
    pub(crate) ppo: PpoConfig<F>,
    pub(crate) meta: RunMeta,
    pub(crate) env_spec: EnvSpec<F>,
    pub(crate) env_id: String,
    pub(crate) state: TrainingState<F>,
}

impl<F: Scalar> Trainer<F> {
    pub fn new(
        config: AriseConfig<F>,
        ppo: PpoConfig<F>,
        mut env: Env<F>,
        meta: RunMeta,
    ) -> Result<Self> {
        config.validate()?;
        ppo.validate()?;
        let env_spec = env.spec();
        let env_id = env.id();
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

        let mut agents = Vec::with_capacity(config.num_agents);
        for i in 0..config.num_agents {
            let policy = ActorCriticPolicy::new(
                env_spec.obs_dim,
                env_spec.action_spec.clone(),
                &config.hidden,
                &mut rng,
            )?;
            let actor_opt = AdamState::new(
                policy.actor().param_count() + policy.log_std().len(),
                ppo.learning_rate,
            );
            let critic_opt = AdamState::new(policy.critic().param_count(), ppo.learning_rate);
            agents.push(AgentState {
                policy,
                actor_opt,
                critic_opt,
                buffer: AgentBuffer::new(config.horizon),
                fitness: FitnessRecord::empty(),
                particle_index: i,
            });
        }
        let swarm = if config.no_swarm {
            None
        } else {
            Some(SwarmState::init(config.num_agents, &env_spec.action_spec, &mut rng)?)
        };

        let obs = env.reset(&mut rng);
        let ranking: Vec<usize> = (0..config.num_agents).collect();
        let driver = select_agent(&ranking, config.selection_probs, false, &mut rng);
        let next_eval_at = config.eval_interval;
        Ok(Self {
            config,
            ppo,
            meta,
            env_spec,
            env_id,
            state: TrainingState {
                env,
                agents,
                swarm,
                rng,
                iteration: 0,
                episodes_done: 0,
                obs,
                driver,
                episode_live: true,
                ep_raw_return: 0.0,
                ep_aug_return: 0.0,
                fitness_ready: false,
                ranking,
                episode_returns: Vec::new(),
                eval_history: Vec::new(),
                next_eval_at,
                latest_eval: f64::NAN,
                solved_at: None,
                swarm_calls: 0,
            },
        })
    }

    pub fn config(&self) -> &AriseConfig<F> {
        &self.config
    }

    pub fn ppo_config(&self) -> &PpoConfig<F> {
        &self.ppo
    }

    pub fn meta(&self) -> &RunMeta {
        &self.meta
    }

    pub fn env_id(&self) -> &str {
        &self.env_id
    }

    pub fn agents(&self) -> &[AgentState<F>] {
        &self.state.agents
    }

    pub fn swarm(&self) -> Option<&SwarmState<F>> {
        self.state.swarm.as_ref()
    }

    pub fn iteration(&self) -> usize {
        self.state.iteration
    }

    pub fn episodes_done(&self) -> usize {
        self.state.episodes_done
    }

    pub fn eval_history(&self) -> &[EvalPoint] {
        &self.state.eval_history
    }

    pub fn episode_returns(&self) -> &[f64] {
        &self.state.episode_returns
    }

    /// Number of swarm-module invocations so far; stays zero under
    /// `no_swarm`.
    pub fn swarm_calls(&self) -> u64 {
        self.state.swarm_calls
    }

    pub fn solved_at(&self) -> Option<usize> {
        self.state.solved_at
    }

    /// Runs one full training iteration. On any error the state rolls back
    /// to the pre-iteration checkpoint and the error propagates.
    pub fn train_iteration(&mut self) -> Result<MetricsRow> {
        let started = Instant::now();
        let checkpoint = self.state.clone();
        match self.iteration_inner() {
            Ok(mut row) => {
                row.wall_ms = started.elapsed().as_secs_f64() * 1e3;
                Ok(row)
            }
            Err(e) => {
                self.state = checkpoint;
                Err(e)
            }
        }
    }

    fn iteration_inner(&mut self) -> Result<MetricsRow> {
        let (completed_raw, completed_aug) = self.rollout()?;

        // Fitness statistics come from the buffers, before updates clear them.
        let records: Vec<FitnessRecord<F>> = self
            .state
            .agents
            .iter()
            .map(|a| match a.buffer.means() {
                Some((r, n)) => FitnessRecord::new(r, n),
                None => FitnessRecord::empty(),
            })
            .collect();

        // Per-agent PPO updates on every non-empty buffer.
        let mut agg = UpdateStats::default();
        let mut updated_transitions = 0usize;
        {
            let state = &mut self.state;
            for agent in state.agents.iter_mut() {
                if agent.buffer.is_empty() {
                    continue;
                }
                let stats = ppo::update_agent(
                    &mut agent.policy,
                    &mut agent.actor_opt,
                    &mut agent.critic_opt,
                    &mut agent.buffer,
                    &self.ppo,
                    &mut state.rng,
                )?;
                let w = stats.transitions as f64;
                agg.policy_loss += stats.policy_loss * w;
                agg.value_loss += stats.value_loss * w;
                agg.entropy += stats.entropy * w;
                agg.approx_kl += stats.approx_kl * w;
                updated_transitions += stats.transitions;
            }
        }
        if updated_transitions > 0 {
            let w = updated_transitions as f64;
            agg.policy_loss /= w;
            agg.value_loss /= w;
            agg.entropy /= w;
            agg.approx_kl /= w;
        }

        // Fitness evaluation and ranking for the next iteration's selection.
        for (agent, rec) in self.state.agents.iter_mut().zip(&records) {
            agent.fitness = *rec;
        }
        let fitness_values: Vec<F> = records.iter().map(|r| r.fitness).collect();
        let mut ranking: Vec<usize> = (0..self.state.agents.len()).collect();
        ranking.sort_by(|&a, &b| {
            fitness_values[b]
                .partial_cmp(&fitness_values[a])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        self.state.ranking = ranking;
        self.state.fitness_ready = true;

        // PSO best tracking and particle kinematics.
        let var_reward = population_variance(&fitness_values);
        let mut diversity = f64::NAN;
        if let Some(swarm) = self.state.swarm.as_mut() {
            let positions = swarm.positions();
            swarm.update_bests(&fitness_values, &positions);
            swarm.step_particles(&mut self.state.rng);
            self.state.swarm_calls += 2;
            diversity = swarm.diversity().map(|d| d.to_f64().unwrap())?;
        }

        // Broadcast, then adaptive scheduling for the next iteration.
        if !self.config.no_broadcast
            && (self.state.iteration + 1) % self.config.broadcast_interval == 0
        {
            broadcast_best(&mut self.state.agents);
        }
        if let Some(swarm) = self.state.swarm.as_mut() {
            if !self.config.no_adaptive {
                swarm.adapt(&fitness_values);
                self.state.swarm_calls += 1;
            }
            let progress =
                (self.state.iteration + 1) as f64 / self.config.total_iterations.max(1) as f64;
            swarm.w = decay_inertia(F::c(progress));
        }

        self.state.iteration += 1;

        let mean = |xs: &[f64]| {
            if xs.is_empty() {
                f64::NAN
            } else {
                xs.iter().sum::<f64>() / xs.len() as f64
            }
        };
        let (w, c1, c2) = match &self.state.swarm {
            Some(s) => (
                s.w.to_f64().unwrap(),
                s.c1.to_f64().unwrap(),
                s.c2.to_f64().unwrap(),
            ),
            None => (f64::NAN, f64::NAN, f64::NAN),
        };
        Ok(MetricsRow {
            run_id: self.meta.run_id.clone(),
            seed: self.config.seed,
            variant: self.meta.variant.clone(),
            env: self.env_id.clone(),
            iteration: self.state.iteration,
            episodes_done: self.state.episodes_done,
            mean_return_raw: mean(&completed_raw),
            mean_return_aug: mean(&completed_aug),
            eval_return: self.state.latest_eval,
            fitness: fitness_values.iter().map(|f| f.to_f64().unwrap()).collect(),
            var_reward: var_reward.map_or(f64::NAN, |v| v.to_f64().unwrap()),
            diversity,
            w,
            c1,
            c2,
            mean_entropy: agg.entropy,
            policy_loss: agg.policy_loss,
            value_loss: agg.value_loss,
            wall_ms: 0.0,
        })
    }

    /// Collects `horizon` steps, routing each episode through one driver
    /// agent. Returns the raw and augmented returns of episodes completed
    /// during this rollout.
    fn rollout(&mut self) -> Result<(Vec<f64>, Vec<f64>)> {
        let mut completed_raw = Vec::new();
        let mut completed_aug = Vec::new();
        let spec = self.env_spec.action_spec.clone();
        let alpha = self.config.alpha;
        let beta = self.config.beta;

        for _ in 0..self.config.horizon {
            if !self.state.episode_live {
                self.state.obs = self.state.env.reset(&mut self.state.rng);
                self.state.driver = select_agent(
                    &self.state.ranking,
                    self.config.selection_probs,
                    self.state.fitness_ready,
                    &mut self.state.rng,
                );
                self.state.ep_raw_return = 0.0;
                self.state.ep_aug_return = 0.0;
                self.state.episode_live = true;
            }

            let driver = self.state.driver;
            let (dist, value) = {
                let agent = &self.state.agents[driver];
                agent.policy.distribution(&self.state.obs)?
            };
            let a_rl = dist.sample(&mut self.state.rng);
            let executed = if let Some(swarm) = &self.state.swarm {
                self.state.swarm_calls += 1;
                let particle = &swarm.particles[self.state.agents[driver].particle_index];
                let a_pso = pso_action(&particle.position, &spec)?;
                mix_action(&a_rl, &a_pso, alpha, &spec, &mut self.state.rng)
            } else {
                a_rl
            };
            let log_prob = dist.log_prob(&executed)?;

            let nov = match &self.state.swarm {
                Some(swarm) if !self.config.no_novelty && swarm.len() >= 2 => {
                    let embedding = executed.embed(&spec);
                    novelty_bonus(
                        &embedding,
                        &swarm.positions(),
                        self.state.agents[driver].particle_index,
                    )
                }
                _ => F::zero(),
            };

            let sr = self.state.env.step(&executed)?;
            let r_aug = augment_reward(sr.reward, nov, beta);
            self.state.ep_raw_return += sr.reward.to_f64().unwrap();
            self.state.ep_aug_return += r_aug.to_f64().unwrap();
            let done = sr.done();
            self.state.agents[driver].buffer.push(Transition {
                state: std::mem::replace(&mut self.state.obs, sr.observation),
                action: executed,
                reward_env: sr.reward,
                reward_aug: r_aug,
                done,
                log_prob,
                value,
                agent_id: driver,
                novelty: nov,
            });

            if done {
                self.state.episodes_done += 1;
                self.state.episode_returns.push(self.state.ep_raw_return);
                completed_raw.push(self.state.ep_raw_return);
                completed_aug.push(self.state.ep_aug_return);
                self.state.episode_live = false;
                self.check_solved();
                if self.state.episodes_done >= self.state.next_eval_at {
                    self.evaluate_and_record()?;
                    self.state.next_eval_at += self.config.eval_interval;
                }
            }
        }

        // A trajectory cut mid-episode bootstraps with the driver's value
        // estimate of the next observation.
        if self.state.episode_live {
            let driver = self.state.driver;
            let v = self.state.agents[driver].policy.value(&self.state.obs)?;
            self.state.agents[driver].buffer.set_bootstrap(v);
        }
        Ok((completed_raw, completed_aug))
    }

    fn check_solved(&mut self) {
        if self.state.solved_at.is_some() {
            return;
        }
        let Some(target) = self.config.target_return else {
            return;
        };
        let returns = &self.state.episode_returns;
        if returns.len() < RETURN_WINDOW {
            return;
        }
        let tail = &returns[returns.len() - RETURN_WINDOW..];
        let mean = tail.iter().sum::<f64>() / RETURN_WINDOW as f64;
        if mean >= target {
            self.state.solved_at = Some(self.state.episodes_done);
        }
    }

    /// Greedy evaluation of the current best agent on a fresh environment
    /// instance; pure RL actions (no mixing). Returns the mean raw return.
    pub fn evaluate_now(&mut self) -> Result<f64> {
        let episodes = self.config.eval_episodes;
        self.evaluate_episodes(episodes)
    }

    /// Same as [`Trainer::evaluate_now`] with an explicit episode count.
    pub fn evaluate_episodes(&mut self, episodes: usize) -> Result<f64> {
        let eval_seed: u64 = self.state.rng.gen();
        let mut eval_rng = ChaCha8Rng::seed_from_u64(eval_seed);
        let mut env = self.state.env.eval_instance();
        let best = if self.state.fitness_ready { self.state.ranking[0] } else { 0 };
        let policy = &self.state.agents[best].policy;
        let spec = self.env_spec.action_spec.clone();

        let mut total = 0.0;
        for _ in 0..episodes {
            let mut obs = env.reset(&mut eval_rng);
            loop {
                let (dist, _) = policy.distribution(&obs)?;
                let mut action = dist.greedy();
                if let Action::Continuous(a) = &mut action {
                    spec.clamp(a);
                }
                let sr = env.step(&action)?;
                total += sr.reward.to_f64().unwrap();
                let done = sr.done();
                obs = sr.observation;
                if done {
                    break;
                }
            }
        }
        Ok(total / episodes as f64)
    }

    fn evaluate_and_record(&mut self) -> Result<()> {
        let mean = self.evaluate_now()?;
        self.state.latest_eval = mean;
        self.state
            .eval_history
            .push(EvalPoint { episodes_done: self.state.episodes_done, mean_return: mean });
        Ok(())
    }

    /// Whether another iteration should run under the configured limits.
    pub fn should_continue(&self) -> bool {
        if self.state.iteration >= self.config.total_iterations {
            return false;
        }
        if let Some(max_ep) = self.config.max_episodes {
            if self.state.episodes_done >= max_ep {
                return false;
            }
        }
        if self.config.target_return.is_some() && self.state.solved_at.is_some() {
            return false;
        }
        true
    }

    /// Full training run; `on_row` sees every metrics row as it is produced.
    /// Ends with one final recorded evaluation.
    pub fn run(&mut self, mut on_row: impl FnMut(&Self, &MetricsRow)) -> Result<RunReport> {
        while self.should_continue() {
            let row = self.train_iteration()?;
            on_row(self, &row);
        }
        self.evaluate_and_record()?;
        Ok(self.report())
    }

    /// Report over everything recorded so far.
    pub fn report(&self) -> RunReport {
        let evals = &self.state.eval_history;
        let final_eval = evals.last().map_or(f64::NAN, |p| p.mean_return);
        let max_eval = evals
            .iter()
            .map(|p| p.mean_return)
            .fold(f64::NEG_INFINITY, f64::max);
        let threshold = 0.9 * max_eval;
        let convergence = evals.iter().position(|p| p.mean_return >= threshold);
        RunReport {
            run_id: self.meta.run_id.clone(),
            variant: self.meta.variant.clone(),
            env: self.env_id.clone(),
            seed: self.config.seed,
            iterations_run: self.state.iteration,
            episodes_done: self.state.episodes_done,
            final_eval_return: final_eval,
            max_eval_return: if evals.is_empty() { f64::NAN } else { max_eval },
            convergence_eval_index: convergence,
            convergence_episodes: convergence.map(|i| evals[i].episodes_done),
            solved_at_episode: self.state.solved_at,
            eval_history: evals.clone(),
            episode_returns: self.state.episode_returns.clone(),
        }
    }
}
