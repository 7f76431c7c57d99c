//! Checkpoint bundle for exact training resume: a JSON manifest plus
//! per-agent policy and optimizer fragments.
//!
//! Layout of a bundle directory:
//!   manifest.json      run identity, configs, progress, RNG position,
//!                      environment state, swarm state, histories
//!   agent_NNN.policy   actor + critic + log-std fragment (JSON header line,
//!                      then little-endian f64)
//!   agent_NNN.opt      both Adam states (same framing)
//!
//! Checkpoints are taken at iteration boundaries, where all rollout buffers
//! are empty; resuming reproduces the uninterrupted run exactly.

use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::envs::Env;
use crate::error::{Error, Result};
use crate::nn::{read_f64_array, read_fragment_header, write_f64_array, write_fragment_header, AdamState};
use crate::orchestrator::{AgentState, AriseConfig, EvalPoint, RunMeta, Trainer, TrainingState};
use crate::policy::ActorCriticPolicy;
use crate::ppo::PpoConfig;
use crate::rollout::AgentBuffer;
use crate::scalar::Scalar;
use crate::swarm::{FitnessRecord, Particle, SwarmState};

const FORMAT_VERSION: u32 = 1;

// JSON cannot carry non-finite floats, so any field that can be NaN or
// infinite travels as its `Display` string.
fn f2s(v: f64) -> String {
    format!("{v}")
}

fn s2f(s: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::Checkpoint(format!("bad float literal {s:?}")))
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    format_version: u32,
    run_id: String,
    variant: String,
    env_id: String,
    config: ConfigEcho,
    ppo: PpoEcho,
    iteration: usize,
    episodes_done: usize,
    rng: RngState,
    env_state: Vec<f64>,
    episode: EpisodeState,
    fitness: Vec<FitnessEcho>,
    fitness_ready: bool,
    ranking: Vec<usize>,
    swarm: Option<SwarmEcho>,
    episode_returns: Vec<f64>,
    eval_history: Vec<(usize, f64)>,
    next_eval_at: usize,
    latest_eval: String,
    solved_at: Option<usize>,
    swarm_calls: u64,
}

#[derive(Serialize, Deserialize)]
struct ConfigEcho {
    num_agents: usize,
    alpha: f64,
    beta: f64,
    horizon: usize,
    total_iterations: usize,
    max_episodes: Option<usize>,
    target_return: Option<f64>,
    selection_probs: [f64; 3],
    no_swarm: bool,
    no_adaptive: bool,
    no_novelty: bool,
    no_broadcast: bool,
    broadcast_interval: usize,
    eval_interval: usize,
    eval_episodes: usize,
    hidden: Vec<usize>,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
struct PpoEcho {
    clip_epsilon: f64,
    entropy_coef: f64,
    value_coef: f64,
    gamma: f64,
    lambda: f64,
    epochs: usize,
    batch_size: usize,
    learning_rate: f64,
    max_grad_norm: f64,
}

#[derive(Serialize, Deserialize)]
struct RngState {
    seed: Vec<u8>,
    word_pos: String,
    stream: String,
}

#[derive(Serialize, Deserialize)]
struct EpisodeState {
    live: bool,
    driver: usize,
    obs: Vec<f64>,
    raw_return: f64,
    aug_return: f64,
}

#[derive(Serialize, Deserialize)]
struct FitnessEcho {
    mean_reward: String,
    mean_novelty: String,
}

#[derive(Serialize, Deserialize)]
struct SwarmEcho {
    w: f64,
    c1: f64,
    c2: f64,
    var_ref: Option<f64>,
    gbest_fitness: String,
    gbest_position: Vec<f64>,
    low: Vec<f64>,
    high: Vec<f64>,
    v_max: Vec<f64>,
    particles: Vec<ParticleEcho>,
}

#[derive(Serialize, Deserialize)]
struct ParticleEcho {
    position: Vec<f64>,
    velocity: Vec<f64>,
    pbest_position: Vec<f64>,
    pbest_fitness: String,
}

#[derive(Serialize, Deserialize)]
struct OptHeader {
    actor_len: usize,
    critic_len: usize,
    actor_step: u64,
    critic_step: u64,
}

fn vec_f64<F: Scalar>(v: &[F]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap()).collect()
}

fn vec_scalar<F: Scalar>(v: &[f64]) -> Vec<F> {
    v.iter().map(|&x| F::c(x)).collect()
}

/// Writes a complete checkpoint bundle into `dir` (created if needed).
pub fn save<F: Scalar>(trainer: &Trainer<F>, dir: &Path) -> Result<()> {
    let state = &trainer.state;
    if state.agents.iter().any(|a| !a.buffer.is_empty()) {
        return Err(Error::Checkpoint(
            "checkpoints are only taken at iteration boundaries with empty buffers".into(),
        ));
    }
    fs::create_dir_all(dir)?;

    let cfg = &trainer.config;
    let manifest = Manifest {
        format_version: FORMAT_VERSION,
        run_id: trainer.meta.run_id.clone(),
        variant: trainer.meta.variant.clone(),
        env_id: trainer.env_id.clone(),
        config: ConfigEcho {
            num_agents: cfg.num_agents,
            alpha: cfg.alpha.to_f64().unwrap(),
            beta: cfg.beta.to_f64().unwrap(),
            horizon: cfg.horizon,
            total_iterations: cfg.total_iterations,
            max_episodes: cfg.max_episodes,
            target_return: cfg.target_return,
            selection_probs: [
                cfg.selection_probs.0.to_f64().unwrap(),
                cfg.selection_probs.1.to_f64().unwrap(),
                cfg.selection_probs.2.to_f64().unwrap(),
            ],
            no_swarm: cfg.no_swarm,
            no_adaptive: cfg.no_adaptive,
            no_novelty: cfg.no_novelty,
            no_broadcast: cfg.no_broadcast,
            broadcast_interval: cfg.broadcast_interval,
            eval_interval: cfg.eval_interval,
            eval_episodes: cfg.eval_episodes,
            hidden: cfg.hidden.clone(),
            seed: cfg.seed,
        },
        ppo: PpoEcho {
            clip_epsilon: trainer.ppo.clip_epsilon.to_f64().unwrap(),
            entropy_coef: trainer.ppo.entropy_coef.to_f64().unwrap(),
            value_coef: trainer.ppo.value_coef.to_f64().unwrap(),
            gamma: trainer.ppo.gamma.to_f64().unwrap(),
            lambda: trainer.ppo.lambda.to_f64().unwrap(),
            epochs: trainer.ppo.epochs,
            batch_size: trainer.ppo.batch_size,
            learning_rate: trainer.ppo.learning_rate.to_f64().unwrap(),
            max_grad_norm: trainer.ppo.max_grad_norm.to_f64().unwrap(),
        },
        iteration: state.iteration,
        episodes_done: state.episodes_done,
        rng: RngState {
            seed: state.rng.get_seed().to_vec(),
            word_pos: state.rng.get_word_pos().to_string(),
            stream: state.rng.get_stream().to_string(),
        },
        env_state: state.env.snapshot(),
        episode: EpisodeState {
            live: state.episode_live,
            driver: state.driver,
            obs: vec_f64(&state.obs),
            raw_return: state.ep_raw_return,
            aug_return: state.ep_aug_return,
        },
        fitness: state
            .agents
            .iter()
            .map(|a| FitnessEcho {
                mean_reward: f2s(a.fitness.mean_reward.to_f64().unwrap()),
                mean_novelty: f2s(a.fitness.mean_novelty.to_f64().unwrap()),
            })
            .collect(),
        fitness_ready: state.fitness_ready,
        ranking: state.ranking.clone(),
        swarm: state.swarm.as_ref().map(|s| SwarmEcho {
            w: s.w.to_f64().unwrap(),
            c1: s.c1.to_f64().unwrap(),
            c2: s.c2.to_f64().unwrap(),
            var_ref: s.var_ref.map(|v| v.to_f64().unwrap()),
            gbest_fitness: f2s(s.gbest_fitness.to_f64().unwrap()),
            gbest_position: vec_f64(&s.gbest_position),
            low: vec_f64(&s.low),
            high: vec_f64(&s.high),
            v_max: vec_f64(&s.v_max),
            particles: s
                .particles
                .iter()
                .map(|p| ParticleEcho {
                    position: vec_f64(&p.position),
                    velocity: vec_f64(&p.velocity),
                    pbest_position: vec_f64(&p.pbest_position),
                    pbest_fitness: f2s(p.pbest_fitness.to_f64().unwrap()),
                })
                .collect(),
        }),
        episode_returns: state.episode_returns.clone(),
        eval_history: state
            .eval_history
            .iter()
            .map(|p| (p.episodes_done, p.mean_return))
            .collect(),
        next_eval_at: state.next_eval_at,
        latest_eval: f2s(state.latest_eval),
        solved_at: state.solved_at,
        swarm_calls: state.swarm_calls,
    };
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::Checkpoint(format!("manifest encode: {e}")))?;
    fs::write(dir.join("manifest.json"), json)?;

    for (i, agent) in state.agents.iter().enumerate() {
        let mut w = BufWriter::new(fs::File::create(dir.join(format!("agent_{i:03}.policy")))?);
        agent.policy.write_checkpoint(&mut w)?;

        let mut w = BufWriter::new(fs::File::create(dir.join(format!("agent_{i:03}.opt")))?);
        let (am, av) = agent.actor_opt.moments();
        let (cm, cv) = agent.critic_opt.moments();
        write_fragment_header(
            &mut w,
            &OptHeader {
                actor_len: am.len(),
                critic_len: cm.len(),
                actor_step: agent.actor_opt.step_count(),
                critic_step: agent.critic_opt.step_count(),
            },
        )?;
        write_f64_array(&mut w, am)?;
        write_f64_array(&mut w, av)?;
        write_f64_array(&mut w, cm)?;
        write_f64_array(&mut w, cv)?;
    }
    Ok(())
}

/// Reconstructs a trainer from a bundle written by [`save`].
pub fn load<F: Scalar>(dir: &Path) -> Result<Trainer<F>> {
    let json = fs::read_to_string(dir.join("manifest.json"))?;
    let manifest: Manifest = serde_json::from_str(&json)
        .map_err(|e| Error::Checkpoint(format!("manifest decode: {e}")))?;
    if manifest.format_version != FORMAT_VERSION {
        return Err(Error::Checkpoint(format!(
            "unsupported checkpoint format {}",
            manifest.format_version
        )));
    }

    let c = &manifest.config;
    let config = AriseConfig::<F> {
        num_agents: c.num_agents,
        alpha: F::c(c.alpha),
        beta: F::c(c.beta),
        horizon: c.horizon,
        total_iterations: c.total_iterations,
        max_episodes: c.max_episodes,
        target_return: c.target_return,
        selection_probs: (
            F::c(c.selection_probs[0]),
            F::c(c.selection_probs[1]),
            F::c(c.selection_probs[2]),
        ),
        no_swarm: c.no_swarm,
        no_adaptive: c.no_adaptive,
        no_novelty: c.no_novelty,
        no_broadcast: c.no_broadcast,
        broadcast_interval: c.broadcast_interval,
        eval_interval: c.eval_interval,
        eval_episodes: c.eval_episodes,
        hidden: c.hidden.clone(),
        seed: c.seed,
    };
    let p = &manifest.ppo;
    let ppo = PpoConfig::<F> {
        clip_epsilon: F::c(p.clip_epsilon),
        entropy_coef: F::c(p.entropy_coef),
        value_coef: F::c(p.value_coef),
        gamma: F::c(p.gamma),
        lambda: F::c(p.lambda),
        epochs: p.epochs,
        batch_size: p.batch_size,
        learning_rate: F::c(p.learning_rate),
        max_grad_norm: F::c(p.max_grad_norm),
    };

    let mut env = Env::<F>::make(&manifest.env_id)?;
    env.restore(&manifest.env_state)?;
    let env_spec = env.spec();

    let seed: [u8; 32] = manifest
        .rng
        .seed
        .as_slice()
        .try_into()
        .map_err(|_| Error::Checkpoint("rng seed must be 32 bytes".into()))?;
    let mut rng = ChaCha8Rng::from_seed(seed);
    let stream: u64 = manifest
        .rng
        .stream
        .parse()
        .map_err(|_| Error::Checkpoint("bad rng stream".into()))?;
    let word_pos: u128 = manifest
        .rng
        .word_pos
        .parse()
        .map_err(|_| Error::Checkpoint("bad rng word position".into()))?;
    rng.set_stream(stream);
    rng.set_word_pos(word_pos);

    let mut agents = Vec::with_capacity(c.num_agents);
    for i in 0..c.num_agents {
        let mut r = BufReader::new(fs::File::open(dir.join(format!("agent_{i:03}.policy")))?);
        let policy = ActorCriticPolicy::<F>::read_checkpoint(&mut r)?;

        let mut r = BufReader::new(fs::File::open(dir.join(format!("agent_{i:03}.opt")))?);
        let header: OptHeader = read_fragment_header(&mut r)?;
        let am = read_f64_array(&mut r, header.actor_len)?;
        let av = read_f64_array(&mut r, header.actor_len)?;
        let cm = read_f64_array(&mut r, header.critic_len)?;
        let cv = read_f64_array(&mut r, header.critic_len)?;
        let mut actor_opt = AdamState::<F>::new(header.actor_len, ppo.learning_rate);
        actor_opt.restore(header.actor_step, &vec_scalar::<F>(&am), &vec_scalar::<F>(&av))?;
        let mut critic_opt = AdamState::<F>::new(header.critic_len, ppo.learning_rate);
        critic_opt.restore(header.critic_step, &vec_scalar::<F>(&cm), &vec_scalar::<F>(&cv))?;

        let fit = &manifest.fitness[i];
        let mean_reward = s2f(&fit.mean_reward)?;
        let mean_novelty = s2f(&fit.mean_novelty)?;
        let fitness = if mean_reward == f64::NEG_INFINITY {
            FitnessRecord::empty()
        } else {
            FitnessRecord::new(F::c(mean_reward), F::c(mean_novelty))
        };
        agents.push(AgentState {
            policy,
            actor_opt,
            critic_opt,
            buffer: AgentBuffer::new(c.horizon),
            fitness,
            particle_index: i,
        });
    }

    let swarm = match &manifest.swarm {
        None => None,
        Some(s) => Some(SwarmState {
            particles: s
                .particles
                .iter()
                .map(|p| {
                    Ok(Particle {
                        position: vec_scalar(&p.position),
                        velocity: vec_scalar(&p.velocity),
                        pbest_position: vec_scalar(&p.pbest_position),
                        pbest_fitness: F::c(s2f(&p.pbest_fitness)?),
                    })
                })
                .collect::<Result<Vec<_>>>()?,
            gbest_position: vec_scalar(&s.gbest_position),
            gbest_fitness: F::c(s2f(&s.gbest_fitness)?),
            w: F::c(s.w),
            c1: F::c(s.c1),
            c2: F::c(s.c2),
            low: vec_scalar(&s.low),
            high: vec_scalar(&s.high),
            v_max: vec_scalar(&s.v_max),
            var_ref: s.var_ref.map(F::c),
        }),
    };

    Ok(Trainer {
        config,
        ppo,
        meta: RunMeta { run_id: manifest.run_id, variant: manifest.variant },
        env_spec,
        env_id: manifest.env_id,
        state: TrainingState {
            env,
            agents,
            swarm,
            rng,
            iteration: manifest.iteration,
            episodes_done: manifest.episodes_done,
            obs: vec_scalar(&manifest.episode.obs),
            driver: manifest.episode.driver,
            episode_live: manifest.episode.live,
            ep_raw_return: manifest.episode.raw_return,
            ep_aug_return: manifest.episode.aug_return,
            fitness_ready: manifest.fitness_ready,
            ranking: manifest.ranking,
            episode_returns: manifest.episode_returns,
            eval_history: manifest
                .eval_history
                .iter()
                .map(|&(e, m)| EvalPoint { episodes_done: e, mean_return: m })
                .collect(),
            next_eval_at: manifest.next_eval_at,
            latest_eval: s2f(&manifest.latest_eval)?,
            solved_at: manifest.solved_at,
            swarm_calls: manifest.swarm_calls,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn trainer(seed: u64) -> Trainer<f64> {
        let config = AriseConfig {
            horizon: 48,
            total_iterations: 6,
            hidden: vec![8, 8],
            eval_interval: 4,
            eval_episodes: 2,
            seed,
            ..AriseConfig::default()
        };
        let ppo = PpoConfig { epochs: 2, batch_size: 16, ..PpoConfig::default() };
        Trainer::new(
            config,
            ppo,
            Env::make("cartpole+shift:center-penalty-v1:6").unwrap(),
            RunMeta { run_id: "ckpt-test".into(), variant: "arise".into() },
        )
        .unwrap()
    }

    #[test]
    fn resume_reproduces_the_uninterrupted_run() {
        let dir = tempdir().unwrap();
        let ckpt = dir.path().join("iter2");

        // Uninterrupted reference: 4 iterations.
        let mut full = trainer(3);
        let mut full_rows = Vec::new();
        for i in 0..4 {
            let row = full.train_iteration().unwrap();
            full_rows.push(row.csv_without_wall_ms());
            if i == 1 {
                // Mirror of the resume point; saved from the other trainer.
            }
        }

        // Interrupted run: 2 iterations, save, drop, load, 2 more.
        let mut first = trainer(3);
        let mut rows = Vec::new();
        for _ in 0..2 {
            rows.push(first.train_iteration().unwrap().csv_without_wall_ms());
        }
        save(&first, &ckpt).unwrap();
        drop(first);
        let mut resumed: Trainer<f64> = load(&ckpt).unwrap();
        for _ in 0..2 {
            rows.push(resumed.train_iteration().unwrap().csv_without_wall_ms());
        }

        assert_eq!(rows, full_rows);
        for (a, b) in resumed.agents().iter().zip(full.agents()) {
            assert_eq!(a.policy.get_flat(), b.policy.get_flat());
            assert_eq!(a.actor_opt.moments(), b.actor_opt.moments());
        }
        assert_eq!(
            resumed.state.rng.get_word_pos(),
            full.state.rng.get_word_pos()
        );
        let (sa, sb) = (resumed.swarm().unwrap(), full.swarm().unwrap());
        assert_eq!(sa.gbest_position, sb.gbest_position);
        assert_eq!(sa.c1, sb.c1);
        for (p, q) in sa.particles.iter().zip(&sb.particles) {
            assert_eq!(p.position, q.position);
            assert_eq!(p.velocity, q.velocity);
        }
    }

    #[test]
    fn fresh_trainer_round_trips_through_checkpoint() {
        let dir = tempdir().unwrap();
        let ckpt = dir.path().join("iter0");
        let t = trainer(9);
        save(&t, &ckpt).unwrap();
        let loaded: Trainer<f64> = load(&ckpt).unwrap();
        assert_eq!(loaded.iteration(), 0);
        assert_eq!(loaded.agents().len(), 3);
        for (a, b) in loaded.agents().iter().zip(t.agents()) {
            assert_eq!(a.policy.get_flat(), b.policy.get_flat());
        }
        assert_eq!(loaded.state.rng.get_word_pos(), t.state.rng.get_word_pos());
    }

    #[test]
    fn load_from_missing_directory_fails() {
        let dir = tempdir().unwrap();
        assert!(load::<f64>(&dir.path().join("nope")).is_err());
    }
}
