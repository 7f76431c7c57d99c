//! Hybrid PPO + particle-swarm training core.
//!
//! Per-agent PPO actor-critics are combined with a compact PSO layer in
//! action space: agent actions blend RL samples with particle proposals,
//! rewards carry a novelty bonus derived from inter-particle distances,
//! swarm coefficients adapt to fitness variance, and the best agent's policy
//! is periodically broadcast to the whole population. The crate also ships
//! native classic-control environments and the training orchestration needed
//! to run benchmark and ablation experiments deterministically.
//!
//! All numeric code is generic over [`scalar::Scalar`] (`f32` or `f64`);
//! the `*64` aliases below are the concrete types the harness uses.

pub mod checkpoint;
pub mod envs;
pub mod error;
pub mod metrics;
pub mod nn;
pub mod novelty;
pub mod orchestrator;
pub mod policy;
pub mod ppo;
pub mod rollout;
pub mod scalar;
pub mod swarm;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Concrete `f64` lane used by the harness and benchmark runs.
pub type DenseNet64 = nn::DenseNet<f64>;
pub type AdamState64 = nn::AdamState<f64>;
pub type Policy64 = policy::ActorCriticPolicy<f64>;
pub type ActionSpec64 = policy::ActionSpec<f64>;
pub type Action64 = policy::Action<f64>;
pub type AgentBuffer64 = rollout::AgentBuffer<f64>;
pub type Transition64 = rollout::Transition<f64>;
pub type PpoConfig64 = ppo::PpoConfig<f64>;
pub type SwarmState64 = swarm::SwarmState<f64>;
pub type Particle64 = swarm::Particle<f64>;
pub type Env64 = envs::Env<f64>;
pub type AriseConfig64 = orchestrator::AriseConfig<f64>;
pub type Trainer64 = orchestrator::Trainer<f64>;

/// `f32` lane, available for reduced-precision experimentation.
pub type DenseNet32 = nn::DenseNet<f32>;
pub type Policy32 = policy::ActorCriticPolicy<f32>;
