//! The numeric core is generic over the scalar type; these tests drive the
//! full training stack in the f32 lane to keep that genericity honest. The
//! f64 lane is what the harness and acceptance suite exercise.

use arise_core::envs::Env;
use arise_core::orchestrator::{AriseConfig, RunMeta, Trainer};
use arise_core::ppo::PpoConfig;
use arise_core::scalar::Scalar;

fn tiny_config<F: Scalar>(seed: u64) -> AriseConfig<F> {
    AriseConfig {
        horizon: 96,
        total_iterations: 3,
        hidden: vec![8, 8],
        eval_interval: 8,
        eval_episodes: 2,
        seed,
        ..AriseConfig::default()
    }
}

fn run_lane<F: Scalar>(env_id: &str, seed: u64) -> Vec<String> {
    let mut trainer = Trainer::<F>::new(
        tiny_config(seed),
        PpoConfig { epochs: 2, batch_size: 32, ..PpoConfig::default() },
        Env::make(env_id).unwrap(),
        RunMeta { run_id: format!("f-lane-{seed}"), variant: "arise".into() },
    )
    .unwrap();
    let mut rows = Vec::new();
    for _ in 0..3 {
        let row = trainer.train_iteration().unwrap();
        assert!(row.mean_entropy.is_finite());
        assert!(row.value_loss.is_finite());
        rows.push(row.csv_without_wall_ms());
    }
    rows
}

#[test]
fn f32_lane_trains_on_discrete_and_continuous_envs() {
    for env_id in ["cartpole", "pendulum"] {
        let rows = run_lane::<f32>(env_id, 5);
        assert_eq!(rows.len(), 3);
    }
}

#[test]
fn f32_lane_is_deterministic_too() {
    assert_eq!(run_lane::<f32>("cartpole", 9), run_lane::<f32>("cartpole", 9));
}

#[test]
fn f32_lane_round_trips_through_checkpoints() {
    // Checkpoints store f64 on disk; f32 <-> f64 conversion is exact, so the
    // resumed f32 run must continue bit-identically.
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("f32");
    let mut full = Trainer::<f32>::new(
        tiny_config(21),
        PpoConfig { epochs: 2, batch_size: 32, ..PpoConfig::default() },
        Env::make("cartpole").unwrap(),
        RunMeta { run_id: "f32-ckpt".into(), variant: "arise".into() },
    )
    .unwrap();
    full.train_iteration().unwrap();
    arise_core::checkpoint::save(&full, &ckpt).unwrap();
    let mut resumed: Trainer<f32> = arise_core::checkpoint::load(&ckpt).unwrap();

    let a = full.train_iteration().unwrap().csv_without_wall_ms();
    let b = resumed.train_iteration().unwrap().csv_without_wall_ms();
    assert_eq!(a, b);
    for (x, y) in full.agents().iter().zip(resumed.agents()) {
        assert_eq!(x.policy.get_flat(), y.policy.get_flat());
    }
}
