// Scratch probe of the reward-shift protocol; removed before release.
use arise_core::envs::Env;
use arise_core::orchestrator::{AriseConfig, RunMeta, Trainer};
use arise_core::ppo::PpoConfig;

fn main() {
    let variant = std::env::args().nth(1).unwrap_or_else(|| "ppo".into());
    let seed: u64 = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(0);
    let mut config = AriseConfig::<f64> {
        horizon: 2048,
        total_iterations: 600,
        max_episodes: Some(1200),
        eval_interval: 50,
        eval_episodes: 10,
        seed,
        ..AriseConfig::default()
    };
    if variant == "ppo" {
        config.num_agents = 1;
        config.alpha = 0.0;
        config.beta = 0.0;
        config.no_swarm = true;
        config.no_adaptive = true;
        config.no_broadcast = true;
        config.no_novelty = true;
    }
    let mut trainer = Trainer::new(
        config,
        PpoConfig::default(),
        Env::make("cartpole+shift:center-penalty-v1:600").unwrap(),
        RunMeta { run_id: format!("{variant}-{seed}"), variant: variant.clone() },
    )
    .unwrap();
    let report = trainer.run(|_, _| {}).unwrap();
    print!("{variant} seed {seed} evals:");
    for p in &report.eval_history {
        print!(" {}:{:.1}", p.episodes_done, p.mean_return);
    }
    println!();
}
