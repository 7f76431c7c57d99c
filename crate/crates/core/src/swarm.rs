//! PSO layer in action space: particle kinematics, personal/global bests,
//! action proposals, variance-adaptive coefficients, inertia decay, and the
//! swarm-diversity metric.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::novelty;
use crate::policy::{Action, ActionSpec};
use crate::scalar::Scalar;

pub const W_START: f64 = 0.7;
pub const W_END: f64 = 0.3;
pub const C_INIT: f64 = 1.5;
pub const C_MIN: f64 = 0.5;
pub const C_MAX: f64 = 2.5;
pub const C_DELTA: f64 = 0.05;
/// Exponential decay of the running variance reference.
pub const VAR_REF_DECAY: f64 = 0.95;
pub const VAR_HIGH_FACTOR: f64 = 1.5;
pub const VAR_LOW_FACTOR: f64 = 0.5;

/// One swarm member's state in action space.
#[derive(Debug, Clone, PartialEq)]
pub struct Particle<F: Scalar> {
    pub position: Vec<F>,
    pub velocity: Vec<F>,
    pub pbest_position: Vec<F>,
    pub pbest_fitness: F,
}

/// Per-iteration fitness summary for one agent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessRecord<F: Scalar> {
    pub mean_reward: F,
    pub mean_novelty: F,
    pub fitness: F,
}

impl<F: Scalar> FitnessRecord<F> {
    pub fn new(mean_reward: F, mean_novelty: F) -> Self {
        Self { mean_reward, mean_novelty, fitness: novelty::fitness(mean_reward, mean_novelty) }
    }

    /// Sentinel for an agent that collected no data this iteration; it is
    /// excluded from best-selection.
    pub fn empty() -> Self {
        Self {
            mean_reward: F::neg_infinity(),
            mean_novelty: F::zero(),
            fitness: F::neg_infinity(),
        }
    }
}

/// The whole swarm plus its coefficients and the running variance reference
/// used by the adaptive schedule.
#[derive(Debug, Clone)]
pub struct SwarmState<F: Scalar> {
    pub particles: Vec<Particle<F>>,
    pub gbest_position: Vec<F>,
    pub gbest_fitness: F,
    pub w: F,
    pub c1: F,
    pub c2: F,
    /// Particle-space box, per dimension.
    pub low: Vec<F>,
    pub high: Vec<F>,
    pub v_max: Vec<F>,
    /// Exponentially-decayed reference level for the fitness variance.
    pub var_ref: Option<F>,
}

/// Particle-space box for an action spec: the action bounds for continuous
/// spaces, the unit box over per-action scores for discrete ones.
pub fn particle_bounds<F: Scalar>(spec: &ActionSpec<F>) -> (Vec<F>, Vec<F>) {
    match spec {
        ActionSpec::Continuous { low, high } => (low.clone(), high.clone()),
        ActionSpec::Discrete { n } => (vec![F::zero(); *n], vec![F::one(); *n]),
    }
}

/// Velocity cap: a quarter of the box width per dimension for continuous
/// spaces, 1.0 for discrete.
pub fn velocity_cap<F: Scalar>(spec: &ActionSpec<F>) -> Vec<F> {
    match spec {
        ActionSpec::Continuous { low, high } => low
            .iter()
            .zip(high.iter())
            .map(|(l, h)| F::c(0.25) * (*h - *l))
            .collect(),
        ActionSpec::Discrete { n } => vec![F::one(); *n],
    }
}

impl<F: Scalar> SwarmState<F> {
    /// Initializes `m` particles uniformly inside the particle box with
    /// velocities uniform in `[-v_max/2, v_max/2]`.
    pub fn init<R: Rng + ?Sized>(m: usize, spec: &ActionSpec<F>, rng: &mut R) -> Result<Self> {
        if m < 2 {
            return Err(Error::Config(format!("swarm needs at least 2 particles, got {m}")));
        }
        let (low, high) = particle_bounds(spec);
        let v_max = velocity_cap(spec);
        let dim = low.len();
        let mut particles = Vec::with_capacity(m);
        for _ in 0..m {
            let position: Vec<F> = (0..dim)
                .map(|d| F::sample_uniform(rng, low[d], high[d]))
                .collect();
            let velocity: Vec<F> = (0..dim)
                .map(|d| {
                    let half = v_max[d] / F::c(2.0);
                    F::sample_uniform(rng, -half, half)
                })
                .collect();
            particles.push(Particle {
                pbest_position: position.clone(),
                position,
                velocity,
                pbest_fitness: F::neg_infinity(),
            });
        }
        let gbest_position = particles[0].position.clone();
        Ok(Self {
            particles,
            gbest_position,
            gbest_fitness: F::neg_infinity(),
            w: F::c(W_START),
            c1: F::c(C_INIT),
            c2: F::c(C_INIT),
            low,
            high,
            v_max,
            var_ref: None,
        })
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn positions(&self) -> Vec<Vec<F>> {
        self.particles.iter().map(|p| p.position.clone()).collect()
    }

    /// Updates personal bests (strictly-greater replacement) and the global
    /// best from this iteration's fitnesses. `positions_at_evaluation` holds
    /// each particle's position at the time its fitness was measured.
    /// Non-finite NaN fitnesses skip their particle with a warning.
    pub fn update_bests(&mut self, fitnesses: &[F], positions_at_evaluation: &[Vec<F>]) {
        debug_assert_eq!(fitnesses.len(), self.particles.len());
        for (i, particle) in self.particles.iter_mut().enumerate() {
            let f = fitnesses[i];
            if f.is_nan() {
                log::warn!("particle {i} produced NaN fitness; skipping best update");
                continue;
            }
            if f > particle.pbest_fitness {
                particle.pbest_fitness = f;
                particle.pbest_position = positions_at_evaluation[i].clone();
            }
        }
        for particle in &self.particles {
            if particle.pbest_fitness > self.gbest_fitness {
                self.gbest_fitness = particle.pbest_fitness;
                self.gbest_position = particle.pbest_position.clone();
            }
        }
    }

    /// Advances every particle one kinematic step with the current
    /// coefficients.
    pub fn step_particles<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let gbest = self.gbest_position.clone();
        let (w, c1, c2) = (self.w, self.c1, self.c2);
        for particle in &mut self.particles {
            update_particle(
                particle, &gbest, w, c1, c2, rng, &self.v_max, &self.low, &self.high,
            );
        }
    }

    /// Variance-adaptive coefficient update. Computes the population variance
    /// of the finite fitnesses, folds it into the running reference, and
    /// nudges c1/c2 when the variance leaves the dead band around the
    /// reference. Returns the measured variance.
    pub fn adapt(&mut self, fitnesses: &[F]) -> F {
        let var = population_variance(fitnesses);
        let Some(var) = var else {
            return F::zero();
        };
        let reference = match self.var_ref {
            Some(prev) => F::c(VAR_REF_DECAY) * prev + F::c(1.0 - VAR_REF_DECAY) * var,
            None => var,
        };
        self.var_ref = Some(reference);
        let (c1, c2) = adapt_coefficients(
            self.c1,
            self.c2,
            var,
            F::c(VAR_LOW_FACTOR) * reference,
            F::c(VAR_HIGH_FACTOR) * reference,
            F::c(C_DELTA),
            F::c(C_MIN),
            F::c(C_MAX),
        );
        self.c1 = c1;
        self.c2 = c2;
        var
    }

    /// Mean pairwise Euclidean distance between particle positions.
    pub fn diversity(&self) -> Result<F> {
        swarm_diversity(&self.positions())
    }
}

/// Decodes a particle into an action: clamp to bounds for continuous spaces,
/// argmax over the score vector for discrete ones.
pub fn pso_action<F: Scalar>(position: &[F], spec: &ActionSpec<F>) -> Result<Action<F>> {
    match spec {
        ActionSpec::Continuous { low, high } => {
            if position.len() != low.len() {
                return Err(Error::Shape(format!(
                    "particle dim {} vs action dim {}",
                    position.len(),
                    low.len()
                )));
            }
            let mut a = position.to_vec();
            for ((x, l), h) in a.iter_mut().zip(low).zip(high) {
                if *x < *l {
                    *x = *l;
                }
                if *x > *h {
                    *x = *h;
                }
            }
            Ok(Action::Continuous(a))
        }
        ActionSpec::Discrete { n } => {
            if position.len() != *n {
                return Err(Error::Shape(format!(
                    "particle dim {} vs {} actions",
                    position.len(),
                    n
                )));
            }
            let mut best = 0;
            for (k, x) in position.iter().enumerate() {
                if *x > position[best] {
                    best = k;
                }
            }
            Ok(Action::Discrete(best))
        }
    }
}

/// One PSO kinematic step with per-component uniform `r1`, `r2`.
#[allow(clippy::too_many_arguments)]
pub fn update_particle<F: Scalar, R: Rng + ?Sized>(
    particle: &mut Particle<F>,
    gbest_position: &[F],
    w: F,
    c1: F,
    c2: F,
    rng: &mut R,
    v_max: &[F],
    low: &[F],
    high: &[F],
) {
    let dim = particle.position.len();
    let r1: Vec<F> = (0..dim).map(|_| F::sample_unit(rng)).collect();
    let r2: Vec<F> = (0..dim).map(|_| F::sample_unit(rng)).collect();
    update_particle_with_r(particle, gbest_position, w, c1, c2, &r1, &r2, v_max, low, high);
}

/// Kinematic step with explicit random factors (the testable core of
/// [`update_particle`]).
#[allow(clippy::too_many_arguments)]
pub fn update_particle_with_r<F: Scalar>(
    particle: &mut Particle<F>,
    gbest_position: &[F],
    w: F,
    c1: F,
    c2: F,
    r1: &[F],
    r2: &[F],
    v_max: &[F],
    low: &[F],
    high: &[F],
) {
    for d in 0..particle.position.len() {
        let p = particle.position[d];
        let mut v = w * particle.velocity[d]
            + c1 * r1[d] * (particle.pbest_position[d] - p)
            + c2 * r2[d] * (gbest_position[d] - p);
        if v > v_max[d] {
            v = v_max[d];
        }
        if v < -v_max[d] {
            v = -v_max[d];
        }
        let mut x = p + v;
        if x < low[d] {
            x = low[d];
        }
        if x > high[d] {
            x = high[d];
        }
        particle.velocity[d] = v;
        particle.position[d] = x;
    }
}

/// Pushes c2 up (and c1 down) when the fitness variance is above `var_high`,
/// the reverse when below `var_low`; the dead band leaves both unchanged.
#[allow(clippy::too_many_arguments)]
pub fn adapt_coefficients<F: Scalar>(
    c1: F,
    c2: F,
    var_reward: F,
    var_low: F,
    var_high: F,
    delta: F,
    c_min: F,
    c_max: F,
) -> (F, F) {
    if var_reward > var_high {
        ((c1 - delta).max(c_min), (c2 + delta).min(c_max))
    } else if var_reward < var_low {
        ((c1 + delta).min(c_max), (c2 - delta).max(c_min))
    } else {
        (c1, c2)
    }
}

/// Population variance over the finite entries; `None` when fewer than two
/// are finite.
pub fn population_variance<F: Scalar>(values: &[F]) -> Option<F> {
    let finite: Vec<F> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if finite.len() < 2 {
        return None;
    }
    let n = F::c(finite.len() as f64);
    let mean = finite.iter().copied().sum::<F>() / n;
    Some(finite.iter().map(|v| (*v - mean) * (*v - mean)).sum::<F>() / n)
}

/// Linear inertia schedule from `W_START` at progress 0 to `W_END` at 1.
/// Progress outside `[0, 1]` clamps.
pub fn decay_inertia<F: Scalar>(progress: F) -> F {
    let p = progress.max(F::zero()).min(F::one());
    F::c(W_START) + (F::c(W_END) - F::c(W_START)) * p
}

/// Mean Euclidean distance over all unordered particle pairs.
pub fn swarm_diversity<F: Scalar>(positions: &[Vec<F>]) -> Result<F> {
    let m = positions.len();
    if m < 2 {
        return Err(Error::UndefinedMetric(format!(
            "diversity needs at least 2 particles, got {m}"
        )));
    }
    let mut total = F::zero();
    let mut pairs = 0usize;
    for i in 0..m {
        for j in i + 1..m {
            let sq: F = positions[i]
                .iter()
                .zip(positions[j].iter())
                .map(|(a, b)| (*a - *b) * (*a - *b))
                .sum();
            total = total + sq.sqrt();
            pairs += 1;
        }
    }
    Ok(total / F::c(pairs as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn particle(position: Vec<f64>, velocity: Vec<f64>) -> Particle<f64> {
        Particle {
            pbest_position: position.clone(),
            position,
            velocity,
            pbest_fitness: f64::NEG_INFINITY,
        }
    }

    #[test]
    fn continuous_action_is_clamped_position() {
        let spec = ActionSpec::continuous(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(
            pso_action(&[0.3, -0.4], &spec).unwrap(),
            Action::Continuous(vec![0.3, -0.4])
        );
        assert_eq!(
            pso_action(&[5.0, -0.4], &spec).unwrap(),
            Action::Continuous(vec![1.0, -0.4])
        );
    }

    #[test]
    fn discrete_action_is_argmax() {
        let spec = ActionSpec::<f64>::discrete(2).unwrap();
        assert_eq!(pso_action(&[0.1, 0.9], &spec).unwrap(), Action::Discrete(1));
        assert_eq!(pso_action(&[0.9, 0.1], &spec).unwrap(), Action::Discrete(0));
    }

    #[test]
    fn pso_action_rejects_dim_mismatch() {
        let spec = ActionSpec::<f64>::discrete(3).unwrap();
        assert!(matches!(pso_action(&[0.1, 0.9], &spec), Err(Error::Shape(_))));
    }

    #[test]
    fn pure_inertia_when_attractors_coincide() {
        let mut p = particle(vec![0.5], vec![1.0]);
        let gbest = vec![0.5];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        update_particle(&mut p, &gbest, 0.7, 1.5, 1.5, &mut rng, &[10.0], &[-10.0], &[10.0]);
        assert!((p.velocity[0] - 0.7).abs() < 1e-15);
        assert!((p.position[0] - 1.2).abs() < 1e-15);
    }

    #[test]
    fn zero_inertia_moves_toward_attractors() {
        // With w=0, v=0 and both attractors on the same side of p, the new
        // position lies componentwise between p and
        // p + c1 (pbest - p) + c2 (gbest - p), since r1, r2 are in [0, 1].
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let mut p = particle(vec![0.0], vec![0.0]);
            let side = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            p.pbest_position = vec![side * rng.gen_range(0.0..1.0)];
            let gbest = vec![side * rng.gen_range(0.0..1.0)];
            let start = p.position[0];
            let extreme = start + 1.5 * (p.pbest_position[0] - start) + 1.5 * (gbest[0] - start);
            update_particle(
                &mut p, &gbest, 0.0, 1.5, 1.5, &mut rng, &[100.0], &[-100.0], &[100.0],
            );
            let (lo, hi) = if extreme < start { (extreme, start) } else { (start, extreme) };
            assert!(p.position[0] >= lo - 1e-12 && p.position[0] <= hi + 1e-12);
        }
    }

    #[test]
    fn forced_zero_r_reduces_to_pure_inertia() {
        let mut p = particle(vec![0.2, -0.1], vec![0.3, -0.4]);
        p.pbest_position = vec![5.0, 5.0];
        update_particle_with_r(
            &mut p,
            &[-5.0, -5.0],
            0.5,
            2.0,
            2.0,
            &[0.0, 0.0],
            &[0.0, 0.0],
            &[10.0, 10.0],
            &[-10.0, -10.0],
            &[10.0, 10.0],
        );
        assert_eq!(p.velocity, vec![0.15, -0.2]);
        assert_eq!(p.position, vec![0.2 + 0.15, -0.1 - 0.2]);
    }

    #[test]
    fn velocity_clamp_is_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut p = particle(vec![0.0], vec![0.0]);
        p.pbest_position = vec![100.0];
        for _ in 0..50 {
            update_particle(&mut p, &[100.0], 0.7, 1.5, 1.5, &mut rng, &[0.5], &[-1.0], &[1.0]);
            assert!(p.velocity[0].abs() <= 0.5 + 1e-15);
            assert!(p.position[0] >= -1.0 && p.position[0] <= 1.0);
        }
    }

    #[test]
    fn bests_unchanged_by_worse_fitness() {
        let spec = ActionSpec::continuous(vec![-1.0], vec![1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut swarm = SwarmState::init(3, &spec, &mut rng).unwrap();
        let positions = swarm.positions();
        swarm.update_bests(&[5.0, 1.0, 2.0], &positions);
        let pb = swarm.particles[0].pbest_position.clone();
        swarm.update_bests(&[4.0, 0.0, 1.0], &positions);
        assert_eq!(swarm.particles[0].pbest_position, pb);
        assert_eq!(swarm.particles[0].pbest_fitness, 5.0);
        assert_eq!(swarm.gbest_fitness, 5.0);
    }

    #[test]
    fn single_finite_fitness_takes_gbest() {
        let spec = ActionSpec::continuous(vec![-1.0], vec![1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut swarm = SwarmState::init(3, &spec, &mut rng).unwrap();
        let positions = swarm.positions();
        swarm.update_bests(&[f64::NEG_INFINITY, 3.0, f64::NEG_INFINITY], &positions);
        assert_eq!(swarm.gbest_fitness, 3.0);
        assert_eq!(swarm.gbest_position, positions[1]);
    }

    #[test]
    fn nan_fitness_skips_particle() {
        let spec = ActionSpec::continuous(vec![-1.0], vec![1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut swarm = SwarmState::init(2, &spec, &mut rng).unwrap();
        let positions = swarm.positions();
        swarm.update_bests(&[f64::NAN, 1.0], &positions);
        assert_eq!(swarm.particles[0].pbest_fitness, f64::NEG_INFINITY);
        assert_eq!(swarm.gbest_fitness, 1.0);
    }

    #[test]
    fn gbest_is_monotone_over_random_updates() {
        let spec = ActionSpec::continuous(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut swarm = SwarmState::init(3, &spec, &mut rng).unwrap();
        let mut prev = swarm.gbest_fitness;
        for _ in 0..100 {
            let fitnesses: Vec<f64> = (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let positions = swarm.positions();
            swarm.update_bests(&fitnesses, &positions);
            assert!(swarm.gbest_fitness >= prev);
            prev = swarm.gbest_fitness;
            swarm.step_particles(&mut rng);
        }
    }

    #[test]
    fn zero_variance_raises_cognitive_coefficient() {
        let (c1, c2) = adapt_coefficients(1.5f64, 1.5, 0.0, 0.5, 2.0, 0.05, 0.5, 2.5);
        assert!((c1 - 1.55).abs() < 1e-15);
        assert!((c2 - 1.45).abs() < 1e-15);
    }

    #[test]
    fn high_variance_raises_social_coefficient() {
        // Population variance of {0, 100, 200} is 20000/3 ~ 6666.7.
        let var: f64 = population_variance(&[0.0, 100.0, 200.0]).unwrap();
        assert!((var - 20000.0 / 3.0).abs() < 1e-9);
        let (c1, c2) = adapt_coefficients(1.5f64, 1.5, var, 50.0, 100.0, 0.05, 0.5, 2.5);
        assert!((c1 - 1.45).abs() < 1e-15);
        assert!((c2 - 1.55).abs() < 1e-15);
    }

    #[test]
    fn dead_band_leaves_coefficients_unchanged() {
        let (c1, c2) = adapt_coefficients(1.5f64, 1.5, 75.0, 50.0, 100.0, 0.05, 0.5, 2.5);
        assert_eq!((c1, c2), (1.5, 1.5));
    }

    #[test]
    fn coefficients_stay_in_bounds() {
        let mut c1 = 1.5f64;
        let mut c2 = 1.5f64;
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..500 {
            let var = rng.gen_range(0.0..10.0);
            let (a, b) = adapt_coefficients(c1, c2, var, 2.0, 5.0, 0.05, 0.5, 2.5);
            c1 = a;
            c2 = b;
            assert!((0.5..=2.5).contains(&c1));
            assert!((0.5..=2.5).contains(&c2));
        }
    }

    #[test]
    fn inertia_schedule_endpoints_and_midpoint() {
        assert_eq!(decay_inertia(0.0f64), 0.7);
        assert_eq!(decay_inertia(1.0f64), 0.3);
        assert!((decay_inertia(0.5f64) - 0.5).abs() < 1e-15);
        assert_eq!(decay_inertia(-1.0f64), 0.7);
        assert_eq!(decay_inertia(2.0f64), 0.3);
    }

    #[test]
    fn diversity_cases() {
        assert_eq!(swarm_diversity(&[vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap(), 0.0);
        assert_eq!(swarm_diversity(&[vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap(), 5.0);
        let d: f64 = swarm_diversity(&[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        assert!((d - 4.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            swarm_diversity(&[vec![0.0]]),
            Err(Error::UndefinedMetric(_))
        ));
    }

    /// Reference PSO run: maximizing f(p) = -||p||^2 from random starts in
    /// [-1, 1]^2 should park gbest near the origin well within 200 steps.
    #[test]
    fn sphere_fitness_converges() {
        let spec = ActionSpec::continuous(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let mut successes = 0;
        for seed in 0..5u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut swarm = SwarmState::init(3, &spec, &mut rng).unwrap();
            let mut ok = false;
            for iter in 0..200 {
                let positions = swarm.positions();
                let fitnesses: Vec<f64> = positions
                    .iter()
                    .map(|p| -(p[0] * p[0] + p[1] * p[1]))
                    .collect();
                swarm.update_bests(&fitnesses, &positions);
                swarm.w = decay_inertia(iter as f64 / 200.0);
                swarm.step_particles(&mut rng);
                let norm =
                    (swarm.gbest_position[0].powi(2) + swarm.gbest_position[1].powi(2)).sqrt();
                if norm < 0.1 {
                    ok = true;
                    break;
                }
            }
            if ok {
                successes += 1;
            }
        }
        assert!(successes >= 4, "only {successes}/5 seeds converged");
    }

    proptest! {
        #[test]
        fn positions_and_velocities_stay_clamped(seed in 0u64..200, steps in 1usize..50) {
            let spec = ActionSpec::continuous(vec![-2.0, -2.0], vec![2.0, 2.0]).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut swarm = SwarmState::init(3, &spec, &mut rng).unwrap();
            for _ in 0..steps {
                let positions = swarm.positions();
                let f: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
                swarm.update_bests(&f, &positions);
                swarm.step_particles(&mut rng);
                for p in &swarm.particles {
                    for d in 0..2 {
                        prop_assert!(p.velocity[d].abs() <= swarm.v_max[d] + 1e-12);
                        prop_assert!(p.position[d] >= -2.0 && p.position[d] <= 2.0);
                    }
                }
            }
        }
    }
}
