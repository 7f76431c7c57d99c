//! Novelty bonus from particle distances, reward augmentation, and fitness.

use crate::scalar::Scalar;

/// Novelty coefficient wrapper (beta >= 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoveltyConfig<F: Scalar> {
    pub beta: F,
}

impl<F: Scalar> Default for NoveltyConfig<F> {
    fn default() -> Self {
        Self { beta: F::c(0.01) }
    }
}

/// `tanh` of the minimum Euclidean distance between the executed action's
/// embedding and every *other* particle's position. Always in `[0, 1)`.
/// With no other particles the bonus degrades to zero with a warning.
pub fn novelty_bonus<F: Scalar>(
    action_embedding: &[F],
    particle_positions: &[Vec<F>],
    self_index: usize,
) -> F {
    let mut min_sq: Option<F> = None;
    for (j, p) in particle_positions.iter().enumerate() {
        if j == self_index || p.len() != action_embedding.len() {
            continue;
        }
        let sq: F = action_embedding
            .iter()
            .zip(p.iter())
            .map(|(a, b)| (*a - *b) * (*a - *b))
            .sum();
        min_sq = Some(match min_sq {
            Some(m) if m <= sq => m,
            _ => sq,
        });
    }
    match min_sq {
        // tanh rounds to exactly 1.0 in floating point once the distance
        // passes ~20; cap just below so the bonus stays in [0, 1).
        Some(sq) => sq.sqrt().tanh().min(F::one() - F::epsilon()),
        None => {
            log::warn!("novelty bonus requested with no other particles; returning 0");
            F::zero()
        }
    }
}

/// `r_aug = r + beta * n`.
pub fn augment_reward<F: Scalar>(reward: F, novelty: F, beta: F) -> F {
    reward + beta * novelty
}

/// Agent fitness `F_i = mean_reward + mean_novelty`.
pub fn fitness<F: Scalar>(mean_reward: F, mean_novelty: F) -> F {
    mean_reward + mean_novelty
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn coinciding_embedding_has_zero_novelty() {
        let positions = vec![vec![1.0, 2.0], vec![-3.0, 0.5]];
        let n = novelty_bonus(&[1.0, 2.0], &positions, 1);
        assert_eq!(n, 0.0);
    }

    #[test]
    fn min_distance_one_gives_tanh_one() {
        // Distances: to (0,0) -> 1, to (3,4) -> sqrt(4 + 16) = sqrt(20).
        let positions = vec![vec![0.0, 0.0], vec![3.0, 4.0], vec![1.0, 0.0]];
        let n = novelty_bonus(&[1.0, 0.0], &positions, 2);
        assert!((n - 1.0f64.tanh()).abs() < 1e-15);
        assert!((n - 0.761594).abs() < 1e-6);
    }

    #[test]
    fn large_distances_approach_one_from_below() {
        let positions = vec![vec![0.0], vec![1e6]];
        let n = novelty_bonus(&[0.0], &positions, 0);
        assert!(n < 1.0);
        assert!(n > 0.999_999);
    }

    #[test]
    fn no_other_particles_falls_back_to_zero() {
        let positions = vec![vec![1.0, 1.0]];
        assert_eq!(novelty_bonus(&[0.0, 0.0], &positions, 0), 0.0);
    }

    #[test]
    fn augment_reward_arithmetic() {
        assert_eq!(augment_reward(1.0f64, 0.5, 0.0), 1.0);
        assert!((augment_reward(1.0f64, 0.5, 0.01) - 1.005).abs() < 1e-15);
        assert_eq!(augment_reward(2.5f64, 0.0, 0.01), 2.5);
    }

    #[test]
    fn fitness_is_plain_sum() {
        assert_eq!(fitness(0.0f64, 0.0), 0.0);
        assert!((fitness(10.0f64, 0.4) - 10.4).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn bonus_stays_in_unit_interval(
            a in prop::collection::vec(-100.0f64..100.0, 2),
            p1 in prop::collection::vec(-100.0f64..100.0, 2),
            p2 in prop::collection::vec(-100.0f64..100.0, 2),
        ) {
            let n = novelty_bonus(&a, &[p1, p2, a.clone()], 2);
            prop_assert!((0.0..1.0).contains(&n));
        }

        #[test]
        fn bonus_is_permutation_invariant(
            a in prop::collection::vec(-10.0f64..10.0, 2),
            p1 in prop::collection::vec(-10.0f64..10.0, 2),
            p2 in prop::collection::vec(-10.0f64..10.0, 2),
        ) {
            let fwd = novelty_bonus(&a, &[a.clone(), p1.clone(), p2.clone()], 0);
            let rev = novelty_bonus(&a, &[a.clone(), p2, p1], 0);
            prop_assert_eq!(fwd, rev);
        }

        #[test]
        fn augmentation_monotone_in_novelty(n1 in 0.0f64..1.0, n2 in 0.0f64..1.0) {
            let (lo, hi) = if n1 <= n2 { (n1, n2) } else { (n2, n1) };
            prop_assert!(augment_reward(1.0, lo, 0.01) <= augment_reward(1.0, hi, 0.01));
        }
    }
}
