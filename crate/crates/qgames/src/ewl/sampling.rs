//! Reproducible random sampling of strategy profiles, and the batch
//! cross-check that compares the density-matrix pipeline against the closed
//! form on those samples.
//!
//! Reproducibility contract: sample `index` under seed `seed` is the same
//! bytes on every platform, thread count and execution order, because each
//! cell expands `(seed, index)` into its own ChaCha key instead of drawing
//! from a shared stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use super::closed_form::closed_form_payoff;
use super::{play, DecoherenceSpec, GameDefinition, StrategyParams};
use crate::error::Result;
use crate::exec::map_indexed;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// An independent generator for one cell of a batch.
pub fn cell_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut state = seed ^ index.wrapping_mul(0xA076_1D64_78BD_642F);
    let mut key = [0u8; 32];
    for chunk in key.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Uniform draw over the full strategy space.
pub fn random_strategy<R: Rng>(rng: &mut R) -> StrategyParams {
    let theta = rng.gen_range(0.0..=PI);
    let alpha = rng.gen_range(-PI..=PI);
    let beta = rng.gen_range(-PI..=PI);
    StrategyParams::new(theta, alpha, beta).expect("draws are in range by construction")
}

/// One random cross-check cell: a strategy pair plus a noise configuration.
#[derive(Clone, Debug)]
pub struct SampleProfile {
    pub first: StrategyParams,
    pub second: StrategyParams,
    pub noise: DecoherenceSpec,
}

/// Deterministic sample `index` of the stream owned by `seed`.
pub fn sample_profile(seed: u64, index: u64) -> SampleProfile {
    let mut rng = cell_rng(seed, index);
    let first = random_strategy(&mut rng);
    let second = random_strategy(&mut rng);
    let p1 = rng.gen_range(0.0..=1.0);
    let p2 = rng.gen_range(0.0..=1.0);
    SampleProfile {
        first,
        second,
        noise: DecoherenceSpec::measurement(p1, p2).expect("draws are probabilities"),
    }
}

/// Run `samples` random profiles of `game` through both the pipeline and the
/// closed form; return the largest payoff deviation seen for either player.
pub fn crosscheck_deviation(game: &GameDefinition, samples: u64, seed: u64) -> Result<f64> {
    let per_cell: Vec<Result<f64>> = map_indexed(samples as usize, |i| {
        let profile = sample_profile(seed, i as u64);
        let sim = play(game, &[profile.first, profile.second], &profile.noise)?;
        let mut worst: f64 = 0.0;
        for player in 0..2 {
            let oracle = closed_form_payoff(
                player,
                &profile.first,
                &profile.second,
                &profile.noise,
                &game.payoffs,
            )?;
            worst = worst.max((oracle - sim.payoffs[player]).abs());
        }
        Ok(worst)
    });
    let mut max_dev: f64 = 0.0;
    for cell in per_cell {
        max_dev = max_dev.max(cell?);
    }
    Ok(max_dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ewl::catalog::game_by_name;

    #[test]
    fn cells_are_deterministic_and_independent_of_order() {
        let a = sample_profile(42, 7);
        let b = sample_profile(42, 8);
        let a_again = sample_profile(42, 7);
        assert_eq!(a.first, a_again.first);
        assert_eq!(a.second, a_again.second);
        assert_eq!(a.noise, a_again.noise);
        // neighbouring cells must differ
        assert_ne!(a.first, b.first);
    }

    #[test]
    fn different_seeds_give_different_streams() {
        let a = sample_profile(1, 0);
        let b = sample_profile(2, 0);
        assert_ne!(a.first, b.first);
    }

    #[test]
    fn random_strategies_land_in_range() {
        let mut rng = cell_rng(9, 9);
        for _ in 0..200 {
            let s = random_strategy(&mut rng);
            assert!((0.0..=PI).contains(&s.theta()));
            assert!((-PI..=PI).contains(&s.alpha()));
            assert!((-PI..=PI).contains(&s.beta()));
        }
    }

    #[test]
    fn small_crosscheck_batch_agrees_tightly() {
        let game = game_by_name("chicken").unwrap();
        let dev = crosscheck_deviation(&game, 200, 3).unwrap();
        assert!(dev < 1e-12, "max deviation {dev}");
    }
}
