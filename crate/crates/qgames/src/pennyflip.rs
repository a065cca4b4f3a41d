//! The coin-flip duel: a quantum player against a classical one, with
//! decoherence between their moves.
//!
//! A coin starts heads-up (|0>). The quantum player Q applies a Hadamard,
//! putting it in an even superposition; the classical player P — who cannot
//! see the coin — either flips it or not; Q applies a second Hadamard and
//! the coin is revealed. Q wins on heads. Coherent play makes Q's second
//! Hadamard undo the first regardless of what P did: P's move commutes with
//! the uniform state, and Q wins with certainty.
//!
//! The noise channel between the moves is where the magic leaks out. With
//! measurement strength `p` the coin's coherence is damped to `1-p`, and the
//! win probability drops linearly to `1 - p/2`: certainty at `p = 0`, a fair
//! coin at `p = 1`. P's move remains irrelevant at *every* noise level — the
//! decohered state is still symmetric under the flip — which the tests pin
//! down as a property.

use crate::error::{Error, Result};
use crate::kernel::{
    hadamard, measurement_channel, sigma_x, DensityMatrix, KrausSet, SquareMatrix,
};

/// What the classical player does between the two Hadamards.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClassicalMove {
    /// Leave the coin alone.
    Stay,
    /// Turn the coin over.
    Flip,
    /// Flip with the given probability.
    Mix(f64),
}

impl ClassicalMove {
    fn flip_probability(&self) -> Result<f64> {
        let q = match *self {
            ClassicalMove::Stay => 0.0,
            ClassicalMove::Flip => 1.0,
            ClassicalMove::Mix(q) => q,
        };
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::OutOfRange {
                name: "flip probability",
                value: q,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(q)
    }

    /// The move as a channel: a classical mixture of identity and bit-flip.
    fn as_channel(&self) -> Result<KrausSet> {
        let q = self.flip_probability()?;
        let stay = SquareMatrix::identity(2).scale(((1.0 - q).sqrt()).into());
        let flip = sigma_x().scale((q.sqrt()).into());
        KrausSet::new(vec![stay, flip])
    }
}

/// Run the full duel: Hadamard, noise of strength `p`, the classical move,
/// Hadamard. Returns the coin's final state.
pub fn final_state(p: f64, mov: &ClassicalMove) -> Result<DensityMatrix> {
    let h = hadamard();
    let coin = DensityMatrix::basis_state(1, 0)?;
    let spun = coin.conjugate_by(&h)?;
    let decohered = measurement_channel(&spun, p)?;
    let after_move = mov.as_channel()?.apply(&decohered)?;
    after_move.conjugate_by(&h)
}

/// The quantum player's win probability at noise strength `p`. This is the
/// heads population of [`final_state`], which collapses to the line
/// `1 - p/2`; the pipeline and this expression are cross-checked in tests.
pub fn q_win_probability(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(1.0 - p / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coherent_play_wins_with_certainty() {
        for mov in [
            ClassicalMove::Stay,
            ClassicalMove::Flip,
            ClassicalMove::Mix(0.5),
        ] {
            let state = final_state(0.0, &mov).unwrap();
            let d = state.diagonal();
            assert!((d[0] - 1.0).abs() < 1e-12, "{mov:?}");
            assert!(d[1].abs() < 1e-12);
        }
        assert_eq!(q_win_probability(0.0).unwrap(), 1.0);
    }

    #[test]
    fn partial_noise_gives_the_pinned_diagonal() {
        let state = final_state(0.4, &ClassicalMove::Stay).unwrap();
        let d = state.diagonal();
        assert!((d[0] - 0.8).abs() < 1e-12);
        assert!((d[1] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn full_noise_is_a_fair_coin() {
        let state = final_state(1.0, &ClassicalMove::Flip).unwrap();
        let d = state.diagonal();
        assert!((d[0] - 0.5).abs() < 1e-12);
        assert!((d[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn classical_move_cannot_influence_the_outcome() {
        for p in [0.0, 0.3, 0.7, 1.0] {
            let reference = final_state(p, &ClassicalMove::Stay).unwrap();
            for mov in [
                ClassicalMove::Flip,
                ClassicalMove::Mix(0.25),
                ClassicalMove::Mix(0.9),
            ] {
                let other = final_state(p, &mov).unwrap();
                assert!(
                    reference.matrix().max_abs_diff(other.matrix()) < 1e-12,
                    "p={p} move={mov:?}"
                );
            }
        }
    }

    #[test]
    fn closed_form_matches_the_pipeline_on_a_sweep() {
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            let pipeline = final_state(p, &ClassicalMove::Stay).unwrap().diagonal()[0];
            let formula = q_win_probability(p).unwrap();
            assert!((pipeline - formula).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(final_state(-0.1, &ClassicalMove::Stay).is_err());
        assert!(final_state(0.5, &ClassicalMove::Mix(1.5)).is_err());
        assert!(q_win_probability(2.0).is_err());
    }
}
