//! Closed-form expectations for the two-player protocol.
//!
//! Expanding the pipeline algebraically over the computational basis
//! collapses the whole density-matrix evolution into a handful of
//! trigonometric terms. Three groups survive:
//!
//! * a population term that never decays — the classical mixture generated
//!   by the rotation angles alone;
//! * two-qubit coherences that must survive both noise windows, carrying
//!   `(1-p1)^2 (1-p2)^2`;
//! * single-window interference terms proportional to
//!   `sin(theta_A) sin(theta_B)`, carrying `(1-p1)^2` or `(1-p2)^2`.
//!
//! These formulas are the independent oracle for the simulation: they never
//! touch the kernel, so agreement between the two paths checks both.

use super::{DecoherenceSpec, PayoffTable, StrategyParams};
use crate::error::{Error, Result};

fn scoring_row(table: &PayoffTable, player: usize) -> Result<[f64; 4]> {
    if table.player_count() != 2 {
        return Err(Error::PlayerCount {
            players: table.player_count(),
            reason: "the closed form covers the two-player protocol",
        });
    }
    if player >= 2 {
        return Err(Error::PlayerCount {
            players: player,
            reason: "player index must be 0 or 1",
        });
    }
    Ok([
        table.value(player, 0),
        table.value(player, 1),
        table.value(player, 2),
        table.value(player, 3),
    ])
}

/// Expected payoff of `player` when the first mover plays `a` and the second
/// plays `b`, with decoherence striking at the strengths in `noise`.
pub fn closed_form_payoff(
    player: usize,
    a: &StrategyParams,
    b: &StrategyParams,
    noise: &DecoherenceSpec,
    table: &PayoffTable,
) -> Result<f64> {
    let [v00, v01, v10, v11] = scoring_row(table, player)?;
    let (p1, p2) = noise.probabilities();
    let (ca, sa) = {
        let h = a.theta() / 2.0;
        (h.cos().powi(2), h.sin().powi(2))
    };
    let (cb, sb) = {
        let h = b.theta() / 2.0;
        (h.cos().powi(2), h.sin().powi(2))
    };
    let q1 = (1.0 - p1).powi(2);
    let q2 = (1.0 - p2).powi(2);

    // population term: survives any amount of decoherence
    let population =
        0.5 * (ca * cb + sa * sb) * (v00 + v11) + 0.5 * (ca * sb + sa * cb) * (v01 + v10);

    // two-qubit coherences: must survive both windows
    let aligned = ca * cb * (2.0 * a.alpha() + 2.0 * b.alpha()).cos()
        - sa * sb * (2.0 * a.beta() + 2.0 * b.beta()).cos();
    let crossed = ca * sb * (2.0 * a.alpha() - 2.0 * b.beta()).cos()
        - sa * cb * (2.0 * b.alpha() - 2.0 * a.beta()).cos();
    let coherence = 0.5 * q1 * q2 * (aligned * (v00 - v11) + crossed * (v01 - v10));

    // single-window interference
    let interference = 0.25
        * a.theta().sin()
        * b.theta().sin()
        * (q1 * (a.alpha() + b.alpha() - a.beta() - b.beta()).sin() * (-v00 + v01 + v10 - v11)
            + q2 * (a.alpha() + b.alpha() + a.beta() + b.beta()).sin() * (v00 - v11)
            + q2 * (a.alpha() - b.alpha() + a.beta() - b.beta()).sin() * (v10 - v01));

    Ok(population + coherence + interference)
}

/// The same expectation when the first mover is restricted to phase-free
/// strategies (`alpha = beta = 0`, only `theta_a` free). Algebraically this
/// is `closed_form_payoff` with those phases substituted, but the collapsed
/// form is what sweep code evaluates in bulk, so it is exercised directly.
pub fn closed_form_classical_alice(
    player: usize,
    theta_a: f64,
    b: &StrategyParams,
    noise: &DecoherenceSpec,
    table: &PayoffTable,
) -> Result<f64> {
    if !(0.0..=std::f64::consts::PI).contains(&theta_a) {
        return Err(Error::OutOfRange {
            name: "theta_a",
            value: theta_a,
            lo: 0.0,
            hi: std::f64::consts::PI,
        });
    }
    let [v00, v01, v10, v11] = scoring_row(table, player)?;
    let (p1, p2) = noise.probabilities();
    let ca = (theta_a / 2.0).cos().powi(2);
    let sa = (theta_a / 2.0).sin().powi(2);
    let cb = (b.theta() / 2.0).cos().powi(2);
    let sb = (b.theta() / 2.0).sin().powi(2);
    let q1 = (1.0 - p1).powi(2);
    let q2 = (1.0 - p2).powi(2);

    let x = ca * cb + sa * sb;
    let population = 0.5 * x * (v00 + v11) + 0.5 * (1.0 - x) * (v01 + v10);

    let coherence = 0.5
        * q1
        * q2
        * (cb * (2.0 * b.alpha()).cos() * (ca * (v00 - v11) + sa * (v10 - v01))
            - sb * (2.0 * b.beta()).cos() * (ca * (v10 - v01) + sa * (v00 - v11)));

    let interference = 0.25
        * theta_a.sin()
        * b.theta().sin()
        * (q1 * (b.alpha() - b.beta()).sin() * (-v00 + v01 + v10 - v11)
            + q2 * (b.alpha() + b.beta()).sin() * (v00 + v01 - v10 - v11));

    Ok(population + coherence + interference)
}

/// The fully-decohered limit: with either window at full strength only the
/// population term survives, and the game degenerates to independent biased
/// coin flips with head-probabilities `sin^2(theta/2)`.
pub fn max_decoherence_payoff(
    player: usize,
    theta_a: f64,
    theta_b: f64,
    table: &PayoffTable,
) -> Result<f64> {
    let [v00, v01, v10, v11] = scoring_row(table, player)?;
    for (name, t) in [("theta_a", theta_a), ("theta_b", theta_b)] {
        if !(0.0..=std::f64::consts::PI).contains(&t) {
            return Err(Error::OutOfRange {
                name,
                value: t,
                lo: 0.0,
                hi: std::f64::consts::PI,
            });
        }
    }
    let ca = (theta_a / 2.0).cos().powi(2);
    let sa = (theta_a / 2.0).sin().powi(2);
    let cb = (theta_b / 2.0).cos().powi(2);
    let sb = (theta_b / 2.0).sin().powi(2);
    let x = ca * cb + sa * sb;
    Ok(0.5 * x * (v00 + v11) + 0.5 * (1.0 - x) * (v01 + v10))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ewl::catalog::{game_by_name, game_catalog};
    use crate::ewl::play;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn pd_table() -> PayoffTable {
        game_by_name("pd").unwrap().payoffs
    }

    #[test]
    fn classical_corner_values() {
        let t = pd_table();
        let stay = StrategyParams::stay();
        let flip = StrategyParams::flip();
        let none = DecoherenceSpec::none();
        let cases = [
            (&stay, &stay, 3.0, 3.0),
            (&flip, &flip, 1.0, 1.0),
            (&stay, &flip, 0.0, 5.0),
            (&flip, &stay, 5.0, 0.0),
        ];
        for (a, b, pay_a, pay_b) in cases {
            assert!((closed_form_payoff(0, a, b, &none, &t).unwrap() - pay_a).abs() < 1e-12);
            assert!((closed_form_payoff(1, a, b, &none, &t).unwrap() - pay_b).abs() < 1e-12);
        }
    }

    #[test]
    fn agrees_with_the_pipeline_on_a_fixed_sample() {
        // deterministic sample of strategy pairs and noise levels, compared
        // against the density-matrix pipeline across every catalog game
        let angles = [
            (0.0, 0.0, 0.0),
            (PI, PI, -PI),
            (1.234, 0.5, -2.5),
            (2.8, -3.0, 0.3),
            (FRAC_PI_2, FRAC_PI_2, 0.0),
            (0.4, -0.9, 2.2),
        ];
        let noises = [(0.0, 0.0), (1.0, 1.0), (0.3, 0.0), (0.15, 0.85)];
        for game in game_catalog() {
            for (i, &(ta, aa, ba)) in angles.iter().enumerate() {
                let (tb, ab, bb) = angles[(i + 2) % angles.len()];
                let a = StrategyParams::new(ta, aa, ba).unwrap();
                let b = StrategyParams::new(tb, ab, bb).unwrap();
                for &(p1, p2) in &noises {
                    let noise = DecoherenceSpec::measurement(p1, p2).unwrap();
                    let sim = play(&game, &[a, b], &noise).unwrap();
                    for player in 0..2 {
                        let oracle =
                            closed_form_payoff(player, &a, &b, &noise, &game.payoffs).unwrap();
                        assert!(
                            (oracle - sim.payoffs[player]).abs() < 1e-12,
                            "{} player {player} at {:?} {:?} p=({p1},{p2})",
                            game.name,
                            (ta, aa, ba),
                            (tb, ab, bb),
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn restricted_form_matches_full_form_with_zero_phases() {
        let t = pd_table();
        for &theta_a in &[0.0, 0.7, FRAC_PI_2, 2.1, PI] {
            let a = StrategyParams::classical(theta_a).unwrap();
            let b = StrategyParams::new(1.9, 0.8, -1.1).unwrap();
            for &(p1, p2) in &[(0.0, 0.0), (0.6, 0.2), (1.0, 0.4)] {
                let noise = DecoherenceSpec::measurement(p1, p2).unwrap();
                for player in 0..2 {
                    let full = closed_form_payoff(player, &a, &b, &noise, &t).unwrap();
                    let restricted =
                        closed_form_classical_alice(player, theta_a, &b, &noise, &t).unwrap();
                    assert!(
                        (full - restricted).abs() < 1e-12,
                        "theta_a={theta_a} p=({p1},{p2}) player={player}"
                    );
                }
            }
        }
    }

    #[test]
    fn quarter_turns_under_max_decoherence_average_the_table() {
        let t = pd_table();
        let v = max_decoherence_payoff(0, FRAC_PI_2, FRAC_PI_2, &t).unwrap();
        assert!((v - 2.25).abs() < 1e-12);
        let v = max_decoherence_payoff(1, FRAC_PI_2, FRAC_PI_2, &t).unwrap();
        assert!((v - 2.25).abs() < 1e-12);
    }

    #[test]
    fn max_decoherence_is_the_p_equals_one_slice() {
        let t = pd_table();
        let full_noise = DecoherenceSpec::measurement(1.0, 1.0).unwrap();
        for &(ta, tb) in &[(0.0, PI), (0.3, 2.0), (FRAC_PI_2, 1.0)] {
            // phases must be irrelevant once coherence is gone
            let a = StrategyParams::new(ta, 0.7, -0.4).unwrap();
            let b = StrategyParams::new(tb, -2.0, 1.3).unwrap();
            for player in 0..2 {
                let via_formula = closed_form_payoff(player, &a, &b, &full_noise, &t).unwrap();
                let via_limit = max_decoherence_payoff(player, ta, tb, &t).unwrap();
                assert!((via_formula - via_limit).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn three_player_tables_are_rejected() {
        let t3 = PayoffTable::new(vec![vec![0.0; 8]; 3]).unwrap();
        let s = StrategyParams::stay();
        let err = closed_form_payoff(0, &s, &s, &DecoherenceSpec::none(), &t3).unwrap_err();
        assert!(matches!(err, Error::PlayerCount { .. }));
    }
}
