//! The built-in two-player games.
//!
//! Payoff order is the basis order: (00, 01, 10, 11) with the first player's
//! bit leading, bit 0 = the "stay" move, bit 1 = the "flip" move.

use super::{GameDefinition, PayoffTable, StrategyParams};
use std::f64::consts::FRAC_PI_2;

fn labels(first: char, second: char) -> Vec<String> {
    let moves = [first, second];
    (0..4usize)
        .map(|o| {
            let a = moves[(o >> 1) & 1];
            let b = moves[o & 1];
            format!("{a}{b}")
        })
        .collect()
}

/// Prisoner's dilemma: mutual cooperation pays 3, defecting against a
/// cooperator pays 5, mutual defection 1.
pub fn prisoners_dilemma() -> GameDefinition {
    GameDefinition {
        name: "pd".into(),
        payoffs: PayoffTable::two_player([3.0, 0.0, 5.0, 1.0], [3.0, 5.0, 0.0, 1.0]),
        outcome_labels: labels('C', 'D'),
    }
}

/// Chicken: swerving (C) against a driver (D) costs 1 vs 4; mutual driving
/// is the crash at 0.
pub fn chicken() -> GameDefinition {
    GameDefinition {
        name: "chicken".into(),
        payoffs: PayoffTable::two_player([3.0, 1.0, 4.0, 0.0], [3.0, 4.0, 1.0, 0.0]),
        outcome_labels: labels('C', 'D'),
    }
}

/// Battle of the sexes: both players want to coordinate, but on different
/// events (O vs T); coordination on your favourite pays 2, on the other 1.
pub fn battle_of_the_sexes() -> GameDefinition {
    GameDefinition {
        name: "bos".into(),
        payoffs: PayoffTable::two_player([2.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0, 2.0]),
        outcome_labels: labels('O', 'T'),
    }
}

/// All built-in games, in a stable order.
pub fn game_catalog() -> Vec<GameDefinition> {
    vec![prisoners_dilemma(), chicken(), battle_of_the_sexes()]
}

/// Look a game up by its short name (case-insensitive).
pub fn game_by_name(name: &str) -> Option<GameDefinition> {
    match name.to_ascii_lowercase().as_str() {
        "pd" => Some(prisoners_dilemma()),
        "chicken" => Some(chicken()),
        "bos" => Some(battle_of_the_sexes()),
        _ => None,
    }
}

/// The phase move with which an unrestricted player exploits any phase-free
/// opponent in the coherent protocol: a quarter rotation dressed with the
/// game's winning phase combination. For the symmetric games that phase is
/// `alpha = pi/2`; for battle of the sexes it is `beta = -pi/2`.
pub fn quantum_edge_strategy(name: &str) -> Option<StrategyParams> {
    let s = match name.to_ascii_lowercase().as_str() {
        "pd" | "chicken" => StrategyParams::new(FRAC_PI_2, FRAC_PI_2, 0.0),
        "bos" => StrategyParams::new(FRAC_PI_2, -FRAC_PI_2, 0.0),
        _ => return None,
    };
    Some(s.expect("fixed angles are in range"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_contains_the_three_games() {
        let names: Vec<String> = game_catalog().into_iter().map(|g| g.name).collect();
        assert_eq!(names, vec!["pd", "chicken", "bos"]);
    }

    #[test]
    fn lookup_is_case_insensitive_and_total() {
        assert!(game_by_name("PD").is_some());
        assert!(game_by_name("Chicken").is_some());
        assert!(game_by_name("nope").is_none());
    }

    #[test]
    fn payoff_tables_match_the_standard_matrices() {
        let pd = prisoners_dilemma();
        assert_eq!(pd.payoffs.value(0, 2), 5.0); // defect vs stay
        assert_eq!(pd.payoffs.value(1, 2), 0.0);
        let ch = chicken();
        assert_eq!(ch.payoffs.value(0, 3), 0.0); // crash
        let bos = battle_of_the_sexes();
        assert_eq!(bos.payoffs.value(0, 0), 2.0);
        assert_eq!(bos.payoffs.value(1, 0), 1.0);
        assert_eq!(bos.payoffs.value(1, 3), 2.0);
    }

    #[test]
    fn outcome_labels_follow_bit_order() {
        let pd = prisoners_dilemma();
        assert_eq!(pd.outcome_labels, vec!["CC", "CD", "DC", "DD"]);
        let bos = battle_of_the_sexes();
        assert_eq!(bos.outcome_labels, vec!["OO", "OT", "TO", "TT"]);
    }

    #[test]
    fn edge_strategies_exist_for_all_catalog_games() {
        for g in game_catalog() {
            assert!(quantum_edge_strategy(&g.name).is_some(), "{}", g.name);
        }
    }
}
