//! The entangle–move–decohere protocol for quantum games.
//!
//! Two (or three) players share a register prepared by an entangling gate J.
//! Each player applies a local one-qubit strategy unitary, the register is
//! disentangled with J†, and the computational-basis distribution of the
//! result is scored against a classical payoff table. Decoherence — the
//! probabilistic measurement channel from the kernel — can strike twice: once
//! right after entangling and once right after the moves.
//!
//! The pipeline is
//!
//! ```text
//! |0..0><0..0|  --J-->  --noise(p1)-->  --(U_1 ⊗ ... ⊗ U_n)-->
//!               --noise(p2)-->  --J†-->  score
//! ```
//!
//! With both noise probabilities at zero the protocol reproduces the
//! fully-coherent quantum game; with either at one all quantum advantage is
//! destroyed and the classical mixed-strategy game reappears.

pub mod catalog;
pub mod closed_form;
pub mod sampling;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernel::{
    dephasing_channel, dephasing_probability, measurement_channel, sigma_x, DensityMatrix,
    SquareMatrix, C64,
};

/// A player's one-qubit strategy: the rotation angle `theta` in `[0, pi]`
/// and two phases `alpha`, `beta` in `[-pi, pi]`.
///
/// The classical moves sit at `alpha = beta = 0`: `theta = 0` is the
/// identity ("stay"), `theta = pi` the bit-flip ("switch"), and intermediate
/// angles mix the two. The phases have no classical analogue; they are what
/// a quantum player can exploit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrategyParams {
    theta: f64,
    alpha: f64,
    beta: f64,
}

impl StrategyParams {
    pub fn new(theta: f64, alpha: f64, beta: f64) -> Result<Self> {
        check_range("theta", theta, 0.0, PI)?;
        check_range("alpha", alpha, -PI, PI)?;
        check_range("beta", beta, -PI, PI)?;
        Ok(StrategyParams { theta, alpha, beta })
    }

    /// A phase-free strategy: the classical mixture knob alone.
    pub fn classical(theta: f64) -> Result<Self> {
        Self::new(theta, 0.0, 0.0)
    }

    /// The identity move (theta = 0).
    pub fn stay() -> Self {
        StrategyParams {
            theta: 0.0,
            alpha: 0.0,
            beta: 0.0,
        }
    }

    /// The bit-flip move (theta = pi).
    pub fn flip() -> Self {
        StrategyParams {
            theta: PI,
            alpha: 0.0,
            beta: 0.0,
        }
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The other parameterization of the same physical move: shifting both
    /// phases by pi negates the unitary, and a global sign is invisible to
    /// density matrices. Search routines can therefore return either member
    /// of the pair.
    pub fn phase_twin(&self) -> StrategyParams {
        StrategyParams {
            theta: self.theta,
            alpha: wrap_phase(self.alpha + PI),
            beta: wrap_phase(self.beta + PI),
        }
    }

    /// Deterministic representative of the `{self, phase_twin}` pair:
    /// whichever has the smaller `|beta|`, then smaller `|alpha|`, then
    /// smaller signed values. Lets tests and reports compare strategies
    /// without caring which twin a search happened to land on.
    pub fn canonical(&self) -> StrategyParams {
        let twin = self.phase_twin();
        let key = |s: &StrategyParams| (s.beta.abs(), s.alpha.abs(), s.beta, s.alpha);
        if key(&twin) < key(self) {
            twin
        } else {
            *self
        }
    }
}

fn wrap_phase(x: f64) -> f64 {
    // maps [0, 2pi] down into [-pi, pi]
    if x > PI {
        x - 2.0 * PI
    } else {
        x
    }
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !(value >= lo && value <= hi) {
        return Err(Error::OutOfRange {
            name,
            value,
            lo,
            hi,
        });
    }
    Ok(())
}

/// The strategy unitary
///
/// ```text
/// U(theta, alpha, beta) = [  e^{i alpha} cos(theta/2)    i e^{i beta} sin(theta/2) ]
///                         [  i e^{-i beta} sin(theta/2)  e^{-i alpha} cos(theta/2) ]
/// ```
///
/// At `alpha = beta = 0` this is a real rotation mixing stay/flip; `flip()`
/// maps to `i sigma_x`.
pub fn strategy_unitary(params: &StrategyParams) -> SquareMatrix {
    let half = params.theta / 2.0;
    let (sin, cos) = (half.sin(), half.cos());
    let ea = C64::from_polar(1.0, params.alpha);
    let eb = C64::from_polar(1.0, params.beta);
    let i = C64::new(0.0, 1.0);
    SquareMatrix::from_rows(&[
        vec![ea * cos, i * eb * sin],
        vec![i * eb.conj() * sin, ea.conj() * cos],
    ])
}

/// The entangling gate J = (I ⊗ .. ⊗ I + i X ⊗ .. ⊗ X) / sqrt(2) for two or
/// three players. J commutes with every tensor power of classical moves,
/// which is what makes the classical game a faithful subset of the quantum
/// one.
pub fn entangler(players: usize) -> Result<SquareMatrix> {
    if !(2..=3).contains(&players) {
        return Err(Error::PlayerCount {
            players,
            reason: "the entangling gate is defined for two or three players",
        });
    }
    let mut id = SquareMatrix::identity(2);
    let mut xs = sigma_x();
    for _ in 1..players {
        id = id.tensor(&SquareMatrix::identity(2))?;
        xs = xs.tensor(&sigma_x())?;
    }
    let inv_sqrt2 = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i = C64::new(0.0, 1.0);
    Ok(id.add(&xs.scale(i)).scale(inv_sqrt2))
}

/// When and how strongly decoherence strikes the register.
///
/// Both variants describe the same physical channel; `Dephasing` expresses
/// it as a continuous exposure that maps to a measurement probability via
/// `p = 1 - exp(-lambda)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DecoherenceSpec {
    /// Measure every qubit with probability `p1` after entangling and `p2`
    /// after the moves.
    Measurement { p1: f64, p2: f64 },
    /// Dephase with exposures `lambda1` and `lambda2` at the same two points.
    Dephasing { lambda1: f64, lambda2: f64 },
}

impl DecoherenceSpec {
    /// The noiseless protocol.
    pub fn none() -> Self {
        DecoherenceSpec::Measurement { p1: 0.0, p2: 0.0 }
    }

    pub fn measurement(p1: f64, p2: f64) -> Result<Self> {
        check_range("p1", p1, 0.0, 1.0)?;
        check_range("p2", p2, 0.0, 1.0)?;
        Ok(DecoherenceSpec::Measurement { p1, p2 })
    }

    /// Equal strength in both windows; the common case in sweeps.
    pub fn symmetric(p: f64) -> Result<Self> {
        Self::measurement(p, p)
    }

    pub fn dephasing(lambda1: f64, lambda2: f64) -> Result<Self> {
        for (name, l) in [("lambda1", lambda1), ("lambda2", lambda2)] {
            // rejects NaN along with negatives
            if !(0.0..).contains(&l) {
                return Err(Error::OutOfRange {
                    name,
                    value: l,
                    lo: 0.0,
                    hi: f64::INFINITY,
                });
            }
        }
        Ok(DecoherenceSpec::Dephasing { lambda1, lambda2 })
    }

    /// The two windows expressed as measurement probabilities.
    pub fn probabilities(&self) -> (f64, f64) {
        match *self {
            DecoherenceSpec::Measurement { p1, p2 } => (p1, p2),
            DecoherenceSpec::Dephasing { lambda1, lambda2 } => (
                dephasing_probability(lambda1),
                dephasing_probability(lambda2),
            ),
        }
    }

    fn apply(&self, rho: &DensityMatrix, window: usize) -> Result<DensityMatrix> {
        debug_assert!(window < 2);
        match *self {
            DecoherenceSpec::Measurement { p1, p2 } => {
                measurement_channel(rho, if window == 0 { p1 } else { p2 })
            }
            DecoherenceSpec::Dephasing { lambda1, lambda2 } => {
                dephasing_channel(rho, if window == 0 { lambda1 } else { lambda2 })
            }
        }
    }
}

/// Classical payoffs: one value per player per computational-basis outcome.
/// Outcome indices are big-endian in player order (player 0 owns the most
/// significant bit).
#[derive(Clone, Debug, PartialEq)]
pub struct PayoffTable {
    players: usize,
    values: Vec<Vec<f64>>,
}

impl PayoffTable {
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        let players = values.len();
        if !(2..=3).contains(&players) {
            return Err(Error::PlayerCount {
                players,
                reason: "payoff tables cover two or three players",
            });
        }
        let outcomes = 1usize << players;
        for row in &values {
            if row.len() != outcomes {
                return Err(Error::BadPayoffTable {
                    reason: "each player needs one payoff per basis outcome",
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::BadPayoffTable {
                    reason: "payoffs must be finite",
                });
            }
        }
        Ok(PayoffTable { players, values })
    }

    /// Convenience for the common bimatrix case; outcome order is
    /// (00, 01, 10, 11) with the first player's bit leading.
    pub fn two_player(first: [f64; 4], second: [f64; 4]) -> Self {
        PayoffTable::new(vec![first.to_vec(), second.to_vec()])
            .expect("fixed-shape table is always valid")
    }

    #[inline]
    pub fn player_count(&self) -> usize {
        self.players
    }

    #[inline]
    pub fn outcome_count(&self) -> usize {
        1 << self.players
    }

    #[inline]
    pub fn value(&self, player: usize, outcome: usize) -> f64 {
        self.values[player][outcome]
    }
}

/// A named game: payoffs plus human-readable labels for each basis outcome.
#[derive(Clone, Debug)]
pub struct GameDefinition {
    pub name: String,
    pub payoffs: PayoffTable,
    pub outcome_labels: Vec<String>,
}

/// Every intermediate state of one protocol run, for diagnostics and for
/// tests that pin down where decoherence bites.
#[derive(Clone, Debug)]
pub struct PipelineStages {
    pub initial: DensityMatrix,
    pub entangled: DensityMatrix,
    pub after_first_noise: DensityMatrix,
    pub after_moves: DensityMatrix,
    pub after_second_noise: DensityMatrix,
    pub disentangled: DensityMatrix,
}

/// What one run produced: the final state, the basis-outcome distribution
/// and each player's expected payoff.
#[derive(Clone, Debug)]
pub struct GameResult {
    pub final_state: DensityMatrix,
    pub distribution: Vec<f64>,
    pub payoffs: Vec<f64>,
}

/// Run the protocol and keep every stage.
pub fn pipeline_stages(
    strategies: &[StrategyParams],
    noise: &DecoherenceSpec,
) -> Result<PipelineStages> {
    let players = strategies.len();
    let j = entangler(players)?;
    let initial = DensityMatrix::basis_state(players, 0)?;
    let entangled = initial.conjugate_by(&j)?;
    let after_first_noise = noise.apply(&entangled, 0)?;
    let mut moves = strategy_unitary(&strategies[0]);
    for s in &strategies[1..] {
        moves = moves.tensor(&strategy_unitary(s))?;
    }
    let after_moves = after_first_noise.conjugate_by(&moves)?;
    let after_second_noise = noise.apply(&after_moves, 1)?;
    let disentangled = after_second_noise.conjugate_by(&j.adjoint())?;
    Ok(PipelineStages {
        initial,
        entangled,
        after_first_noise,
        after_moves,
        after_second_noise,
        disentangled,
    })
}

/// Run the protocol for `game` and score it.
pub fn play(
    game: &GameDefinition,
    strategies: &[StrategyParams],
    noise: &DecoherenceSpec,
) -> Result<GameResult> {
    if strategies.len() != game.payoffs.player_count() {
        return Err(Error::PlayerCount {
            players: strategies.len(),
            reason: "one strategy per player in the payoff table",
        });
    }
    let stages = pipeline_stages(strategies, noise)?;
    let payoffs = expected_payoffs(&stages.disentangled, &game.payoffs)?;
    let distribution = stages.disentangled.diagonal();
    Ok(GameResult {
        final_state: stages.disentangled,
        distribution,
        payoffs,
    })
}

/// Score a final state against a payoff table: each player's expectation of
/// their payoff over the basis-outcome distribution.
pub fn expected_payoffs(state: &DensityMatrix, table: &PayoffTable) -> Result<Vec<f64>> {
    if state.dim() != table.outcome_count() {
        return Err(Error::DimensionMismatch {
            left: state.dim(),
            right: table.outcome_count(),
        });
    }
    let probs = state.diagonal();
    Ok((0..table.player_count())
        .map(|player| {
            probs
                .iter()
                .enumerate()
                .map(|(outcome, pr)| pr * table.value(player, outcome))
                .sum()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::VALIDATION_TOL;

    fn pd() -> GameDefinition {
        catalog::game_by_name("pd").unwrap()
    }

    #[test]
    fn strategy_ranges_are_enforced() {
        assert!(StrategyParams::new(-0.1, 0.0, 0.0).is_err());
        assert!(StrategyParams::new(PI + 0.1, 0.0, 0.0).is_err());
        assert!(StrategyParams::new(1.0, 4.0, 0.0).is_err());
        assert!(StrategyParams::new(1.0, 0.0, -4.0).is_err());
        assert!(StrategyParams::new(PI, PI, -PI).is_ok());
    }

    #[test]
    fn flip_is_i_sigma_x() {
        let u = strategy_unitary(&StrategyParams::flip());
        let i = C64::new(0.0, 1.0);
        let expect = sigma_x().scale(i);
        assert!(u.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn strategy_unitaries_are_unitary() {
        for &(t, a, b) in &[
            (0.0, 0.0, 0.0),
            (1.0, 0.5, -0.5),
            (PI, PI, -PI),
            (2.0, -1.0, 3.0),
        ] {
            let u = strategy_unitary(&StrategyParams::new(t, a, b).unwrap());
            assert!(u.unitarity_deviation() < 1e-14, "({t},{a},{b})");
        }
    }

    #[test]
    fn phase_twin_negates_the_unitary() {
        let s = StrategyParams::new(1.2, 0.4, -0.9).unwrap();
        let u = strategy_unitary(&s);
        let v = strategy_unitary(&s.phase_twin());
        assert!(u.add(&v).max_abs_diff(&SquareMatrix::zeros(2)) < 1e-14);
    }

    #[test]
    fn canonical_picks_the_small_beta_twin() {
        let s = StrategyParams::new(1.0, -0.5, 3.0).unwrap();
        let c = s.canonical();
        assert!(c.beta().abs() < s.beta().abs());
        // canonicalizing twice is a no-op
        assert_eq!(c.canonical(), c);
    }

    #[test]
    fn entangler_is_unitary_for_both_sizes() {
        for players in [2, 3] {
            let j = entangler(players).unwrap();
            assert_eq!(j.dim(), 1 << players);
            assert!(j.unitarity_deviation() < 1e-14);
        }
        assert!(entangler(1).is_err());
        assert!(entangler(4).is_err());
    }

    #[test]
    fn entangler_commutes_with_classical_moves() {
        // J (U ⊗ U) = (U ⊗ U) J for phase-free strategies
        let j = entangler(2).unwrap();
        let u = strategy_unitary(&StrategyParams::classical(1.1).unwrap());
        let uu = u.tensor(&u).unwrap();
        assert!(j.mul(&uu).max_abs_diff(&uu.mul(&j)) < 1e-14);
    }

    #[test]
    fn coherent_mutual_stay_yields_mutual_reward() {
        let r = play(
            &pd(),
            &[StrategyParams::stay(), StrategyParams::stay()],
            &DecoherenceSpec::none(),
        )
        .unwrap();
        assert!((r.payoffs[0] - 3.0).abs() < 1e-12);
        assert!((r.payoffs[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn coherent_mutual_flip_yields_mutual_punishment() {
        let r = play(
            &pd(),
            &[StrategyParams::flip(), StrategyParams::flip()],
            &DecoherenceSpec::none(),
        )
        .unwrap();
        assert!((r.payoffs[0] - 1.0).abs() < 1e-12);
        assert!((r.payoffs[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_decoherence_of_quarter_turns_averages_the_table() {
        // theta = pi/2 for both players at p1 = p2 = 1: the distribution
        // becomes the product of fair coin flips, so each payoff is the
        // plain average 9/4.
        let s = StrategyParams::classical(PI / 2.0).unwrap();
        let r = play(
            &pd(),
            &[s, s],
            &DecoherenceSpec::measurement(1.0, 1.0).unwrap(),
        )
        .unwrap();
        assert!((r.payoffs[0] - 2.25).abs() < 1e-12);
        assert!((r.payoffs[1] - 2.25).abs() < 1e-12);
    }

    #[test]
    fn scoring_a_known_superposition() {
        // (i|01> - |11>)/sqrt(2): outcomes 01 and 11 each at probability 1/2
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let state = DensityMatrix::from_amplitudes(&[
            C64::new(0.0, 0.0),
            C64::new(0.0, s),
            C64::new(0.0, 0.0),
            C64::new(-s, 0.0),
        ])
        .unwrap();
        let pays = expected_payoffs(&state, &pd().payoffs).unwrap();
        assert!((pays[0] - 0.5).abs() < 1e-12);
        assert!((pays[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn every_stage_stays_a_valid_state() {
        let a = StrategyParams::new(1.3, 0.7, -0.2).unwrap();
        let b = StrategyParams::new(2.6, -1.4, 0.9).unwrap();
        let stages =
            pipeline_stages(&[a, b], &DecoherenceSpec::measurement(0.3, 0.6).unwrap()).unwrap();
        for (label, state) in [
            ("initial", &stages.initial),
            ("entangled", &stages.entangled),
            ("after_first_noise", &stages.after_first_noise),
            ("after_moves", &stages.after_moves),
            ("after_second_noise", &stages.after_second_noise),
            ("disentangled", &stages.disentangled),
        ] {
            assert!(state.validate().is_ok(), "{label} failed validation");
            assert!(
                (state.trace() - 1.0).abs() < VALIDATION_TOL,
                "{label} trace"
            );
        }
    }

    #[test]
    fn dephasing_spec_matches_equivalent_measurement_spec() {
        let a = StrategyParams::new(1.3, 0.7, -0.2).unwrap();
        let b = StrategyParams::new(0.4, 0.1, 0.8).unwrap();
        let lambda: f64 = 0.9;
        let p = 1.0 - (-lambda).exp();
        let via_dephasing = play(
            &pd(),
            &[a, b],
            &DecoherenceSpec::dephasing(lambda, lambda).unwrap(),
        )
        .unwrap();
        let via_measurement =
            play(&pd(), &[a, b], &DecoherenceSpec::measurement(p, p).unwrap()).unwrap();
        for k in 0..2 {
            assert!((via_dephasing.payoffs[k] - via_measurement.payoffs[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn payoff_table_shape_is_checked() {
        assert!(PayoffTable::new(vec![vec![1.0; 4]]).is_err());
        assert!(PayoffTable::new(vec![vec![1.0; 3], vec![1.0; 3]]).is_err());
        assert!(PayoffTable::new(vec![vec![1.0; 4], vec![f64::NAN, 0.0, 0.0, 0.0]]).is_err());
        assert!(PayoffTable::new(vec![vec![1.0; 8]; 3]).is_ok());
    }
}
