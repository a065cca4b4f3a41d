//! A one-round three-player shootout on a quantum register.
//!
//! Three marksmen — player 0, player 1, player 2, moving in that order —
//! each get one turn: do nothing, or fire at an opponent. "Alive" is a qubit
//! (|1> alive, |0> dead); the whole battlefield is a three-qubit register
//! starting at |111>. A shot by a player with failure probability `f`
//! rotates the target's qubit partway toward |0>, killing with probability
//! `1 - f`, and is controlled on the shooter's own qubit: a dead shooter
//! leaves the register untouched. Without the control a player in a
//! superposition of dead and alive would still fire at full strength, which
//! erases the deterrence that makes the game interesting.
//!
//! After every turn, decoherence: with probability `p` the *whole register*
//! is measured. A measurement publishes everyone's life state — subsequent
//! players condition on it — and forces anyone found dead to hold fire. With
//! `p = 1` the game degenerates to the classical sequential truel; with
//! `p = 0` the register stays coherent and nobody learns anything.
//!
//! Players are greedy and rational: each maximizes their own expected
//! payoff by backward induction, where the payoff of a basis outcome splits
//! one point equally among survivors (nobody scores if everybody dies).
//! Candidate actions are ordered "hold fire, then targets by marksmanship
//! (best shot first), later mover first on ties", and a challenger must beat
//! the incumbent by more than [`TIE`] — so ties resolve toward holding fire
//! and toward the more dangerous target.

use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::kernel::{DensityMatrix, SquareMatrix, C64};

/// Margin a candidate action must win by before a player deviates from an
/// earlier-listed action.
pub const TIE: f64 = 1e-9;

/// Probability mass below which a measured branch is pruned.
const PRUNE: f64 = 1e-15;

/// Number of players; move order is 0, 1, 2.
pub const PLAYERS: usize = 3;

/// What a player may do on their turn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruelAction {
    HoldFire,
    Target(usize),
}

/// One round of the shootout: per-player failure probabilities and the
/// post-move measurement probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruelConfig {
    failure: [f64; 3],
    p: f64,
}

impl TruelConfig {
    pub fn new(failure: [f64; 3], p: f64) -> Result<Self> {
        for (k, &f) in failure.iter().enumerate() {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::OutOfRange {
                    name: ["failure[0]", "failure[1]", "failure[2]"][k],
                    value: f,
                    lo: 0.0,
                    hi: 1.0,
                });
            }
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange {
                name: "p",
                value: p,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(TruelConfig { failure, p })
    }

    pub fn failure_probabilities(&self) -> [f64; 3] {
        self.failure
    }

    pub fn measurement_probability(&self) -> f64 {
        self.p
    }
}

/// Search-tree statistics from one evaluation: how many coherent
/// continuations and how many measured (collapsed) continuations the
/// backward induction explored.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BranchSummary {
    pub unmeasured: u64,
    pub measured: u64,
}

/// Outcome of one evaluated round.
#[derive(Clone, Debug)]
pub struct TruelOutcomeReport {
    /// Expected payoff per player under rational play.
    pub expected_payoffs: [f64; 3],
    /// Probability that the round ends with every player dead.
    pub all_dead_probability: f64,
    /// Size of the explored game tree.
    pub branches: BranchSummary,
}

/// The single-qubit shot rotation for a shooter with failure probability
/// `f`: a rotation by `theta = 2 asin(sqrt(1 - f))`, taking an alive target
/// to dead with probability `1 - f`. At `f = 1` it is the identity; at
/// `f = 0` it maps alive to dead outright.
pub fn shot_operator(failure: f64) -> Result<SquareMatrix> {
    if !(0.0..=1.0).contains(&failure) {
        return Err(Error::OutOfRange {
            name: "failure",
            value: failure,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let half = (1.0 - failure).sqrt().asin(); // theta / 2
    let c = C64::new(half.cos(), 0.0);
    let is = C64::new(0.0, half.sin());
    Ok(SquareMatrix::from_rows(&[vec![c, is], vec![is, c]]))
}

/// The full-register shot: the rotation on `target`'s qubit, controlled on
/// `shooter`'s qubit being alive, identity elsewhere. Block-diagonal in the
/// shooter's basis, hence unitary.
pub fn controlled_shot(failure: f64, shooter: usize, target: usize) -> Result<SquareMatrix> {
    if shooter >= PLAYERS || target >= PLAYERS || shooter == target {
        return Err(Error::QubitOutOfRange {
            index: shooter.max(target),
            qubits: PLAYERS,
        });
    }
    let shot = shot_operator(failure)?;
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let p0 = SquareMatrix::from_rows(&[vec![one, zero], vec![zero, zero]]);
    let p1 = SquareMatrix::from_rows(&[vec![zero, zero], vec![zero, one]]);
    let factor = |qubit: usize, live: bool| -> SquareMatrix {
        if qubit == shooter {
            if live {
                p1.clone()
            } else {
                p0.clone()
            }
        } else if qubit == target && live {
            shot.clone()
        } else {
            SquareMatrix::identity(2)
        }
    };
    let mut live_branch = factor(0, true);
    let mut dead_branch = factor(0, false);
    for q in 1..PLAYERS {
        live_branch = live_branch.tensor(&factor(q, true))?;
        dead_branch = dead_branch.tensor(&factor(q, false))?;
    }
    Ok(live_branch.add(&dead_branch))
}

/// Payoff of basis outcome `state` (player 0 owns the most significant
/// bit): one point split equally among survivors.
fn outcome_payoffs(state: usize) -> [f64; 3] {
    let bits = [(state >> 2) & 1, (state >> 1) & 1, state & 1];
    let survivors: usize = bits.iter().sum();
    if survivors == 0 {
        return [0.0; 3];
    }
    let share = 1.0 / survivors as f64;
    [
        bits[0] as f64 * share,
        bits[1] as f64 * share,
        bits[2] as f64 * share,
    ]
}

#[derive(Clone, Copy)]
struct NodeValue {
    payoffs: [f64; 3],
    all_dead: f64,
}

struct Search {
    failure: [f64; 3],
    p: f64,
    branches: BranchSummary,
}

impl Search {
    /// Candidate actions for `mover`, in tie-break order: hold fire first,
    /// then opponents sorted by (their failure probability ascending, later
    /// mover first). A player everyone knows is dead can only hold fire.
    /// Known-dead *targets* stay listed: the shot is a rotation of whatever
    /// state the target is in, so firing at a corpse partially revives it —
    /// occasionally a rational (if macabre) way to redirect the next
    /// player's aggression.
    fn candidates(&self, mover: usize, known_dead: &[bool; 3]) -> Vec<TruelAction> {
        if known_dead[mover] {
            return vec![TruelAction::HoldFire];
        }
        let mut targets: Vec<usize> = (0..PLAYERS).filter(|&t| t != mover).collect();
        targets.sort_by(|&x, &y| {
            self.failure[x]
                .partial_cmp(&self.failure[y])
                .expect("failure probabilities are finite")
                .then(y.cmp(&x))
        });
        let mut out = vec![TruelAction::HoldFire];
        out.extend(targets.into_iter().map(TruelAction::Target));
        out
    }

    fn terminal(&self, rho: &DensityMatrix) -> NodeValue {
        let d = rho.diagonal();
        let mut payoffs = [0.0; 3];
        for (state, pr) in d.iter().enumerate() {
            let v = outcome_payoffs(state);
            for k in 0..3 {
                payoffs[k] += pr * v[k];
            }
        }
        NodeValue {
            payoffs,
            all_dead: d[0],
        }
    }

    /// Best play from `mover`'s turn onward, given the register state and
    /// the public knowledge of who is dead.
    fn node(
        &mut self,
        mover: usize,
        rho: &DensityMatrix,
        known_dead: &[bool; 3],
    ) -> Result<NodeValue> {
        if mover == PLAYERS {
            return Ok(self.terminal(rho));
        }
        let mut best: Option<NodeValue> = None;
        for action in self.candidates(mover, known_dead) {
            let value = self.resolve(mover, action, rho, known_dead)?;
            let improves = match &best {
                None => true,
                Some(b) => value.payoffs[mover] > b.payoffs[mover] + TIE,
            };
            if improves {
                best = Some(value);
            }
        }
        Ok(best.expect("hold-fire is always a candidate"))
    }

    /// Apply `action`, then the possible measurement, then the next turn.
    fn resolve(
        &mut self,
        mover: usize,
        action: TruelAction,
        rho: &DensityMatrix,
        known_dead: &[bool; 3],
    ) -> Result<NodeValue> {
        let (next_rho, next_known);
        match action {
            TruelAction::HoldFire => {
                next_rho = rho.clone();
                next_known = *known_dead;
            }
            TruelAction::Target(target) => {
                let op = controlled_shot(self.failure[mover], mover, target)?;
                next_rho = rho.conjugate_by(&op)?;
                let mut kd = *known_dead;
                if self.failure[mover] < 1.0 {
                    // the target's fate is now uncertain to everyone
                    kd[target] = false;
                }
                next_known = kd;
            }
        }
        let mut total = NodeValue {
            payoffs: [0.0; 3],
            all_dead: 0.0,
        };
        if 1.0 - self.p > PRUNE {
            self.branches.unmeasured += 1;
            let v = self.node(mover + 1, &next_rho, &next_known)?;
            let w = 1.0 - self.p;
            for k in 0..3 {
                total.payoffs[k] += w * v.payoffs[k];
            }
            total.all_dead += w * v.all_dead;
        }
        if self.p > PRUNE {
            let d = next_rho.diagonal();
            for (state, pr) in d.iter().enumerate() {
                let w = self.p * pr;
                if w <= PRUNE {
                    continue;
                }
                self.branches.measured += 1;
                let collapsed = DensityMatrix::basis_state(PLAYERS, state)?;
                // a measurement makes every life state public
                let kd = [(state >> 2) & 1 == 0, (state >> 1) & 1 == 0, state & 1 == 0];
                let v = self.node(mover + 1, &collapsed, &kd)?;
                for k in 0..3 {
                    total.payoffs[k] += w * v.payoffs[k];
                }
                total.all_dead += w * v.all_dead;
            }
        }
        Ok(total)
    }
}

/// Evaluate one round in which player 0 takes `first_action` and the later
/// players respond rationally by backward induction.
pub fn evaluate(config: &TruelConfig, first_action: TruelAction) -> Result<TruelOutcomeReport> {
    if let TruelAction::Target(t) = first_action {
        if t == 0 || t >= PLAYERS {
            return Err(Error::QubitOutOfRange {
                index: t,
                qubits: PLAYERS,
            });
        }
    }
    let mut search = Search {
        failure: config.failure,
        p: config.p,
        branches: BranchSummary::default(),
    };
    let all_alive = DensityMatrix::basis_state(PLAYERS, 0b111)?;
    let value = search.resolve(0, first_action, &all_alive, &[false; 3])?;
    Ok(TruelOutcomeReport {
        expected_payoffs: value.payoffs,
        all_dead_probability: value.all_dead,
        branches: search.branches,
    })
}

/// One cell of a boundary scan: player 0's expected payoff for their two
/// interesting openings at failure probabilities `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryRow {
    /// Player 0's failure probability.
    pub a: f64,
    /// Player 1's failure probability.
    pub b: f64,
    /// Player 0's payoff when holding fire.
    pub payoff_nothing: f64,
    /// Player 0's payoff when firing at player 2.
    pub payoff_target: f64,
}

/// Sweep an `n x n` lattice of `(a, b)` in `[0,1]^2` at fixed measurement
/// probability `p` and fixed player-2 failure probability, evaluating both
/// of player 0's openings. Row order: `a`-major, then `b` ascending.
pub fn boundary_scan(p: f64, n: usize, charles_failure: f64) -> Result<Vec<BoundaryRow>> {
    if n < 3 {
        return Err(Error::DegenerateGrid {
            reason: "boundary scans need at least a 3x3 lattice",
        });
    }
    let cells: Vec<Result<BoundaryRow>> = map_indexed(n * n, |k| {
        let (ai, bi) = (k / n, k % n);
        let a = ai as f64 / (n - 1) as f64;
        let b = bi as f64 / (n - 1) as f64;
        let config = TruelConfig::new([a, b, charles_failure], p)?;
        let nothing = evaluate(&config, TruelAction::HoldFire)?;
        let target = evaluate(&config, TruelAction::Target(2))?;
        Ok(BoundaryRow {
            a,
            b,
            payoff_nothing: nothing.expected_payoffs[0],
            payoff_target: target.expected_payoffs[0],
        })
    });
    cells.into_iter().collect()
}

/// Extract the hold-fire/open-fire boundary from a scan: per column of
/// fixed `a`, the topmost `b` where the preferred opening switches from
/// holding fire (below) to firing at player 2 (above).
///
/// Classification folds ties into hold-fire (`payoff_nothing >=
/// payoff_target - TIE`), mirroring the tie rule of the players themselves.
/// The crossing is linearly interpolated when the lower cell strictly
/// prefers holding fire; when the lower cell is itself a tie the plateau
/// edge is reported as-is. Columns with no switch (e.g. a player-0 shot
/// that cannot hit) produce no point.
pub fn boundary_points(rows: &[BoundaryRow]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let a = rows[start].a;
        let mut end = start;
        while end < rows.len() && rows[end].a == a {
            end += 1;
        }
        let col = &rows[start..end];
        if let Some(b) = column_crossing(col) {
            out.push((a, b));
        }
        start = end;
    }
    out
}

fn column_crossing(col: &[BoundaryRow]) -> Option<f64> {
    let diff: Vec<f64> = col
        .iter()
        .map(|r| r.payoff_nothing - r.payoff_target)
        .collect();
    let fires = |d: f64| d < -TIE;
    for k in (0..col.len().saturating_sub(1)).rev() {
        if !fires(diff[k]) && fires(diff[k + 1]) {
            let (d0, d1) = (diff[k], diff[k + 1]);
            if d0 > TIE {
                let t = d0 / (d0 - d1);
                return Some(col[k].b + (col[k + 1].b - col[k].b) * t);
            }
            return Some(col[k].b);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn payoffs(a: f64, b: f64, c: f64, p: f64, action: TruelAction) -> [f64; 3] {
        evaluate(&TruelConfig::new([a, b, c], p).unwrap(), action)
            .unwrap()
            .expected_payoffs
    }

    #[test]
    fn shot_operator_limits() {
        // a sure shot maps alive straight to dead
        let sure = shot_operator(0.0).unwrap();
        assert!(sure.get(0, 0).norm() < 1e-12);
        assert!((sure.get(0, 1).norm() - 1.0).abs() < 1e-12);
        // a hopeless shot is the identity
        let dud = shot_operator(1.0).unwrap();
        assert!(dud.max_abs_diff(&SquareMatrix::identity(2)) < 1e-12);
        for f in [0.0, 0.3, 0.8, 1.0] {
            assert!(shot_operator(f).unwrap().unitarity_deviation() < 1e-12);
        }
    }

    #[test]
    fn controlled_shot_is_unitary_and_inert_for_dead_shooters() {
        let op = controlled_shot(0.25, 1, 2).unwrap();
        assert!(op.unitarity_deviation() < 1e-12);
        // shooter (player 1) dead: |101> must be untouched
        let rho = DensityMatrix::basis_state(3, 0b101).unwrap();
        let out = rho.conjugate_by(&op).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        // shooter alive, sure shot: |111> -> |110>
        let sure = controlled_shot(0.0, 1, 2).unwrap();
        let rho = DensityMatrix::basis_state(3, 0b111).unwrap();
        let out = rho.conjugate_by(&sure).unwrap();
        assert_eq!(
            out.diagonal().iter().position(|&x| (x - 1.0).abs() < 1e-12),
            Some(0b110)
        );
    }

    #[test]
    fn crack_shots_in_the_classical_limit_favour_holding_fire() {
        // all three never miss, p = 1: holding fire lets player 1 eliminate
        // player 2 and split the pot; opening fire paints a target on
        // player 0's back
        let hold = payoffs(0.0, 0.0, 0.0, 1.0, TruelAction::HoldFire);
        let fire = payoffs(0.0, 0.0, 0.0, 1.0, TruelAction::Target(2));
        assert!((hold[0] - 0.5).abs() < 1e-12);
        assert!((hold[1] - 0.5).abs() < 1e-12);
        assert!(hold[2].abs() < 1e-12);
        assert!(fire[0].abs() < 1e-12);
        assert!((fire[1] - 1.0).abs() < 1e-12);
        assert!(fire[2].abs() < 1e-12);
    }

    #[test]
    fn payoffs_conserve_the_single_point_when_someone_survives() {
        for &(a, b, c, p) in &[
            (0.3, 0.6, 0.2, 0.37),
            (0.0, 0.5, 0.0, 1.0),
            (0.9, 0.1, 0.4, 0.0),
        ] {
            for action in [TruelAction::HoldFire, TruelAction::Target(2)] {
                let report = evaluate(&TruelConfig::new([a, b, c], p).unwrap(), action).unwrap();
                let total: f64 = report.expected_payoffs.iter().sum();
                let expect = 1.0 - report.all_dead_probability;
                assert!(
                    (total - expect).abs() < 1e-9,
                    "({a},{b},{c},{p},{action:?}): sum {total} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn hopeless_marksman_gains_nothing_by_firing() {
        // a = 1: player 0's shot is the identity, so both openings must
        // produce identical values
        for &(b, p) in &[(0.0, 0.0), (0.5, 0.5), (1.0, 1.0), (0.3, 1.0)] {
            let hold = payoffs(1.0, b, 0.0, p, TruelAction::HoldFire);
            let fire = payoffs(1.0, b, 0.0, p, TruelAction::Target(2));
            for k in 0..3 {
                assert!((hold[k] - fire[k]).abs() < 1e-12, "b={b} p={p} player {k}");
            }
        }
    }

    #[test]
    fn branch_counters_reflect_the_noise_regime() {
        let coherent = evaluate(
            &TruelConfig::new([0.3, 0.6, 0.1], 0.0).unwrap(),
            TruelAction::Target(2),
        )
        .unwrap();
        assert_eq!(coherent.branches.measured, 0);
        assert!(coherent.branches.unmeasured > 0);

        let classical = evaluate(
            &TruelConfig::new([0.3, 0.6, 0.1], 1.0).unwrap(),
            TruelAction::Target(2),
        )
        .unwrap();
        assert_eq!(classical.branches.unmeasured, 0);
        assert!(classical.branches.measured > 0);

        let mixed = evaluate(
            &TruelConfig::new([0.3, 0.6, 0.1], 0.5).unwrap(),
            TruelAction::Target(2),
        )
        .unwrap();
        assert!(mixed.branches.measured > 0 && mixed.branches.unmeasured > 0);
    }

    #[test]
    fn classical_boundary_matches_the_wedge_algebra() {
        // at p = 1 and a perfect player 2, the hold-fire advantage is
        // (1-a)(1-b)/2 below the diagonal and -(1-a)b/2 above it, so the
        // interpolated crossing on an m-point lattice is a + (1-a)/(m).
        let n = 11;
        let rows = boundary_scan(1.0, n, 0.0).unwrap();
        let pts = boundary_points(&rows);
        assert_eq!(pts.len(), n - 1, "the a = 1 column has no crossing");
        for &(a, b) in &pts {
            let expect = a + (1.0 - a) / n as f64;
            assert!((b - expect).abs() < 1e-9, "a={a}: b={b} vs {expect}");
        }
    }

    #[test]
    fn crossing_extraction_interpolates_and_respects_plateaus() {
        let mk = |b: f64, d: f64| BoundaryRow {
            a: 0.0,
            b,
            payoff_nothing: d,
            payoff_target: 0.0,
        };
        // strict crossing between b=1/3 (d=+0.25) and b=2/3 (d=-0.25)
        let col = [
            mk(0.0, 0.5),
            mk(1.0 / 3.0, 0.25),
            mk(2.0 / 3.0, -0.25),
            mk(1.0, -0.5),
        ];
        let pts = boundary_points(&col);
        assert_eq!(pts.len(), 1);
        assert!((pts[0].1 - 0.5).abs() < 1e-12);
        // tie plateau below the switch: report the plateau edge itself
        let col = [mk(0.0, 0.0), mk(0.5, 0.0), mk(1.0, -0.2)];
        let pts = boundary_points(&col);
        assert_eq!(pts, vec![(0.0, 0.5)]);
        // no switch anywhere
        let col = [mk(0.0, 0.1), mk(0.5, 0.2), mk(1.0, 0.3)];
        assert!(boundary_points(&col).is_empty());
    }

    #[test]
    fn scan_rejects_degenerate_lattices_and_bad_inputs() {
        assert!(boundary_scan(0.5, 2, 0.0).is_err());
        assert!(TruelConfig::new([0.0, 0.0, 1.5], 0.5).is_err());
        assert!(TruelConfig::new([0.0, 0.0, 0.0], -0.1).is_err());
        let cfg = TruelConfig::new([0.0; 3], 0.5).unwrap();
        assert!(evaluate(&cfg, TruelAction::Target(0)).is_err());
        assert!(evaluate(&cfg, TruelAction::Target(7)).is_err());
    }

    #[test]
    fn coherent_round_is_deterministic_across_calls() {
        let cfg = TruelConfig::new([0.25, 0.5, 0.0], 0.0).unwrap();
        let one = evaluate(&cfg, TruelAction::Target(2)).unwrap();
        let two = evaluate(&cfg, TruelAction::Target(2)).unwrap();
        assert_eq!(one.expected_payoffs, two.expected_payoffs);
        assert_eq!(one.branches, two.branches);
    }
}
