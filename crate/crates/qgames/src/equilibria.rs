//! Best responses and Nash equilibria by exhaustive grid search.
//!
//! Strategy spaces here are small enough (three bounded angles) that honest
//! enumeration over a lattice beats cleverness: every cell is evaluated
//! through the closed-form oracle, the argmax is refined by a few rounds of
//! local step-halving, and equilibria are read off a precomputed payoff
//! matrix with one pass per player. Everything is deterministic: parallel
//! evaluation preserves index order and ties are broken lexicographically by
//! `(theta, alpha, beta)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::ewl::closed_form::closed_form_payoff;
use crate::ewl::{DecoherenceSpec, PayoffTable, StrategyParams};
use crate::exec::map_indexed;

/// How many step-halving rounds follow the coarse sweep.
pub const REFINE_ROUNDS: u32 = 3;

/// Default tolerance when testing the equilibrium inequalities.
pub const DEFAULT_NASH_TOL: f64 = 1e-6;

/// Upper bound on strategy-pair count for equilibrium enumeration; beyond
/// this the payoff matrices stop fitting comfortably in memory.
const MAX_NASH_PAIRS: usize = 4_000_000;

/// Which slice of the strategy space a grid covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    /// All three angles free.
    FullQuantum,
    /// Phase-free strategies only: `alpha = beta = 0`, `theta` free.
    ClassicalOnly,
}

/// A rectangular lattice over the strategy space.
#[derive(Clone, Copy, Debug)]
pub struct StrategyGrid {
    theta_steps: usize,
    alpha_steps: usize,
    beta_steps: usize,
    restriction: Restriction,
}

impl StrategyGrid {
    /// Full three-angle lattice: `theta` over `[0, pi]`, phases over
    /// `[-pi, pi]`, endpoints included.
    pub fn full(theta_steps: usize, alpha_steps: usize, beta_steps: usize) -> Result<Self> {
        if theta_steps < 2 || alpha_steps < 2 || beta_steps < 2 {
            return Err(Error::DegenerateGrid {
                reason: "each axis needs at least two points",
            });
        }
        Ok(StrategyGrid {
            theta_steps,
            alpha_steps,
            beta_steps,
            restriction: Restriction::FullQuantum,
        })
    }

    /// Phase-free lattice over `theta` alone.
    pub fn classical(theta_steps: usize) -> Result<Self> {
        if theta_steps < 2 {
            return Err(Error::DegenerateGrid {
                reason: "theta axis needs at least two points",
            });
        }
        Ok(StrategyGrid {
            theta_steps,
            alpha_steps: 1,
            beta_steps: 1,
            restriction: Restriction::ClassicalOnly,
        })
    }

    /// The default search lattice: 33 theta steps and 17 steps per phase,
    /// fine enough to land on the textbook optima exactly (both pi/2 and
    /// pi/4 lattice points are present).
    pub fn default_full() -> Self {
        Self::full(33, 17, 17).expect("static sizes are valid")
    }

    pub fn restriction(&self) -> Restriction {
        self.restriction
    }

    pub fn len(&self) -> usize {
        match self.restriction {
            Restriction::FullQuantum => self.theta_steps * self.alpha_steps * self.beta_steps,
            Restriction::ClassicalOnly => self.theta_steps,
        }
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least two points
    }

    fn spacing(&self) -> (f64, f64, f64) {
        let dt = PI / (self.theta_steps - 1) as f64;
        let (da, db) = match self.restriction {
            Restriction::FullQuantum => (
                2.0 * PI / (self.alpha_steps - 1) as f64,
                2.0 * PI / (self.beta_steps - 1) as f64,
            ),
            Restriction::ClassicalOnly => (0.0, 0.0),
        };
        (dt, da, db)
    }

    /// All lattice points, theta-major then alpha then beta.
    pub fn points(&self) -> Vec<StrategyParams> {
        let (dt, da, db) = self.spacing();
        let mut out = Vec::with_capacity(self.len());
        for it in 0..self.theta_steps {
            let theta = (it as f64 * dt).min(PI);
            match self.restriction {
                Restriction::ClassicalOnly => {
                    out.push(StrategyParams::classical(theta).expect("theta in range"));
                }
                Restriction::FullQuantum => {
                    for ia in 0..self.alpha_steps {
                        let alpha = (-PI + ia as f64 * da).clamp(-PI, PI);
                        for ib in 0..self.beta_steps {
                            let beta = (-PI + ib as f64 * db).clamp(-PI, PI);
                            out.push(
                                StrategyParams::new(theta, alpha, beta).expect("point in range"),
                            );
                        }
                    }
                }
            }
        }
        out
    }
}

/// Result of a best-response search.
#[derive(Clone, Debug)]
pub struct ResponseReport {
    /// The winning lattice point after refinement.
    pub best: StrategyParams,
    /// Objective value at `best`.
    pub value: f64,
    /// Objective at every coarse lattice point, aligned with
    /// [`StrategyGrid::points`].
    pub grid_values: Vec<f64>,
}

fn lex(s: &StrategyParams) -> (f64, f64, f64) {
    (s.theta(), s.alpha(), s.beta())
}

/// Strictly-better-or-tie-broken comparison. Exact float equality is
/// intentional: two cells either produce the same bits or one genuinely
/// wins, and the lexicographic fallback makes the argmax total.
fn improves(value: f64, cand: &StrategyParams, best_value: f64, best: &StrategyParams) -> bool {
    value > best_value || (value == best_value && lex(cand) < lex(best))
}

fn argmax(points: &[StrategyParams], values: &[f64]) -> (StrategyParams, f64) {
    let mut best = points[0];
    let mut best_value = values[0];
    for (p, &v) in points.iter().zip(values).skip(1) {
        if improves(v, p, best_value, &best) {
            best = *p;
            best_value = v;
        }
    }
    (best, best_value)
}

fn axis_offsets(center: f64, h: f64, lo: f64, hi: f64) -> Vec<f64> {
    if h == 0.0 {
        return vec![center];
    }
    vec![
        (center - h).clamp(lo, hi),
        center,
        (center + h).clamp(lo, hi),
    ]
}

fn refine<F>(
    objective: &F,
    grid: &StrategyGrid,
    mut best: StrategyParams,
    mut best_value: f64,
) -> Result<(StrategyParams, f64)>
where
    F: Fn(&StrategyParams) -> Result<f64>,
{
    let (dt, da, db) = grid.spacing();
    for round in 1..=REFINE_ROUNDS {
        let scale = 0.5f64.powi(round as i32);
        let thetas = axis_offsets(best.theta(), dt * scale, 0.0, PI);
        let alphas = axis_offsets(best.alpha(), da * scale, -PI, PI);
        let betas = axis_offsets(best.beta(), db * scale, -PI, PI);
        for &t in &thetas {
            for &a in &alphas {
                for &b in &betas {
                    let cand = StrategyParams::new(t, a, b)?;
                    let v = objective(&cand)?;
                    if improves(v, &cand, best_value, &best) {
                        best = cand;
                        best_value = v;
                    }
                }
            }
        }
    }
    Ok((best, best_value))
}

fn search<F>(objective: F, grid: &StrategyGrid) -> Result<ResponseReport>
where
    F: Fn(&StrategyParams) -> Result<f64> + Sync + Send,
{
    let points = grid.points();
    let values: Vec<Result<f64>> = map_indexed(points.len(), |i| objective(&points[i]));
    let values: Result<Vec<f64>> = values.into_iter().collect();
    let values = values?;
    let (coarse_best, coarse_value) = argmax(&points, &values);
    let (best, value) = refine(&objective, grid, coarse_best, coarse_value)?;
    Ok(ResponseReport {
        best,
        value,
        grid_values: values,
    })
}

/// `responder`'s payoff-maximizing reply to a fixed opponent strategy.
/// `responder` is 0 (first mover) or 1 (second mover).
pub fn best_response(
    table: &PayoffTable,
    responder: usize,
    opponent: &StrategyParams,
    noise: &DecoherenceSpec,
    grid: &StrategyGrid,
) -> Result<ResponseReport> {
    let opponent = *opponent;
    search(
        move |cand: &StrategyParams| {
            if responder == 0 {
                closed_form_payoff(0, cand, &opponent, noise, table)
            } else {
                closed_form_payoff(1, &opponent, cand, noise, table)
            }
        },
        grid,
    )
}

/// Best reply when the responder only knows the opponent is phase-free, not
/// which rotation they picked: maximizes the *mean* payoff over a uniform
/// lattice of `opponent_thetas` classical rotations.
pub fn best_response_uninformed(
    table: &PayoffTable,
    responder: usize,
    noise: &DecoherenceSpec,
    grid: &StrategyGrid,
    opponent_thetas: usize,
) -> Result<ResponseReport> {
    if opponent_thetas < 2 {
        return Err(Error::DegenerateGrid {
            reason: "opponent theta lattice needs at least two points",
        });
    }
    let thetas: Vec<f64> = (0..opponent_thetas)
        .map(|i| i as f64 * PI / (opponent_thetas - 1) as f64)
        .collect();
    search(
        move |cand: &StrategyParams| {
            let mut acc = 0.0;
            for &t in &thetas {
                let opp = StrategyParams::classical(t.min(PI))?;
                acc += if responder == 0 {
                    closed_form_payoff(0, cand, &opp, noise, table)?
                } else {
                    closed_form_payoff(1, &opp, cand, noise, table)?
                };
            }
            Ok(acc / thetas.len() as f64)
        },
        grid,
    )
}

/// A strategy pair where neither player can gain more than `tol` by
/// deviating within the lattice.
#[derive(Clone, Debug)]
pub struct EquilibriumProfile {
    pub first: StrategyParams,
    pub second: StrategyParams,
    pub payoffs: [f64; 2],
}

/// Enumerate lattice Nash equilibria of the simultaneous game: precompute
/// both payoff matrices, take column/row maxima, and keep every pair whose
/// payoffs are within `tol` of the respective best replies. Output order is
/// row-major over (first, second) lattice indices, hence deterministic.
pub fn nash_equilibria(
    table: &PayoffTable,
    noise: &DecoherenceSpec,
    grid: &StrategyGrid,
    tol: f64,
) -> Result<Vec<EquilibriumProfile>> {
    let points = grid.points();
    let n = points.len();
    if n.saturating_mul(n) > MAX_NASH_PAIRS {
        return Err(Error::DegenerateGrid {
            reason: "grid too large for pairwise equilibrium enumeration",
        });
    }
    let pay: Vec<Result<(f64, f64)>> = map_indexed(n * n, |k| {
        let (i, j) = (k / n, k % n);
        let a = closed_form_payoff(0, &points[i], &points[j], noise, table)?;
        let b = closed_form_payoff(1, &points[i], &points[j], noise, table)?;
        Ok((a, b))
    });
    let pay: Result<Vec<(f64, f64)>> = pay.into_iter().collect();
    let pay = pay?;

    // best_a[j]: the most the first player can get against second-strategy j
    let mut best_a = vec![f64::NEG_INFINITY; n];
    let mut best_b = vec![f64::NEG_INFINITY; n];
    for i in 0..n {
        for j in 0..n {
            let (a, b) = pay[i * n + j];
            if a > best_a[j] {
                best_a[j] = a;
            }
            if b > best_b[i] {
                best_b[i] = b;
            }
        }
    }

    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (a, b) = pay[i * n + j];
            if a >= best_a[j] - tol && b >= best_b[i] - tol {
                out.push(EquilibriumProfile {
                    first: points[i],
                    second: points[j],
                    payoffs: [a, b],
                });
            }
        }
    }
    Ok(out)
}
