//! Density-matrix simulation of quantum games under decoherence.
//!
//! The crate answers one family of questions: *how much of a quantum
//! player's advantage survives noise?* It provides:
//!
//! * [`kernel`] — small dense complex matrices, validated density operators
//!   and measurement/dephasing channels for up to three qubits;
//! * [`ewl`] — the entangle–move–disentangle protocol that embeds a
//!   classical bimatrix game into a quantum circuit, with a closed-form
//!   payoff oracle that independently reproduces the full pipeline;
//! * [`equilibria`] — deterministic grid search for best responses and Nash
//!   equilibria over the strategy angles;
//! * [`pennyflip`] — the quantum/classical coin duel, whose win probability
//!   degrades linearly from certainty to a fair coin;
//! * [`truel`] — a three-player sequential shootout where the measurement
//!   probability interpolates between a coherent quantum game and the
//!   classical one;
//! * [`exec`] — the parallel/sequential execution switch behind the
//!   `parallel` feature (on by default).
//!
//! Determinism is a design rule: no global RNG, order-stable parallel
//! reductions, and explicit tie-breaking everywhere a search could be
//! ambiguous. Two builds of the same sweep produce identical bytes.

pub mod equilibria;
pub mod error;
pub mod ewl;
pub mod exec;
pub mod kernel;
pub mod pennyflip;
pub mod truel;

pub use error::{Error, Result};
