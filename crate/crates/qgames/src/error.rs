use thiserror::Error;

/// Everything that can go wrong when constructing states, channels and games.
///
/// Variants carry enough context to report *how far* a value was from
/// acceptable, not just that it was rejected.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {dim} exceeds the supported maximum of {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("length {len} is not a power of two for a qubit register")]
    NotPowerOfTwo { len: usize },

    #[error("state vector norm is {norm}, expected 1 within {tol}")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("matrix is not positive semidefinite (worst principal minor {minor:.3e})")]
    NotPositiveSemidefinite { minor: f64 },

    #[error("Kraus operators do not satisfy completeness (max deviation {deviation:.3e})")]
    IncompleteKraus { deviation: f64 },

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("qubit index {index} out of range for {qubits}-qubit register")]
    QubitOutOfRange { index: usize, qubits: usize },

    #[error("unsupported player count {players} ({reason})")]
    PlayerCount {
        players: usize,
        reason: &'static str,
    },

    #[error("payoff table shape is invalid: {reason}")]
    BadPayoffTable { reason: &'static str },

    #[error("strategy grid is unusable: {reason}")]
    DegenerateGrid { reason: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
