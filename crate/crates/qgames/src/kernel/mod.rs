//! Small dense linear-algebra core: matrices, validated density operators
//! and decoherence channels for registers of up to three qubits.

pub mod channels;
pub mod density;
pub mod matrix;

pub use channels::{
    dephasing_channel, dephasing_probability, lift_to_qubit, measurement_channel,
    measurement_kraus, KrausSet,
};
pub use density::DensityMatrix;
pub use matrix::{hadamard, sigma_x, SquareMatrix, C64, MAX_DIM};

/// Tolerance for every validity check in the kernel: normalization,
/// unitarity, Hermiticity, trace and positivity. One knob, deliberately —
/// differing per-check tolerances invite inconsistent accept/reject
/// behaviour between paths that should agree.
pub const VALIDATION_TOL: f64 = 1e-9;
