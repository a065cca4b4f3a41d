//! Decoherence channels in Kraus form.
//!
//! The workhorse is the measurement channel: with probability `p` a qubit is
//! measured in the computational basis (and the result discarded), with
//! probability `1-p` it is left alone. Applied to every qubit of a register
//! this multiplies each off-diagonal element by `(1-p)^h` where `h` is the
//! Hamming distance between the element's row and column indices — diagonals
//! survive untouched, coherences decay geometrically with how many qubits
//! they span. A continuous-time dephasing variant maps an exposure rate to
//! the same channel.

use super::density::DensityMatrix;
use super::matrix::{SquareMatrix, C64};
use super::VALIDATION_TOL;
use crate::error::{Error, Result};

/// A trace-preserving set of Kraus operators.
#[derive(Clone, Debug)]
pub struct KrausSet {
    ops: Vec<SquareMatrix>,
}

impl KrausSet {
    /// Validates the completeness relation: the operators must satisfy
    /// sum_j E_j† E_j = I within tolerance, otherwise applying the set would
    /// leak or create probability.
    pub fn new(ops: Vec<SquareMatrix>) -> Result<Self> {
        let dim = match ops.first() {
            Some(op) => op.dim(),
            None => {
                return Err(Error::IncompleteKraus { deviation: 1.0 });
            }
        };
        let mut sum = SquareMatrix::zeros(dim);
        for op in &ops {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: op.dim(),
                    right: dim,
                });
            }
            sum = sum.add(&op.adjoint().mul(op));
        }
        let deviation = sum.max_abs_diff(&SquareMatrix::identity(dim));
        if deviation > VALIDATION_TOL {
            return Err(Error::IncompleteKraus { deviation });
        }
        Ok(KrausSet { ops })
    }

    pub fn ops(&self) -> &[SquareMatrix] {
        &self.ops
    }

    /// rho -> sum_j E_j rho E_j†.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let dim = self.ops[0].dim();
        if dim != rho.dim() {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: rho.dim(),
            });
        }
        let mut out = SquareMatrix::zeros(dim);
        for op in &self.ops {
            out = out.add(&op.mul(rho.matrix()).mul(&op.adjoint()));
        }
        Ok(DensityMatrix::trusted(rho.qubit_count(), out))
    }
}

/// Single-qubit measurement channel: {sqrt(p)|0><0|, sqrt(p)|1><1|,
/// sqrt(1-p) I}.
pub fn measurement_kraus(p: f64) -> Result<KrausSet> {
    check_probability("p", p)?;
    let zero = C64::new(0.0, 0.0);
    let sp = C64::new(p.sqrt(), 0.0);
    let sq = C64::new((1.0 - p).sqrt(), 0.0);
    let p0 = SquareMatrix::from_rows(&[vec![sp, zero], vec![zero, zero]]);
    let p1 = SquareMatrix::from_rows(&[vec![zero, zero], vec![zero, sp]]);
    let id = SquareMatrix::identity(2).scale(sq);
    KrausSet::new(vec![p0, p1, id])
}

/// Embed a single-qubit operator into an n-qubit register as
/// I ⊗ ... ⊗ op ⊗ ... ⊗ I. Qubit 0 is the leftmost tensor factor (the most
/// significant bit of a basis index).
pub fn lift_to_qubit(op: &SquareMatrix, qubit: usize, qubits: usize) -> Result<SquareMatrix> {
    if op.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: op.dim(),
            right: 2,
        });
    }
    if qubit >= qubits {
        return Err(Error::QubitOutOfRange {
            index: qubit,
            qubits,
        });
    }
    let mut acc = SquareMatrix::identity(1);
    for k in 0..qubits {
        let factor = if k == qubit {
            op.clone()
        } else {
            SquareMatrix::identity(2)
        };
        acc = acc.tensor(&factor)?;
    }
    Ok(acc)
}

/// Apply the probability-`p` measurement channel to every qubit of the
/// register in sequence. The per-qubit channels commute, so the order is
/// irrelevant; the composite effect is the `(1-p)^hamming` law described in
/// the module docs.
pub fn measurement_channel(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    check_probability("p", p)?;
    let single = measurement_kraus(p)?;
    let qubits = rho.qubit_count();
    let mut state = rho.clone();
    for q in 0..qubits {
        let lifted: Result<Vec<SquareMatrix>> = single
            .ops()
            .iter()
            .map(|op| lift_to_qubit(op, q, qubits))
            .collect();
        state = KrausSet::new(lifted?)?.apply(&state)?;
    }
    Ok(state)
}

/// Continuous phase damping at exposure `lambda >= 0`, equivalent to the
/// measurement channel at p = 1 - exp(-lambda). Beyond lambda = 700 the
/// exponential underflows double precision, so the channel saturates to
/// complete decoherence exactly rather than relying on denormals.
pub fn dephasing_channel(rho: &DensityMatrix, lambda: f64) -> Result<DensityMatrix> {
    // rejects NaN along with negatives
    if !(0.0..).contains(&lambda) {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    measurement_channel(rho, dephasing_probability(lambda))
}

/// The measurement probability equivalent to dephasing exposure `lambda`.
pub fn dephasing_probability(lambda: f64) -> f64 {
    if lambda > 700.0 {
        1.0
    } else {
        1.0 - (-lambda).exp()
    }
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange {
            name,
            value,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}
