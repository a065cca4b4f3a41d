//! Density matrices with their physical invariants enforced at the border.
//!
//! Anything arriving from outside (amplitudes, raw matrices, gates) gets
//! validated; internal transformations that preserve the invariants by
//! construction skip the checks so the hot loops stay cheap.

use super::matrix::{SquareMatrix, C64, MAX_DIM};
use super::VALIDATION_TOL;
use crate::error::{Error, Result};

/// A validated quantum state for 1..=3 qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    mat: SquareMatrix,
}

impl DensityMatrix {
    /// Build the pure state |psi><psi| from a state vector. The amplitude
    /// count fixes the qubit count; the norm must be 1 within tolerance.
    pub fn from_amplitudes(amps: &[C64]) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::NotPowerOfTwo { len });
        }
        if len > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: len,
                max: MAX_DIM,
            });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::NotNormalized {
                norm,
                tol: VALIDATION_TOL,
            });
        }
        let mut mat = SquareMatrix::zeros(len);
        for (i, a) in amps.iter().enumerate() {
            for (j, b) in amps.iter().enumerate() {
                mat.set(i, j, a * b.conj());
            }
        }
        Ok(DensityMatrix {
            qubits: len.trailing_zeros() as usize,
            mat,
        })
    }

    /// The computational basis state |index> as a density matrix. The qubit
    /// ordering throughout the crate is big-endian: the first player owns the
    /// most significant bit of `index`.
    pub fn basis_state(qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << qubits;
        if dim > MAX_DIM || qubits == 0 {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        if index >= dim {
            return Err(Error::QubitOutOfRange { index, qubits });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Self::from_amplitudes(&amps)
    }

    /// Accept an arbitrary matrix as a state, after checking Hermiticity,
    /// unit trace and positive semidefiniteness.
    pub fn from_matrix(mat: SquareMatrix) -> Result<Self> {
        let dim = mat.dim();
        if !dim.is_power_of_two() || !(2..=MAX_DIM).contains(&dim) {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        let state = DensityMatrix {
            qubits: dim.trailing_zeros() as usize,
            mat,
        };
        state.validate()?;
        Ok(state)
    }

    /// Internal constructor for transformations that preserve validity by
    /// construction (unitary conjugation, trace-preserving channels).
    pub(crate) fn trusted(qubits: usize, mat: SquareMatrix) -> Self {
        debug_assert_eq!(1usize << qubits, mat.dim());
        DensityMatrix { qubits, mat }
    }

    #[inline]
    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    #[inline]
    pub fn matrix(&self) -> &SquareMatrix {
        &self.mat
    }

    /// Real diagonal: the probability of each computational basis outcome.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.mat.get(i, i).re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// rho -> U rho U†. The operator must be unitary; anything else would
    /// silently break the trace and positivity invariants.
    pub fn conjugate_by(&self, u: &SquareMatrix) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: u.dim(),
                right: self.dim(),
            });
        }
        let deviation = u.unitarity_deviation();
        if deviation > VALIDATION_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(DensityMatrix {
            qubits: self.qubits,
            mat: u.mul(&self.mat).mul(&u.adjoint()),
        })
    }

    /// Re-check all three invariants. Positivity is decided by the sign of
    /// every principal minor, which is exact up to the determinant round-off:
    /// a Hermitian matrix is positive semidefinite iff all principal minors
    /// are nonnegative. With dimension at most 8 that is at most 255 small
    /// determinants, well within budget for a validation path.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        // Hermiticity
        let mut herm_dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d = (self.mat.get(i, j) - self.mat.get(j, i).conj()).norm();
                herm_dev = herm_dev.max(d);
            }
        }
        if herm_dev > VALIDATION_TOL {
            return Err(Error::NotHermitian {
                deviation: herm_dev,
            });
        }
        // Unit trace
        let tr = self.mat.trace();
        if (tr.re - 1.0).abs() > VALIDATION_TOL || tr.im.abs() > VALIDATION_TOL {
            return Err(Error::BadTrace { trace: tr.re });
        }
        // Positivity via principal minors over every nonempty index subset
        let mut worst: f64 = 0.0;
        for subset in 1u32..(1u32 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| subset & (1 << i) != 0).collect();
            let k = idx.len();
            let mut sub = SquareMatrix::zeros(k);
            for (r, &i) in idx.iter().enumerate() {
                for (c, &j) in idx.iter().enumerate() {
                    sub.set(r, c, self.mat.get(i, j));
                }
            }
            let minor = sub.determinant().re;
            worst = worst.min(minor);
        }
        if worst < -VALIDATION_TOL {
            return Err(Error::NotPositiveSemidefinite { minor: worst });
        }
        Ok(())
    }
}
