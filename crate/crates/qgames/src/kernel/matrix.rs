//! Dense complex matrices, sized for at most three qubits.
//!
//! Everything in the engine is an 8x8 or smaller, so a flat `Vec` in
//! row-major order beats any sparse or heap-of-rows representation. There is
//! no BLAS here on purpose: the matrices are tiny and the naive triple loop
//! is both fast enough and easy to audit.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest register the engine handles: three qubits, dimension 8.
pub const MAX_DIM: usize = 8;

/// A square complex matrix in row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        SquareMatrix {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Build from explicit rows. Panics if the rows are ragged; this is a
    /// programmer error, not an input error.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "matrix rows must form a square");
            data.extend_from_slice(row);
        }
        SquareMatrix { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn mul(&self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix product");
        let n = self.dim;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + aik * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix sum");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a + b)
            .collect();
        SquareMatrix {
            dim: self.dim,
            data,
        }
    }

    pub fn scale(&self, factor: C64) -> SquareMatrix {
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> SquareMatrix {
        let n = self.dim;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry-wise absolute difference; the metric used by every
    /// closeness check in the crate.
    pub fn max_abs_diff(&self, other: &SquareMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in comparison");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// How far this matrix is from satisfying U†U = I.
    pub fn unitarity_deviation(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .max_abs_diff(&SquareMatrix::identity(self.dim))
    }

    /// Kronecker product. Fails if the result would exceed the three-qubit
    /// ceiling; nothing in the engine has a use for anything larger, and the
    /// cap catches accidental register blow-up early.
    pub fn tensor(&self, rhs: &SquareMatrix) -> Result<SquareMatrix> {
        let dim = self.dim * rhs.dim;
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        let mut out = SquareMatrix::zeros(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                for k in 0..rhs.dim {
                    for l in 0..rhs.dim {
                        out.set(i * rhs.dim + k, j * rhs.dim + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Determinant by LU decomposition with partial pivoting. Used for the
    /// principal-minor positivity test on density matrices.
    pub fn determinant(&self) -> C64 {
        let n = self.dim;
        let mut lu = self.data.clone();
        let mut det = C64::new(1.0, 0.0);
        for col in 0..n {
            // pivot: largest remaining entry in this column
            let mut pivot = col;
            let mut best = lu[col * n + col].norm();
            for row in col + 1..n {
                let mag = lu[row * n + col].norm();
                if mag > best {
                    best = mag;
                    pivot = row;
                }
            }
            if best == 0.0 {
                return C64::new(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..n {
                    lu.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let diag = lu[col * n + col];
            det *= diag;
            for row in col + 1..n {
                let factor = lu[row * n + col] / diag;
                for j in col..n {
                    let sub = factor * lu[col * n + j];
                    lu[row * n + j] -= sub;
                }
            }
        }
        det
    }
}

/// Pauli X.
pub fn sigma_x() -> SquareMatrix {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    SquareMatrix::from_rows(&[vec![o, l], vec![l, o]])
}

/// The 2x2 Hadamard gate.
pub fn hadamard() -> SquareMatrix {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    SquareMatrix::from_rows(&[vec![h, h], vec![h, -h]])
}
