//! Dense complex matrices and the handful of fixed operators used throughout the crate.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// A dense complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Wraps a matrix after checking every entry is finite.
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        for c in 0..inner.ncols() {
            for r in 0..inner.nrows() {
                let z = inner[(r, c)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(Self(inner))
    }

    /// Builds a matrix from rows; ragged input is a dimension error.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                expected: format!("{ncols} columns"),
                got: format!("{} columns", bad.len()),
            });
        }
        Self::new(DMatrix::from_fn(nrows, ncols, |r, c| rows[r][c]))
    }

    /// Builds a matrix from real rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub(crate) fn from_inner_unchecked(inner: DMatrix<C64>) -> Self {
        Self(inner)
    }

    pub fn identity(d: usize) -> Self {
        Self(DMatrix::identity(d, d))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let d = diag.len();
        Self(DMatrix::from_fn(d, d, |r, c| if r == c { diag[r] } else { ZERO }))
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.0[(r, c)]
    }

    pub fn as_inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, a: C64) -> Self {
        Self(&self.0 * a)
    }

    pub fn scale_real(&self, a: f64) -> Self {
        self.scale(C64::new(a, 0.0))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Squared Frobenius norm, Σ |a_jk|².
    pub fn frobenius_sq(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Max-entry distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch");
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Tolerance-based equality on the max-entry distance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.0.shape() == other.0.shape() && self.max_abs_diff(other) <= tol
    }

    /// max |A − A†|; infinite for non-square matrices.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    /// Commutator AB − BA.
    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub(crate) fn ensure_shape(&self, rows: usize, cols: usize) -> Result<()> {
        if self.nrows() != rows || self.ncols() != cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{rows}x{cols}"),
                got: format!("{}x{}", self.nrows(), self.ncols()),
            });
        }
        Ok(())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

fn fixed2(a: C64, b: C64, c: C64, d: C64) -> ComplexMatrix {
    ComplexMatrix(DMatrix::from_row_slice(2, 2, &[a, b, c, d]))
}

pub fn pauli_x() -> ComplexMatrix {
    fixed2(ZERO, ONE, ONE, ZERO)
}

pub fn pauli_y() -> ComplexMatrix {
    fixed2(ZERO, -I, I, ZERO)
}

pub fn pauli_z() -> ComplexMatrix {
    fixed2(ONE, ZERO, ZERO, -ONE)
}

/// Pauli axis selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn pauli(self) -> ComplexMatrix {
        match self {
            Axis::X => pauli_x(),
            Axis::Y => pauli_y(),
            Axis::Z => pauli_z(),
        }
    }
}

/// exp(i·angle·σ) = cos(angle)·I + i·sin(angle)·σ, exact because σ² = I.
pub fn pauli_exp(axis: Axis, angle: f64) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2).scale_real(angle.cos());
    let s = axis.pauli().scale(C64::new(0.0, angle.sin()));
    &id + &s
}
