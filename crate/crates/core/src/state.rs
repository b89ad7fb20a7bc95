//! Validated density matrices and their spectral decompositions.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::matrix::{pauli_x, pauli_y, pauli_z, ComplexMatrix, C64, I};
use crate::metric::ZERO_EIGENVALUE;

/// Default tolerance for Hermiticity, trace and positivity checks on states.
pub const STATE_TOL: f64 = 1e-10;

/// Spectral form ρ = V Λ V† with eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Hermitian eigendecomposition. Only the Hermitian part of `m` is used.
    pub fn hermitian(m: &ComplexMatrix) -> Self {
        let inner = m.as_inner();
        let sym = (inner + inner.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(sym);
        let d = eig.eigenvalues.len();
        let mut order: Vec<usize> = (0..d).collect();
        // stable, so equal eigenvalues keep the solver's order
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vecs = DMatrix::from_fn(d, d, |r, c| eig.eigenvectors[(r, order[c])]);
        Self { eigenvalues, eigenvectors: ComplexMatrix::from_inner_unchecked(vecs) }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// V† X V: `x` expressed in the eigenbasis.
    pub fn to_eigenbasis(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let v = self.eigenvectors.as_inner();
        ComplexMatrix::from_inner_unchecked(v.adjoint() * x.as_inner() * v)
    }

    /// V X V†: inverse of [`to_eigenbasis`](Self::to_eigenbasis).
    pub fn from_eigenbasis(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let v = self.eigenvectors.as_inner();
        ComplexMatrix::from_inner_unchecked(v * x.as_inner() * v.adjoint())
    }

    /// V f(Λ) V†.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let diag: Vec<C64> = self.eigenvalues.iter().map(|&l| C64::new(f(l), 0.0)).collect();
        self.from_eigenbasis(&ComplexMatrix::from_diagonal(&diag))
    }

    /// V Λ V†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|l| l)
    }

    /// max |V†V − I|.
    pub fn orthonormality_defect(&self) -> f64 {
        let v = self.eigenvectors.as_inner();
        let gram = ComplexMatrix::from_inner_unchecked(v.adjoint() * v);
        gram.max_abs_diff(&ComplexMatrix::identity(self.dim()))
    }
}

/// A density matrix: Hermitian, trace one, positive semi-definite.
#[derive(Debug, Clone)]
pub struct QuantumState {
    rho: ComplexMatrix,
    eig: EigenDecomposition,
}

impl QuantumState {
    /// Validates with the default tolerance [`STATE_TOL`].
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(rho, STATE_TOL)
    }

    /// Validates `rho` and caches its spectrum.
    ///
    /// Eigenvalues in `[-tol, ZERO_EIGENVALUE)` are set to zero and the spectrum
    /// is renormalized to sum to one; anything below `-tol` is rejected. Without
    /// the snap, rounding noise of order 1e-17 on a singular state would leak
    /// into ρ^α as (1e-17)^α, which is far from negligible for small α.
    pub fn with_tolerance(rho: ComplexMatrix, tol: f64) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                got: format!("{}x{}", rho.nrows(), rho.ncols()),
            });
        }
        let herm = rho.hermiticity_defect();
        if herm > tol {
            return Err(Error::NotHermitian(herm));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::NotTrace1(tr.re));
        }
        let mut eig = EigenDecomposition::hermitian(&rho);
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(Error::NotPsd(min));
        }
        for l in eig.eigenvalues.iter_mut() {
            if *l < ZERO_EIGENVALUE {
                *l = 0.0;
            }
        }
        let total: f64 = eig.eigenvalues.iter().sum();
        for l in eig.eigenvalues.iter_mut() {
            *l = (*l / total).min(1.0);
        }
        Ok(Self { rho, eig })
    }

    /// The pure state |ψ⟩⟨ψ| for a (not necessarily normalized) vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotTrace1(norm));
        }
        let d = psi.len();
        let m = DMatrix::from_fn(d, d, |r, c| psi[r] * psi[c].conj() / (norm * norm));
        Self::new(ComplexMatrix::new(m)?)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::new(ComplexMatrix::identity(d).scale_real(1.0 / d as f64)).expect("I/d is a valid state")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.eig.eigenvalues()
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    /// ρ^p computed spectrally, with 0^p = 0.
    pub fn power(&self, p: f64) -> ComplexMatrix {
        self.eig.apply(|l| if l > 0.0 { l.powf(p) } else { 0.0 })
    }

    /// Tr(ρX).
    pub fn expectation(&self, x: &ComplexMatrix) -> Result<C64> {
        x.ensure_shape(self.dim(), self.dim())?;
        Ok((self.rho.as_inner() * x.as_inner()).trace())
    }

    /// Tr ρ², 1 for pure states.
    pub fn purity(&self) -> f64 {
        self.eig.eigenvalues().iter().map(|l| l * l).sum()
    }
}

/// ½(I₂ + r·σ). Norms up to 1 + 1e-12 are accepted.
pub fn bloch_state(r: [f64; 3]) -> Result<QuantumState> {
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if !norm.is_finite() || norm > 1.0 + 1e-12 {
        return Err(Error::BlochNormExceeded(norm));
    }
    let mut m = ComplexMatrix::identity(2);
    for (coef, sigma) in r.iter().zip([pauli_x(), pauli_y(), pauli_z()]) {
        m = &m + &sigma.scale_real(*coef);
    }
    QuantumState::with_tolerance(m.scale_real(0.5), 1e-10)
}

/// Bloch vector in the equatorial plane, (radius·cosθ, radius·sinθ, 0).
pub fn equatorial_state(radius: f64, theta: f64) -> Result<QuantumState> {
    bloch_state([radius * theta.cos(), radius * theta.sin(), 0.0])
}

/// i[ρ, X] = i(ρX − Xρ).
pub fn commutant(state: &QuantumState, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = state.dim();
    x.ensure_shape(d, d)?;
    Ok(state.rho.commutator(x).scale(I))
}
