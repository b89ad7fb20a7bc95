//! Observables, Kraus channels and unitaries.

use crate::error::{Error, Result};
use crate::matrix::{pauli_x, ComplexMatrix};

/// Default tolerance for Hermiticity of observables.
pub const OBSERVABLE_TOL: f64 = 1e-10;
/// Default max-entry tolerance for Kraus completeness and unitarity.
pub const OPERATOR_TOL: f64 = 1e-9;

fn ensure_square(m: &ComplexMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: "square matrix".into(), got: format!("{}x{}", m.nrows(), m.ncols()) })
    }
}

/// A Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Observable(ComplexMatrix);

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, OBSERVABLE_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        ensure_square(&matrix)?;
        let defect = matrix.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self(matrix))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }
}

/// Φ(ρ) = Σ K_i ρ K_i† with Σ K_i†K_i = I.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerance(kraus, OPERATOR_TOL)
    }

    pub fn with_tolerance(kraus: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyChannel)?;
        ensure_square(first)?;
        let d = first.nrows();
        let mut completeness = ComplexMatrix::zeros(d, d);
        for k in &kraus {
            k.ensure_shape(d, d)?;
            completeness = &completeness + &(&k.adjoint() * k);
        }
        let defect = completeness.max_abs_diff(&ComplexMatrix::identity(d));
        if defect > tol {
            return Err(Error::IncompleteKraus(defect));
        }
        Ok(Self { kraus })
    }

    pub fn identity(d: usize) -> Self {
        Self { kraus: vec![ComplexMatrix::identity(d)] }
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].nrows()
    }

    /// Appends zero operators until there are `n` Kraus elements.
    pub fn padded(&self, n: usize) -> Vec<ComplexMatrix> {
        let d = self.dim();
        let mut out = self.kraus.clone();
        out.resize_with(n.max(self.len()), || ComplexMatrix::zeros(d, d));
        out
    }

    /// Φ(ρ) applied to a matrix.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let d = self.dim();
        self.kraus.iter().fold(ComplexMatrix::zeros(d, d), |acc, k| &acc + &(&(k * rho) * &k.adjoint()))
    }

    /// Another Kraus representation of the same channel: K'_i = Σ_j w_ij K_j for unitary w.
    pub fn remix(&self, w: &ComplexMatrix) -> Result<Self> {
        let n = self.len();
        w.ensure_shape(n, n)?;
        let d = self.dim();
        let kraus = (0..n)
            .map(|i| (0..n).fold(ComplexMatrix::zeros(d, d), |acc, j| &acc + &self.kraus[j].scale(w.get(i, j))))
            .collect();
        Self::new(kraus)
    }
}

/// A d×d unitary matrix.
#[derive(Debug, Clone)]
pub struct UnitaryOperator(ComplexMatrix);

impl UnitaryOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, OPERATOR_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        ensure_square(&matrix)?;
        let defect = (&matrix.adjoint() * &matrix).max_abs_diff(&ComplexMatrix::identity(matrix.nrows()));
        if defect > tol {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self(matrix))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// The unitary viewed as a one-element channel.
    pub fn as_channel(&self) -> KrausChannel {
        KrausChannel { kraus: vec![self.0.clone()] }
    }
}

fn check_q(q: f64) -> Result<()> {
    if (0.0..1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::Config(format!("q must lie in [0, 1), got {q}")))
    }
}

/// Amplitude damping: A₁ = |0⟩⟨0| + √(1−q)|1⟩⟨1|, A₂ = √q|0⟩⟨1|.
pub fn amplitude_damping(q: f64) -> Result<KrausChannel> {
    check_q(q)?;
    let a1 = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, (1.0 - q).sqrt()]])?;
    let a2 = ComplexMatrix::from_real_rows(&[vec![0.0, q.sqrt()], vec![0.0, 0.0]])?;
    KrausChannel::new(vec![a1, a2])
}

/// Phase damping: B₁ = |0⟩⟨0| + √(1−q)|1⟩⟨1|, B₂ = √q|1⟩⟨1|.
pub fn phase_damping(q: f64) -> Result<KrausChannel> {
    check_q(q)?;
    let b1 = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, (1.0 - q).sqrt()]])?;
    let b2 = ComplexMatrix::from_real_rows(&[vec![0.0, 0.0], vec![0.0, q.sqrt()]])?;
    KrausChannel::new(vec![b1, b2])
}

/// Bit flip: C₁ = √q·I, C₂ = √(1−q)·σx.
pub fn bit_flip(q: f64) -> Result<KrausChannel> {
    check_q(q)?;
    let c1 = ComplexMatrix::identity(2).scale_real(q.sqrt());
    let c2 = pauli_x().scale_real((1.0 - q).sqrt());
    KrausChannel::new(vec![c1, c2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{pauli_exp, pauli_y, Axis, C64};

    #[test]
    fn observable_requires_hermitian() {
        assert!(Observable::new(pauli_y()).is_ok());
        let nh = pauli_y().scale(C64::new(0.0, 1.0));
        assert!(matches!(Observable::new(nh), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn example_channels_are_complete() {
        for q in [0.0, 0.1, 0.5, 0.99] {
            for ch in [amplitude_damping(q), phase_damping(q), bit_flip(q)] {
                assert_eq!(ch.unwrap().len(), 2);
            }
        }
        assert!(amplitude_damping(1.0).is_err());
        assert!(bit_flip(-0.1).is_err());
    }

    #[test]
    fn incomplete_kraus_rejected() {
        let k = ComplexMatrix::identity(2).scale_real(0.9);
        assert!(matches!(KrausChannel::new(vec![k]), Err(Error::IncompleteKraus(_))));
        assert!(matches!(KrausChannel::new(vec![]), Err(Error::EmptyChannel)));
        let mixed = vec![ComplexMatrix::identity(2), ComplexMatrix::zeros(3, 3)];
        assert!(matches!(KrausChannel::new(mixed), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn padding_adds_zero_operators() {
        let ch = KrausChannel::identity(2);
        let padded = ch.padded(3);
        assert_eq!(padded.len(), 3);
        assert_eq!(padded[2].max_abs(), 0.0);
    }

    #[test]
    fn unitary_validation() {
        let u = pauli_exp(Axis::X, std::f64::consts::PI / 8.0);
        assert!(UnitaryOperator::new(u).is_ok());
        let not_u = ComplexMatrix::identity(2).scale_real(1.1);
        assert!(matches!(UnitaryOperator::new(not_u), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn channel_preserves_trace() {
        let ch = amplitude_damping(0.3).unwrap();
        let rho = ComplexMatrix::from_real_rows(&[vec![0.25, 0.1], vec![0.1, 0.75]]).unwrap();
        assert!((ch.apply(&rho).trace().re - 1.0).abs() < 1e-15);
    }
}
