//! Metric-adjusted skew information of operators, observables, channels and
//! unitaries, plus the direct-trace and SLD routes used to cross-check it.

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::metric::{kernel, MCFunction, SpectralKernel};
use crate::operators::{KrausChannel, Observable, UnitaryOperator};
use crate::state::QuantumState;

/// Round-off below zero down to this value is reported as exactly zero.
pub const NEGATIVE_CLIP: f64 = -1e-12;

/// A skew-information value.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SkewValue(f64);

impl SkewValue {
    /// Clips values in `[-1e-12, 0)` to zero. More negative inputs are kept
    /// as-is so that nonnegativity checks can flag them.
    pub fn from_raw(v: f64) -> Self {
        if (NEGATIVE_CLIP..0.0).contains(&v) {
            Self(0.0)
        } else {
            Self(v)
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// √I, with tiny negative values read as zero.
    pub fn sqrt(self) -> f64 {
        self.0.max(0.0).sqrt()
    }
}

impl From<SkewValue> for f64 {
    fn from(v: SkewValue) -> f64 {
        v.0
    }
}

/// Skew-information evaluator bound to one (state, metric) pair.
///
/// The spectral kernel is built once in [`new`](Self::new); every evaluation
/// afterwards is a change of basis plus a weighted sum.
#[derive(Debug, Clone)]
pub struct SkewEngine<'a> {
    state: &'a QuantumState,
    metric: MCFunction,
    kernel: SpectralKernel,
}

impl<'a> SkewEngine<'a> {
    pub fn new(state: &'a QuantumState, metric: &MCFunction) -> Result<Self> {
        let kernel = kernel(metric, state.eigen())?;
        Ok(Self { state, metric: metric.clone(), kernel })
    }

    pub fn state(&self) -> &QuantumState {
        self.state
    }

    pub fn metric(&self) -> &MCFunction {
        &self.metric
    }

    pub fn kernel(&self) -> &SpectralKernel {
        &self.kernel
    }

    /// I^c_ρ(X) = Σ_jk w_jk |(V†XV)_jk|² for an arbitrary d×d matrix.
    pub fn operator(&self, x: &ComplexMatrix) -> Result<SkewValue> {
        let d = self.state.dim();
        x.ensure_shape(d, d)?;
        if self.kernel.is_zero() {
            return Ok(SkewValue(0.0));
        }
        let xt = self.state.eigen().to_eigenbasis(x);
        let mut acc = 0.0;
        for j in 0..d {
            for k in 0..d {
                let w = self.kernel.weight(j, k);
                if w != 0.0 {
                    acc += w * xt.get(j, k).norm_sqr();
                }
            }
        }
        Ok(SkewValue::from_raw(acc))
    }

    pub fn observable(&self, a: &Observable) -> Result<SkewValue> {
        self.operator(a.matrix())
    }

    /// Σ_i I^c_ρ(K_i).
    pub fn channel(&self, phi: &KrausChannel) -> Result<SkewValue> {
        let mut total = 0.0;
        for k in phi.kraus() {
            total += self.operator(k)?.value();
        }
        Ok(SkewValue::from_raw(total))
    }

    pub fn unitary(&self, u: &UnitaryOperator) -> Result<SkewValue> {
        self.operator(u.matrix())
    }
}

/// I^c_ρ(X) for an arbitrary square matrix.
pub fn skew_operator(state: &QuantumState, x: &ComplexMatrix, c: &MCFunction) -> Result<SkewValue> {
    SkewEngine::new(state, c)?.operator(x)
}

/// I^c_ρ(A) for a raw matrix that must be Hermitian.
pub fn skew_hermitian(state: &QuantumState, a: &ComplexMatrix, c: &MCFunction) -> Result<SkewValue> {
    let obs = Observable::new(a.clone())?;
    skew_observable(state, &obs, c)
}

pub fn skew_observable(state: &QuantumState, a: &Observable, c: &MCFunction) -> Result<SkewValue> {
    SkewEngine::new(state, c)?.observable(a)
}

pub fn skew_channel(state: &QuantumState, phi: &KrausChannel, c: &MCFunction) -> Result<SkewValue> {
    SkewEngine::new(state, c)?.channel(phi)
}

pub fn skew_unitary(state: &QuantumState, u: &UnitaryOperator, c: &MCFunction) -> Result<SkewValue> {
    SkewEngine::new(state, c)?.unitary(u)
}

/// −½ Tr([ρ^α, X†][ρ^{1−α}, X]), computed from explicit matrix powers.
pub fn wyd_direct(state: &QuantumState, x: &ComplexMatrix, alpha: f64) -> Result<SkewValue> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let d = state.dim();
    x.ensure_shape(d, d)?;
    let ra = state.power(alpha);
    let rb = state.power(1.0 - alpha);
    let left = ra.commutator(&x.adjoint());
    let right = rb.commutator(x);
    let tr = (&left * &right).trace();
    Ok(SkewValue::from_raw(-0.5 * tr.re))
}

/// Symmetric logarithmic derivative L with i[ρ, A] = ½(Lρ + ρL).
///
/// L is set to zero on pairs of kernel directions of ρ, where the equation leaves it free.
pub fn sld(state: &QuantumState, a: &Observable) -> Result<ComplexMatrix> {
    let d = state.dim();
    a.matrix().ensure_shape(d, d)?;
    let lam = state.eigenvalues();
    let at = state.eigen().to_eigenbasis(a.matrix());
    let mut lt = ComplexMatrix::zeros(d, d).into_inner();
    for j in 0..d {
        for k in 0..d {
            let s = lam[j] + lam[k];
            if s > 1e-12 {
                lt[(j, k)] = C64::new(0.0, 2.0 * (lam[j] - lam[k]) / s) * at.get(j, k);
            }
        }
    }
    Ok(state.eigen().from_eigenbasis(&ComplexMatrix::new(lt)?))
}

/// max |i[ρ, A] − ½(Lρ + ρL)|.
pub fn sld_residual(state: &QuantumState, a: &Observable, l: &ComplexMatrix) -> Result<f64> {
    let rho = state.matrix();
    let lhs = crate::state::commutant(state, a.matrix())?;
    let rhs = (&(l * rho) + &(rho * l)).scale_real(0.5);
    Ok(lhs.max_abs_diff(&rhs))
}

/// ¼ Tr(ρL²).
pub fn fisher_from_sld(state: &QuantumState, l: &ComplexMatrix) -> f64 {
    0.25 * (&(state.matrix() * l) * l).trace().re
}

/// Δ²_ρ(A) = Tr(ρA²) − (Tr ρA)².
pub fn variance(state: &QuantumState, a: &Observable) -> Result<f64> {
    let m = a.matrix();
    let mean = state.expectation(m)?.re;
    let second = state.expectation(&(m * m))?.re;
    Ok((second - mean * mean).max(0.0))
}

/// ‖(X − Tr(ρX))√ρ‖²_F, defined for any square X; equals the variance for Hermitian X.
pub fn variance_frobenius(state: &QuantumState, x: &ComplexMatrix) -> Result<f64> {
    let d = state.dim();
    let mean = state.expectation(x)?;
    let centered = x - &ComplexMatrix::identity(d).scale(mean);
    let root = state.power(0.5);
    Ok((&centered * &root).frobenius_sq())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{pauli_exp, pauli_x, pauli_y, pauli_z, Axis};
    use crate::operators::amplitude_damping;
    use crate::state::{bloch_state, commutant};

    fn pure_up() -> QuantumState {
        QuantumState::new((&ComplexMatrix::identity(2) + &pauli_z()).scale_real(0.5)).unwrap()
    }

    #[test]
    fn commuting_pairs_vanish() {
        let mixed = QuantumState::maximally_mixed(2);
        for c in [MCFunction::fisher(), MCFunction::wyd(0.2).unwrap()] {
            assert_eq!(skew_operator(&mixed, &pauli_x(), &c).unwrap().value(), 0.0);
        }
    }

    #[test]
    fn pure_state_equals_variance() {
        let c = MCFunction::wyd(1.0 / 3.0).unwrap();
        let v = skew_operator(&pure_up(), &pauli_x(), &c).unwrap().value();
        assert!((v - 1.0).abs() < 1e-14);
        let direct = wyd_direct(&pure_up(), &pauli_x(), 1.0 / 3.0).unwrap().value();
        assert!((direct - 1.0).abs() < 1e-14);
        let obs = Observable::new(pauli_x()).unwrap();
        assert!((variance(&pure_up(), &obs).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fisher_matches_sld_on_example_state() {
        let s = bloch_state([3f64.sqrt() / 2.0, 0.0, 0.0]).unwrap();
        let a = Observable::new(pauli_y()).unwrap();
        let spectral = skew_observable(&s, &a, &MCFunction::fisher()).unwrap().value();
        let l = sld(&s, &a).unwrap();
        assert!((spectral - fisher_from_sld(&s, &l)).abs() < 1e-10);
        assert!(sld_residual(&s, &a, &l).unwrap() < 1e-9);
        // for a qubit with |r| = √3/2 along x, I^F(σy) = |r|² = 3/4
        assert!((spectral - 0.75).abs() < 1e-12);
    }

    #[test]
    fn sld_examples() {
        let rho = ComplexMatrix::from_diagonal(&[C64::new(0.75, 0.0), C64::new(0.25, 0.0)]);
        let s = QuantumState::new(rho).unwrap();
        let l = sld(&s, &Observable::new(pauli_x()).unwrap()).unwrap();
        assert!(l.approx_eq(&(-&pauli_y()), 1e-14));
        let lz = sld(&s, &Observable::new(pauli_z()).unwrap()).unwrap();
        assert!(lz.max_abs() < 1e-15);
    }

    #[test]
    fn channel_examples() {
        let s = bloch_state([3f64.sqrt() / 2.0, 0.0, 0.0]).unwrap();
        let c = MCFunction::wyd(1.0 / 3.0).unwrap();
        assert!(skew_channel(&s, &KrausChannel::identity(2), &c).unwrap().value() < 1e-15);
        // σx commutes with a state on the x axis but not with one on the z axis
        let flip = crate::operators::bit_flip(0.0).unwrap();
        assert!(skew_channel(&s, &flip, &c).unwrap().value() < 1e-15);
        let sz = bloch_state([0.0, 0.0, 0.5]).unwrap();
        assert!(skew_channel(&sz, &flip, &c).unwrap().value() > 0.1);

        let eps = amplitude_damping(0.5).unwrap();
        let kernel_route = skew_channel(&s, &eps, &c).unwrap().value();
        let direct: f64 = eps.kraus().iter().map(|k| wyd_direct(&s, k, 1.0 / 3.0).unwrap().value()).sum();
        assert!((kernel_route - direct).abs() < 1e-10);
    }

    #[test]
    fn unitary_examples() {
        let c = MCFunction::wyd(0.25).unwrap();
        let s = bloch_state([1.0 / 2f64.sqrt(), 0.0, 0.0]).unwrap();
        let id = UnitaryOperator::new(ComplexMatrix::identity(2)).unwrap();
        assert_eq!(skew_unitary(&s, &id, &c).unwrap().value(), 0.0);

        let diag_state = bloch_state([0.0, 0.0, 0.4]).unwrap();
        let uz = UnitaryOperator::new(pauli_exp(Axis::Z, std::f64::consts::PI / 8.0)).unwrap();
        assert!(skew_unitary(&diag_state, &uz, &c).unwrap().value() < 1e-15);

        let ux = UnitaryOperator::new(pauli_exp(Axis::X, std::f64::consts::PI / 8.0)).unwrap();
        let sy = bloch_state([0.0, 1.0 / 2f64.sqrt(), 0.0]).unwrap();
        let v = skew_unitary(&sy, &ux, &c).unwrap().value();
        let direct = wyd_direct(&sy, ux.matrix(), 0.25).unwrap().value();
        assert!((v - direct).abs() < 1e-10);
        let as_channel = skew_channel(&sy, &ux.as_channel(), &c).unwrap().value();
        assert_eq!(v, as_channel);
    }

    #[test]
    fn hermitian_entry_point_rejects_non_hermitian() {
        let s = QuantumState::maximally_mixed(2);
        let nh = &pauli_x().scale(C64::new(0.0, 1.0)) + &ComplexMatrix::identity(2);
        assert!(matches!(skew_hermitian(&s, &nh, &MCFunction::fisher()), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn dimension_mismatch() {
        let s = QuantumState::maximally_mixed(2);
        let x = ComplexMatrix::identity(3);
        assert!(matches!(skew_operator(&s, &x, &MCFunction::fisher()), Err(Error::DimensionMismatch { .. })));
        assert!(wyd_direct(&s, &x, 0.5).is_err());
        assert!(matches!(wyd_direct(&s, &pauli_x(), 1.0), Err(Error::AlphaOutOfRange(_))));
    }

    #[test]
    fn variance_examples() {
        let mixed = QuantumState::maximally_mixed(2);
        let id = Observable::new(ComplexMatrix::identity(2)).unwrap();
        assert!(variance(&mixed, &id).unwrap().abs() < 1e-15);
        let z = Observable::new(pauli_z()).unwrap();
        assert!((variance(&mixed, &z).unwrap() - 1.0).abs() < 1e-15);
        let s = bloch_state([0.3, -0.2, 0.5]).unwrap();
        let frob = variance_frobenius(&s, &pauli_x()).unwrap();
        let x = Observable::new(pauli_x()).unwrap();
        assert!((frob - variance(&s, &x).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn commutant_is_hermitian_for_observables() {
        let s = bloch_state([0.3, -0.2, 0.5]).unwrap();
        let c = commutant(&s, &pauli_y()).unwrap();
        assert!(c.hermiticity_defect() < 1e-15);
    }

    #[test]
    fn clip_policy() {
        assert_eq!(SkewValue::from_raw(-1e-13).value(), 0.0);
        assert_eq!(SkewValue::from_raw(-1e-9).value(), -1e-9);
        assert_eq!(SkewValue::from_raw(-1e-9).sqrt(), 0.0);
    }
}
