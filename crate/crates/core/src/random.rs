//! Random instances for property tests and the fuzzer.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::matrix::{ComplexMatrix, C64};
use crate::metric::MCFunction;
use crate::operators::{KrausChannel, Observable, UnitaryOperator};
use crate::state::QuantumState;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Induced-measure state GG†/Tr(GG†) with G of shape d×rank.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> QuantumState {
    let g = ginibre(rng, d, rank.max(1));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let rho = ComplexMatrix::new(m / C64::new(tr, 0.0)).expect("finite");
    QuantumState::new(rho).expect("Ginibre product is a state")
}

pub fn random_full_rank_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> QuantumState {
    random_state(rng, d, d)
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> QuantumState {
    let psi: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
    QuantumState::pure(&psi).expect("nonzero vector")
}

/// GUE-style Hermitian matrix (G + G†)/2.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ginibre(rng, d, d);
    ComplexMatrix::new((&g + g.adjoint()) * C64::new(0.5, 0.0)).expect("finite")
}

pub fn random_observable<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Observable {
    Observable::new(random_hermitian(rng, d)).expect("Hermitian by construction")
}

/// Arbitrary complex matrix with Gaussian entries.
pub fn random_operator<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    ComplexMatrix::new(ginibre(rng, d, d)).expect("finite")
}

/// Haar unitary via QR with the phases of diag(R) divided out.
pub fn haar_unitary_matrix<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let qr = ginibre(rng, d, d).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            let z = r[(i, i)];
            if z.norm() > 0.0 {
                z / z.norm()
            } else {
                C64::new(1.0, 0.0)
            }
        } else {
            C64::new(0.0, 0.0)
        }
    });
    ComplexMatrix::new(q * phases).expect("finite")
}

pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> UnitaryOperator {
    UnitaryOperator::new(haar_unitary_matrix(rng, d)).expect("QR factor is unitary")
}

/// Channel with `n` Kraus operators cut from a random isometry d → d·n.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> KrausChannel {
    let u = haar_unitary_matrix(rng, d * n);
    let v = u.as_inner();
    let kraus = (0..n).map(|i| ComplexMatrix::new(v.view((i * d, 0), (d, d)).into_owned()).expect("finite")).collect();
    KrausChannel::new(kraus).expect("isometry blocks are complete")
}

/// WYD with α uniform in [0.05, 0.95], or Fisher, with equal odds.
pub fn random_metric<R: Rng + ?Sized>(rng: &mut R) -> MCFunction {
    if rng.random_bool(0.5) {
        MCFunction::fisher()
    } else {
        MCFunction::wyd(rng.random_range(0.05..0.95)).expect("in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 2..=4 {
            let s = random_state(&mut rng, d, 2);
            assert_eq!(s.dim(), d);
            let u = haar_unitary(&mut rng, d);
            assert_eq!(u.dim(), d);
            let ch = random_channel(&mut rng, d, 3);
            assert_eq!(ch.len(), 3);
            assert!((random_pure_state(&mut rng, d).purity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn seeded_streams_repeat() {
        let a = random_hermitian(&mut ChaCha8Rng::seed_from_u64(3), 3);
        let b = random_hermitian(&mut ChaCha8Rng::seed_from_u64(3), 3);
        assert_eq!(a, b);
    }
}
