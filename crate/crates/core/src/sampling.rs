//! Random states, Hamiltonians and bases for tests, benchmarks and the
//! bound-chain survey.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::quantum::{CMatrix, CVector, Complex, HermitianOperator, MeasurementBasis, PureState};

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    let v = CVector::from_iterator(dim, (0..dim).map(|_| gaussian_complex(rng)));
    PureState::normalized(v).expect("gaussian vector is nonzero with probability one")
}

/// GUE-distributed Hamiltonian scaled by `scale`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, scale: f64, rng: &mut R) -> HermitianOperator {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng));
    let h = (&g + g.adjoint()).scale(0.5 * scale);
    HermitianOperator::new(h).expect("symmetrized matrix is Hermitian")
}

/// Haar-random unitary from the QR factorization of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            let mut col = q.column_mut(k);
            col *= phase;
        }
    }
    q
}

pub fn random_basis<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> MeasurementBasis {
    MeasurementBasis::new(random_unitary(dim, rng)).expect("QR factor is unitary")
}

/// Uniform real vector in `[lo, hi)`.
pub fn uniform_vector<R: Rng + ?Sized>(dim: usize, lo: f64, hi: f64, rng: &mut R) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(lo..hi)).collect()
}
