//! Unconstrained parameterization of `U(d)` by Givens rotations and phases.
//!
//! A vector of `d²` reals decodes to
//! `U = D(δ) · Π_{i<j} G_{ij}(ϑ_{ij}, φ_{ij})`: `d(d−1)/2` rotation angles,
//! `d(d−1)/2` rotation phases and `d` diagonal phases. Every vector decodes
//! to a unitary; redundancy is harmless for maximization.

use crate::quantum::{CMatrix, CVector, Complex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisParameterization {
    pub dim: usize,
}

impl BasisParameterization {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    pub fn len(&self) -> usize {
        self.dim * self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.dim == 0
    }

    fn pairs(&self) -> usize {
        self.dim * (self.dim - 1) / 2
    }

    pub fn decode(&self, params: &[f64]) -> CMatrix {
        assert_eq!(params.len(), self.len(), "parameter vector length");
        let d = self.dim;
        let m = self.pairs();
        let (angles, rest) = params.split_at(m);
        let (phases, diagonal) = rest.split_at(m);

        let mut u = CMatrix::from_diagonal(&CVector::from_iterator(
            d,
            diagonal.iter().map(|&p| Complex::from_polar(1.0, p)),
        ));
        let mut idx = 0;
        for i in 0..d {
            for j in i + 1..d {
                let (s, c) = angles[idx].sin_cos();
                let e = Complex::from_polar(1.0, phases[idx]);
                // U ← U·G with G acting on columns i, j.
                for r in 0..d {
                    let ui = u[(r, i)];
                    let uj = u[(r, j)];
                    u[(r, i)] = ui * c + uj * e * s;
                    u[(r, j)] = uj * c - ui * e.conj() * s;
                }
                idx += 1;
            }
        }
        u
    }
}

/// Maps `2d` reals to the unit sphere of `ℂ^d`: `(re₀, im₀, re₁, im₁, …)`.
pub fn decode_probe(params: &[f64]) -> CVector {
    let d = params.len() / 2;
    let v = CVector::from_iterator(d, (0..d).map(|k| Complex::new(params[2 * k], params[2 * k + 1])));
    let norm = v.norm();
    if norm < 1e-300 {
        let mut e = CVector::zeros(d);
        e[0] = Complex::new(1.0, 0.0);
        return e;
    }
    v.unscale(norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::unitarity_deviation;
    use proptest::prelude::*;

    #[test]
    fn zero_parameters_give_identity() {
        let p = BasisParameterization::new(4);
        let u = p.decode(&vec![0.0; p.len()]);
        assert!(crate::quantum::max_abs(&(u - CMatrix::identity(4, 4))) < 1e-15);
    }

    #[test]
    fn counts() {
        let p = BasisParameterization::new(5);
        assert_eq!(p.len(), 25);
        assert_eq!(p.pairs(), 10);
    }

    proptest! {
        #[test]
        fn decoded_matrix_is_unitary(dim in 1usize..7, seed in proptest::collection::vec(-20.0f64..20.0, 36)) {
            let p = BasisParameterization::new(dim);
            let u = p.decode(&seed[..p.len()]);
            prop_assert!(unitarity_deviation(&u) < 1e-10);
        }

        #[test]
        fn decoded_probe_is_normalized(v in proptest::collection::vec(-5.0f64..5.0, 2..12)) {
            let even = &v[..v.len() / 2 * 2];
            let psi = decode_probe(even);
            prop_assert!((psi.norm_squared() - 1.0).abs() < 1e-12);
        }
    }
}
