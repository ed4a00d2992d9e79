//! Dense complex linear algebra: Hermitian operators, pure states,
//! measurement bases, unitary evolution and amplitude extraction.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

pub type Complex = num_complex::Complex64;
pub type CMatrix = DMatrix<Complex>;
pub type CVector = DVector<Complex>;

/// Largest entry modulus of a complex matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn max_abs_with_index(m: &CMatrix) -> (f64, usize, usize) {
    let mut best = (0.0, 0, 0);
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            let v = m[(r, c)].norm();
            if v > best.0 {
                best = (v, r, c);
            }
        }
    }
    best
}

/// `max |U†U − 1|`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.ncols();
    max_abs(&(u.adjoint() * u - CMatrix::identity(n, n)))
}

fn check_finite<'a>(entries: impl Iterator<Item = &'a Complex>) -> Result<()> {
    for (index, z) in entries.enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite { index });
        }
    }
    Ok(())
}

/// Eigenvalues in ascending order with the matching unitary eigenvector
/// columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    pub fn eigenvector(&self, i: usize) -> CVector {
        self.eigenvectors.column(i).into_owned()
    }

    /// `U Λ U†`.
    pub fn reconstruct(&self) -> CMatrix {
        let lambda = DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&l| Complex::new(l, 0.0)),
        );
        &self.eigenvectors * CMatrix::from_diagonal(&lambda) * self.eigenvectors.adjoint()
    }
}

/// Rotates `v` so its largest-magnitude component is real and positive.
///
/// Near-ties (relative 1e-9) resolve to the lowest index.
pub fn fix_phase(v: &mut CVector) {
    let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|z| z.norm() >= peak * (1.0 - 1e-9))
        .unwrap_or(0);
    let phase = v[pivot] / v[pivot].norm();
    let rot = phase.conj();
    for z in v.iter_mut() {
        *z *= rot;
    }
    v[pivot] = Complex::new(v[pivot].re, 0.0);
}

/// Hermitian eigendecomposition with ascending eigenvalues and the
/// largest-component-real-positive phase convention on each eigenvector.
pub fn eigendecompose(matrix: &CMatrix) -> Result<Spectrum> {
    check_hermitian(matrix, Tolerances::default().hermiticity)?;
    Ok(decompose_hermitian(&hermitian_part(matrix)))
}

fn decompose_hermitian(matrix: &CMatrix) -> Spectrum {
    let n = matrix.nrows();
    let eig = matrix.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .total_cmp(&eig.eigenvalues[b])
            .then(a.cmp(&b))
    });
    let mut eigenvectors = CMatrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(eig.eigenvalues[src]);
        let mut v = eig.eigenvectors.column(src).into_owned();
        fix_phase(&mut v);
        eigenvectors.set_column(dst, &v);
    }
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::Empty);
    }
    Ok(())
}

fn check_hermitian(m: &CMatrix, tol: f64) -> Result<()> {
    check_square(m)?;
    check_finite(m.iter())?;
    let (deviation, row, col) = max_abs_with_index(&(m - m.adjoint()));
    if deviation > tol {
        return Err(Error::NotHermitian {
            deviation,
            row,
            col,
        });
    }
    Ok(())
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// A Hamiltonian or observable. The spectrum is computed on first use and
/// cached.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: CMatrix,
    spectrum: OnceLock<Spectrum>,
}

impl PartialEq for HermitianOperator {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, Tolerances::default().hermiticity)
    }

    /// Validates against `tol`, then stores the exact Hermitian part.
    pub fn with_tolerance(matrix: CMatrix, tol: f64) -> Result<Self> {
        check_hermitian(&matrix, tol)?;
        Ok(Self {
            matrix: hermitian_part(&matrix),
            spectrum: OnceLock::new(),
        })
    }

    pub fn from_real_diagonal(diagonal: &[f64]) -> Result<Self> {
        if diagonal.is_empty() {
            return Err(Error::Empty);
        }
        let d = DVector::from_iterator(
            diagonal.len(),
            diagonal.iter().map(|&x| Complex::new(x, 0.0)),
        );
        Self::new(CMatrix::from_diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &Spectrum {
        self.spectrum.get_or_init(|| decompose_hermitian(&self.matrix))
    }

    pub fn is_spectrum_cached(&self) -> bool {
        self.spectrum.get().is_some()
    }

    /// `H + c·1`.
    pub fn shifted(&self, c: f64) -> Self {
        let n = self.dim();
        Self {
            matrix: &self.matrix + CMatrix::identity(n, n).scale(c),
            spectrum: OnceLock::new(),
        }
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.matrix * v
    }

    /// `⟨ψ|Ĥ|ψ⟩`.
    pub fn expectation(&self, psi: &PureState) -> f64 {
        psi.amplitudes.dotc(&self.apply(&psi.amplitudes)).re
    }

    /// `⟨ψ|Ĥ²|ψ⟩ = ‖Ĥψ‖²`.
    pub fn second_moment(&self, psi: &PureState) -> f64 {
        self.apply(&psi.amplitudes).norm_squared()
    }

    /// `exp(−iĤθ)` assembled from the cached spectrum.
    pub fn evolution(&self, theta: f64) -> CMatrix {
        let s = self.spectrum();
        let phases = DVector::from_iterator(
            self.dim(),
            s.eigenvalues
                .iter()
                .map(|&l| Complex::from_polar(1.0, -l * theta)),
        );
        &s.eigenvectors * CMatrix::from_diagonal(&phases) * s.eigenvectors.adjoint()
    }

    /// `‖Ĥ‖ = λ_max − λ_min`.
    pub fn seminorm(&self) -> f64 {
        let s = self.spectrum();
        s.max() - s.min()
    }
}

/// A normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
}

impl PureState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        Self::with_tolerance(amplitudes, Tolerances::default().normalization)
    }

    pub fn with_tolerance(amplitudes: CVector, tol: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Empty);
        }
        check_finite(amplitudes.iter())?;
        let norm_sqr = amplitudes.norm_squared();
        if (norm_sqr - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Scales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Empty);
        }
        check_finite(amplitudes.iter())?;
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    pub fn from_slice(amplitudes: &[Complex]) -> Result<Self> {
        Self::new(CVector::from_column_slice(amplitudes))
    }

    /// Computational basis state `|index⟩`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index + 1,
            });
        }
        let mut v = CVector::zeros(dim);
        v[index] = Complex::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub(crate) fn from_unit_unchecked(amplitudes: CVector) -> Self {
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Complex {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|⟨self|other⟩|`, insensitive to global phase.
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.inner(other).norm()
    }

    pub fn with_global_phase(&self, phase: f64) -> Self {
        Self {
            amplitudes: self.amplitudes.map(|z| z * Complex::from_polar(1.0, phase)),
        }
    }
}

/// Complete orthonormal measurement basis; kets are the matrix columns.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    kets: CMatrix,
}

impl MeasurementBasis {
    pub fn new(kets: CMatrix) -> Result<Self> {
        Self::with_tolerance(kets, Tolerances::default().unitarity)
    }

    pub fn with_tolerance(kets: CMatrix, tol: f64) -> Result<Self> {
        check_square(&kets)?;
        check_finite(kets.iter())?;
        let deviation = unitarity_deviation(&kets);
        if deviation > tol {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { kets })
    }

    pub fn from_kets(kets: &[CVector]) -> Result<Self> {
        if kets.is_empty() {
            return Err(Error::Empty);
        }
        let dim = kets[0].len();
        if let Some(bad) = kets.iter().find(|k| k.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Self::new(CMatrix::from_columns(kets))
    }

    pub fn computational(dim: usize) -> Self {
        Self {
            kets: CMatrix::identity(dim, dim),
        }
    }

    /// Eigenbasis of `op` in ascending eigenvalue order.
    pub fn eigenbasis(op: &HermitianOperator) -> Self {
        Self {
            kets: op.spectrum().eigenvectors.clone(),
        }
    }

    pub(crate) fn from_unitary_unchecked(kets: CMatrix) -> Self {
        Self { kets }
    }

    pub fn dim(&self) -> usize {
        self.kets.ncols()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.kets
    }

    pub fn ket(&self, k: usize) -> CVector {
        self.kets.column(k).into_owned()
    }

    /// Same kets in the order given by `order[new] = old`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.dim()];
        if order.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: order.len(),
            });
        }
        for &o in order {
            if o >= self.dim() || seen[o] {
                return Err(Error::InvalidParameter {
                    name: "order",
                    reason: "not a permutation".into(),
                });
            }
            seen[o] = true;
        }
        let cols: Vec<CVector> = order.iter().map(|&o| self.ket(o)).collect();
        Ok(Self {
            kets: CMatrix::from_columns(&cols),
        })
    }

    /// `{⟨k|v⟩}_k`.
    pub fn coordinates(&self, v: &CVector) -> CVector {
        self.kets.ad_mul(v)
    }

    /// Matrix elements `⟨k|Ĥ|l⟩` in this basis.
    pub fn represent(&self, op: &HermitianOperator) -> CMatrix {
        self.kets.adjoint() * op.matrix() * &self.kets
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `|ψ_θ⟩ = exp(−iĤθ)|ψ₀⟩`, computed through the spectrum of `Ĥ`.
pub fn evolve(psi0: &PureState, h: &HermitianOperator, theta: f64) -> Result<PureState> {
    check_dims(h.dim(), psi0.dim())?;
    if theta == 0.0 {
        return Ok(psi0.clone());
    }
    Ok(Propagator::new(psi0, h)?.state(theta))
}

/// Precomputed spectral form of `θ ↦ exp(−iĤθ)|ψ₀⟩` for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
    coefficients: CVector,
}

impl Propagator {
    pub fn new(psi0: &PureState, h: &HermitianOperator) -> Result<Self> {
        check_dims(h.dim(), psi0.dim())?;
        let s = h.spectrum();
        Ok(Self {
            eigenvalues: s.eigenvalues.clone(),
            eigenvectors: s.eigenvectors.clone(),
            coefficients: s.eigenvectors.ad_mul(psi0.amplitudes()),
        })
    }

    /// Same propagator with eigenvectors pre-rotated into `basis`, so that
    /// [`Propagator::vector`] yields basis coordinates directly.
    pub fn in_basis(&self, basis: &MeasurementBasis) -> Self {
        Self {
            eigenvalues: self.eigenvalues.clone(),
            eigenvectors: basis.matrix().ad_mul(&self.eigenvectors),
            coefficients: self.coefficients.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, theta: f64) -> CVector {
        let rotated = DVector::from_iterator(
            self.dim(),
            self.eigenvalues
                .iter()
                .zip(self.coefficients.iter())
                .map(|(&l, &c)| c * Complex::from_polar(1.0, -l * theta)),
        );
        &self.eigenvectors * rotated
    }

    /// `exp(−iĤθ)|ψ₀⟩`. Only meaningful before [`Propagator::in_basis`].
    pub fn state(&self, theta: f64) -> PureState {
        PureState::from_unit_unchecked(self.vector(theta))
    }
}

/// Polar form `⟨k|ψ⟩ = r_k e^{iφ_k}` of a state in a measurement basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeDecomposition {
    pub radii: Vec<f64>,
    /// In `[0, 2π)`; zero where `degenerate` is set.
    pub phases: Vec<f64>,
    pub probabilities: Vec<f64>,
    /// `r_k` below the degenerate-amplitude threshold; the phase is undefined.
    pub degenerate: Vec<bool>,
}

impl AmplitudeDecomposition {
    pub fn from_coordinates(amplitudes: &CVector, tol: &Tolerances) -> Self {
        let n = amplitudes.len();
        let floor = tol.amplitude_floor(n);
        let mut out = Self {
            radii: Vec::with_capacity(n),
            phases: Vec::with_capacity(n),
            probabilities: Vec::with_capacity(n),
            degenerate: Vec::with_capacity(n),
        };
        for z in amplitudes.iter() {
            let r = z.norm();
            let degenerate = r < floor;
            out.radii.push(r);
            out.probabilities.push(r * r);
            out.phases.push(if degenerate { 0.0 } else { wrap_phase(z.arg()) });
            out.degenerate.push(degenerate);
        }
        out
    }

    /// `Σ_k r_k e^{iφ_k}|k⟩`.
    pub fn reconstruct(&self, basis: &MeasurementBasis) -> CVector {
        let coords = DVector::from_iterator(
            self.radii.len(),
            self.radii
                .iter()
                .zip(&self.phases)
                .map(|(&r, &p)| Complex::from_polar(r, p)),
        );
        basis.matrix() * coords
    }
}

/// Maps an angle into `[0, 2π)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

pub fn decompose(psi: &PureState, basis: &MeasurementBasis) -> Result<AmplitudeDecomposition> {
    check_dims(basis.dim(), psi.dim())?;
    Ok(AmplitudeDecomposition::from_coordinates(
        &basis.coordinates(psi.amplitudes()),
        &Tolerances::default(),
    ))
}

/// Probe, dynamics and measurement of one estimation instrument.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub probe: PureState,
    pub hamiltonian: HermitianOperator,
    pub basis: MeasurementBasis,
    pub tolerances: Tolerances,
}

impl Scenario {
    pub fn new(
        probe: PureState,
        hamiltonian: HermitianOperator,
        basis: MeasurementBasis,
    ) -> Result<Self> {
        check_dims(hamiltonian.dim(), probe.dim())?;
        check_dims(hamiltonian.dim(), basis.dim())?;
        Ok(Self {
            probe,
            hamiltonian,
            basis,
            tolerances: Tolerances::default(),
        })
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn evolved(&self, theta: f64) -> PureState {
        Propagator::new(&self.probe, &self.hamiltonian)
            .expect("dimensions validated at construction")
            .state(theta)
    }

    /// `θ ↦ {⟨k|ψ_θ⟩}` in the measurement basis.
    pub fn amplitude_propagator(&self) -> Propagator {
        Propagator::new(&self.probe, &self.hamiltonian)
            .expect("dimensions validated at construction")
            .in_basis(&self.basis)
    }

    pub fn probabilities(&self, theta: f64) -> Vec<f64> {
        self.amplitude_propagator()
            .vector(theta)
            .iter()
            .map(|z| z.norm_sqr())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn diagonal_matrix_has_identity_eigenvectors() {
        let h = HermitianOperator::from_real_diagonal(&[-0.5, 0.5]).unwrap();
        let s = h.spectrum();
        assert_eq!(s.eigenvalues, vec![-0.5, 0.5]);
        assert!(max_abs(&(&s.eigenvectors - CMatrix::identity(2, 2))) < 1e-15);
    }

    #[test]
    fn pauli_x_spectrum() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let s = eigendecompose(&m).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(max_abs(&(s.reconstruct() - m)) < 1e-14);
    }

    #[test]
    fn non_hermitian_is_rejected_with_deviation() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0.5, 0.), c(0., 0.)]);
        match eigendecompose(&m) {
            Err(Error::NotHermitian { deviation, .. }) => assert!((deviation - 0.5).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
        assert!(HermitianOperator::new(CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn phase_convention_makes_largest_component_real() {
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[c(1., 0.), c(0., 2.), c(0.3, 0.1), c(0., -2.), c(-1., 0.), c(0., 0.), c(0.3, -0.1), c(0., 0.), c(2., 0.)],
        );
        let s = eigendecompose(&m).unwrap();
        for k in 0..3 {
            let v = s.eigenvector(k);
            let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let pivot = v.iter().position(|z| z.norm() >= peak * (1.0 - 1e-9)).unwrap();
            assert!(v[pivot].im == 0.0 && v[pivot].re > 0.0);
        }
    }

    #[test]
    fn evolve_identity_and_eigenstate() {
        let h = HermitianOperator::from_real_diagonal(&[-0.5, 0.5]).unwrap();
        let psi = PureState::normalized(CVector::from_vec(vec![c(1., 0.), c(0., 1.)])).unwrap();
        assert_eq!(evolve(&psi, &h, 0.0).unwrap(), psi);
        let e = PureState::basis_state(2, 1).unwrap();
        let out = evolve(&e, &h, 1.234).unwrap();
        assert!((out.overlap(&e) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolve_hand_computed_qubit() {
        let h = HermitianOperator::from_real_diagonal(&[-0.5, 0.5]).unwrap();
        let psi = PureState::normalized(CVector::from_vec(vec![c(1., 0.), c(1., 0.)])).unwrap();
        let out = evolve(&psi, &h, PI).unwrap();
        // e^{iπ/2}/√2, e^{−iπ/2}/√2
        let want = PureState::from_slice(&[c(0., FRAC_1_SQRT_2), c(0., -FRAC_1_SQRT_2)]).unwrap();
        assert!((out.overlap(&want) - 1.0).abs() < 1e-12);
        assert!((out.amplitudes()[0] - want.amplitudes()[0]).norm() < 1e-12);
    }

    #[test]
    fn evolve_rejects_dimension_mismatch() {
        let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0, 2.0]).unwrap();
        let psi = PureState::basis_state(2, 0).unwrap();
        assert!(matches!(evolve(&psi, &h, 1.0), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn decompose_reads_polar_form() {
        let basis = MeasurementBasis::computational(2);
        let psi = PureState::from_slice(&[c(FRAC_1_SQRT_2, 0.), c(0., FRAC_1_SQRT_2)]).unwrap();
        let d = decompose(&psi, &basis).unwrap();
        assert!((d.radii[0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((d.radii[1] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(d.phases[0].abs() < 1e-15);
        assert!((d.phases[1] - PI / 2.0).abs() < 1e-15);

        let aligned = PureState::basis_state(3, 0).unwrap();
        let d = decompose(&aligned, &MeasurementBasis::computational(3)).unwrap();
        assert_eq!(d.probabilities, vec![1.0, 0.0, 0.0]);
        assert_eq!(d.degenerate, vec![false, true, true]);
    }

    #[test]
    fn negative_phases_wrap_into_range() {
        let psi = PureState::from_slice(&[c(0., -1.)]).unwrap();
        let d = decompose(&psi, &MeasurementBasis::computational(1)).unwrap();
        assert!((d.phases[0] - 1.5 * PI).abs() < 1e-15);
        assert_eq!(wrap_phase(-1e-20), 0.0);
    }

    #[test]
    fn basis_validation() {
        let bad = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)]);
        assert!(matches!(MeasurementBasis::new(bad), Err(Error::NotUnitary { .. })));
        let b = MeasurementBasis::computational(3);
        assert!(b.permuted(&[0, 0, 1]).is_err());
        assert_eq!(b.permuted(&[2, 0, 1]).unwrap().ket(0), b.ket(2));
    }

    #[test]
    fn state_validation() {
        assert!(matches!(
            PureState::from_slice(&[c(1., 0.), c(1., 0.)]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            PureState::normalized(CVector::zeros(2)),
            Err(Error::ZeroVector)
        ));
        assert!(matches!(
            PureState::from_slice(&[c(f64::NAN, 0.)]),
            Err(Error::NonFinite { index: 0 })
        ));
    }

    #[test]
    fn spectrum_cache_is_lazy_and_stable() {
        let h = HermitianOperator::from_real_diagonal(&[3.0, 1.0, 2.0]).unwrap();
        assert!(!h.is_spectrum_cached());
        let first = h.spectrum().clone();
        assert!(h.is_spectrum_cached());
        assert_eq!(first.eigenvalues, vec![1.0, 2.0, 3.0]);
        assert_eq!(eigendecompose(h.matrix()).unwrap(), first);
    }
}
