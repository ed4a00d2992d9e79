//! Spin-`j` representation of SU(2) for Mach–Zehnder interferometry.
//!
//! `Ĵ_y` generates the phase shift, `n = 2j` photons occupy the two modes and
//! the `Ĵ_z` eigenbasis is photon-number-difference counting.
//!
//! Matrices are written in the `Ĵ_z` eigenbasis ordered by ascending `m`.
//! Ladder elements carry a minus sign, `⟨m+1|Ĵ₊|m⟩ = −√(j(j+1) − m(m+1))`,
//! which gives `Ĵ_y = σ_y/2` for `j = 1/2` in this ordering.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::fisher::{fisher_report, FisherReport};
use crate::quantum::{
    max_abs, CMatrix, CVector, Complex, HermitianOperator, MeasurementBasis, PureState, Scenario,
};

#[derive(Debug, Clone)]
pub struct SpinSystem {
    twice_j: u32,
    jx: HermitianOperator,
    jy: HermitianOperator,
    jz: HermitianOperator,
}

impl SpinSystem {
    /// Spin `j = twice_j / 2`.
    pub fn new(twice_j: u32) -> Result<Self> {
        if twice_j == 0 {
            return Err(Error::InvalidSpin(0.0));
        }
        let j = f64::from(twice_j) / 2.0;
        let dim = twice_j as usize + 1;
        let m = |i: usize| i as f64 - j;

        let mut raise = CMatrix::zeros(dim, dim);
        for i in 0..dim - 1 {
            let mi = m(i);
            raise[(i + 1, i)] = Complex::new(-(j * (j + 1.0) - mi * (mi + 1.0)).sqrt(), 0.0);
        }
        let lower = raise.adjoint();
        let jx = (&raise + &lower).scale(0.5);
        let jy = (&raise - &lower) * Complex::new(0.0, -0.5);
        let jz = CMatrix::from_diagonal(&CVector::from_iterator(
            dim,
            (0..dim).map(|i| Complex::new(m(i), 0.0)),
        ));
        Ok(Self {
            twice_j,
            jx: HermitianOperator::new(jx)?,
            jy: HermitianOperator::new(jy)?,
            jz: HermitianOperator::new(jz)?,
        })
    }

    /// Accepts any `j` with `2j` a positive integer.
    pub fn from_j(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !(twice >= 1.0) || twice.fract() != 0.0 || twice > f64::from(u32::MAX) {
            return Err(Error::InvalidSpin(j));
        }
        Self::new(twice as u32)
    }

    pub fn j(&self) -> f64 {
        f64::from(self.twice_j) / 2.0
    }

    pub fn twice_j(&self) -> u32 {
        self.twice_j
    }

    /// Photon number `n = 2j`.
    pub fn photons(&self) -> u32 {
        self.twice_j
    }

    pub fn dim(&self) -> usize {
        self.twice_j as usize + 1
    }

    pub fn jx(&self) -> &HermitianOperator {
        &self.jx
    }

    pub fn jy(&self) -> &HermitianOperator {
        &self.jy
    }

    pub fn jz(&self) -> &HermitianOperator {
        &self.jz
    }

    /// `j(j+1)`
    pub fn casimir(&self) -> f64 {
        let j = self.j();
        j * (j + 1.0)
    }

    /// Max deviation of `[Ĵ_x, Ĵ_y] = iĴ_z` and its cyclic permutations.
    pub fn commutator_residual(&self) -> f64 {
        let i = Complex::new(0.0, 1.0);
        let comm = |a: &CMatrix, b: &CMatrix| a * b - b * a;
        let (x, y, z) = (self.jx.matrix(), self.jy.matrix(), self.jz.matrix());
        [
            max_abs(&(comm(x, y) - z * i)),
            max_abs(&(comm(y, z) - x * i)),
            max_abs(&(comm(z, x) - y * i)),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// `max |Ĵ_x² + Ĵ_y² + Ĵ_z² − j(j+1)·1|`.
    pub fn casimir_residual(&self) -> f64 {
        let (x, y, z) = (self.jx.matrix(), self.jy.matrix(), self.jz.matrix());
        let total = x * x + y * y + z * z;
        let n = self.dim();
        max_abs(&(total - CMatrix::identity(n, n).scale(self.casimir())))
    }

    /// `|j, m⟩_y` kets ordered by ascending `m`.
    pub fn jy_eigenbasis(&self) -> MeasurementBasis {
        MeasurementBasis::eigenbasis(&self.jy)
    }

    /// `|j, m⟩_z` kets; the computational basis.
    pub fn jz_basis(&self) -> MeasurementBasis {
        MeasurementBasis::computational(self.dim())
    }

    /// `(|j,+j⟩_y + e^{iχ}|j,−j⟩_y)/√2`.
    pub fn noon_state(&self, chi: f64) -> PureState {
        let y = self.jy_eigenbasis();
        let top = y.ket(self.dim() - 1);
        let bottom = y.ket(0);
        let v = (top + bottom * Complex::from_polar(1.0, chi)).scale(FRAC_1_SQRT_2);
        PureState::normalized(v).expect("orthonormal kets")
    }

    /// `(2j+1)^{−1/2} Σ_m e^{imζ}|j,m⟩_y`.
    pub fn phase_state(&self, zeta: f64) -> PureState {
        let y = self.jy_eigenbasis();
        let j = self.j();
        let coords = CVector::from_iterator(
            self.dim(),
            (0..self.dim()).map(|i| Complex::from_polar(1.0, (i as f64 - j) * zeta)),
        );
        PureState::normalized(y.matrix() * coords).expect("unitary image of a nonzero vector")
    }

    /// Two-outcome optimal pair `(|j,+j⟩_y ± e^{iξ}|j,−j⟩_y)/√2` completed by
    /// the remaining `Ĵ_y` eigenkets.
    pub fn optimal_pair_basis(&self, xi: f64) -> MeasurementBasis {
        let y = self.jy_eigenbasis();
        let n = self.dim();
        let top = y.ket(n - 1);
        let bottom = y.ket(0) * Complex::from_polar(1.0, xi);
        let mut kets = vec![
            (&top + &bottom).scale(FRAC_1_SQRT_2),
            (&top - &bottom).scale(FRAC_1_SQRT_2),
        ];
        kets.extend((1..n - 1).map(|i| y.ket(i)));
        MeasurementBasis::from_kets(&kets).expect("orthonormal completion")
    }

    pub fn scenario(&self, probe: PureState, basis: MeasurementBasis) -> Scenario {
        Scenario::new(probe, self.jy.clone(), basis).expect("operands share the spin dimension")
    }

    /// NOON probe, `Ĵ_y` dynamics, `Ĵ_z` counting.
    pub fn mz_fisher_noon(&self, chi: f64, theta: f64) -> Result<FisherReport> {
        fisher_report(&self.scenario(self.noon_state(chi), self.jz_basis()), theta)
    }

    /// Phase-state probe, `Ĵ_y` dynamics, `Ĵ_z` counting.
    pub fn mz_fisher_phase_state(&self, zeta: f64, theta: f64) -> Result<FisherReport> {
        fisher_report(&self.scenario(self.phase_state(zeta), self.jz_basis()), theta)
    }

    /// `exp(−iθĴ_y)` in the `Ĵ_z` basis.
    pub fn rotation_matrix(&self, theta: f64) -> CMatrix {
        self.jy.evolution(theta)
    }

    /// Largest imaginary part among the rotation matrix elements
    /// `⟨j,m₁|e^{−iĴ_yθ}|j,m₂⟩`.
    pub fn wigner_realness(&self, theta: f64) -> f64 {
        self.rotation_matrix(theta)
            .iter()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }

    /// Fisher information of the NOON probe measured with the optimal pair
    /// at each phase `ξ`.
    pub fn scan_pair_phase(&self, chi: f64, theta: f64, xis: &[f64]) -> Result<Vec<(f64, f64)>> {
        xis.iter()
            .map(|&xi| {
                let s = self.scenario(self.noon_state(chi), self.optimal_pair_basis(xi));
                Ok((xi, fisher_report(&s, theta)?.fisher_info))
            })
            .collect()
    }
}
