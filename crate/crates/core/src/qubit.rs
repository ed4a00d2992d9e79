//! Closed-form results for a probe confined to two Hamiltonian eigenvectors.
//!
//! The probe is `cos γ |λ₁⟩ + e^{iχ} sin γ |λ₂⟩`, the measurement kets are
//! `|k₁⟩ = cos α |λ₁⟩ + sin α |λ₂⟩` and `|k₂⟩ = −sin α |λ₁⟩ + cos α |λ₂⟩`.
//! Only the relative phase `β = χ − (λ₂ − λ₁)θ` of the evolved probe enters.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, TAU};

use crate::error::{Error, Result};
use crate::quantum::{
    CMatrix, CVector, Complex, HermitianOperator, MeasurementBasis, PureState, Scenario,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitScenario {
    pub lambda1: f64,
    pub lambda2: f64,
    /// Measurement angle in `(0, π/2)`.
    pub alpha: f64,
    /// Probe angle in `(0, π/2)`.
    pub gamma: f64,
    pub chi: f64,
    pub theta: f64,
}

fn open_quadrant(name: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < FRAC_PI_2) {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("{x} is outside (0, π/2)"),
        });
    }
    Ok(())
}

impl QubitScenario {
    pub fn new(
        lambda1: f64,
        lambda2: f64,
        alpha: f64,
        gamma: f64,
        chi: f64,
        theta: f64,
    ) -> Result<Self> {
        open_quadrant("alpha", alpha)?;
        open_quadrant("gamma", gamma)?;
        for (name, v) in [("lambda1", lambda1), ("lambda2", lambda2), ("chi", chi), ("theta", theta)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "not finite".into(),
                });
            }
        }
        Ok(Self {
            lambda1,
            lambda2,
            alpha,
            gamma,
            chi,
            theta,
        })
    }

    /// `A = λ₂/λ₁`.
    pub fn ratio(&self) -> Result<f64> {
        if self.lambda1 == 0.0 {
            return Err(Error::DegenerateConfiguration(
                "λ₁ = 0 leaves A = λ₂/λ₁ undefined".into(),
            ));
        }
        Ok(self.lambda2 / self.lambda1)
    }

    /// `β = χ − (λ₂ − λ₁)θ` reduced to `[0, 2π)`.
    pub fn beta(&self) -> f64 {
        (self.chi - (self.lambda2 - self.lambda1) * self.theta).rem_euclid(TAU)
    }

    /// `|w₁|/|v₁| = tan α tan γ`.
    pub fn r1(&self) -> f64 {
        self.alpha.tan() * self.gamma.tan()
    }

    /// `|w₂|/|v₂| = tan γ / tan α`.
    pub fn r2(&self) -> f64 {
        self.gamma.tan() / self.alpha.tan()
    }

    pub fn hamiltonian(&self) -> HermitianOperator {
        HermitianOperator::from_real_diagonal(&[self.lambda1, self.lambda2])
            .expect("finite diagonal")
    }

    pub fn probe(&self) -> PureState {
        PureState::from_slice(&[
            Complex::new(self.gamma.cos(), 0.0),
            Complex::from_polar(self.gamma.sin(), self.chi),
        ])
        .expect("unit vector")
    }

    pub fn basis(&self) -> MeasurementBasis {
        let (s, c) = self.alpha.sin_cos();
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex::new(c, 0.0),
                Complex::new(-s, 0.0),
                Complex::new(s, 0.0),
                Complex::new(c, 0.0),
            ],
        );
        MeasurementBasis::new(m).expect("rotation is unitary")
    }

    /// The same instrument as a dense numeric scenario; evaluate at `self.theta`.
    pub fn to_scenario(&self) -> Scenario {
        Scenario::new(self.probe(), self.hamiltonian(), self.basis()).expect("2-dim operands")
    }

    /// Fisher coefficients `c_{ψ,k} = cos²τ_k` for `k = 1, 2`.
    pub fn c_coefficients(&self) -> Result<[f64; 2]> {
        let a = self.ratio()?;
        let cos_b = self.beta().cos();
        let mut out = [0.0; 2];
        for (k, (r, sign)) in [(self.r1(), 1.0), (self.r2(), -1.0)].into_iter().enumerate() {
            let num = a * r * r + sign * (a + 1.0) * cos_b * r + 1.0;
            let den = (r * r + 2.0 * sign * cos_b * r + 1.0)
                * (a * a * r * r + 2.0 * sign * a * cos_b * r + 1.0);
            if den.abs() < 1e-12 {
                return Err(Error::DegenerateConfiguration(format!(
                    "denominator {den:e} for outcome {}",
                    k + 1
                )));
            }
            out[k] = clamp_unit(1.0 - num * num / den);
        }
        Ok(out)
    }

    /// Closed-form `J(α, β, γ)`.
    pub fn j_closed_form(&self) -> ClosedForm {
        let gap = self.lambda1 - self.lambda2;
        let beta = self.beta();
        let s2a = (2.0 * self.alpha).sin();
        let s2g = (2.0 * self.gamma).sin();
        let sum = (2.0 * (self.alpha - self.gamma)).cos()
            + (2.0 * (self.alpha + self.gamma)).cos()
            + 2.0 * beta.cos() * s2a * s2g;
        let den = (sum - 2.0) * (sum + 2.0);
        let num = -4.0 * gap * gap * s2a * s2a * s2g * s2g * beta.sin().powi(2);
        if den.abs() >= 1e-12 {
            ClosedForm {
                value: num / den,
                removable_singularity: false,
            }
        } else {
            // The evolved probe coincides with a measurement ket; the limit
            // along β is (λ₁ − λ₂)² sin²2α.
            ClosedForm {
                value: gap * gap * s2a * s2a,
                removable_singularity: true,
            }
        }
    }
}

fn clamp_unit(c: f64) -> f64 {
    if (-1e-10..0.0).contains(&c) {
        0.0
    } else if c > 1.0 && c <= 1.0 + 1e-10 {
        1.0
    } else {
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub value: f64,
    /// Evaluated through the 0/0 limit.
    pub removable_singularity: bool,
}

/// Optimal two-level instrument for eigenvalues `λ₁ ≠ λ₂`.
#[derive(Debug, Clone)]
pub struct QubitOptimum {
    pub hamiltonian: HermitianOperator,
    /// `(|λ₁⟩ + e^{iχ}|λ₂⟩)/√2`
    pub probe: PureState,
    /// `|k_±⟩ = (|λ₁⟩ ± |λ₂⟩)/√2`
    pub basis: MeasurementBasis,
    /// `(λ₁ − λ₂)²`
    pub j_max: f64,
}

impl QubitOptimum {
    pub fn scenario(&self) -> Scenario {
        Scenario::new(self.probe.clone(), self.hamiltonian.clone(), self.basis.clone())
            .expect("2-dim operands")
    }
}

pub fn optimal_qubit(lambda1: f64, lambda2: f64, chi: f64) -> Result<QubitOptimum> {
    if lambda1 == lambda2 {
        return Err(Error::NoInformation(
            "equal eigenvalues: every probe only gains a global phase".into(),
        ));
    }
    let h = HermitianOperator::from_real_diagonal(&[lambda1, lambda2])?;
    let probe = PureState::normalized(CVector::from_vec(vec![
        Complex::new(1.0, 0.0),
        Complex::from_polar(1.0, chi),
    ]))?;
    let s = FRAC_1_SQRT_2;
    let basis = MeasurementBasis::new(CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex::new(s, 0.0),
            Complex::new(s, 0.0),
            Complex::new(s, 0.0),
            Complex::new(-s, 0.0),
        ],
    ))?;
    Ok(QubitOptimum {
        hamiltonian: h,
        probe,
        basis,
        j_max: (lambda1 - lambda2).powi(2),
    })
}
