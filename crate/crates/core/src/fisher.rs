//! Classical Fisher information of a (probe, Hamiltonian, basis, θ) scenario.
//!
//! Three routes compute the same `J(θ)`:
//!
//! * distribution: `Σ_k ṗ_k² / p_k` with `ṗ_k` analytic or by finite difference;
//! * trace: `⟨ψ_θ|Ĥ F̂_θ Ĥ|ψ_θ⟩` with the Fisher operator `F̂_θ = 4 Σ_k cos²τ_k |k⟩⟨k|`;
//! * complement: `4(⟨Ĥ²⟩ − K)` with `K = Σ_k A_k²` built from matrix elements of `Ĥ`.
//!
//! Outcomes whose amplitude vanishes (`r_k` below the degenerate threshold)
//! have no phase. All routes use the limit of a zero crossing there: the
//! velocity is purely radial, so `cos²τ_k = 1`, `A_k = 0`, and the outcome
//! contributes `4|⟨k|Ĥ|ψ_θ⟩|²`.

use std::f64::consts::PI;

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::{
    AmplitudeDecomposition, CMatrix, CVector, Complex, MeasurementBasis, PureState, Scenario,
};
use crate::tolerance::Tolerances;

/// Value of the distribution-level Fisher information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionFisher {
    /// `+∞` when `singular`.
    pub value: f64,
    /// Some `p_k` is below the floor while `ṗ_k` is not.
    pub singular: bool,
}

/// `J = Σ_k ṗ_k² / p_k`.
///
/// Outcomes with `p_k < ε` are dropped when `ṗ_k² < ε` (removable 0/0);
/// otherwise the point is singular and `J = +∞`.
pub fn fisher_from_distribution(
    p: &[f64],
    p_dot: &[f64],
    tol: &Tolerances,
) -> Result<DistributionFisher> {
    if p.len() != p_dot.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: p_dot.len(),
        });
    }
    if p.is_empty() {
        return Err(Error::Empty);
    }
    if let Some((index, &value)) = p.iter().enumerate().find(|(_, &x)| x < 0.0 || x.is_nan()) {
        return Err(Error::NegativeProbability { index, value });
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalizedDistribution { sum });
    }
    let eps = tol.probability_floor;
    let mut value = 0.0;
    let mut singular = false;
    for (&pk, &dk) in p.iter().zip(p_dot) {
        if pk >= eps {
            value += dk * dk / pk;
        } else if dk * dk >= eps {
            singular = true;
        }
    }
    Ok(DistributionFisher {
        value: if singular { f64::INFINITY } else { value },
        singular,
    })
}

/// Basis-resolved amplitudes and fluxes of `ψ_θ`.
#[derive(Debug, Clone)]
pub(crate) struct Kinematics {
    pub psi_theta: PureState,
    /// `⟨k|ψ_θ⟩`
    pub amplitudes: CVector,
    /// `⟨k|Ĥ|ψ_θ⟩`; the velocity amplitude is `⟨k|ψ̇_θ⟩ = −i·flux_k`.
    pub flux: CVector,
    pub h_psi: CVector,
}

impl Kinematics {
    pub fn new(scenario: &Scenario, theta: f64) -> Self {
        let psi_theta = scenario.evolved(theta);
        let h_psi = scenario.hamiltonian.apply(psi_theta.amplitudes());
        Self {
            amplitudes: scenario.basis.coordinates(psi_theta.amplitudes()),
            flux: scenario.basis.coordinates(&h_psi),
            psi_theta,
            h_psi,
        }
    }

    pub fn velocity(&self, k: usize) -> Complex {
        Complex::new(0.0, -1.0) * self.flux[k]
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `ṗ_k = 2 Re[⟨ψ_θ|k⟩⟨k|ψ̇_θ⟩]`.
    pub fn probability_derivatives(&self) -> Vec<f64> {
        (0..self.amplitudes.len())
            .map(|k| 2.0 * (self.amplitudes[k].conj() * self.velocity(k)).re)
            .collect()
    }
}

/// `(p_k(θ), ṗ_k(θ))` with `ψ̇_θ = −iĤψ_θ` taken exactly.
pub fn analytic_probability_derivatives(
    scenario: &Scenario,
    theta: f64,
) -> (Vec<f64>, Vec<f64>) {
    let kin = Kinematics::new(scenario, theta);
    (kin.probabilities(), kin.probability_derivatives())
}

/// Central finite difference of `p_k(θ)` with the scenario's step.
pub fn finite_difference_probability_derivatives(
    scenario: &Scenario,
    theta: f64,
) -> (Vec<f64>, Vec<f64>) {
    let h = scenario.tolerances.finite_difference_step;
    let prop = scenario.amplitude_propagator();
    let prob = |t: f64| -> Vec<f64> { prop.vector(t).iter().map(|z| z.norm_sqr()).collect() };
    let plus = prob(theta + h);
    let minus = prob(theta - h);
    let p_dot = plus
        .iter()
        .zip(&minus)
        .map(|(a, b)| (a - b) / (2.0 * h))
        .collect();
    (prob(theta), p_dot)
}

/// Distribution route with finite-difference `ṗ`.
pub fn finite_difference_fisher(scenario: &Scenario, theta: f64) -> Result<DistributionFisher> {
    let (p, p_dot) = finite_difference_probability_derivatives(scenario, theta);
    fisher_from_distribution(&p, &p_dot, &scenario.tolerances)
}

fn wrap_signed(angle: f64) -> f64 {
    // (−π, π]
    let mut a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Inclination `τ_k = arg⟨k|ψ̇_θ⟩ − arg⟨k|ψ_θ⟩` in `(−π, π]`; `None` where
/// either amplitude is below the degenerate threshold.
pub fn tau_angles(
    psi_theta: &PureState,
    psi_dot: &CVector,
    basis: &MeasurementBasis,
    tol: &Tolerances,
) -> Result<Vec<Option<f64>>> {
    if psi_theta.dim() != basis.dim() || psi_dot.len() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: if psi_theta.dim() != basis.dim() {
                psi_theta.dim()
            } else {
                psi_dot.len()
            },
        });
    }
    let a = basis.coordinates(psi_theta.amplitudes());
    let v = basis.coordinates(psi_dot);
    let floor = tol.amplitude_floor(basis.dim());
    Ok(a.iter()
        .zip(v.iter())
        .map(|(a, v)| {
            if a.norm() < floor || v.norm() < floor {
                None
            } else {
                Some(wrap_signed(v.arg() - a.arg()))
            }
        })
        .collect())
}

/// `4 Σ_k c_k |k⟩⟨k|` for some basis `{|k⟩}`.
#[derive(Debug, Clone)]
pub struct FisherOperator {
    /// `c_{ψ,k} ∈ [0, 1]`.
    pub coefficients: Vec<f64>,
    pub basis: MeasurementBasis,
    pub matrix: CMatrix,
}

impl FisherOperator {
    fn from_coefficients(coefficients: Vec<f64>, basis: MeasurementBasis) -> Self {
        let diag = DVector::from_iterator(
            coefficients.len(),
            coefficients.iter().map(|&c| Complex::new(4.0 * c, 0.0)),
        );
        let u = basis.matrix();
        let matrix = u * CMatrix::from_diagonal(&diag) * u.adjoint();
        Self {
            coefficients,
            basis,
            matrix,
        }
    }

    /// `⟨v|F|v⟩` for an arbitrary (unnormalized) vector, typically `Ĥ|ψ⟩`.
    pub fn sandwich(&self, v: &CVector) -> f64 {
        v.dotc(&(&self.matrix * v)).re
    }
}

fn fisher_coefficients(kin: &Kinematics, tol: &Tolerances) -> Vec<f64> {
    let floor = tol.amplitude_floor(kin.amplitudes.len());
    (0..kin.amplitudes.len())
        .map(|k| {
            let a = kin.amplitudes[k];
            let v = kin.velocity(k);
            if a.norm() < floor || v.norm() < floor {
                // ṙ_k² at a vanishing amplitude is |⟨k|ψ̇⟩|²; a vanishing flux
                // contributes nothing.
                let flux_sqr = v.norm_sqr();
                if flux_sqr >= tol.flux_floor && a.norm() < floor {
                    1.0
                } else {
                    0.0
                }
            } else {
                let tau = wrap_signed(v.arg() - a.arg());
                let c = tau.cos();
                c * c
            }
        })
        .collect()
}

/// `F̂_θ = 4 Σ_k cos²τ_k |k⟩⟨k|`.
pub fn fisher_operator(scenario: &Scenario, theta: f64) -> FisherOperator {
    let kin = Kinematics::new(scenario, theta);
    FisherOperator::from_coefficients(
        fisher_coefficients(&kin, &scenario.tolerances),
        scenario.basis.clone(),
    )
}

/// `Φ̂_θ = e^{iĤθ} F̂_θ e^{−iĤθ} = 4 Σ_k c_{ψ,k} |k′⟩⟨k′|` with `|k′⟩ = e^{iĤθ}|k⟩`.
pub fn transformed_fisher_operator(scenario: &Scenario, theta: f64) -> FisherOperator {
    let f = fisher_operator(scenario, theta);
    if theta == 0.0 {
        return f;
    }
    let back = scenario.hamiltonian.evolution(-theta);
    let kets = &back * scenario.basis.matrix();
    FisherOperator::from_coefficients(f.coefficients, MeasurementBasis::from_unitary_unchecked(kets))
}

/// `J = ⟨ψ_θ|Ĥ F̂_θ Ĥ|ψ_θ⟩`.
pub fn trace_form_fisher(scenario: &Scenario, theta: f64) -> f64 {
    let kin = Kinematics::new(scenario, theta);
    let f = FisherOperator::from_coefficients(
        fisher_coefficients(&kin, &scenario.tolerances),
        scenario.basis.clone(),
    );
    f.sandwich(&kin.h_psi)
}

/// Information complement `K = Σ_k A_k²` and the coefficients `A_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Complement {
    pub value: f64,
    pub coefficients: Vec<f64>,
}

/// `A_k = Σ_l |H_{k,l}| r_l cos(φ_l − φ_k + Ω_{k,l})` from the polar forms of
/// `⟨k|ψ⟩` and `⟨k|Ĥ|l⟩`.
///
/// `A_k = −r_k φ̇_k`; only its square enters `K`, and with this sign
/// `⟨Ĥ⟩ = Σ_k r_k A_k`.
pub fn complement_coefficients(
    decomposition: &AmplitudeDecomposition,
    h_in_basis: &CMatrix,
) -> Vec<f64> {
    let n = decomposition.radii.len();
    (0..n)
        .map(|k| {
            if decomposition.degenerate[k] {
                return 0.0;
            }
            let phi_k = decomposition.phases[k];
            (0..n)
                .map(|l| {
                    let hkl = h_in_basis[(k, l)];
                    hkl.norm() * decomposition.radii[l] * (decomposition.phases[l] - phi_k + hkl.arg()).cos()
                })
                .sum()
        })
        .collect()
}

pub fn information_complement(scenario: &Scenario, theta: f64) -> Complement {
    let psi_theta = scenario.evolved(theta);
    let decomposition = AmplitudeDecomposition::from_coordinates(
        &scenario.basis.coordinates(psi_theta.amplitudes()),
        &scenario.tolerances,
    );
    let h_kl = scenario.basis.represent(&scenario.hamiltonian);
    let coefficients = complement_coefficients(&decomposition, &h_kl);
    Complement {
        value: coefficients.iter().map(|a| a * a).sum(),
        coefficients,
    }
}

/// Per-outcome quantities at one `θ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeDiagnostics {
    pub r: f64,
    pub phi: f64,
    /// `None` when undefined.
    pub tau: Option<f64>,
    pub a: f64,
    pub p: f64,
    pub p_dot: f64,
    pub c: f64,
}

/// All Fisher quantities of a scenario at one `θ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FisherReport {
    pub theta: f64,
    /// Trace route; the reference value.
    pub fisher_info: f64,
    pub j_eq1: f64,
    pub j_trace: f64,
    pub j_complement: f64,
    pub complement: f64,
    #[serde(rename = "h2")]
    pub h2_expectation: f64,
    #[serde(skip)]
    pub h_expectation: f64,
    /// `4Δ²Ĥ`.
    #[serde(rename = "var_bound")]
    pub variance_bound: f64,
    /// `‖Ĥ‖²`.
    pub seminorm_bound: f64,
    /// The distribution-level route hit a probability below the floor with
    /// nonzero slope.
    pub singular: bool,
    #[serde(skip)]
    pub per_outcome: Vec<OutcomeDiagnostics>,
}

impl FisherReport {
    pub const CSV_COLUMNS: [&'static str; 10] = [
        "theta",
        "fisher_info",
        "j_eq1",
        "j_trace",
        "j_complement",
        "complement",
        "h2",
        "var_bound",
        "seminorm_bound",
        "singular",
    ];

    pub fn csv_values(&self) -> [f64; 10] {
        [
            self.theta,
            self.fisher_info,
            self.j_eq1,
            self.j_trace,
            self.j_complement,
            self.complement,
            self.h2_expectation,
            self.variance_bound,
            self.seminorm_bound,
            if self.singular { 1.0 } else { 0.0 },
        ]
    }
}

pub fn fisher_report(scenario: &Scenario, theta: f64) -> Result<FisherReport> {
    let tol = &scenario.tolerances;
    let kin = Kinematics::new(scenario, theta);
    let p = kin.probabilities();
    let p_dot = kin.probability_derivatives();

    let distribution = fisher_from_distribution(&p, &p_dot, tol)?;
    let decomposition = AmplitudeDecomposition::from_coordinates(&kin.amplitudes, tol);
    let j_eq1: f64 = (0..p.len())
        .map(|k| {
            if decomposition.degenerate[k] {
                4.0 * kin.flux[k].norm_sqr()
            } else {
                p_dot[k] * p_dot[k] / p[k]
            }
        })
        .sum();

    let coefficients = fisher_coefficients(&kin, tol);
    let psi_dot = kin.h_psi.map(|z| Complex::new(0.0, -1.0) * z);
    let taus = tau_angles(&kin.psi_theta, &psi_dot, &scenario.basis, tol)?;
    let operator = FisherOperator::from_coefficients(coefficients.clone(), scenario.basis.clone());
    let j_trace = operator.sandwich(&kin.h_psi);

    let h_kl = scenario.basis.represent(&scenario.hamiltonian);
    let a = complement_coefficients(&decomposition, &h_kl);
    let complement: f64 = a.iter().map(|x| x * x).sum();
    let h2 = kin.h_psi.norm_squared();
    let h_mean = kin.psi_theta.amplitudes().dotc(&kin.h_psi).re;
    let j_complement = 4.0 * (h2 - complement);

    let seminorm = scenario.hamiltonian.seminorm();
    let per_outcome = (0..p.len())
        .map(|k| OutcomeDiagnostics {
            r: decomposition.radii[k],
            phi: decomposition.phases[k],
            tau: taus[k],
            a: a[k],
            p: p[k],
            p_dot: p_dot[k],
            c: coefficients[k],
        })
        .collect();

    Ok(FisherReport {
        theta,
        fisher_info: j_trace,
        j_eq1,
        j_trace,
        j_complement,
        complement,
        h2_expectation: h2,
        h_expectation: h_mean,
        variance_bound: 4.0 * (h2 - h_mean * h_mean),
        seminorm_bound: seminorm * seminorm,
        singular: distribution.singular,
        per_outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::HermitianOperator;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn qubit_optimum() -> Scenario {
        let h = HermitianOperator::from_real_diagonal(&[-0.5, 0.5]).unwrap();
        let probe = PureState::from_slice(&[c(FRAC_1_SQRT_2, 0.), c(FRAC_1_SQRT_2, 0.)]).unwrap();
        let x = MeasurementBasis::from_kets(&[
            CVector::from_vec(vec![c(FRAC_1_SQRT_2, 0.), c(FRAC_1_SQRT_2, 0.)]),
            CVector::from_vec(vec![c(FRAC_1_SQRT_2, 0.), c(-FRAC_1_SQRT_2, 0.)]),
        ])
        .unwrap();
        Scenario::new(probe, h, x).unwrap()
    }

    #[test]
    fn bernoulli_distribution() {
        let tol = Tolerances::default();
        let j = fisher_from_distribution(&[0.5, 0.5], &[1.0, -1.0], &tol).unwrap();
        assert!((j.value - 4.0).abs() < 1e-15);
        let j = fisher_from_distribution(&[0.3, 0.7], &[0.0, 0.0], &tol).unwrap();
        assert_eq!(j.value, 0.0);
    }

    #[test]
    fn distribution_floor_rules() {
        let tol = Tolerances::default();
        // removable 0/0
        let j = fisher_from_distribution(&[0.0, 1.0], &[0.0, 0.0], &tol).unwrap();
        assert_eq!(j, DistributionFisher { value: 0.0, singular: false });
        // Bernoulli at θ = 0
        let j = fisher_from_distribution(&[0.0, 1.0], &[1.0, -1.0], &tol).unwrap();
        assert!(j.singular && j.value.is_infinite());
    }

    #[test]
    fn distribution_errors() {
        let tol = Tolerances::default();
        assert!(matches!(
            fisher_from_distribution(&[1.2, -0.2], &[0.0, 0.0], &tol),
            Err(Error::NegativeProbability { index: 1, .. })
        ));
        assert!(matches!(
            fisher_from_distribution(&[1.0], &[0.0, 0.0], &tol),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            fisher_from_distribution(&[0.5, 0.4], &[0.0, 0.0], &tol),
            Err(Error::NotNormalizedDistribution { .. })
        ));
    }

    #[test]
    fn qubit_optimum_derivatives() {
        let s = qubit_optimum();
        let (p, p_dot) = analytic_probability_derivatives(&s, PI / 2.0);
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        assert!((p_dot[0].abs() - 0.5).abs() < 1e-15);
        assert!((p_dot[1].abs() - 0.5).abs() < 1e-15);
        assert!((p_dot[0] + p_dot[1]).abs() < 1e-15);
        let r = fisher_report(&s, PI / 2.0).unwrap();
        assert!((r.fisher_info - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigenstate_probe_carries_no_information() {
        let h = HermitianOperator::from_real_diagonal(&[-1.0, 0.25, 2.0]).unwrap();
        let probe = PureState::basis_state(3, 1).unwrap();
        let basis = crate::sampling::random_basis(3, &mut rand_chacha::ChaCha8Rng::seed_from_u64(1));
        let s = Scenario::new(probe, h, basis).unwrap();
        let (_, p_dot) = analytic_probability_derivatives(&s, 0.8);
        assert!(p_dot.iter().all(|d| d.abs() < 1e-15));
        let r = fisher_report(&s, 0.8).unwrap();
        assert!(r.fisher_info.abs() < 1e-14);
        assert!((r.complement - 0.0625).abs() < 1e-14);
        assert!((r.h2_expectation - 0.0625).abs() < 1e-14);
        let k = information_complement(&s, 0.8);
        assert!((k.value - 0.0625).abs() < 1e-14);
    }

    use rand::SeedableRng;

    #[test]
    fn tau_orthogonal_and_parallel_velocity() {
        let basis = MeasurementBasis::computational(1);
        let psi = PureState::from_slice(&[c(1.0, 0.0)]).unwrap();
        let tol = Tolerances::default();
        let t = tau_angles(&psi, &CVector::from_vec(vec![c(0.0, 2.0)]), &basis, &tol).unwrap();
        assert!((t[0].unwrap() - PI / 2.0).abs() < 1e-15);
        assert!(t[0].unwrap().cos().powi(2) < 1e-30);
        let t = tau_angles(&psi, &CVector::from_vec(vec![c(0.0, -2.0)]), &basis, &tol).unwrap();
        assert!((t[0].unwrap() + PI / 2.0).abs() < 1e-15);
        let t = tau_angles(&psi, &CVector::from_vec(vec![c(0.3, 0.0)]), &basis, &tol).unwrap();
        assert_eq!(t[0], Some(0.0));
        let t = tau_angles(&psi, &CVector::from_vec(vec![c(0.0, 0.0)]), &basis, &tol).unwrap();
        assert_eq!(t[0], None);
    }

    #[test]
    fn transformed_operator_at_zero_is_fisher_operator() {
        let s = qubit_optimum();
        let f = fisher_operator(&s, 0.0);
        let phi = transformed_fisher_operator(&s, 0.0);
        assert_eq!(f.matrix, phi.matrix);
    }

    #[test]
    fn zero_crossing_uses_radial_limit() {
        // At θ = 0 the qubit probe coincides with the first measurement ket.
        let s = qubit_optimum();
        let r = fisher_report(&s, 0.0).unwrap();
        assert!(r.per_outcome[1].tau.is_none());
        assert_eq!(r.per_outcome[1].c, 1.0);
        assert_eq!(r.per_outcome[1].a, 0.0);
        for j in [r.j_eq1, r.j_trace, r.j_complement] {
            assert!((j - 1.0).abs() < 1e-14, "{j}");
        }
        // Continuity with nearby θ.
        let near = fisher_report(&s, 1e-4).unwrap();
        assert!((near.fisher_info - 1.0).abs() < 1e-12);
    }
}
