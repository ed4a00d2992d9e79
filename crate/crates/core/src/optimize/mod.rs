//! Maximization of the Fisher information over measurement bases (and
//! probes) by minimizing the information complement.
//!
//! For a fixed evolved probe `ψ_θ` and a basis `U`, `K(U) = Σ_k A_k²` with
//! `A_k = Re[e^{−iφ_k} ⟨k|Ĥ|ψ_θ⟩]`, which is the matrix-element expansion
//! `Σ_l |H_{k,l}| r_l cos(φ_l − φ_k + Ω_{k,l})` summed in closed form. The
//! search runs seeded multi-start BFGS over the Givens parameterization.

mod bfgs;
pub mod unitary;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::{complement_coefficients, fisher_report};
use crate::quantum::{
    AmplitudeDecomposition, CMatrix, CVector, Complex, HermitianOperator, MeasurementBasis,
    PureState, Scenario,
};
use crate::tolerance::Tolerances;

use bfgs::{minimize, MinimizeOptions, MinimizeOutcome};
use unitary::{decode_probe, BasisParameterization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    /// BFGS with central finite-difference gradients on the parameter vector.
    FiniteDifferenceBfgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Absolute decrease of `K` over `stall_window` iterations that counts as converged.
    pub tolerance: f64,
    pub stall_window: usize,
    pub gradient_step: f64,
    pub seed: u64,
    pub method: SearchMethod,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 2000,
            tolerance: 1e-10,
            stall_window: 10,
            gradient_step: 1e-6,
            seed: 0,
            method: SearchMethod::FiniteDifferenceBfgs,
        }
    }
}

impl OptimizerConfig {
    fn minimize_options(&self) -> MinimizeOptions {
        MinimizeOptions {
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            stall_window: self.stall_window,
            gradient_step: self.gradient_step,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub theta: f64,
    pub best_basis: MeasurementBasis,
    pub best_probe: PureState,
    pub probe_optimized: bool,
    pub j_achieved: f64,
    /// `K` at the optimum.
    pub complement: f64,
    /// `4Δ²Ĥ` of the (best) probe.
    pub variance_bound: f64,
    /// `‖Ĥ‖²`
    pub seminorm_bound: f64,
    pub restarts_used: usize,
    /// The winning restart met the stall criterion within its budget.
    pub converged: bool,
    /// BFGS iterations taken by the winning restart.
    pub iterations: usize,
    /// `max_p |A_p − r_p B_p|` over outcomes where `B_p` is defined, evaluated
    /// with `Ĥ − ⟨Ĥ⟩` so that it vanishes at an optimum.
    pub stationarity_residual: Option<f64>,
    /// Squared norm of the probe inside the extremal eigenspaces (free probe only).
    pub extremal_overlap: Option<f64>,
    pub degenerate_extremes: bool,
    /// Objective after each accepted iteration of the winning restart.
    pub complement_trace: Vec<f64>,
}

fn complex_pairs<'a>(it: impl Iterator<Item = &'a Complex>) -> Vec<[f64; 2]> {
    it.map(|z| [z.re, z.im]).collect()
}

impl Serialize for OptimizationResult {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Flat<'a> {
            theta: f64,
            j_achieved: f64,
            complement: f64,
            var_bound: f64,
            seminorm_bound: f64,
            restarts_used: usize,
            converged: bool,
            iterations: usize,
            probe_optimized: bool,
            stationarity_residual: Option<f64>,
            extremal_overlap: Option<f64>,
            degenerate_extremes: bool,
            dim: usize,
            probe: Vec<[f64; 2]>,
            /// Row-major.
            basis: Vec<[f64; 2]>,
            #[serde(skip)]
            _marker: std::marker::PhantomData<&'a ()>,
        }
        let b = self.best_basis.matrix();
        let d = b.nrows();
        let row_major: Vec<Complex> = (0..d)
            .flat_map(|r| (0..d).map(move |c| b[(r, c)]))
            .collect();
        Flat {
            theta: self.theta,
            j_achieved: self.j_achieved,
            complement: self.complement,
            var_bound: self.variance_bound,
            seminorm_bound: self.seminorm_bound,
            restarts_used: self.restarts_used,
            converged: self.converged,
            iterations: self.iterations,
            probe_optimized: self.probe_optimized,
            stationarity_residual: self.stationarity_residual,
            extremal_overlap: self.extremal_overlap,
            degenerate_extremes: self.degenerate_extremes,
            dim: d,
            probe: complex_pairs(self.best_probe.amplitudes().iter()),
            basis: complex_pairs(row_major.iter()),
            _marker: std::marker::PhantomData,
        }
        .serialize(serializer)
    }
}

/// `‖Ĥ‖ = λ_max − λ_min`.
pub fn seminorm(h: &HermitianOperator) -> f64 {
    h.seminorm()
}

/// `4Δ²Ĥ = 4(⟨Ĥ²⟩ − ⟨Ĥ⟩²)`.
pub fn variance_bound(psi0: &PureState, h: &HermitianOperator) -> Result<f64> {
    if psi0.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: psi0.dim(),
        });
    }
    let mean = h.expectation(psi0);
    Ok(4.0 * (h.second_moment(psi0) - mean * mean))
}

/// `K` for basis `u` given `ψ_θ` and `Ĥψ_θ`.
fn complement_for_basis(u: &CMatrix, psi: &CVector, h_psi: &CVector, floor: f64) -> f64 {
    let a = u.ad_mul(psi);
    let b = u.ad_mul(h_psi);
    a.iter()
        .zip(b.iter())
        .map(|(a, b)| {
            let r = a.norm();
            if r < floor {
                0.0
            } else {
                let coeff = (a.conj() * b).re / r;
                coeff * coeff
            }
        })
        .sum()
}

/// `max_p |A_p − r_p B_p|` with
/// `B_p = −Σ_k A_k |H_{k,p}| sin(φ_p − φ_k + Ω_{k,p}) / Σ_k r_k |H_{k,p}| sin(φ_p − φ_k + Ω_{k,p})`,
/// skipping `p` whose denominator magnitude is below `floor`.
pub fn stationarity_residual(
    decomposition: &AmplitudeDecomposition,
    h_in_basis: &CMatrix,
    a: &[f64],
    floor: f64,
) -> Option<f64> {
    let n = a.len();
    let mut worst: Option<f64> = None;
    for p in 0..n {
        let mut num = 0.0;
        let mut den = 0.0;
        for k in 0..n {
            let hkp = h_in_basis[(k, p)];
            let s = hkp.norm()
                * (decomposition.phases[p] - decomposition.phases[k] + hkp.arg()).sin();
            num += a[k] * s;
            den += decomposition.radii[k] * s;
        }
        if den.abs() < floor {
            continue;
        }
        let b = -num / den;
        let r = (a[p] - decomposition.radii[p] * b).abs();
        worst = Some(worst.map_or(r, |w: f64| w.max(r)));
    }
    worst
}

fn run_restarts<F>(n_params: usize, config: &OptimizerConfig, init: impl Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync, objective: F) -> Result<(MinimizeOutcome, usize)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if config.restarts == 0 {
        return Err(Error::InvalidParameter {
            name: "restarts",
            reason: "at least one restart is required".into(),
        });
    }
    let opts = config.minimize_options();
    let outcomes: Vec<MinimizeOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(r as u64));
            let x0 = init(&mut rng);
            debug_assert_eq!(x0.len(), n_params);
            minimize(&objective, x0, &opts)
        })
        .collect();
    // Ordered reduction: lowest value, ties to the lowest restart index.
    let best = outcomes
        .into_iter()
        .reduce(|best, o| if o.value < best.value { o } else { best })
        .expect("at least one restart");
    Ok((best, config.restarts))
}

fn finish(
    probe: PureState,
    h: &HermitianOperator,
    basis: MeasurementBasis,
    theta: f64,
    tolerances: &Tolerances,
) -> Result<(f64, f64, Option<f64>)> {
    let scenario = Scenario::new(probe, h.clone(), basis)?.with_tolerances(*tolerances);
    let report = fisher_report(&scenario, theta)?;
    let psi_theta = scenario.evolved(theta);
    let decomposition = AmplitudeDecomposition::from_coordinates(
        &scenario.basis.coordinates(psi_theta.amplitudes()),
        tolerances,
    );
    let j = (4.0 * (report.h2_expectation - report.complement)).max(0.0);
    // In the raw gauge the ratio settles at B_p = −⟨Ĥ⟩ rather than ⟨Ĥ⟩, so
    // the residual would read 2|⟨Ĥ⟩|r_p at a genuine optimum.
    let centered = h.shifted(-report.h_expectation);
    let h_kl = scenario.basis.represent(&centered);
    let a = complement_coefficients(&decomposition, &h_kl);
    let residual = stationarity_residual(&decomposition, &h_kl, &a, tolerances.denominator_floor);
    Ok((j, report.complement, residual))
}

/// Best measurement basis for a fixed probe at `θ`.
pub fn optimize_measurement(
    psi0: &PureState,
    h: &HermitianOperator,
    theta: f64,
    config: &OptimizerConfig,
) -> Result<OptimizationResult> {
    if psi0.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: psi0.dim(),
        });
    }
    let tolerances = Tolerances::default();
    let dim = h.dim();
    let param = BasisParameterization::new(dim);
    let psi_theta = crate::quantum::evolve(psi0, h, theta)?;
    let psi = psi_theta.amplitudes().clone();
    let h_psi = h.apply(&psi);
    let floor = tolerances.amplitude_floor(dim);

    let (best, restarts_used) = run_restarts(
        param.len(),
        config,
        |rng| (0..param.len()).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect(),
        |x: &[f64]| complement_for_basis(&param.decode(x), &psi, &h_psi, floor),
    )?;

    let basis = MeasurementBasis::with_tolerance(param.decode(&best.x), tolerances.unitarity)?;
    let (j_achieved, complement, residual) = finish(psi0.clone(), h, basis.clone(), theta, &tolerances)?;
    let s = h.seminorm();
    Ok(OptimizationResult {
        theta,
        best_basis: basis,
        best_probe: psi0.clone(),
        probe_optimized: false,
        j_achieved,
        complement,
        variance_bound: variance_bound(psi0, h)?,
        seminorm_bound: s * s,
        restarts_used,
        converged: best.converged,
        iterations: best.iterations,
        stationarity_residual: residual,
        extremal_overlap: None,
        degenerate_extremes: false,
        complement_trace: best.trace,
    })
}

/// Squared weight of `psi` on the eigenspaces of the extremal eigenvalues,
/// and whether either extremal eigenvalue is degenerate.
pub fn extremal_overlap(psi: &PureState, h: &HermitianOperator) -> (f64, bool) {
    let s = h.spectrum();
    let n = s.eigenvalues.len();
    let scale = 1e-9 * s.max().abs().max(s.min().abs()).max(1.0);
    let low: Vec<usize> = (0..n).filter(|&i| s.eigenvalues[i] - s.min() <= scale).collect();
    let high: Vec<usize> = (0..n).filter(|&i| s.max() - s.eigenvalues[i] <= scale).collect();
    let degenerate = low.len() > 1 || high.len() > 1;
    let mut members = low;
    members.extend(high);
    members.sort_unstable();
    members.dedup();
    let weight = members
        .iter()
        .map(|&i| s.eigenvectors.column(i).dotc(psi.amplitudes()).norm_sqr())
        .sum();
    (weight, degenerate)
}

/// Joint maximization over probe and measurement basis at `θ`.
pub fn optimize_probe_and_measurement(
    h: &HermitianOperator,
    theta: f64,
    config: &OptimizerConfig,
) -> Result<OptimizationResult> {
    let tolerances = Tolerances::default();
    let dim = h.dim();
    let param = BasisParameterization::new(dim);
    let nb = param.len();
    let evolution = h.evolution(theta);
    let floor = tolerances.amplitude_floor(dim);

    let objective = |x: &[f64]| {
        let psi0 = decode_probe(&x[nb..]);
        let psi = &evolution * psi0;
        let h_psi = h.apply(&psi);
        complement_for_basis(&param.decode(&x[..nb]), &psi, &h_psi, floor) - h_psi.norm_squared()
    };
    let (best, restarts_used) = run_restarts(
        nb + 2 * dim,
        config,
        |rng| {
            let mut x: Vec<f64> = (0..nb)
                .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect();
            x.extend((0..2 * dim).map(|_| rng.random_range(-1.0..1.0)));
            x
        },
        objective,
    )?;

    let probe = PureState::normalized(decode_probe(&best.x[nb..]))?;
    let basis = MeasurementBasis::with_tolerance(param.decode(&best.x[..nb]), tolerances.unitarity)?;
    let (j_achieved, complement, residual) = finish(probe.clone(), h, basis.clone(), theta, &tolerances)?;
    let (overlap, degenerate) = extremal_overlap(&probe, h);
    let s = h.seminorm();
    Ok(OptimizationResult {
        theta,
        best_basis: basis,
        variance_bound: variance_bound(&probe, h)?,
        best_probe: probe,
        probe_optimized: true,
        j_achieved,
        complement,
        seminorm_bound: s * s,
        restarts_used,
        converged: best.converged,
        iterations: best.iterations,
        stationarity_residual: residual,
        extremal_overlap: Some(overlap),
        degenerate_extremes: degenerate,
        complement_trace: best.trace,
    })
}
