//! The `compute`, `optimize` and `estimate` commands.

use rayon::prelude::*;

use qfisher::estimation::{cramer_rao_check, CramerRaoReport, EstimationExperiment};
use qfisher::fisher::fisher_report;
use qfisher::optimize::{optimize_measurement, optimize_probe_and_measurement, OptimizerConfig};
use qfisher::{FisherReport, OptimizationResult, Scenario};

use crate::error::{CliError, Result};
use crate::scenario::{BasisChoice, ResolvedScenario};
use crate::table::{Provenance, ScanTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ProbeMode {
    Fixed,
    Free,
}

fn optimizer_config(seed: u64, restarts: Option<usize>) -> OptimizerConfig {
    OptimizerConfig {
        seed,
        restarts: restarts.unwrap_or(OptimizerConfig::default().restarts),
        ..OptimizerConfig::default()
    }
}

fn report_at(s: &ResolvedScenario, theta: f64) -> Result<FisherReport> {
    let scenario = match &s.basis {
        BasisChoice::Fixed(_) => s.fixed().expect("fixed basis"),
        BasisChoice::Optimize => {
            let best = optimize_measurement(&s.probe, &s.hamiltonian, theta, &optimizer_config(s.seed, None))?;
            Scenario::new(s.probe.clone(), s.hamiltonian.clone(), best.best_basis)?.with_tolerances(s.tolerances)
        }
    };
    Ok(fisher_report(&scenario, theta)?)
}

/// One row per θ with every Fisher route side by side.
pub fn compute(s: &ResolvedScenario) -> Result<ScanTable> {
    let rows: Vec<Vec<f64>> = s
        .thetas
        .par_iter()
        .map(|&t| report_at(s, t).map(|r| r.csv_values().to_vec()))
        .collect::<Result<_>>()?;
    ScanTable::new(
        Provenance::new(s.sha256.clone(), s.seed),
        &FisherReport::CSV_COLUMNS,
        rows,
    )
}

pub fn optimize(
    s: &ResolvedScenario,
    probe: ProbeMode,
    restarts: Option<usize>,
    seed: Option<u64>,
) -> Result<OptimizationResult> {
    let theta = s.theta("optimize")?;
    if restarts == Some(0) {
        return Err(CliError::Usage("--restarts must be at least 1".into()));
    }
    let config = optimizer_config(seed.unwrap_or(s.seed), restarts);
    let result = match probe {
        ProbeMode::Fixed => optimize_measurement(&s.probe, &s.hamiltonian, theta, &config)?,
        ProbeMode::Free => optimize_probe_and_measurement(&s.hamiltonian, theta, &config)?,
    };
    Ok(result)
}

pub fn estimate(s: &ResolvedScenario, n: u64, trials: u64, seed: Option<u64>) -> Result<CramerRaoReport> {
    let theta = s.theta("estimate")?;
    let scenario = match s.fixed() {
        Some(sc) => sc,
        None => {
            let best = optimize_measurement(&s.probe, &s.hamiltonian, theta, &optimizer_config(s.seed, None))?;
            Scenario::new(s.probe.clone(), s.hamiltonian.clone(), best.best_basis)?.with_tolerances(s.tolerances)
        }
    };
    let seed = seed.unwrap_or(s.seed);
    let experiment = match s.window {
        Some(w) => EstimationExperiment::with_window(scenario, theta, n, trials, seed, w),
        None => EstimationExperiment::new(scenario, theta, n, trials, seed),
    }
    .map_err(|e| match e {
        qfisher::Error::InvalidParameter { name, reason } => CliError::field(name, reason),
        other => CliError::Numerical(other),
    })?;
    Ok(cramer_rao_check(&experiment)?)
}
