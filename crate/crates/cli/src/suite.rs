//! Regeneration of the reference tables with built-in acceptance checks.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qfisher::estimation::{cramer_rao_check, CramerRaoReport, EstimationExperiment};
use qfisher::fisher::fisher_report;
use qfisher::optimize::{optimize_measurement, optimize_probe_and_measurement, OptimizerConfig};
use qfisher::qubit::optimal_qubit;
use qfisher::sampling::{random_hermitian, random_state};
use qfisher::SpinSystem;

use crate::error::Result;
use crate::scenario::sha256_hex;
use crate::table::{json_with_provenance, Provenance, ScanTable};

pub const DEFAULT_SEED: u64 = 42;

/// Relative tolerance on optimized Fisher information.
pub const OPTIMUM_RTOL: f64 = 1e-6;
pub const BOUND_SLACK: f64 = 1e-6;
pub const EXACT_TOL: f64 = 1e-8;
pub const COMPLEMENT_TOL: f64 = 1e-10;
pub const CR_SAMPLES: u64 = 10_000;
pub const CR_TRIALS: u64 = 200;

pub const QUBIT_CHIS: [f64; 3] = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0];
pub const QUBIT_THETAS: [f64; 3] = [0.25, 1.0, 2.5];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

pub struct SuiteOutput {
    /// `(file name, contents)` in write order.
    pub files: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

fn provenance(label: &str, seed: u64) -> Provenance {
    Provenance::new(sha256_hex(format!("paper-suite/{label}").as_bytes()), seed)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Random eigenvalue pairs in `[−3, 3]` with a gap of at least 0.05.
pub fn qubit_pairs(seed: u64, count: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let l1: f64 = rng.random_range(-3.0..=3.0);
        let l2: f64 = rng.random_range(-3.0..=3.0);
        if (l1 - l2).abs() >= 0.05 {
            out.push((l1, l2));
        }
    }
    out
}

pub fn qubit_optimum(seed: u64) -> Result<(ScanTable, Check)> {
    let config = OptimizerConfig {
        seed,
        ..OptimizerConfig::default()
    };
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for (l1, l2) in qubit_pairs(seed, 100) {
        for chi in QUBIT_CHIS {
            let opt = optimal_qubit(l1, l2, chi)?;
            for theta in QUBIT_THETAS {
                let r = optimize_measurement(&opt.probe, &opt.hamiltonian, theta, &config)?;
                let err = rel(r.j_achieved, opt.j_max);
                worst = worst.max(err);
                rows.push(vec![l1, l2, chi, theta, r.j_achieved, opt.j_max, err]);
            }
        }
    }
    let table = ScanTable::new(
        provenance("qubit_optimum", seed),
        &["lambda1", "lambda2", "chi", "theta", "j_optimized", "j_expected", "rel_error"],
        rows,
    )?;
    let check = Check::new(
        "qubit optimum",
        worst < OPTIMUM_RTOL,
        format!("900 optimizations, max relative error {worst:.3e} (limit {OPTIMUM_RTOL:e})"),
    );
    Ok((table, check))
}

pub fn bounds_chain(seed: u64) -> Result<(ScanTable, Check)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb0b0);
    let mut rows = Vec::new();
    let mut ok = true;
    let mut worst_gap: f64 = 0.0;
    for i in 0..50u64 {
        let dim = 2 + (i % 5) as usize;
        let h = random_hermitian(dim, 1.0, &mut rng);
        let psi = random_state(dim, &mut rng);
        let config = OptimizerConfig {
            seed: seed.wrapping_add(1000 * i),
            ..OptimizerConfig::default()
        };
        let fixed = optimize_measurement(&psi, &h, 0.5, &config)?;
        let free = optimize_probe_and_measurement(&h, 0.5, &config)?;
        for r in [&fixed, &free] {
            ok &= r.j_achieved >= 0.0
                && r.j_achieved <= r.variance_bound + BOUND_SLACK
                && r.variance_bound <= r.seminorm_bound + BOUND_SLACK;
        }
        let gap = (free.seminorm_bound - free.j_achieved) / free.seminorm_bound;
        worst_gap = worst_gap.max(gap);
        rows.push(vec![
            dim as f64,
            fixed.j_achieved,
            fixed.variance_bound,
            free.j_achieved,
            free.variance_bound,
            free.seminorm_bound,
            gap,
            free.extremal_overlap.unwrap_or(f64::NAN),
        ]);
    }
    let table = ScanTable::new(
        provenance("bounds_chain", seed),
        &[
            "dim",
            "j_fixed_probe",
            "var_bound_fixed_probe",
            "j_free_probe",
            "var_bound_free_probe",
            "seminorm_bound",
            "seminorm_gap",
            "extremal_overlap",
        ],
        rows,
    )?;
    let check = Check::new(
        "bound chain",
        ok && worst_gap < OPTIMUM_RTOL,
        format!("50 Hamiltonians, chain ordered: {ok}, max free-probe seminorm gap {worst_gap:.3e}"),
    );
    Ok((table, check))
}

pub fn noon_scaling(seed: u64) -> Result<(ScanTable, Check)> {
    let thetas: Vec<f64> = (0..20).map(|i| 2.0 * PI * i as f64 / 20.0).collect();
    let xis: Vec<f64> = (0..16).map(|i| 2.0 * PI * i as f64 / 16.0).collect();
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for twice_j in 1..=20u32 {
        let s = SpinSystem::new(twice_j)?;
        let n = f64::from(twice_j);
        let js = thetas
            .iter()
            .map(|&t| s.mz_fisher_noon(0.0, t).map(|r| r.fisher_info))
            .collect::<qfisher::Result<Vec<f64>>>()?;
        let pair = s.scan_pair_phase(0.0, 0.3, &xis)?;
        let dev = js
            .iter()
            .chain(pair.iter().map(|(_, j)| j))
            .map(|j| (j - n * n).abs())
            .fold(0.0, f64::max);
        worst = worst.max(dev);
        let (lo, hi) = js.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &j| (a.min(j), b.max(j)));
        let pair_min = pair.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        rows.push(vec![s.j(), n, js[0], lo, hi, pair_min, n * n, dev]);
    }
    let table = ScanTable::new(
        provenance("noon_scaling", seed),
        &["j", "n", "J", "j_min_theta_grid", "j_max_theta_grid", "j_min_pair_basis", "n_squared", "max_abs_dev"],
        rows,
    )?;
    let check = Check::new(
        "NOON Heisenberg scaling",
        worst < EXACT_TOL,
        format!("j = 1/2..10, Jz and pair bases over θ and ξ grids, max |J - n²| = {worst:.3e}"),
    );
    Ok((table, check))
}

pub fn phase_state_scaling(seed: u64) -> Result<(ScanTable, Check)> {
    let mut rows = Vec::new();
    let mut ok = true;
    for j in 1..=10u32 {
        let s = SpinSystem::new(2 * j)?;
        let jf = f64::from(j);
        let r = s.mz_fisher_phase_state(0.0, 0.3)?;
        let expected = 4.0 * jf * (jf + 1.0) / 3.0;
        let err = (r.fisher_info - expected).abs();
        ok &= r.complement < COMPLEMENT_TOL && err < EXACT_TOL;
        rows.push(vec![jf, r.fisher_info, expected, r.complement, err]);
    }
    let table = ScanTable::new(
        provenance("phase_state_scaling", seed),
        &["j", "J", "expected", "K", "abs_error"],
        rows,
    )?;
    let check = Check::new(
        "phase-state scaling",
        ok,
        "j = 1..10, K < 1e-10 and |J - 4j(j+1)/3| < 1e-8".to_string(),
    );
    Ok((table, check))
}

#[derive(Debug, Serialize)]
pub struct NamedReport {
    pub name: &'static str,
    pub theta: f64,
    pub report: CramerRaoReport,
}

pub fn cramer_rao_reports(seed: u64) -> Result<Vec<NamedReport>> {
    let qubit = optimal_qubit(0.5, -0.5, 0.0)?.scenario();
    let spin = SpinSystem::new(4)?;
    let noon = spin.scenario(spin.noon_state(0.0), spin.jz_basis());
    let mut out = Vec::new();
    for (name, scenario, theta) in [("qubit_optimum", qubit, FRAC_PI_2), ("noon_j2", noon, FRAC_PI_8)] {
        let exp = EstimationExperiment::new(scenario, theta, CR_SAMPLES, CR_TRIALS, seed)?;
        out.push(NamedReport {
            name,
            theta,
            report: cramer_rao_check(&exp)?,
        });
    }
    Ok(out)
}

pub fn run(seed: u64) -> Result<SuiteOutput> {
    let mut files = Vec::new();
    let mut checks = Vec::new();
    for (name, build) in [
        ("qubit_optimum.csv", qubit_optimum as fn(u64) -> Result<(ScanTable, Check)>),
        ("bounds_chain.csv", bounds_chain),
        ("noon_scaling.csv", noon_scaling),
        ("phase_state_scaling.csv", phase_state_scaling),
    ] {
        let (table, check) = build(seed)?;
        files.push((name.to_string(), table.to_csv()));
        checks.push(check);
    }
    let reports = cramer_rao_reports(seed)?;
    for r in &reports {
        checks.push(Check::new(
            &format!("Cramér-Rao {}", r.name),
            r.report.passed,
            format!(
                "MSE/bound = {:.4} within [{:.4}, {}]",
                r.report.ratio,
                r.report.lower_limit,
                r.report.upper_limit.map_or("-".to_string(), |u| u.to_string())
            ),
        ));
    }
    files.push((
        "cramer_rao.json".to_string(),
        json_with_provenance(&provenance("cramer_rao", seed), &reports),
    ));
    // J at the qubit optimum is exactly 1 for |λ₁ − λ₂| = 1.
    let unit = fisher_report(&optimal_qubit(0.5, -0.5, 0.0)?.scenario(), FRAC_PI_2)?;
    checks.push(Check::new(
        "qubit optimum J = 1",
        (unit.fisher_info - 1.0).abs() < EXACT_TOL,
        format!("J = {}", unit.fisher_info),
    ));
    Ok(SuiteOutput { files, checks })
}
