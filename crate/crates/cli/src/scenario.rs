//! Scenario files.
//!
//! ```toml
//! kind = "explicit"          # explicit | qubit | noon | phase_state
//! theta = 0.3                # or [theta_grid] start/stop/points, inclusive
//! seed = 7
//! hamiltonian = [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.5, 0.0]]]
//! probe = [[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]]
//! basis = "optimize"         # or a list of kets, each a list of [re, im]
//! ```
//!
//! `qubit` takes `lambda1`, `lambda2`, `chi` and optionally `alpha`, `gamma`
//! (both default to π/4, the optimal instrument). `noon` takes `j` and `chi`,
//! `phase_state` takes `j` and `zeta`; both accept `basis = "jz"` (default),
//! `"optimal_pair"` (with `xi`, default 0) or `"optimize"`. An optional
//! `window = [lo, hi]` sets the estimator search window and a `[tolerances]`
//! table overrides numerical thresholds.

use std::f64::consts::FRAC_PI_4;
use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use qfisher::qubit::QubitScenario;
use qfisher::{
    CMatrix, CVector, Complex, HermitianOperator, MeasurementBasis, PureState, Scenario,
    SpinSystem, Tolerances,
};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Explicit,
    Qubit,
    Noon,
    PhaseState,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl ThetaGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == self.points - 1 {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

type Pair = [f64; 2];

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum BasisSpec {
    Named(String),
    Kets(Vec<Vec<Pair>>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub kind: Kind,
    pub theta: Option<f64>,
    pub theta_grid: Option<ThetaGrid>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub window: Option<[f64; 2]>,
    pub hamiltonian: Option<Vec<Vec<Pair>>>,
    pub probe: Option<Vec<Pair>>,
    pub basis: Option<BasisSpec>,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub chi: Option<f64>,
    pub j: Option<f64>,
    pub zeta: Option<f64>,
    pub xi: Option<f64>,
}

#[derive(Debug, Clone)]
pub enum BasisChoice {
    Fixed(MeasurementBasis),
    Optimize,
}

/// A validated scenario ready for the commands.
#[derive(Debug, Clone)]
pub struct ResolvedScenario {
    pub kind: Kind,
    pub probe: PureState,
    pub hamiltonian: HermitianOperator,
    pub basis: BasisChoice,
    pub thetas: Vec<f64>,
    pub single_theta: bool,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub window: Option<(f64, f64)>,
    pub sha256: String,
}

impl ResolvedScenario {
    /// The scenario with a concrete basis; `None` when the basis is to be optimized.
    pub fn fixed(&self) -> Option<Scenario> {
        match &self.basis {
            BasisChoice::Fixed(b) => Some(
                Scenario::new(self.probe.clone(), self.hamiltonian.clone(), b.clone())
                    .expect("dimensions validated")
                    .with_tolerances(self.tolerances),
            ),
            BasisChoice::Optimize => None,
        }
    }

    pub fn theta(&self, command: &str) -> Result<f64> {
        if !self.single_theta {
            return Err(CliError::field(
                "theta_grid",
                format!("`{command}` works at a single point; give `theta` instead"),
            ));
        }
        Ok(self.thetas[0])
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn load(path: &Path) -> Result<ResolvedScenario> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<ResolvedScenario> {
    let file: ScenarioFile = toml::from_str(text)?;
    resolve(file, sha256_hex(text.as_bytes()))
}

fn require<T: Copy>(value: Option<T>, field: &str, kind: &str) -> Result<T> {
    value.ok_or_else(|| CliError::field(field, format!("required for kind `{kind}`")))
}

fn reject<T>(value: &Option<T>, field: &str, kind: &str) -> Result<()> {
    if value.is_some() {
        return Err(CliError::field(field, format!("not used by kind `{kind}`")));
    }
    Ok(())
}

fn finite(value: f64, field: &str) -> Result<f64> {
    if !value.is_finite() {
        return Err(CliError::field(field, "must be finite"));
    }
    Ok(value)
}

fn complex(p: Pair) -> Complex {
    Complex::new(p[0], p[1])
}

fn check_pairs_finite(field: &str, pairs: &[Pair]) -> Result<()> {
    if let Some(i) = pairs.iter().position(|p| !(p[0].is_finite() && p[1].is_finite())) {
        return Err(CliError::field(format!("{field}[{i}]"), "must be finite"));
    }
    Ok(())
}

fn square_matrix(field: &str, rows: &[Vec<Pair>], dim: Option<usize>) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(CliError::field(field, "empty matrix"));
    }
    if let Some(d) = dim {
        if n != d {
            return Err(CliError::field(field, format!("has {n} rows, expected {d}")));
        }
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(CliError::field(
                format!("{field}[{r}]"),
                format!("row {r} has {} entries, expected {n}", row.len()),
            ));
        }
        check_pairs_finite(&format!("{field}[{r}]"), row)?;
    }
    Ok(CMatrix::from_fn(n, n, |r, c| complex(rows[r][c])))
}

fn explain(field: &str, e: qfisher::Error) -> CliError {
    let message = match e {
        qfisher::Error::NotHermitian { deviation, row, col } => format!(
            "not Hermitian: |H[{row}][{col}] - conj(H[{col}][{row}])| = {deviation:e} (row {row}, col {col})"
        ),
        other => other.to_string(),
    };
    CliError::field(field, message)
}

fn spin(j: f64) -> Result<SpinSystem> {
    SpinSystem::from_j(finite(j, "j")?).map_err(|e| explain("j", e))
}

fn resolve(f: ScenarioFile, sha256: String) -> Result<ResolvedScenario> {
    let tol = f.tolerances;
    let (thetas, single_theta) = match (f.theta, f.theta_grid) {
        (Some(t), None) => (vec![finite(t, "theta")?], true),
        (None, Some(g)) => {
            finite(g.start, "theta_grid.start")?;
            finite(g.stop, "theta_grid.stop")?;
            if g.points == 0 {
                return Err(CliError::field("theta_grid.points", "must be at least 1"));
            }
            (g.values(), false)
        }
        (Some(_), Some(_)) => {
            return Err(CliError::field("theta", "give either `theta` or `theta_grid`, not both"))
        }
        (None, None) => return Err(CliError::field("theta", "one of `theta` or `theta_grid` is required")),
    };
    let window = match f.window {
        Some([lo, hi]) => {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(CliError::field("window", "need finite lo < hi"));
            }
            Some((lo, hi))
        }
        None => None,
    };

    let named_basis = |allowed: &[&str], default: &str| -> Result<String> {
        match &f.basis {
            None => Ok(default.to_string()),
            Some(BasisSpec::Named(name)) if allowed.contains(&name.as_str()) => Ok(name.clone()),
            Some(BasisSpec::Named(name)) => Err(CliError::field(
                "basis",
                format!("unknown basis `{name}`, expected one of {allowed:?}"),
            )),
            Some(BasisSpec::Kets(_)) => Err(CliError::field(
                "basis",
                format!("explicit kets are only accepted for kind `explicit`; expected one of {allowed:?}"),
            )),
        }
    };

    let (probe, hamiltonian, basis) = match f.kind {
        Kind::Explicit => {
            for (v, name) in [
                (&f.lambda1, "lambda1"),
                (&f.lambda2, "lambda2"),
                (&f.alpha, "alpha"),
                (&f.gamma, "gamma"),
                (&f.chi, "chi"),
                (&f.j, "j"),
                (&f.zeta, "zeta"),
                (&f.xi, "xi"),
            ] {
                reject(v, name, "explicit")?;
            }
            let rows = f
                .hamiltonian
                .as_ref()
                .ok_or_else(|| CliError::field("hamiltonian", "required for kind `explicit`"))?;
            let h = square_matrix("hamiltonian", rows, None)?;
            let dim = h.nrows();
            let h = HermitianOperator::with_tolerance(h, tol.hermiticity).map_err(|e| explain("hamiltonian", e))?;
            let amps = f
                .probe
                .as_ref()
                .ok_or_else(|| CliError::field("probe", "required for kind `explicit`"))?;
            if amps.len() != dim {
                return Err(CliError::field(
                    "probe",
                    format!("has {} amplitudes, expected {dim}", amps.len()),
                ));
            }
            check_pairs_finite("probe", amps)?;
            let probe = PureState::with_tolerance(
                CVector::from_iterator(dim, amps.iter().map(|&p| complex(p))),
                tol.normalization,
            )
            .map_err(|e| explain("probe", e))?;
            let basis = match &f.basis {
                None => return Err(CliError::field("basis", "required for kind `explicit`")),
                Some(BasisSpec::Named(n)) if n == "optimize" => BasisChoice::Optimize,
                Some(BasisSpec::Named(n)) => {
                    return Err(CliError::field("basis", format!("unknown basis `{n}`, expected kets or \"optimize\"")))
                }
                Some(BasisSpec::Kets(kets)) => {
                    if kets.len() != dim {
                        return Err(CliError::field("basis", format!("has {} kets, expected {dim}", kets.len())));
                    }
                    // Kets are listed one per entry; they become the columns of U.
                    let m = square_matrix("basis", kets, Some(dim))?.transpose();
                    BasisChoice::Fixed(
                        MeasurementBasis::with_tolerance(m, tol.unitarity).map_err(|e| explain("basis", e))?,
                    )
                }
            };
            (probe, h, basis)
        }
        Kind::Qubit => {
            for (v, name) in [(&f.j, "j"), (&f.zeta, "zeta"), (&f.xi, "xi")] {
                reject(v, name, "qubit")?;
            }
            reject(&f.hamiltonian, "hamiltonian", "qubit")?;
            reject(&f.probe, "probe", "qubit")?;
            let q = QubitScenario::new(
                finite(require(f.lambda1, "lambda1", "qubit")?, "lambda1")?,
                finite(require(f.lambda2, "lambda2", "qubit")?, "lambda2")?,
                f.alpha.unwrap_or(FRAC_PI_4),
                f.gamma.unwrap_or(FRAC_PI_4),
                finite(require(f.chi, "chi", "qubit")?, "chi")?,
                0.0,
            )
            .map_err(|e| match e {
                qfisher::Error::InvalidParameter { name, reason } => CliError::field(name, reason),
                other => CliError::field("qubit", other),
            })?;
            let basis = match named_basis(&["measurement", "optimize"], "measurement")?.as_str() {
                "optimize" => BasisChoice::Optimize,
                _ => BasisChoice::Fixed(q.basis()),
            };
            (q.probe(), q.hamiltonian(), basis)
        }
        Kind::Noon | Kind::PhaseState => {
            let kind_name = if f.kind == Kind::Noon { "noon" } else { "phase_state" };
            for (v, name) in [
                (&f.lambda1, "lambda1"),
                (&f.lambda2, "lambda2"),
                (&f.alpha, "alpha"),
                (&f.gamma, "gamma"),
            ] {
                reject(v, name, kind_name)?;
            }
            reject(&f.hamiltonian, "hamiltonian", kind_name)?;
            reject(&f.probe, "probe", kind_name)?;
            let s = spin(require(f.j, "j", kind_name)?)?;
            let probe = if f.kind == Kind::Noon {
                reject(&f.zeta, "zeta", kind_name)?;
                s.noon_state(finite(f.chi.unwrap_or(0.0), "chi")?)
            } else {
                reject(&f.chi, "chi", kind_name)?;
                s.phase_state(finite(f.zeta.unwrap_or(0.0), "zeta")?)
            };
            let name = named_basis(&["jz", "optimal_pair", "optimize"], "jz")?;
            if name != "optimal_pair" {
                reject(&f.xi, "xi", kind_name)?;
            }
            let basis = match name.as_str() {
                "jz" => BasisChoice::Fixed(s.jz_basis()),
                "optimal_pair" => {
                    if s.dim() < 2 {
                        return Err(CliError::field("basis", "optimal_pair needs j ≥ 1/2"));
                    }
                    BasisChoice::Fixed(s.optimal_pair_basis(finite(f.xi.unwrap_or(0.0), "xi")?))
                }
                _ => BasisChoice::Optimize,
            };
            (probe, s.jy().clone(), basis)
        }
    };

    Ok(ResolvedScenario {
        kind: f.kind,
        probe,
        hamiltonian,
        basis,
        thetas,
        single_theta,
        seed: f.seed,
        tolerances: tol,
        window,
        sha256,
    })
}
