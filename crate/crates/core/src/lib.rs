//! Classical Fisher information of pure-state quantum measurement processes.
//!
//! A measurement process is a probe state `|ψ₀⟩`, unitary dynamics generated
//! by a Hamiltonian `Ĥ` over a parameter `θ`, and a complete projective
//! measurement `{|k⟩}`. This crate computes the Fisher information `J(θ)` of
//! the outcome distribution along three algebraically independent routes,
//! builds the Fisher operator and the information complement `K`, optimizes
//! the measurement basis (and optionally the probe) for maximal `J`, and
//! provides the SU(2) interferometry toolkit and a Monte-Carlo Cramér–Rao
//! harness.
//!
//! ```
//! use qfisher::{qubit, fisher};
//!
//! let opt = qubit::optimal_qubit(-0.5, 0.5, 0.0).unwrap();
//! let report = fisher::fisher_report(&opt.scenario(), 0.7).unwrap();
//! assert!((report.fisher_info - 1.0).abs() < 1e-12);
//! ```

pub mod error;
pub mod estimation;
pub mod fisher;
pub mod optimize;
pub mod quantum;
pub mod qubit;
pub mod sampling;
pub mod su2;
pub mod tolerance;

pub use error::{Error, Result};
pub use fisher::{FisherOperator, FisherReport, OutcomeDiagnostics};
pub use optimize::{OptimizationResult, OptimizerConfig};
pub use quantum::{
    AmplitudeDecomposition, CMatrix, CVector, Complex, HermitianOperator, MeasurementBasis,
    PureState, Scenario, Spectrum,
};
pub use su2::SpinSystem;
pub use tolerance::Tolerances;
