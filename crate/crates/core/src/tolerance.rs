//! Numerical thresholds shared by every module.
//!
//! All defaults live in [`Tolerances::default`]; scenario files may override
//! individual fields.

use serde::{Deserialize, Serialize};

/// Threshold record passed to validation and Fisher computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Max absolute entry deviation of `H` from `H†`.
    pub hermiticity: f64,
    /// Allowed deviation of a state's squared norm from 1.
    pub normalization: f64,
    /// Max absolute entry deviation of `U†U` from the identity.
    pub unitarity: f64,
    /// Amplitudes with modulus below this carry no defined phase.
    pub degenerate_amplitude: f64,
    /// Probability floor `ε` for the distribution-level Fisher information.
    pub probability_floor: f64,
    /// Below this `|⟨k|Ĥ|ψ⟩|²` the Fisher coefficient of an undefined angle is 0.
    pub flux_floor: f64,
    /// Denominators of stationarity ratios and qubit closed forms.
    pub denominator_floor: f64,
    /// Central finite-difference step in `θ`.
    pub finite_difference_step: f64,
}

impl Tolerances {
    /// Modulus below which an amplitude of a `dim`-dimensional state counts
    /// as zero: `degenerate_amplitude`, raised to the roundoff level of a
    /// `dim`-term inner product when that is larger.
    pub fn amplitude_floor(&self, dim: usize) -> f64 {
        self.degenerate_amplitude
            .max(AMPLITUDE_NOISE_FACTOR * dim as f64 * f64::EPSILON)
    }
}

const AMPLITUDE_NOISE_FACTOR: f64 = 32.0;

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-12,
            normalization: 1e-12,
            unitarity: 1e-10,
            degenerate_amplitude: 1e-14,
            probability_floor: 1e-12,
            flux_floor: 1e-24,
            denominator_floor: 1e-12,
            finite_difference_step: 1e-6,
        }
    }
}
