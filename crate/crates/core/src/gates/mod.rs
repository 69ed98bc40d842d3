//! Dissipative CZ gates: full dense simulation, leakage models and error budgets.

mod cz;
mod leakage;
mod sweep;

pub use cz::{simulate_cz, CzReport, CzScheme};
pub use leakage::{leakage_nonhermitian, minimal_error, optimal_time, total_error, LeakageModel};
pub use sweep::{
    fig4b, log_grid, min_error_curve, read_feshbach_table, sweep_hardness_diagram, FeshbachRow, Fig4bRow, Regime,
    SweepPoint,
};

use crate::error::{FlsError, Result};

/// Parameters of one dissipative gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSpec {
    /// Hopping amplitude.
    pub j: f64,
    /// Engineered pair-loss rate.
    pub gamma: f64,
    /// Background dissipation rate.
    pub gamma_prime: f64,
    /// Interaction-to-loss ratio `E/Γ`.
    pub zeta: f64,
    /// Probability that the single-site phase gate is not applied.
    pub epsilon0: f64,
    /// Gate duration; `None` means `π/J`.
    pub duration: Option<f64>,
}

impl GateSpec {
    pub fn new(j: f64, gamma: f64) -> Result<Self> {
        Self { j, gamma, gamma_prime: 0.0, zeta: 0.0, epsilon0: 0.0, duration: None }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let ok = self.j > 0.0
            && self.gamma > 0.0
            && self.gamma_prime >= 0.0
            && (0.0..=1.0).contains(&self.epsilon0)
            && self.zeta.is_finite()
            && self.duration.is_none_or(|t| t >= 0.0);
        if !ok || !self.j.is_finite() || !self.gamma.is_finite() || !self.gamma_prime.is_finite() {
            return Err(FlsError::InvalidArgument(format!("invalid gate parameters {self:?}")));
        }
        Ok(self)
    }

    /// `γ = Γ/J`.
    pub fn gamma_ratio(&self) -> f64 {
        self.gamma / self.j
    }

    /// Interaction energy `E = ζΓ`.
    pub fn interaction(&self) -> f64 {
        self.zeta * self.gamma
    }

    pub fn gate_time(&self) -> f64 {
        self.duration.unwrap_or(std::f64::consts::PI / self.j)
    }
}
