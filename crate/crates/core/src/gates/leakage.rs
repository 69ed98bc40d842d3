use super::GateSpec;
use crate::error::{FlsError, Result};
use crate::linalg::{c, CMat};
use std::f64::consts::PI;

/// Reduced non-Hermitian leakage models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeakageModel {
    /// Two states: the logical state and the lossy doubly occupied pair, evolved for `π/J`.
    TwoLevel,
    /// Four states of the cold-atom scheme (logical, two pair states, exchanged), evolved for the gate time.
    ColdAtom,
}

/// `ε` defined by `|⟨ψ|S|ψ⟩|² = 1 − 2ε` for the non-Hermitian propagator `S`.
pub fn leakage_nonhermitian(spec: &GateSpec, which: LeakageModel) -> f64 {
    let j = c(spec.j, 0.0);
    let lossy = c(spec.interaction(), -0.5 * spec.gamma);
    let (h, t) = match which {
        LeakageModel::TwoLevel => {
            let h = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), j, j, c(0.0, -0.5 * spec.gamma)]);
            (h, PI / spec.j)
        }
        LeakageModel::ColdAtom => {
            let z = c(0.0, 0.0);
            #[rustfmt::skip]
            let h = CMat::from_row_slice(4, 4, &[
                z, j, j, z,
                j, lossy, z, j,
                j, z, lossy, j,
                z, j, j, z,
            ]);
            (h, spec.gate_time())
        }
    };
    let s = (h * c(0.0, -t)).exp();
    0.5 * (1.0 - s[(0, 0)].norm_sqr())
}

/// `ε₀ + Γ't + 4π²/(Γt(1 + 4ζ²))`.
pub fn total_error(spec: &GateSpec, t: f64) -> f64 {
    let z = 1.0 + 4.0 * spec.zeta * spec.zeta;
    spec.epsilon0 + spec.gamma_prime * t + 4.0 * PI * PI / (spec.gamma * t * z)
}

/// Minimizer `t = 2π/√(ΓΓ'(1+4ζ²))` of [`total_error`] and the minimum.
pub fn optimal_time(spec: &GateSpec) -> Result<(f64, f64)> {
    if !(spec.gamma > 0.0 && spec.gamma_prime > 0.0) {
        return Err(FlsError::InvalidArgument("optimal time needs Γ, Γ' > 0".into()));
    }
    let z = 1.0 + 4.0 * spec.zeta * spec.zeta;
    let t = 2.0 * PI / (spec.gamma * spec.gamma_prime * z).sqrt();
    Ok((t, total_error(spec, t)))
}

/// Closed form `ε₀ + 4π√(Γ'/(Γ(1+4ζ²)))` of the optimized error.
pub fn minimal_error(spec: &GateSpec) -> f64 {
    let z = 1.0 + 4.0 * spec.zeta * spec.zeta;
    spec.epsilon0 + 4.0 * PI * (spec.gamma_prime / (spec.gamma * z)).sqrt()
}
