//! Output probabilities `P(r | r')` of free-fermion evolutions and sequential sampling.
//!
//! For an output covariance `Γ` (with `Γ_ij = (i/2)⟨[γ_i, γ_j]⟩`) the 4L×4L skew matrix
//!
//! ```text
//!     M = [ (Γ + J)/2   i·1 ]
//!         [  -i·1       -J  ],   J = ⊕ [[0, 1], [-1, 0]]
//! ```
//!
//! gives `P(r) = Pf M[I]` with `I = {0..2L} ∪ {2L+2n, 2L+2n+1 : r_n = 0}`. Restricting both
//! blocks to a subset of modes yields the marginal over the remaining ones.

use crate::error::{FlsError, Result};
use crate::gaussian::{propagate, reduce_linear, GaussianPropagator};
use crate::linalg::{c, symplectic_j, CMat, RMat, C64};
use crate::model::{Distribution, FockConfiguration, QuadraticHamiltonian};
use crate::pfaffian::{pfaffian_in_place, SkewMatrix};
use rand::Rng;

pub const MAX_ENUMERATE_MODES: usize = 14;

/// Covariance `⊕ (2 s_n - 1) [[0, 1], [-1, 0]]` of a Fock configuration.
pub fn fock_covariance(config: &FockConfiguration) -> RMat {
    let modes = config.len();
    let mut g = RMat::zeros(2 * modes, 2 * modes);
    for n in 0..modes {
        let s = if config.get(n) { 1.0 } else { -1.0 };
        g[(2 * n, 2 * n + 1)] = s;
        g[(2 * n + 1, 2 * n)] = -s;
    }
    g
}

/// `Γ_out = Rᵀ Γ_{r'} R`.
pub fn output_covariance(r: &RMat, initial: &FockConfiguration) -> RMat {
    r.transpose() * fock_covariance(initial) * r
}

/// Output covariance from `T`: `Im(T† diag(2r' - 1) T)`.
pub fn covariance_from_t(t: &CMat, initial: &FockConfiguration) -> RMat {
    let modes = t.nrows();
    let mut sig = CMat::zeros(modes, modes);
    for n in 0..modes {
        sig[(n, n)] = c(if initial.get(n) { 1.0 } else { -1.0 }, 0.0);
    }
    (t.adjoint() * sig * t).map(|z| z.im)
}

pub fn build_m_from_covariance(gamma: &RMat) -> SkewMatrix {
    let n2 = gamma.nrows();
    let modes = n2 / 2;
    let j = symplectic_j(modes);
    let mut m = CMat::zeros(2 * n2, 2 * n2);
    for a in 0..n2 {
        for b in 0..n2 {
            m[(a, b)] = c(0.5 * (gamma[(a, b)] + j[(a, b)]), 0.0);
            m[(n2 + a, n2 + b)] = c(-j[(a, b)], 0.0);
        }
        m[(a, n2 + a)] = c(0.0, 1.0);
        m[(n2 + a, a)] = c(0.0, -1.0);
    }
    SkewMatrix::from_antisymmetric(m)
}

pub fn build_m(t: &CMat, initial: &FockConfiguration) -> SkewMatrix {
    build_m_from_covariance(&covariance_from_t(t, initial))
}

/// Mixture of Gaussian output states restricted to the system modes.
#[derive(Debug, Clone)]
pub struct OutcomeDistributionHandle {
    modes: usize,
    sectors: Vec<(f64, SkewMatrix)>,
}

impl OutcomeDistributionHandle {
    /// Output covariances with weights summing to one; only the leading `modes` modes are read.
    pub fn from_covariances(modes: usize, sectors: Vec<(f64, RMat)>) -> Self {
        let sectors = sectors
            .into_iter()
            .map(|(w, g)| (w, build_m_from_covariance(&g.view((0, 0), (2 * modes, 2 * modes)).clone_owned())))
            .collect();
        Self { modes, sectors }
    }

    pub fn from_propagator(p: &GaussianPropagator, initial: &FockConfiguration) -> Self {
        Self::from_covariances(initial.len(), vec![(1.0, output_covariance(&p.r, initial))])
    }

    /// Unitary evolution under `h` over `[0, t]`; linear terms go through one ancilla mode
    /// prepared in either Fock state with weight ½.
    pub fn unitary(h: &QuadraticHamiltonian, initial: &FockConfiguration, t: f64) -> Result<Self> {
        if initial.len() != h.modes {
            return Err(FlsError::DimensionMismatch("initial configuration length".into()));
        }
        if !h.has_linear() {
            let p = propagate(h, 0.0, t, None)?;
            return Ok(Self::from_propagator(&p, initial));
        }
        let reduced = reduce_linear(h);
        let p = propagate(&reduced, 0.0, t, None)?;
        let sectors = [false, true]
            .iter()
            .map(|&s| (0.5, output_covariance(&p.r, &initial.extended(&[s]))))
            .collect();
        Ok(Self::from_covariances(h.modes, sectors))
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    fn indices(&self, outcomes: &[bool], out: &mut Vec<usize>) {
        out.clear();
        let k = outcomes.len();
        for n in 0..k {
            out.push(2 * n);
            out.push(2 * n + 1);
        }
        for (n, &occ) in outcomes.iter().enumerate() {
            if !occ {
                out.push(2 * self.modes + 2 * n);
                out.push(2 * self.modes + 2 * n + 1);
            }
        }
    }

    fn sector_pf(m: &SkewMatrix, idx: &[usize], buf: &mut Vec<C64>) -> C64 {
        let k = idx.len();
        buf.clear();
        let mm = m.matrix();
        for &i in idx {
            for &j in idx {
                buf.push(mm[(i, j)]);
            }
        }
        pfaffian_in_place(buf, k)
    }

    /// Unclamped weighted Pfaffian for the outcomes of the leading `outcomes.len()` modes.
    pub fn marginal_raw(&self, outcomes: &[bool]) -> C64 {
        let mut idx = Vec::new();
        let mut buf = Vec::new();
        self.indices(outcomes, &mut idx);
        self.sectors
            .iter()
            .map(|(w, m)| Self::sector_pf(m, &idx, &mut buf) * *w)
            .sum()
    }

    pub fn marginal(&self, outcomes: &[bool]) -> f64 {
        extract(self.marginal_raw(outcomes))
    }

    pub fn probability_raw(&self, r: &FockConfiguration) -> C64 {
        self.marginal_raw(r.bits())
    }

    pub fn probability(&self, r: &FockConfiguration) -> f64 {
        assert_eq!(r.len(), self.modes, "configuration length");
        self.marginal(r.bits())
    }

    /// Draws one configuration site by site from exact conditional marginals.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FockConfiguration {
        let sector = if self.sectors.len() == 1 {
            0
        } else {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut pick = self.sectors.len() - 1;
            for (i, (w, _)) in self.sectors.iter().enumerate() {
                acc += w;
                if u < acc {
                    pick = i;
                    break;
                }
            }
            pick
        };
        let m = &self.sectors[sector].1;
        let mut bits = Vec::with_capacity(self.modes);
        let mut idx = Vec::new();
        let mut buf = Vec::new();
        let mut p_prefix = 1.0;
        for _ in 0..self.modes {
            bits.push(true);
            self.indices(&bits, &mut idx);
            let p1 = extract(Self::sector_pf(m, &idx, &mut buf)).min(p_prefix);
            let p0 = (p_prefix - p1).max(0.0);
            let u: f64 = rng.random::<f64>() * (p0 + p1);
            let occ = u < p1;
            *bits.last_mut().expect("pushed") = occ;
            p_prefix = if occ { p1 } else { p0 };
        }
        FockConfiguration::new(bits)
    }

    pub fn enumerate_distribution(&self) -> Result<Distribution> {
        if self.modes > MAX_ENUMERATE_MODES {
            return Err(FlsError::DimensionTooLarge(format!(
                "enumeration needs L <= {MAX_ENUMERATE_MODES}, got {}",
                self.modes
            )));
        }
        let mut d = Distribution::zeros(self.modes);
        let mut idx = Vec::new();
        let mut buf = Vec::new();
        for k in 0..d.probs.len() {
            let cfg = FockConfiguration::from_index(k, self.modes);
            self.indices(cfg.bits(), &mut idx);
            let raw: C64 = self.sectors.iter().map(|(w, m)| Self::sector_pf(m, &idx, &mut buf) * *w).sum();
            d.probs[k] = extract(raw);
        }
        Ok(d)
    }

    /// Exact probabilities without clamping (diagnostics).
    pub fn enumerate_raw(&self) -> Result<Vec<C64>> {
        if self.modes > MAX_ENUMERATE_MODES {
            return Err(FlsError::DimensionTooLarge(format!("L = {}", self.modes)));
        }
        Ok((0..1usize << self.modes)
            .map(|k| self.probability_raw(&FockConfiguration::from_index(k, self.modes)))
            .collect())
    }
}

/// Real part clamped to `[0, 1]`; the imaginary part must be rounding noise.
fn extract(z: C64) -> f64 {
    debug_assert!(
        z.im.abs() <= 1e-7 * z.norm().max(1.0),
        "probability has imaginary part {z}"
    );
    z.re.clamp(0.0, 1.0)
}
