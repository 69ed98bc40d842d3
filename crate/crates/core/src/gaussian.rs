//! Majorana-basis propagators `U γ_i U† = Σ_j R_ij γ_j` and the linear-term ancilla reduction.
//!
//! Linear terms `Σ β_i γ_i` are made quadratic with one extra mode whose first Majorana
//! `γ_{2L}` multiplies every linear term: `γ_i → i γ_{2L} γ_i`, i.e. `α̃_{2L,j} = β_j`,
//! `α̃_{j,2L} = -β_j`. The ancilla starts in either Fock state with probability ½ and is
//! marginalized at readout.

use crate::error::{FlsError, Result};
use crate::linalg::{c, expm, CMat, RMat, RVec};
use crate::model::{QuadraticForm, QuadraticHamiltonian, Schedule, Segment};

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPropagator {
    pub r: RMat,
    pub t: CMat,
    pub t0: f64,
    pub t1: f64,
}

impl GaussianPropagator {
    pub fn from_rotation(r: RMat, t0: f64, t1: f64) -> Self {
        let t = t_matrix(&r);
        Self { r, t, t0, t1 }
    }

    pub fn identity(modes: usize) -> Self {
        Self::from_rotation(RMat::identity(2 * modes, 2 * modes), 0.0, 0.0)
    }

    pub fn modes(&self) -> usize {
        self.r.nrows() / 2
    }

    /// `self` followed by `later`.
    pub fn then(&self, later: &GaussianPropagator) -> Self {
        Self::from_rotation(&self.r * &later.r, self.t0, later.t1)
    }

    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.r.nrows();
        crate::linalg::max_abs(&(self.r.transpose() * &self.r - RMat::identity(n, n)))
    }
}

/// `T_nj = R_{2n,j} + i R_{2n+1,j}`.
pub fn t_matrix(r: &RMat) -> CMat {
    let modes = r.nrows() / 2;
    CMat::from_fn(modes, r.ncols(), |n, j| c(r[(2 * n, j)], r[(2 * n + 1, j)]))
}

/// Adds one ancilla mode (index `L`) absorbing the linear part.
pub fn reduce_form(f: &QuadraticForm) -> QuadraticForm {
    let n = f.alpha.nrows();
    let mut alpha = RMat::zeros(n + 2, n + 2);
    alpha.view_mut((0, 0), (n, n)).copy_from(&f.alpha);
    for j in 0..n {
        alpha[(n, j)] = f.beta[j];
        alpha[(j, n)] = -f.beta[j];
    }
    QuadraticForm { alpha, beta: RVec::zeros(n + 2) }
}

pub fn reduce_linear(h: &QuadraticHamiltonian) -> QuadraticHamiltonian {
    QuadraticHamiltonian { modes: h.modes + 1, schedule: h.schedule.map(reduce_form) }
}

/// Embeds a form on `modes` modes into a larger register at the given mode offset.
pub fn embed_form(f: &QuadraticForm, total_modes: usize, offset: usize) -> QuadraticForm {
    let n = f.alpha.nrows();
    let mut g = QuadraticForm::zero(total_modes);
    g.alpha.view_mut((2 * offset, 2 * offset), (n, n)).copy_from(&f.alpha);
    g.beta.rows_mut(2 * offset, n).copy_from(&f.beta);
    g
}

/// `exp(-2 α Δ)`.
pub fn step_rotation(alpha: &RMat, dt: f64) -> RMat {
    expm(&(alpha * (-2.0 * dt)))
}

fn inf_norm(m: &RMat) -> f64 {
    (0..m.nrows()).map(|i| m.row(i).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

pub fn default_dt_max(h: &QuadraticHamiltonian, t0: f64, t1: f64) -> f64 {
    let span = t1 - t0;
    if span <= 0.0 {
        return f64::INFINITY;
    }
    let norm = h.schedule.segments().iter().map(|s| inf_norm(&s.value.alpha)).fold(0.0, f64::max);
    span / (64.0f64).max((norm * span * 16.0).ceil())
}

/// Time-ordered propagator of a purely quadratic Hamiltonian over `[t0, t1]`.
pub fn propagate(h: &QuadraticHamiltonian, t0: f64, t1: f64, dt_max: Option<f64>) -> Result<GaussianPropagator> {
    if t1 < t0 {
        return Err(FlsError::InvalidArgument(format!("t1 = {t1} < t0 = {t0}")));
    }
    if h.has_linear() {
        return Err(FlsError::InvalidArgument("propagate needs beta = 0; apply reduce_linear first".into()));
    }
    let gaps = h.schedule.gaps(t0.min(h.t_start()), t1);
    if let Some(&(a, b)) = gaps.iter().find(|(a, b)| *b > t0 && *a < t1) {
        return Err(FlsError::ScheduleGap(a, b));
    }
    let dt_max = dt_max.unwrap_or_else(|| default_dt_max(h, t0, t1));
    let pts = crate::model::schedule::merge_breakpoints(t0, t1, h.schedule.breakpoints_in(t0, t1));
    let dim = 2 * h.modes;
    let mut r = RMat::identity(dim, dim);
    let mut buf = RMat::zeros(dim, dim);
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let form = h.at(a).ok_or(FlsError::ScheduleGap(a, b))?;
        let n = ((b - a) / dt_max).ceil().max(1.0) as usize;
        let step = step_rotation(&form.alpha, (b - a) / n as f64);
        for _ in 0..n {
            r.mul_to(&step, &mut buf);
            std::mem::swap(&mut r, &mut buf);
        }
    }
    Ok(GaussianPropagator::from_rotation(r, t0, t1))
}

/// Hamiltonian with one constant segment per `(duration, form)` pair, laid end to end.
pub fn piecewise(modes: usize, pieces: &[(f64, QuadraticForm)]) -> Result<QuadraticHamiltonian> {
    let mut t = 0.0;
    let mut segs = Vec::new();
    for (d, f) in pieces {
        segs.push(Segment { t_start: t, t_end: t + d, value: f.clone() });
        t += d;
    }
    Ok(QuadraticHamiltonian { modes, schedule: Schedule::new(segs)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, max_abs_c, C64};
    use crate::model::hopping;
    use crate::oracle::{dense_form, majorana_dense, unitary_dense};
    use crate::model::Model;

    fn random_form(modes: usize, seed: u64, linear: bool) -> QuadraticForm {
        let mut s = seed.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let n = 2 * modes;
        let raw = RMat::from_fn(n, n, |_, _| next());
        let beta = RVec::from_fn(n, |_, _| if linear { next() } else { 0.0 });
        QuadraticForm { alpha: crate::linalg::antisymmetrize(&raw), beta }
    }

    #[test]
    fn zero_generator_gives_identity() {
        let h = QuadraticHamiltonian::zero(2, 1.0);
        let p = propagate(&h, 0.0, 1.0, None).unwrap();
        assert_eq!(p.r, RMat::identity(4, 4));
        assert_eq!(p.t[(1, 2)], c(1.0, 0.0));
        assert_eq!(p.t[(1, 3)], c(0.0, 1.0));
        assert_eq!(p.t[(0, 2)], c(0.0, 0.0));
    }

    #[test]
    fn orthogonal_and_composable() {
        let h = piecewise(3, &[(0.4, random_form(3, 1, false)), (0.9, random_form(3, 2, false))]).unwrap();
        let full = propagate(&h, 0.0, 1.3, None).unwrap();
        let a = propagate(&h, 0.0, 0.7, None).unwrap();
        let b = propagate(&h, 0.7, 1.3, None).unwrap();
        assert!(full.orthogonality_defect() < 1e-9);
        assert!(max_abs(&(a.then(&b).r - &full.r)) < 1e-8);
        assert!((full.r.determinant() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn reduction_without_linear_terms_embeds() {
        let f = random_form(2, 5, false);
        let g = reduce_form(&f);
        assert_eq!(g.alpha.view((0, 0), (4, 4)).clone_owned(), f.alpha);
        assert!(g.alpha.row(4).iter().all(|&x| x == 0.0));
        let f = random_form(2, 6, true);
        assert_eq!(crate::linalg::antisymmetry_defect(&reduce_form(&f).alpha), 0.0);
    }

    #[test]
    fn heisenberg_convention_matches_dense() {
        for modes in 1..=3 {
            let h = QuadraticHamiltonian::constant(random_form(modes, 10 + modes as u64, false), 0.8);
            let p = propagate(&h, 0.0, 0.8, None).unwrap();
            let u = unitary_dense(&Model::unitary(h).unwrap(), 0.0, 0.8).unwrap();
            let g: Vec<CMat> = (0..2 * modes).map(|i| majorana_dense(i, modes).unwrap()).collect();
            for i in 0..2 * modes {
                let lhs = &u * &g[i] * u.adjoint();
                let mut rhs = CMat::zeros(lhs.nrows(), lhs.ncols());
                for j in 0..2 * modes {
                    rhs += &g[j] * C64::new(p.r[(i, j)], 0.0);
                }
                assert!(max_abs_c(&(lhs - rhs)) < 1e-8);
            }
        }
    }

    #[test]
    fn hopping_rotation_is_periodic() {
        let h = QuadraticHamiltonian::constant(hopping(2, 0, 1, 1.0), std::f64::consts::PI);
        let p = propagate(&h, 0.0, std::f64::consts::PI, None).unwrap();
        // exp(-iπ(c0†c1 + h.c.)) maps c0 → -c0.
        assert!(max_abs(&(p.r + RMat::identity(4, 4))) < 1e-10);
        let _ = dense_form(&h.schedule.segments()[0].value).unwrap();
    }

    #[test]
    fn linear_terms_rejected_by_propagate() {
        let h = QuadraticHamiltonian::constant(random_form(1, 3, true), 1.0);
        assert!(propagate(&h, 0.0, 1.0, None).is_err());
        assert!(propagate(&reduce_linear(&h), 0.0, 1.0, None).is_ok());
    }
}
