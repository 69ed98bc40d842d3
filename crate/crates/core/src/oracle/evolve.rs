//! Dense Lindblad integration with an adaptive Dormand–Prince 5(4) scheme.

use super::jw::{dense_form, dense_operator, MAX_EVOLVE_MODES};
use crate::error::{FlsError, Result};
use crate::linalg::{c, expm_c, max_abs_c, CMat, C64, I};
use crate::model::{Distribution, FockConfiguration, Model};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    pub rho: CMat,
}

impl DenseState {
    pub fn fock(config: &FockConfiguration) -> Self {
        let dim = 1usize << config.len();
        let mut rho = CMat::zeros(dim, dim);
        let k = config.index();
        rho[(k, k)] = c(1.0, 0.0);
        Self { rho }
    }

    pub fn maximally_mixed(modes: usize) -> Self {
        let dim = 1usize << modes;
        Self { rho: CMat::identity(dim, dim) * c(1.0 / dim as f64, 0.0) }
    }

    pub fn pure(psi: &crate::linalg::CVec) -> Self {
        Self { rho: psi * psi.adjoint() }
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.rho.trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        max_abs_c(&(&self.rho - self.rho.adjoint()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.rho + self.rho.adjoint()) * c(0.5, 0.0);
        h.symmetric_eigenvalues().iter().fold(f64::INFINITY, |a, &x| a.min(x))
    }
}

/// Constant Lindbladian `-i[H, ·] + Σ D[A_k]` in dense form.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseGenerator {
    pub h: CMat,
    pub jumps: Vec<CMat>,
}

impl DenseGenerator {
    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    /// Generator of `model` on the piece containing `t`.
    pub fn from_model_at(model: &Model, t: f64) -> Result<Self> {
        let modes = model.modes();
        if modes > MAX_EVOLVE_MODES {
            return Err(FlsError::DimensionTooLarge(format!("L = {modes} exceeds dense cap {MAX_EVOLVE_MODES}")));
        }
        let form = model
            .hamiltonian
            .at(t)
            .ok_or(FlsError::ScheduleGap(t, t))?;
        let h = dense_form(form)?;
        let (ops, jumps) = model.lindblad.snapshot(t);
        let mut dense = Vec::new();
        for (_, op) in ops {
            dense.push(dense_operator(&op)?);
        }
        for (_, j) in jumps {
            let g = dense_form(&j.generator)?;
            dense.push(expm_c(&(g * (-I))) * c(j.rate.sqrt(), 0.0));
        }
        Ok(Self { h, jumps: dense })
    }

    /// Projection onto the span of the given basis states; fails if the dynamics leaks out.
    pub fn restrict(&self, basis: &[usize]) -> Result<Self> {
        let dim = self.dim();
        let k = basis.len();
        let mut p = CMat::zeros(dim, k);
        for (col, &b) in basis.iter().enumerate() {
            p[(b, col)] = c(1.0, 0.0);
        }
        let proj = &p * p.adjoint();
        let complement = CMat::identity(dim, dim) - &proj;
        let check = |m: &CMat| -> Result<CMat> {
            let leak = max_abs_c(&(&complement * m * &p));
            if leak > 1e-12 * (1.0 + max_abs_c(m)) {
                return Err(FlsError::InvalidArgument(format!("basis is not invariant (leak {leak:e})")));
            }
            Ok(p.adjoint() * m * &p)
        };
        let h = check(&self.h)?;
        let jumps = self.jumps.iter().map(check).collect::<Result<Vec<_>>>()?;
        Ok(Self { h, jumps })
    }

    fn prepared(&self) -> Prepared {
        let mut heff = self.h.clone();
        for a in &self.jumps {
            heff -= a.adjoint() * a * c(0.0, 0.5);
        }
        Prepared {
            heff_adj: heff.adjoint(),
            heff,
            jumps: self.jumps.iter().map(|a| (a.clone(), a.adjoint())).collect(),
        }
    }
}

struct Prepared {
    heff: CMat,
    heff_adj: CMat,
    jumps: Vec<(CMat, CMat)>,
}

impl Prepared {
    fn apply(&self, x: &CMat) -> CMat {
        let mut out = (&self.heff * x - x * &self.heff_adj) * (-I);
        for (a, ad) in &self.jumps {
            out += a * x * ad;
        }
        out
    }

    fn scale(&self) -> f64 {
        let n = self.heff.nrows() as f64;
        let mut s = max_abs_c(&self.heff) * n;
        for (a, _) in &self.jumps {
            let v = max_abs_c(a) * n;
            s += v * v;
        }
        s
    }
}

/// Piecewise-constant dense generator.
#[derive(Debug, Clone)]
pub struct DenseSchedule {
    pub pieces: Vec<(f64, f64, DenseGenerator)>,
}

impl DenseSchedule {
    pub fn from_model(model: &Model, t0: f64, t1: f64) -> Result<Self> {
        let pts = model.breakpoints(t0, t1);
        let mut pieces = Vec::new();
        for w in pts.windows(2) {
            if w[1] > w[0] {
                pieces.push((w[0], w[1], DenseGenerator::from_model_at(model, w[0])?));
            }
        }
        Ok(Self { pieces })
    }

    pub fn constant(generator: DenseGenerator, duration: f64) -> Self {
        Self { pieces: vec![(0.0, duration, generator)] }
    }
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn integrate_piece(x0: &CMat, gen: &Prepared, duration: f64, rtol: f64, hermitian: bool) -> Result<CMat> {
    let atol = rtol * 1e-2;
    let mut x = x0.clone();
    let mut t = 0.0;
    let mut h = (0.05 / gen.scale().max(1e-12)).min(duration);
    let mut k1 = gen.apply(&x);
    let mut steps = 0usize;
    while t < duration {
        if t + h > duration {
            h = duration - t;
        }
        let mut ks: Vec<CMat> = Vec::with_capacity(7);
        ks.push(k1.clone());
        for row in A.iter() {
            let mut y = x.clone();
            for (j, &aij) in row.iter().enumerate().take(ks.len()) {
                if aij != 0.0 {
                    y += &ks[j] * c(h * aij, 0.0);
                }
            }
            ks.push(gen.apply(&y));
        }
        // Row 6 of A holds the 5th-order weights, so the 7th stage was evaluated at y_new.
        let mut y_new = x.clone();
        for (j, &b) in A[5].iter().enumerate() {
            if b != 0.0 {
                y_new += &ks[j] * c(h * b, 0.0);
            }
        }
        let mut err = 0.0f64;
        for idx in 0..x.len() {
            let mut e = C64::new(0.0, 0.0);
            for j in 0..7 {
                let b5 = if j < 6 { A[5][j] } else { 0.0 };
                let w = b5 - B4[j];
                if w != 0.0 {
                    e += ks[j][idx] * w;
                }
            }
            let scale = atol + rtol * x[idx].norm().max(y_new[idx].norm());
            err = err.max((e * h).norm() / scale);
        }
        if err <= 1.0 {
            t += h;
            x = y_new;
            if hermitian {
                x = (&x + x.adjoint()) * c(0.5, 0.0);
                k1 = gen.apply(&x);
            } else {
                k1 = ks.pop().expect("seven stages");
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        steps += 1;
        if h < 1e-14 * duration.max(1e-300) || steps > 50_000_000 {
            return Err(FlsError::ToleranceNotMet(format!("step size underflow at t = {t}")));
        }
    }
    Ok(x)
}

/// Evolves an arbitrary operator `x` through the schedule.
pub fn evolve_schedule(x: &CMat, schedule: &DenseSchedule, rtol: f64, hermitian: bool) -> Result<CMat> {
    let mut x = x.clone();
    for (t0, t1, g) in &schedule.pieces {
        if t1 > t0 {
            x = integrate_piece(&x, &g.prepared(), t1 - t0, rtol, hermitian)?;
        }
    }
    Ok(x)
}

/// Integrates the master equation from `0` to `t`.
pub fn lindblad_evolve(rho0: &DenseState, model: &Model, t: f64, rtol: f64) -> Result<DenseState> {
    let schedule = DenseSchedule::from_model(model, 0.0, t)?;
    let rho = evolve_schedule(&rho0.rho, &schedule, rtol, true)?;
    let state = DenseState { rho };
    let drift = (state.trace() - c(1.0, 0.0)).norm();
    if drift > 1e-8 {
        return Err(FlsError::ToleranceNotMet(format!("trace drift {drift:e}")));
    }
    Ok(state)
}

pub fn measure_distribution(state: &DenseState) -> Distribution {
    let dim = state.dim();
    let modes = dim.trailing_zeros() as usize;
    Distribution { modes, probs: (0..dim).map(|k| state.rho[(k, k)].re).collect() }
}

/// Exact output distribution of `model` at time `t` from a Fock configuration.
pub fn exact_distribution(model: &Model, initial: &FockConfiguration, t: f64) -> Result<Distribution> {
    if model.modes() > MAX_EVOLVE_MODES {
        return Err(FlsError::DimensionTooLarge(format!("L = {} exceeds dense cap {MAX_EVOLVE_MODES}", model.modes())));
    }
    let rho = lindblad_evolve(&DenseState::fock(initial), model, t, 1e-10)?;
    Ok(measure_distribution(&rho))
}

/// Dense unitary of the Hamiltonian part over `[t0, t1]`.
pub fn unitary_dense(model: &Model, t0: f64, t1: f64) -> Result<CMat> {
    let pts = model.breakpoints(t0, t1);
    let dim = 1usize << model.modes();
    let mut u = CMat::identity(dim, dim);
    for w in pts.windows(2) {
        let form = model.hamiltonian.at(w[0]).ok_or(FlsError::ScheduleGap(w[0], w[1]))?;
        let h = dense_form(form)?;
        u = expm_c(&(h * c(0.0, -(w[1] - w[0])))) * u;
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;

    fn loss_model(gamma: f64) -> Model {
        let op = annihilate(0, 1).scale(c(gamma.sqrt(), 0.0));
        Model::new(
            QuadraticHamiltonian::zero(1, 10.0),
            LindbladSet::from_operators(1, vec![op], ClassHint::Auto).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn single_mode_decay() {
        let m = loss_model(0.8);
        let one = FockConfiguration::parse("1").unwrap();
        for &t in &[0.5, 1.0, 2.5] {
            let rho = lindblad_evolve(&DenseState::fock(&one), &m, t, 1e-8).unwrap();
            let d = measure_distribution(&rho);
            assert!((d.probs[1] - (-0.8 * t).exp()).abs() < 1e-7);
            assert!((d.probs[0] - (1.0 - (-0.8 * t).exp())).abs() < 1e-7);
            assert!(rho.min_eigenvalue() > -1e-7);
            assert!(rho.hermiticity_defect() < 1e-12);
        }
    }

    #[test]
    fn unitary_limit() {
        let modes = 2;
        let h = hopping(modes, 0, 1, 0.9);
        let mut h2 = h.clone();
        h2.beta[1] = 0.3;
        let model = Model::unitary(QuadraticHamiltonian::constant(h2, 2.0)).unwrap();
        let mut psi = crate::linalg::CVec::zeros(4);
        psi[1] = c(0.6, 0.0);
        psi[2] = c(0.0, 0.8);
        let rho0 = DenseState::pure(&psi);
        let rho = lindblad_evolve(&rho0, &model, 1.3, 1e-10).unwrap();
        let u = unitary_dense(&model, 0.0, 1.3).unwrap();
        let expect = &u * &rho0.rho * u.adjoint();
        assert!(max_abs_c(&(rho.rho - expect)) < 1e-8);
    }

    #[test]
    fn dephasing_fixes_fock_states() {
        let n = fock_bilinear(&create(1, 2), &annihilate(1, 2)).scale(c(1.5, 0.0));
        let model = Model::new(
            QuadraticHamiltonian::zero(2, 1.0),
            LindbladSet::from_operators(2, vec![n], ClassHint::Auto).unwrap(),
        )
        .unwrap();
        let r = FockConfiguration::parse("01").unwrap();
        let rho = lindblad_evolve(&DenseState::fock(&r), &model, 1.0, 1e-8).unwrap();
        assert!(max_abs_c(&(rho.rho - DenseState::fock(&r).rho)) < 1e-9);
    }

    #[test]
    fn measurement_of_special_states() {
        let d = measure_distribution(&DenseState::maximally_mixed(3));
        assert!(d.probs.iter().all(|&p| (p - 0.125).abs() < 1e-15));
        let r = FockConfiguration::parse("101").unwrap();
        let d = measure_distribution(&DenseState::fock(&r));
        assert_eq!(d.get(&r), 1.0);
        assert_eq!(d.total(), 1.0);
    }

    #[test]
    fn restriction_detects_leaks() {
        let m = loss_model(1.0);
        let g = DenseGenerator::from_model_at(&m, 0.0).unwrap();
        assert!(g.restrict(&[0, 1]).is_ok());
        assert!(g.restrict(&[1]).is_err());
    }
}
