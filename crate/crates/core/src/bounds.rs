//! A-priori trajectory error bounds, timestep selection and runtime estimates.
//!
//! The averaged single-step map differs from the Lindblad map by `dt² Σ_α D¹_α ρ D²_α`.
//! The total-variation error after time `t` is then at most
//! `(dt/2) · L^{2k}/(k!)² · Σ_α ∫ ‖D¹_α‖ ‖D²_α‖ dt'` where `k` is the largest Majorana
//! degree of the correction operators (8 for fluctuation and loss channels, 4 for jumps).

use crate::error::{FlsError, Result};
use crate::linalg::{c, CMat, C64};
use crate::model::{Channel, ClassTag, Decomposition, LindbladOperator, Model, QuadraticForm};
use crate::oracle::jw::{dense_form, dense_operator};

/// One correction term `D¹ ρ D²` through the norms of its two factors.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionTerm {
    pub label: &'static str,
    pub left: f64,
    pub right: f64,
}

impl CorrectionTerm {
    pub fn product(&self) -> f64 {
        self.left * self.right
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionProfile {
    pub class_tag: ClassTag,
    /// Largest Majorana degree of any correction factor.
    pub k_max: u32,
    pub terms: Vec<CorrectionTerm>,
}

impl CorrectionProfile {
    pub fn total(&self) -> f64 {
        self.terms.iter().map(CorrectionTerm::product).sum()
    }
}

/// Operator norms of the factors, either bounded or exact.
trait Norms {
    type Op: Clone;
    fn h(&self) -> &Self::Op;
    fn norm(&self, op: &Self::Op) -> f64;
    fn mul(&self, a: &Self::Op, b: &Self::Op) -> Self::Op;
    fn add(&self, a: &Self::Op, b: &Self::Op) -> Self::Op;
    fn scale(&self, a: &Self::Op, s: C64) -> Self::Op;
    fn adjoint(&self, a: &Self::Op) -> Self::Op;
}

/// Exact dense matrices.
struct Dense {
    h: CMat,
}

impl Norms for Dense {
    type Op = CMat;
    fn h(&self) -> &CMat {
        &self.h
    }
    fn norm(&self, op: &CMat) -> f64 {
        op.singular_values().iter().fold(0.0f64, |a, &b| a.max(b))
    }
    fn mul(&self, a: &CMat, b: &CMat) -> CMat {
        a * b
    }
    fn add(&self, a: &CMat, b: &CMat) -> CMat {
        a + b
    }
    fn scale(&self, a: &CMat, s: C64) -> CMat {
        a * s
    }
    fn adjoint(&self, a: &CMat) -> CMat {
        a.adjoint()
    }
}

/// Norm upper bounds only: `‖XY‖ ≤ ‖X‖‖Y‖`, `‖X+Y‖ ≤ ‖X‖+‖Y‖`.
struct Bounded {
    h: f64,
}

impl Norms for Bounded {
    type Op = f64;
    fn h(&self) -> &f64 {
        &self.h
    }
    fn norm(&self, op: &f64) -> f64 {
        *op
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn scale(&self, a: &f64, s: C64) -> f64 {
        a * s.norm()
    }
    fn adjoint(&self, a: &f64) -> f64 {
        *a
    }
}

fn sum<N: Norms>(n: &N, ops: impl IntoIterator<Item = N::Op>, zero: N::Op) -> N::Op {
    ops.into_iter().fold(zero, |acc, x| n.add(&acc, &x))
}

fn comm<N: Norms>(n: &N, a: &N::Op, b: &N::Op) -> N::Op {
    n.add(&n.mul(a, b), &n.scale(&n.mul(b, a), c(-1.0, 0.0)))
}

fn anti<N: Norms>(n: &N, a: &N::Op, b: &N::Op) -> N::Op {
    n.add(&n.mul(a, b), &n.mul(b, a))
}

/// Sum over all orderings of the product of `ops`.
fn perm_sum<N: Norms>(n: &N, ops: &[&N::Op], zero: &N::Op) -> N::Op {
    fn rec<N: Norms>(n: &N, left: Vec<&N::Op>, acc: Option<N::Op>, out: &mut Vec<N::Op>) {
        if left.is_empty() {
            out.push(acc.expect("non-empty product"));
            return;
        }
        for i in 0..left.len() {
            let mut rest = left.clone();
            let x = rest.remove(i);
            let next = match &acc {
                None => x.clone(),
                Some(a) => n.mul(a, x),
            };
            rec(n, rest, Some(next), out);
        }
    }
    let mut out = Vec::new();
    rec(n, ops.to_vec(), None, &mut out);
    sum(n, out, zero.clone())
}

fn term(label: &'static str, left: f64, right: f64) -> CorrectionTerm {
    CorrectionTerm { label, left, right }
}

fn fluctuation_terms<N: Norms>(n: &N, a: &[N::Op], zero: &N::Op, one: &N::Op, out: &mut Vec<CorrectionTerm>) {
    let ad: Vec<N::Op> = a.iter().map(|x| n.adjoint(x)).collect();
    let q = c(0.25, 0.0);
    for k in 0..a.len() {
        for kp in 0..a.len() {
            let pairs = [
                (n.mul(&ad[kp], &ad[k]), comm(n, &a[kp], &a[k])),
                (n.mul(&ad[kp], &a[k]), comm(n, &a[kp], &ad[k])),
                (n.mul(&a[kp], &ad[k]), comm(n, &ad[kp], &a[k])),
                (n.mul(&a[kp], &a[k]), comm(n, &ad[kp], &ad[k])),
            ];
            for (l, r) in pairs {
                out.push(term("fluctuation pair", n.norm(&n.scale(&l, q)), n.norm(&r)));
            }
        }
    }
    for k in 0..a.len() {
        let mut v = zero.clone();
        for kp in 0..a.len() {
            let num = n.mul(&ad[kp], &a[kp]);
            v = n.add(&v, &n.scale(&anti(n, &ad[k], &num), q));
            let p = perm_sum(n, &[&ad[k], &ad[kp], &a[kp]], zero);
            v = n.add(&v, &n.scale(&p, c(-1.0 / 6.0, 0.0)));
        }
        let (ak, vk) = (n.norm(&a[k]), n.norm(&v));
        for _ in 0..4 {
            out.push(term("fluctuation cubic", ak, vk));
        }
    }
    let h = n.h();
    let mut w = zero.clone();
    let mut s = zero.clone();
    for k in 0..a.len() {
        let inner = n.add(&comm(n, &comm(n, h, &a[k]), &ad[k]), &anti(n, h, &n.mul(&ad[k], &a[k])));
        w = n.add(&w, &n.scale(&inner, c(0.0, -1.0 / 6.0)));
        s = n.add(&s, &anti(n, &ad[k], &a[k]));
    }
    w = n.add(&w, &n.scale(&n.mul(&s, &s), c(-0.125, 0.0)));
    for k in 0..a.len() {
        for kp in 0..a.len() {
            let p = perm_sum(n, &[&ad[k], &a[k], &ad[kp], &a[kp]], zero);
            w = n.add(&w, &n.scale(&p, c(1.0 / 48.0, 0.0)));
        }
    }
    let wn = n.norm(&w);
    let on = n.norm(one);
    out.push(term("fluctuation drift", wn, on));
    out.push(term("fluctuation drift", on, wn));
}

fn jump_terms<N: Norms>(n: &N, a: &[N::Op], rates: &[f64], zero: &N::Op, one: &N::Op, out: &mut Vec<CorrectionTerm>) {
    let total: f64 = rates.iter().sum();
    let h = n.h();
    for k in 0..a.len() {
        let ad = n.adjoint(&a[k]);
        let ck = n.add(&n.scale(&ad, c(total, 0.0)), &n.scale(&comm(n, &ad, h), c(0.0, 0.5)));
        let (an, cn) = (n.norm(&a[k]), n.norm(&ck));
        out.push(term("jump drift", an, cn));
        out.push(term("jump drift", cn, an));
    }
    for k in 0..a.len() {
        for kp in 0..a.len() {
            let l = n.mul(&a[k], &a[kp]);
            let r = n.adjoint(&l);
            out.push(term("double jump", 0.5 * n.norm(&l), n.norm(&r)));
        }
    }
    let _ = zero;
    out.push(term("jump rate", 0.5 * total * total, n.norm(one)));
}

fn loss_terms<N: Norms>(n: &N, a: &[N::Op], zero: &N::Op, one: &N::Op, out: &mut Vec<CorrectionTerm>) {
    let ad: Vec<N::Op> = a.iter().map(|x| n.adjoint(x)).collect();
    for k in 0..a.len() {
        for kp in 0..a.len() {
            let l = n.mul(&ad[k], &a[kp]);
            let r = n.mul(&ad[kp], &a[k]);
            out.push(term("loss exchange", 0.25 * n.norm(&l), n.norm(&r)));
            let l = n.mul(&a[k], &a[kp]);
            let r = n.mul(&ad[kp], &ad[k]);
            out.push(term("double loss", 0.5 * n.norm(&l), n.norm(&r)));
        }
    }
    let number = sum(n, (0..a.len()).map(|k| n.mul(&ad[k], &a[k])), zero.clone());
    for k in 0..a.len() {
        let qk = n.scale(&anti(n, &ad[k], &number), c(1.0 / 12.0, 0.0));
        let (an, qn) = (n.norm(&a[k]), n.norm(&qk));
        out.push(term("loss cubic", an, qn));
        out.push(term("loss cubic", qn, an));
    }
    let h = n.h();
    let mut m = zero.clone();
    for k in 0..a.len() {
        let nk = n.mul(&ad[k], &a[k]);
        let x = n.add(&n.mul(&n.mul(&ad[k], h), &a[k]), &n.scale(&anti(n, h, &nk), c(-0.5, 0.0)));
        m = n.add(&m, &n.scale(&x, c(0.0, 1.0 / 6.0)));
        for kp in 0..a.len() {
            let y = n.add(
                &n.mul(&n.mul(&ad[kp], &a[kp]), &nk),
                &n.scale(&n.mul(&n.mul(&ad[kp], &a[k]), &n.mul(&ad[k], &a[kp])), c(-0.5, 0.0)),
            );
            m = n.add(&m, &n.scale(&y, c(-1.0 / 12.0, 0.0)));
        }
    }
    let mn = n.norm(&m);
    let on = n.norm(one);
    out.push(term("loss drift", mn, on));
    out.push(term("loss drift", on, mn));
}

/// Operators entering the fluctuation corrections: each pair once, each Hermitian operator
/// once with weight `1/√2`.
fn fluctuation_ops(d: &Decomposition) -> Vec<LindbladOperator> {
    let mut v: Vec<LindbladOperator> = d.pairs().cloned().collect();
    v.extend(d.hermitian().map(|b| b.scale(c(std::f64::consts::FRAC_1_SQRT_2, 0.0))));
    v
}

fn k_max(tag: ClassTag) -> u32 {
    if tag == ClassTag::EC2 {
        4
    } else {
        8
    }
}

fn profile<N: Norms>(
    n: &N,
    tag: ClassTag,
    fluct: Vec<N::Op>,
    jumps: Vec<N::Op>,
    rates: Vec<f64>,
    loss: Vec<N::Op>,
    zero: N::Op,
    one: N::Op,
) -> CorrectionProfile {
    let mut terms = Vec::new();
    if !fluct.is_empty() {
        fluctuation_terms(n, &fluct, &zero, &one, &mut terms);
    }
    if !jumps.is_empty() {
        jump_terms(n, &jumps, &rates, &zero, &one, &mut terms);
    }
    if !loss.is_empty() {
        loss_terms(n, &loss, &zero, &one, &mut terms);
    }
    CorrectionProfile { class_tag: tag, k_max: k_max(tag), terms }
}

fn decomposition_at(model: &Model, t: f64) -> Result<(QuadraticForm, Decomposition)> {
    let h = model
        .hamiltonian
        .at(t)
        .cloned()
        .ok_or(FlsError::ScheduleGap(t, t))?;
    let d = model.lindblad.decompose_at(t)?;
    if d.slots.iter().any(|s| matches!(s.channel, Channel::General(_))) || model.class_tag() == ClassTag::General {
        return Err(FlsError::UnsupportedClass("no correction structure for a general Lindblad set".into()));
    }
    Ok((h, d))
}

/// Triangle-inequality bounds on every correction factor at time `t`.
pub fn correction_norms(model: &Model, t: f64) -> Result<CorrectionProfile> {
    let (h, d) = decomposition_at(model, t)?;
    let n = Bounded { h: h.norm_bound() };
    let fluct = fluctuation_ops(&d).iter().map(LindbladOperator::norm_bound).collect();
    let rates: Vec<f64> = d.jumps().map(|j| j.rate).collect();
    let jumps = rates.iter().map(|r| r.sqrt()).collect();
    let loss = d.linear().map(LindbladOperator::norm_bound).collect();
    Ok(profile(&n, model.class_tag(), fluct, jumps, rates, loss, 0.0, 1.0))
}

/// Exact spectral norms of the same factors, from dense matrices (at most 8 modes).
pub fn dense_correction_norms(model: &Model, t: f64) -> Result<CorrectionProfile> {
    let modes = model.modes();
    if modes > 8 {
        return Err(FlsError::DimensionTooLarge(format!("dense norms need L <= 8, got {modes}")));
    }
    let (h, d) = decomposition_at(model, t)?;
    let dim = 1usize << modes;
    let n = Dense { h: dense_form(&h)? };
    let fluct = fluctuation_ops(&d).iter().map(dense_operator).collect::<Result<Vec<_>>>()?;
    let mut rates = Vec::new();
    let mut jumps = Vec::new();
    for j in d.jumps() {
        let g = dense_form(&j.generator)?;
        jumps.push((g * c(0.0, -1.0)).exp() * c(j.rate.sqrt(), 0.0));
        rates.push(j.rate);
    }
    let loss = d.linear().map(dense_operator).collect::<Result<Vec<_>>>()?;
    Ok(profile(&n, model.class_tag(), fluct, jumps, rates, loss, CMat::zeros(dim, dim), CMat::identity(dim, dim)))
}

fn prefactor(modes: usize, k: u32) -> f64 {
    let fact: f64 = (1..=k).map(f64::from).product();
    (modes as f64).powi(2 * k as i32) / (fact * fact)
}

/// `∫_0^t Σ_α ‖D¹_α‖‖D²_α‖ dt'` times the locality prefactor; the bound is this times `dt/2`.
pub fn bound_rate(model: &Model, t: f64) -> Result<f64> {
    let pts = model.breakpoints(0.0, t);
    let mut integral = 0.0;
    let mut k = k_max(model.class_tag());
    for w in pts.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let p = correction_norms(model, w[0])?;
        k = p.k_max;
        integral += (w[1] - w[0]) * p.total();
    }
    Ok(0.5 * prefactor(model.modes(), k) * integral)
}

/// First-order bound on the total-variation error of trajectory sampling with step `dt`.
pub fn error_bound(model: &Model, t: f64, dt: f64) -> Result<f64> {
    Ok(dt * bound_rate(model, t)?)
}

/// Largest `dt = t/n` whose bound stays within `target`, also respecting the jump-probability
/// limit and the shortest schedule segment.
pub fn choose_dt(model: &Model, t: f64, target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(FlsError::InvalidArgument(format!("target epsilon {target} outside (0, 1)")));
    }
    if !(t > 0.0) {
        return Err(FlsError::InvalidArgument(format!("t = {t}")));
    }
    let rate = bound_rate(model, t)?;
    let mut cap = if rate > 0.0 { target / rate } else { f64::INFINITY };
    let pts = model.breakpoints(0.0, t);
    for w in pts.windows(2) {
        if w[1] > w[0] {
            cap = cap.min(w[1] - w[0]);
            let d = model.lindblad.decompose_at(w[0])?;
            let g: f64 = d.jumps().map(|j| j.rate).sum();
            if g > 0.0 {
                cap = cap.min(0.5 / g * (1.0 - 1e-9));
            }
        }
    }
    cap = cap.min(t);
    if cap < 1e-9 * t {
        return Err(FlsError::InfeasibleTarget(target));
    }
    let n = (t / cap * (1.0 - 1e-12)).ceil().max(1.0);
    Ok(t / n)
}

/// Operation count `n_traj (L⁴ + L³ t/dt)`.
pub fn runtime_estimate(modes: usize, t: f64, dt: f64, trajectories: usize) -> f64 {
    let l = modes as f64;
    trajectories as f64 * (l.powi(4) + l.powi(3) * t / dt)
}

/// [`runtime_estimate`] with `L → L + t/dt` when loss ancillas are needed.
pub fn runtime_estimate_for(model: &Model, t: f64, dt: f64, trajectories: usize) -> Result<f64> {
    let d = model.lindblad.decompose_at(0.0)?;
    let extra = if d.linear().next().is_some() { (t / dt).ceil() as usize } else { 0 };
    Ok(runtime_estimate(model.modes() + extra, t, dt, trajectories))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        annihilate, create, fock_bilinear, hopping, onsite, ClassHint, LindbladSet, LindbladTerm, QuadraticHamiltonian,
        UnitaryJump,
    };

    fn model(h: QuadraticForm, ops: Vec<LindbladOperator>) -> Model {
        let m = h.modes();
        Model::new(
            QuadraticHamiltonian::constant(h, 2.0),
            LindbladSet::from_operators(m, ops, ClassHint::Auto).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn empty_set_has_zero_corrections() {
        let m = model(hopping(2, 0, 1, 1.0), vec![]);
        let p = correction_norms(&m, 0.0).unwrap();
        assert_eq!(p.total(), 0.0);
        assert_eq!(error_bound(&m, 1.0, 0.1).unwrap(), 0.0);
        assert_eq!(choose_dt(&m, 1.0, 0.01).unwrap(), 1.0);
    }

    #[test]
    fn zero_rate_jump_profile_vanishes() {
        let j = UnitaryJump::new(0.0, onsite(1, 0, 1.0)).unwrap();
        let set = LindbladSet::new(1, vec![LindbladTerm::jump(j)], ClassHint::Auto).unwrap();
        let m = Model::new(QuadraticHamiltonian::constant(onsite(1, 0, 0.3), 1.0), set).unwrap();
        let p = correction_norms(&m, 0.0).unwrap();
        assert_eq!(p.k_max, 4);
        assert_eq!(p.total(), 0.0);
        assert!(p.terms.iter().any(|t| t.label == "jump rate"));
    }

    #[test]
    fn bounds_dominate_dense_norms() {
        let cases = vec![
            model(hopping(2, 0, 1, 1.0), vec![annihilate(0, 2).scale(c(0.7, 0.0))]),
            model(hopping(2, 0, 1, 0.5), vec![annihilate(0, 2), create(0, 2)]),
            model(hopping(2, 0, 1, 0.5), vec![fock_bilinear(&create(1, 2), &annihilate(1, 2))]),
        ];
        for m in cases {
            let a = correction_norms(&m, 0.0).unwrap();
            let d = dense_correction_norms(&m, 0.0).unwrap();
            assert_eq!(a.terms.len(), d.terms.len());
            for (x, y) in a.terms.iter().zip(&d.terms) {
                assert_eq!(x.label, y.label);
                assert!(x.left >= y.left - 1e-9 && x.right >= y.right - 1e-9, "{x:?} vs {y:?}");
            }
        }
    }

    #[test]
    fn bound_is_linear_and_monotone() {
        let m = model(hopping(2, 0, 1, 1.0), vec![annihilate(0, 2).scale(c(0.7, 0.0))]);
        let b1 = error_bound(&m, 1.0, 0.01).unwrap();
        assert_eq!(error_bound(&m, 1.0, 0.02).unwrap(), 2.0 * b1);
        assert!(error_bound(&m, 2.0, 0.01).unwrap() >= b1);
        let m2 = model(hopping(2, 0, 1, 1.0), vec![annihilate(0, 2).scale(c(0.9, 0.0))]);
        assert!(error_bound(&m2, 1.0, 0.01).unwrap() >= b1);
    }

    #[test]
    fn chosen_dt_meets_target() {
        let m = model(hopping(2, 0, 1, 1.0), vec![annihilate(0, 2), create(0, 2)]);
        let d1 = choose_dt(&m, 1.0, 1e-5).unwrap();
        let d2 = choose_dt(&m, 1.0, 2e-5).unwrap();
        assert!(error_bound(&m, 1.0, d1).unwrap() <= 1e-5);
        assert!(d2 / d1 > 1.9 && d2 / d1 < 2.1);
        assert!(((1.0 / d1).round() - 1.0 / d1).abs() < 1e-9);
        assert!(matches!(choose_dt(&m, 1.0, 1e-300), Err(FlsError::InvalidArgument(_)) | Err(FlsError::InfeasibleTarget(_))));
    }

    #[test]
    fn runtime_scaling() {
        let a = runtime_estimate(8, 1.0, 0.01, 1);
        let b = runtime_estimate(8, 1.0, 0.005, 1);
        assert!((b - 8f64.powi(4)) / (a - 8f64.powi(4)) - 2.0 < 1e-12);
        let big = runtime_estimate(1000, 1.0, 1.0, 1) / runtime_estimate(500, 1.0, 1.0, 1);
        assert!((big - 16.0).abs() < 0.1);
    }
}
