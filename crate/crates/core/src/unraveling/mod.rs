//! Stochastic unravelings of the efficiently simulable dissipative classes.
//!
//! Every trajectory is a sequence of Gaussian unitaries. Per step of length `dt`:
//!
//! - pairs `B, B†` add `θB + θ*B†` with `θ = ξ/√dt`, `ξ` complex normal;
//! - Hermitian `B` adds `g B/√dt`, `g` real normal;
//! - unitary jumps `Y_k` fire with probability `Γ_k dt` (at most one per step) before the
//!   coherent part of the step;
//! - linear `A_k` couple to a fresh vacuum ancilla through `f_k (c†_anc A_k + h.c.)/√dt`.
//!
//! Averaging trajectories reproduces the Lindblad evolution to first order in `dt`.

mod steps;

pub use steps::{
    channel_forms, ec1_step_generator, ec2_step_unitary, ec3_step_generator, noise_coordinates, Ec2Step, Noise,
    StepNoise,
};

use crate::error::{FlsError, Result};
use crate::gaussian::{embed_form, reduce_form, step_rotation};
use crate::linalg::RMat;
use crate::model::{Channel, ClassTag, Decomposition, Distribution, FockConfiguration, Model, QuadraticForm};
use crate::rng::{trajectory_rng, with_threads, TrajectoryRng};
use crate::sampler::{fock_covariance, OutcomeDistributionHandle};
use rand::Rng;
use rayon::prelude::*;

/// Where the loss ancillas live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AncillaMode {
    /// One working ancilla, traced out and reset to vacuum after every step.
    #[default]
    TraceOut,
    /// One fresh ancilla per step, all kept until the end.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPlan {
    pub t_final: f64,
    pub n_steps: usize,
    pub dt: f64,
    pub seed: u64,
    pub trajectories: usize,
    pub ancilla_mode: AncillaMode,
    pub record: bool,
}

impl TrajectoryPlan {
    /// Uses `ceil(t_final/dt)` equal steps.
    pub fn new(model: &Model, t_final: f64, dt: f64, seed: u64, trajectories: usize) -> Result<Self> {
        if !(t_final >= 0.0) || !t_final.is_finite() {
            return Err(FlsError::InvalidArgument(format!("t_final = {t_final}")));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(FlsError::InvalidArgument(format!("dt = {dt}")));
        }
        if model.class_tag() == ClassTag::General {
            return Err(FlsError::UnsupportedClass("no efficient unraveling for this Lindblad set".into()));
        }
        let n_steps = if t_final == 0.0 { 0 } else { ((t_final / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize };
        let dt = if n_steps == 0 { dt } else { t_final / n_steps as f64 };
        let plan = Self { t_final, n_steps, dt, seed, trajectories, ancilla_mode: AncillaMode::default(), record: false };
        let worst = max_jump_probability(model, t_final, plan.dt)?;
        if worst >= 0.5 {
            return Err(FlsError::StepTooLarge(worst));
        }
        Ok(plan)
    }

    pub fn with_ancilla_mode(mut self, mode: AncillaMode) -> Self {
        self.ancilla_mode = mode;
        self
    }

    pub fn with_record(mut self, record: bool) -> Self {
        self.record = record;
        self
    }
}

/// Largest `Σ_k Γ_k(t) dt` over `[0, t_final]`.
pub fn max_jump_probability(model: &Model, t_final: f64, dt: f64) -> Result<f64> {
    let pts = model.breakpoints(0.0, t_final);
    let mut worst = 0.0f64;
    for &t in pts.iter().take(pts.len().saturating_sub(1).max(1)) {
        let d = model.lindblad.decompose_at(t)?;
        worst = worst.max(d.jumps().map(|j| j.rate * dt).sum());
    }
    Ok(worst)
}

/// Random choices of one trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub noise: Vec<StepNoise>,
    /// Term index of the jump applied in each step.
    pub jumps: Vec<Option<usize>>,
    /// Fock state of the linear-term reference mode, when one is used.
    pub reference: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryOutcome {
    pub config: FockConfiguration,
    pub record: Option<TrajectoryRecord>,
}

#[derive(Debug, Clone)]
pub struct TrajectoryResult {
    pub outcomes: Vec<TrajectoryOutcome>,
    /// Empirical outcome frequencies.
    pub distribution: Distribution,
    /// Binomial standard error of each frequency.
    pub stderr: Vec<f64>,
}

/// Trajectory average of the exact per-trajectory outcome distributions.
#[derive(Debug, Clone)]
pub struct AveragedDistribution {
    pub mean: Distribution,
    pub stderr: Vec<f64>,
    pub trajectories: usize,
}

struct Interval {
    t0: f64,
    t1: f64,
    hamiltonian: QuadraticForm,
    decomposition: Decomposition,
    /// Per slot: noise basis forms on the local register.
    slot_forms: Vec<Vec<QuadraticForm>>,
    /// Per slot: jump rotation on the local register.
    jump_rotations: Vec<Option<RMat>>,
}

/// Precomputed step data shared by all trajectories of one plan.
pub struct Unraveling {
    plan: TrajectoryPlan,
    system: usize,
    has_ancilla: bool,
    has_reference: bool,
    /// Modes of the local register: system, [ancilla], [reference].
    local_modes: usize,
    intervals: Vec<Interval>,
    /// Step rotations when no Gaussian noise is present.
    fixed_steps: Option<Vec<RMat>>,
}

fn local_form(f: &QuadraticForm, local_modes: usize, has_reference: bool) -> QuadraticForm {
    let base_modes = local_modes - usize::from(has_reference);
    let g = embed_form(f, base_modes, 0);
    if has_reference {
        reduce_form(&g)
    } else {
        g
    }
}

impl Unraveling {
    pub fn new(model: &Model, plan: &TrajectoryPlan) -> Result<Self> {
        let system = model.modes();
        let pts = model.breakpoints(0.0, plan.t_final);
        let mut raw = Vec::new();
        for w in pts.windows(2) {
            if w[1] <= w[0] {
                continue;
            }
            let h = model.hamiltonian.at(w[0]).ok_or(FlsError::ScheduleGap(w[0], w[1]))?.clone();
            raw.push((w[0], w[1], h, model.lindblad.decompose_at(w[0])?));
        }
        let has_ancilla = raw.iter().any(|r| r.3.linear().next().is_some());
        let unsupported = raw.iter().any(|r| r.3.slots.iter().any(|s| matches!(s.channel, Channel::General(_))));
        if unsupported {
            return Err(FlsError::UnsupportedClass("general channel in unraveling".into()));
        }
        let base_modes = system + usize::from(has_ancilla);
        let mut has_reference = false;
        let mut raw_forms = Vec::new();
        for (_, _, h, d) in &raw {
            has_reference |= h.has_linear();
            let mut per_slot = Vec::new();
            for s in &d.slots {
                let fs = channel_forms(&s.channel, base_modes, has_ancilla.then_some(system))?;
                has_reference |= fs.iter().any(|f| f.has_linear());
                if let Channel::Jump(j) = &s.channel {
                    has_reference |= j.generator.has_linear();
                }
                per_slot.push(fs);
            }
            raw_forms.push(per_slot);
        }
        if has_ancilla && has_reference {
            return Err(FlsError::UnsupportedClass(
                "linear Lindblad operators need a parity-even Hamiltonian and d = 0".into(),
            ));
        }
        let local_modes = base_modes + usize::from(has_reference);
        let intervals: Vec<Interval> = raw
            .into_iter()
            .zip(raw_forms)
            .map(|((t0, t1, h, d), forms)| {
                let jump_rotations = d
                    .slots
                    .iter()
                    .map(|s| match &s.channel {
                        Channel::Jump(j) => {
                            Some(step_rotation(&local_form(&j.generator, local_modes, has_reference).alpha, 1.0))
                        }
                        _ => None,
                    })
                    .collect();
                Interval {
                    t0,
                    t1,
                    hamiltonian: local_form(&h, local_modes, has_reference),
                    slot_forms: forms
                        .iter()
                        .map(|fs| {
                            fs.iter()
                                .map(|f| {
                                    let f = if has_reference { reduce_form(f) } else { f.clone() };
                                    f
                                })
                                .collect()
                        })
                        .collect(),
                    decomposition: d,
                    jump_rotations,
                }
            })
            .collect();
        let mut u = Self {
            plan: plan.clone(),
            system,
            has_ancilla,
            has_reference,
            local_modes,
            intervals,
            fixed_steps: None,
        };
        let noiseless = u.intervals.iter().all(|iv| iv.slot_forms.iter().all(|f| f.is_empty()));
        if noiseless {
            let steps = (0..plan.n_steps)
                .map(|n| u.coherent_rotation(n, &[]))
                .collect::<Result<Vec<_>>>()?;
            u.fixed_steps = Some(steps);
        }
        Ok(u)
    }

    pub fn plan(&self) -> &TrajectoryPlan {
        &self.plan
    }

    pub fn uses_reference_mode(&self) -> bool {
        self.has_reference
    }

    fn interval_at(&self, t: f64) -> &Interval {
        let i = self.intervals.partition_point(|iv| iv.t1 <= t);
        &self.intervals[i.min(self.intervals.len() - 1)]
    }

    /// Rotation of the coherent (Gaussian-noise driven) part of step `n`.
    fn coherent_rotation(&self, n: usize, coords: &[Vec<f64>]) -> Result<RMat> {
        let dt = self.plan.dt;
        let a = n as f64 * dt;
        let b = if n + 1 == self.plan.n_steps { self.plan.t_final } else { (n + 1) as f64 * dt };
        let dim = 2 * self.local_modes;
        let mut r = RMat::identity(dim, dim);
        let mut pts = vec![a];
        pts.extend(self.intervals.iter().map(|iv| iv.t0).filter(|&t| t > a && t < b));
        pts.push(b);
        for w in pts.windows(2) {
            if w[1] <= w[0] {
                continue;
            }
            let iv = self.interval_at(w[0]);
            let mut alpha = iv.hamiltonian.alpha.clone();
            for (forms, xs) in iv.slot_forms.iter().zip(coords) {
                for (f, x) in forms.iter().zip(xs) {
                    alpha += &f.alpha * *x;
                }
            }
            r *= step_rotation(&alpha, w[1] - w[0]);
        }
        Ok(r)
    }

    fn register_modes(&self) -> usize {
        let ancillas = match (self.has_ancilla, self.plan.ancilla_mode) {
            (false, _) => 0,
            (true, AncillaMode::TraceOut) => 1,
            (true, AncillaMode::Full) => self.plan.n_steps.max(1),
        };
        self.system + ancillas + usize::from(self.has_reference)
    }

    /// Global Majorana indices touched by the local register in step `n`.
    fn index_map(&self, n: usize) -> Vec<usize> {
        let total = self.register_modes();
        let mut idx: Vec<usize> = (0..2 * self.system).collect();
        if self.has_ancilla {
            let m = match self.plan.ancilla_mode {
                AncillaMode::TraceOut => self.system,
                AncillaMode::Full => self.system + n,
            };
            idx.extend([2 * m, 2 * m + 1]);
        }
        if self.has_reference {
            idx.extend([2 * total - 2, 2 * total - 1]);
        }
        idx
    }

    /// Runs the random part of trajectory `index`; returns output covariances per reference sector.
    fn run(&self, initial: &FockConfiguration, index: usize, rng: &mut TrajectoryRng) -> Result<(Vec<(f64, RMat)>, Option<TrajectoryRecord>, Option<bool>)> {
        if initial.len() != self.system {
            return Err(FlsError::DimensionMismatch("initial configuration length".into()));
        }
        let _ = index;
        let reference: Option<bool> = self.has_reference.then(|| rng.random::<bool>());
        let total = self.register_modes();
        let anc_count = total - self.system - usize::from(self.has_reference);
        let sectors: Vec<bool> = if self.has_reference { vec![false, true] } else { vec![false] };
        let mut covs: Vec<RMat> = sectors
            .iter()
            .map(|&s| {
                let mut bits = initial.bits().to_vec();
                bits.extend(std::iter::repeat_n(false, anc_count));
                if self.has_reference {
                    bits.push(s);
                }
                fock_covariance(&FockConfiguration::new(bits))
            })
            .collect();
        let mut record = self.plan.record.then(|| TrajectoryRecord {
            noise: Vec::with_capacity(self.plan.n_steps),
            jumps: Vec::with_capacity(self.plan.n_steps),
            reference,
        });
        let dt = self.plan.dt;
        let reset_block = (self.has_ancilla && self.plan.ancilla_mode == AncillaMode::TraceOut)
            .then(|| (2 * self.system, vacuum_block()));
        for n in 0..self.plan.n_steps {
            let t_n = n as f64 * dt;
            let start = self.interval_at(t_n);
            let noise = StepNoise::draw(&start.decomposition, dt, rng);
            let jump_iv = self.interval_at(t_n + noise.jump_time);
            let ec2 = ec2_step_unitary(&jump_iv.decomposition, &noise, dt)?;
            let coherent = match &self.fixed_steps {
                Some(steps) => steps[n].clone(),
                None => {
                    let coords: Vec<Vec<f64>> = noise.per_slot.iter().map(|x| noise_coordinates(x, dt)).collect();
                    self.coherent_rotation(n, &coords)?
                }
            };
            let step = match &ec2.jump {
                Some((slot, _)) => {
                    jump_iv.jump_rotations[*slot].as_ref().expect("jump slot has a rotation") * &coherent
                }
                None => coherent,
            };
            let idx = self.index_map(n);
            for g in covs.iter_mut() {
                congruence(g, &idx, &step);
                if let Some((off, block)) = &reset_block {
                    reset_mode(g, *off, block);
                }
            }
            if let Some(rec) = record.as_mut() {
                rec.jumps.push(ec2.jump.as_ref().map(|(s, _)| jump_iv.decomposition.slots[*s].terms[0]));
                rec.noise.push(noise);
            }
        }
        let w = 1.0 / covs.len() as f64;
        Ok((covs.into_iter().map(|g| (w, g)).collect(), record, reference))
    }

    /// Output distribution handle of trajectory `index` (both reference sectors, weight ½ each).
    pub fn trajectory_handle(&self, initial: &FockConfiguration, index: usize) -> Result<(OutcomeDistributionHandle, Option<TrajectoryRecord>)> {
        let mut rng = trajectory_rng(self.plan.seed, index as u64);
        let (covs, rec, _) = self.run(initial, index, &mut rng)?;
        Ok((OutcomeDistributionHandle::from_covariances(self.system, covs), rec))
    }

    /// One sampled outcome of trajectory `index`; the reference sector is drawn, not averaged.
    pub fn sample_trajectory(&self, initial: &FockConfiguration, index: usize) -> Result<TrajectoryOutcome> {
        let mut rng = trajectory_rng(self.plan.seed, index as u64);
        let (covs, record, reference) = self.run(initial, index, &mut rng)?;
        let pick = reference.map_or(0, usize::from);
        let (_, g) = covs.into_iter().nth(pick).expect("sector exists");
        let handle = OutcomeDistributionHandle::from_covariances(self.system, vec![(1.0, g)]);
        Ok(TrajectoryOutcome { config: handle.sample(&mut rng), record })
    }
}

fn vacuum_block() -> RMat {
    let mut b = RMat::zeros(2, 2);
    b[(0, 1)] = -1.0;
    b[(1, 0)] = 1.0;
    b
}

/// Traces out mode at Majorana offset `off` and replaces it by the vacuum.
fn reset_mode(g: &mut RMat, off: usize, block: &RMat) {
    let n = g.nrows();
    for k in 0..n {
        for o in [off, off + 1] {
            g[(o, k)] = 0.0;
            g[(k, o)] = 0.0;
        }
    }
    g.view_mut((off, off), (2, 2)).copy_from(block);
}

/// `Γ ← Rᵀ Γ R` with `R` acting on the Majorana indices `idx` (identity elsewhere).
fn congruence(g: &mut RMat, idx: &[usize], r: &RMat) {
    let n = g.nrows();
    if idx.len() == n && idx.iter().enumerate().all(|(i, &j)| i == j) {
        *g = r.transpose() * &*g * r;
        return;
    }
    let k = idx.len();
    let cols = RMat::from_fn(n, k, |i, j| g[(i, idx[j])]);
    let cols = cols * r;
    for (j, &c) in idx.iter().enumerate() {
        for i in 0..n {
            g[(i, c)] = cols[(i, j)];
        }
    }
    let rows = RMat::from_fn(k, n, |i, j| g[(idx[i], j)]);
    let rows = r.transpose() * rows;
    for (i, &rw) in idx.iter().enumerate() {
        for j in 0..n {
            g[(rw, j)] = rows[(i, j)];
        }
    }
}

const CHUNK: usize = 64;

/// Samples one outcome per trajectory.
pub fn run_trajectories(
    model: &Model,
    plan: &TrajectoryPlan,
    initial: &FockConfiguration,
    threads: Option<usize>,
) -> Result<TrajectoryResult> {
    let u = Unraveling::new(model, plan)?;
    let outcomes = with_threads(threads, || {
        (0..plan.trajectories)
            .into_par_iter()
            .map(|i| u.sample_trajectory(initial, i))
            .collect::<Result<Vec<_>>>()
    })?;
    let distribution = Distribution::from_samples(model.modes(), outcomes.iter().map(|o| &o.config));
    let n = plan.trajectories.max(1) as f64;
    let stderr = distribution.probs.iter().map(|&p| (p * (1.0 - p) / n).sqrt()).collect();
    Ok(TrajectoryResult { outcomes, distribution, stderr })
}

/// Mean of the exact outcome distributions of `plan.trajectories` trajectories.
///
/// Summation runs over fixed chunks, so the result does not depend on the thread count.
pub fn average_distribution(
    model: &Model,
    plan: &TrajectoryPlan,
    initial: &FockConfiguration,
    threads: Option<usize>,
) -> Result<AveragedDistribution> {
    let u = Unraveling::new(model, plan)?;
    let modes = model.modes();
    let size = 1usize << modes;
    let n = plan.trajectories;
    let chunks: Vec<(Vec<f64>, Vec<f64>)> = with_threads(threads, || {
        (0..n.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut s = vec![0.0; size];
                let mut s2 = vec![0.0; size];
                for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                    let (h, _) = u.trajectory_handle(initial, i)?;
                    let d = h.enumerate_distribution()?;
                    for (k, p) in d.probs.iter().enumerate() {
                        s[k] += p;
                        s2[k] += p * p;
                    }
                }
                Ok((s, s2))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut s = vec![0.0; size];
    let mut s2 = vec![0.0; size];
    for (a, b) in &chunks {
        for k in 0..size {
            s[k] += a[k];
            s2[k] += b[k];
        }
    }
    let nf = n.max(1) as f64;
    let probs: Vec<f64> = s.iter().map(|x| x / nf).collect();
    let stderr = probs
        .iter()
        .zip(&s2)
        .map(|(m, q)| if n > 1 { ((q / nf - m * m).max(0.0) / (nf - 1.0)).sqrt() } else { 0.0 })
        .collect();
    Ok(AveragedDistribution { mean: Distribution { modes, probs }, stderr, trajectories: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs};
    use crate::model::{annihilate, create, hopping, LindbladSet, QuadraticHamiltonian, ClassHint};

    #[test]
    fn congruence_on_subset_matches_embedding() {
        let g0 = fock_covariance(&FockConfiguration::parse("0110").unwrap());
        let r = crate::linalg::expm(&(RMat::from_fn(4, 4, |i, j| (i as f64 - j as f64) * 0.3)));
        let idx = [2, 3, 6, 7];
        let mut big = RMat::identity(8, 8);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                big[(i, j)] = r[(a, b)];
            }
        }
        let want = big.transpose() * &g0 * &big;
        let mut g = g0.clone();
        congruence(&mut g, &idx, &r);
        assert!(max_abs(&(g - want)) < 1e-14);
    }

    #[test]
    fn plan_rounds_steps_and_rejects_large_jumps() {
        let h = QuadraticHamiltonian::constant(hopping(2, 0, 1, 1.0), 1.0);
        let m = Model::unitary(h.clone()).unwrap();
        let p = TrajectoryPlan::new(&m, 1.0, 0.3, 1, 1).unwrap();
        assert_eq!(p.n_steps, 4);
        assert!((p.dt - 0.25).abs() < 1e-15);
        let j = crate::model::UnitaryJump::new(3.0, QuadraticForm::zero(2)).unwrap();
        let set = LindbladSet::new(2, vec![crate::model::LindbladTerm::jump(j)], ClassHint::Auto).unwrap();
        let m = Model::new(h, set).unwrap();
        assert!(matches!(TrajectoryPlan::new(&m, 1.0, 0.2, 1, 1), Err(FlsError::StepTooLarge(_))));
    }

    #[test]
    fn record_is_reproducible() {
        let h = QuadraticHamiltonian::constant(hopping(2, 0, 1, 1.0), 1.0);
        let set = LindbladSet::from_operators(2, vec![annihilate(0, 2), create(0, 2)], ClassHint::Auto).unwrap();
        let m = Model::new(h, set).unwrap();
        let plan = TrajectoryPlan::new(&m, 1.0, 0.1, 9, 4).unwrap().with_record(true);
        let u = Unraveling::new(&m, &plan).unwrap();
        let init = FockConfiguration::parse("10").unwrap();
        let a = u.sample_trajectory(&init, 2).unwrap();
        let b = u.sample_trajectory(&init, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.record.unwrap().noise.len(), 10);
    }

    #[test]
    fn identity_jumps_reduce_to_unitary_sampling() {
        let h = QuadraticHamiltonian::constant(hopping(3, 0, 1, 1.0), 1.0);
        let j = crate::model::UnitaryJump::new(2.0, QuadraticForm::zero(3)).unwrap();
        let set = LindbladSet::new(3, vec![crate::model::LindbladTerm::jump(j)], ClassHint::Auto).unwrap();
        let m = Model::new(h.clone(), set).unwrap();
        let init = FockConfiguration::parse("100").unwrap();
        let plan = TrajectoryPlan::new(&m, 1.0, 0.05, 3, 20).unwrap();
        let avg = average_distribution(&m, &plan, &init, None).unwrap();
        let exact = OutcomeDistributionHandle::unitary(&h, &init, 1.0).unwrap().enumerate_distribution().unwrap();
        let d = avg.mean.probs.iter().zip(&exact.probs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(d < 1e-9, "{d}");
    }

    #[test]
    fn zero_rate_fluctuations_reduce_to_unitary_sampling() {
        let h = QuadraticHamiltonian::constant(hopping(2, 0, 1, 1.0), 1.0);
        let ops = vec![annihilate(0, 2).scale(c(0.0, 0.0)), create(0, 2).scale(c(0.0, 0.0))];
        let set = LindbladSet::from_operators(2, ops, ClassHint::EC1).unwrap();
        let m = Model::new(h.clone(), set).unwrap();
        let init = FockConfiguration::parse("10").unwrap();
        let plan = TrajectoryPlan::new(&m, 1.0, 0.1, 3, 10).unwrap();
        let avg = average_distribution(&m, &plan, &init, None).unwrap();
        let exact = OutcomeDistributionHandle::unitary(&h, &init, 1.0).unwrap().enumerate_distribution().unwrap();
        let d = avg.mean.probs.iter().zip(&exact.probs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(d < 1e-9, "{d}");
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn trajectory_distributions_are_normalized(seed in 0u64..1000, index in 0usize..1000, which in 0usize..4) {
            let inst = crate::model::reference::ReferenceInstance::ALL[which];
            let (m, init) = inst.build(3);
            let plan = TrajectoryPlan::new(&m, 1.0, 0.1, seed, 1).unwrap();
            let u = Unraveling::new(&m, &plan).unwrap();
            let (handle, _) = u.trajectory_handle(&init, index).unwrap();
            let d = handle.enumerate_distribution().unwrap();
            proptest::prop_assert!((d.total() - 1.0).abs() < 1e-9);
            proptest::prop_assert!(d.probs.iter().all(|&p| p >= -1e-12));
        }
    }
}
