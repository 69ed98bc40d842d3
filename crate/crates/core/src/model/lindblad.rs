use super::hamiltonian::{validate_hamiltonian, QuadraticHamiltonian};
use super::operator::{LindbladOperator, UnitaryJump};
use super::schedule::Schedule;
use crate::error::{FlsError, Result};
use crate::linalg::{c, C64};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassTag {
    EC1,
    EC2,
    EC3,
    /// Several efficient classes combined in one set.
    Mixed,
    General,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassTag::EC1 => "EC1",
            ClassTag::EC2 => "EC2",
            ClassTag::EC3 => "EC3",
            ClassTag::Mixed => "mixed",
            ClassTag::General => "general",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClassHint {
    #[default]
    Auto,
    EC1,
    EC2,
    EC3,
    General,
}

impl ClassHint {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Some(Self::Auto),
            "ec1" => Some(Self::EC1),
            "ec2" => Some(Self::EC2),
            "ec3" => Some(Self::EC3),
            "general" => Some(Self::General),
            _ => None,
        }
    }
}

impl fmt::Display for ClassHint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LindbladTerm {
    Operator(Schedule<LindbladOperator>),
    Jump(Schedule<UnitaryJump>),
}

impl LindbladTerm {
    pub fn operator(op: LindbladOperator) -> Self {
        Self::Operator(Schedule::constant(op))
    }

    pub fn jump(j: UnitaryJump) -> Self {
        Self::Jump(Schedule::constant(j))
    }

    fn breakpoints_in(&self, t0: f64, t1: f64) -> Vec<f64> {
        match self {
            Self::Operator(s) => s.breakpoints_in(t0, t1),
            Self::Jump(s) => s.breakpoints_in(t0, t1),
        }
    }
}

/// How one dissipative channel is unraveled.
#[derive(Debug, Clone, PartialEq)]
pub enum Channel {
    /// `B` together with its partner `B†`; driven by complex Gaussian noise.
    Pair(LindbladOperator),
    /// Hermitian `B`; driven by real Gaussian noise.
    Hermitian(LindbladOperator),
    /// Linear operator coupled to a fresh ancilla mode.
    Linear(LindbladOperator),
    Jump(UnitaryJump),
    General(LindbladOperator),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Slot {
    /// Indices of the input terms merged into this channel.
    pub terms: Vec<usize>,
    pub channel: Channel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub tag: ClassTag,
    pub slots: Vec<Slot>,
}

impl Decomposition {
    pub fn signature(&self) -> Vec<(u8, Vec<usize>)> {
        self.slots
            .iter()
            .map(|s| {
                let k = match s.channel {
                    Channel::Pair(_) => 0,
                    Channel::Hermitian(_) => 1,
                    Channel::Linear(_) => 2,
                    Channel::Jump(_) => 3,
                    Channel::General(_) => 4,
                };
                (k, s.terms.clone())
            })
            .collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = &LindbladOperator> {
        self.slots.iter().filter_map(|s| match &s.channel {
            Channel::Pair(b) => Some(b),
            _ => None,
        })
    }

    pub fn hermitian(&self) -> impl Iterator<Item = &LindbladOperator> {
        self.slots.iter().filter_map(|s| match &s.channel {
            Channel::Hermitian(b) => Some(b),
            _ => None,
        })
    }

    pub fn linear(&self) -> impl Iterator<Item = &LindbladOperator> {
        self.slots.iter().filter_map(|s| match &s.channel {
            Channel::Linear(b) => Some(b),
            _ => None,
        })
    }

    pub fn jumps(&self) -> impl Iterator<Item = &UnitaryJump> {
        self.slots.iter().filter_map(|s| match &s.channel {
            Channel::Jump(j) => Some(j),
            _ => None,
        })
    }
}

const SCALAR_TOL: f64 = 1e-13;
const MATCH_TOL: f64 = 1e-9;

/// `λ` with `y ≈ λ x`, if it exists.
fn proportionality(x: &[C64], y: &[C64]) -> Option<C64> {
    let (p, xp) = x
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(i, v)| (i, *v))?;
    if xp.norm() == 0.0 {
        return None;
    }
    let lambda = y[p] / xp;
    let scale = y.iter().fold(0.0f64, |a, v| a.max(v.norm())).max(SCALAR_TOL);
    let ok = x.iter().zip(y).all(|(a, b)| (b - lambda * a).norm() <= MATCH_TOL * scale);
    ok.then_some(lambda)
}

fn conj(v: &[C64]) -> Vec<C64> {
    v.iter().map(|z| z.conj()).collect()
}

fn ambiguous(hint: ClassHint, detail: &str) -> FlsError {
    FlsError::AmbiguousClass { hint: hint.to_string(), detail: detail.into() }
}

/// Splits a set of operators (with their term indices) into unraveling channels.
pub fn decompose(
    ops: &[(usize, LindbladOperator)],
    jumps: &[(usize, UnitaryJump)],
    hint: ClassHint,
) -> Result<Decomposition> {
    struct Group {
        terms: Vec<usize>,
        reference: LindbladOperator,
        coeffs: Vec<C64>,
        weight: f64,
    }
    let mut groups: Vec<Group> = Vec::new();
    for (idx, op) in ops {
        if op.is_scalar(SCALAR_TOL) {
            continue;
        }
        let v = op.coefficients();
        if let Some(g) = groups.iter_mut().find_map(|g| {
            proportionality(&g.coeffs, &v).map(|l| (g, l))
        }) {
            g.0.terms.push(*idx);
            g.0.weight += g.1.norm_sqr();
        } else {
            groups.push(Group { terms: vec![*idx], reference: op.clone(), coeffs: v, weight: 1.0 });
        }
    }
    if hint == ClassHint::EC2 && !groups.is_empty() {
        return Err(ambiguous(hint, "EC2 sets must consist of (rate, generator) jumps"));
    }
    if matches!(hint, ClassHint::EC1 | ClassHint::EC3) && !jumps.is_empty() {
        return Err(ambiguous(hint, "unitary jumps present"));
    }

    let mut slots = Vec::new();
    let mut open: Vec<(Vec<usize>, LindbladOperator, Vec<C64>)> = Vec::new();
    for g in groups {
        let merged = g.reference.scale(c(g.weight.sqrt(), 0.0));
        let coeffs = merged.coefficients();
        if hint == ClassHint::EC3 {
            if !merged.is_linear(1e-12 * merged.norm_bound()) {
                return Err(ambiguous(hint, "operator with quadratic part"));
            }
            slots.push(Slot { terms: g.terms, channel: Channel::Linear(merged) });
            continue;
        }
        match proportionality(&coeffs, &conj(&coeffs)) {
            Some(l) if (l.norm() - 1.0).abs() <= MATCH_TOL => {
                // B† = e^{iφ} B, so e^{iφ/2} B is Hermitian.
                let z = C64::from_polar(1.0, 0.5 * l.arg());
                let h = merged.scale(z);
                let real = LindbladOperator {
                    a: h.a.map(|x| c(x.re, 0.0)),
                    b: h.b.map(|x| c(x.re, 0.0)),
                    d: c(h.d.re, 0.0),
                };
                slots.push(Slot { terms: g.terms, channel: Channel::Hermitian(real) });
            }
            _ => open.push((g.terms, merged, coeffs)),
        }
    }

    let mut used = vec![false; open.len()];
    let mut leftovers = Vec::new();
    for i in 0..open.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let target = conj(&open[i].2);
        let partner = (i + 1..open.len()).find(|&j| {
            !used[j]
                && proportionality(&target, &open[j].2)
                    .is_some_and(|l| (l.norm() - 1.0).abs() <= MATCH_TOL)
        });
        match partner {
            Some(j) => {
                used[j] = true;
                let mut terms = open[i].0.clone();
                terms.extend(&open[j].0);
                terms.sort_unstable();
                slots.push(Slot { terms, channel: Channel::Pair(open[i].1.clone()) });
            }
            None => leftovers.push(i),
        }
    }
    for i in leftovers {
        let (terms, op, _) = open[i].clone();
        if op.is_linear(1e-12 * op.norm_bound()) {
            if hint == ClassHint::EC1 {
                return Err(ambiguous(hint, "operator without Hermitian-conjugate partner"));
            }
            slots.push(Slot { terms, channel: Channel::Linear(op) });
        } else {
            if hint == ClassHint::EC1 {
                return Err(ambiguous(hint, "operator without Hermitian-conjugate partner"));
            }
            slots.push(Slot { terms, channel: Channel::General(op) });
        }
    }
    for (idx, j) in jumps {
        slots.push(Slot { terms: vec![*idx], channel: Channel::Jump(j.clone()) });
    }
    slots.sort_by(|a, b| a.terms.cmp(&b.terms));

    let has = |f: fn(&Channel) -> bool| slots.iter().any(|s| f(&s.channel));
    let general = has(|c| matches!(c, Channel::General(_)));
    let ec1 = has(|c| matches!(c, Channel::Pair(_) | Channel::Hermitian(_)));
    let ec3 = has(|c| matches!(c, Channel::Linear(_)));
    let ec2 = has(|c| matches!(c, Channel::Jump(_)));
    let tag = if hint == ClassHint::General || general {
        ClassTag::General
    } else {
        match (ec1, ec2, ec3) {
            (_, false, false) => ClassTag::EC1,
            (false, true, false) => ClassTag::EC2,
            (false, false, true) => ClassTag::EC3,
            _ => ClassTag::Mixed,
        }
    };
    Ok(Decomposition { tag, slots })
}

/// Class of a time-independent set of operators.
pub fn classify_set(ops: &[LindbladOperator], hint: ClassHint) -> Result<ClassTag> {
    let indexed: Vec<_> = ops.iter().cloned().enumerate().collect();
    Ok(decompose(&indexed, &[], hint)?.tag)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LindbladSet {
    pub modes: usize,
    pub terms: Vec<LindbladTerm>,
    pub hint: ClassHint,
    class_tag: ClassTag,
}

impl LindbladSet {
    pub fn empty(modes: usize) -> Self {
        Self { modes, terms: Vec::new(), hint: ClassHint::Auto, class_tag: ClassTag::EC1 }
    }

    pub fn new(modes: usize, terms: Vec<LindbladTerm>, hint: ClassHint) -> Result<Self> {
        let limit = modes * (modes + 1);
        if terms.len() > limit {
            return Err(FlsError::TooManyOperators { count: terms.len(), limit });
        }
        for t in &terms {
            let ok = match t {
                LindbladTerm::Operator(s) => s.segments().iter().all(|g| g.value.modes() == modes),
                LindbladTerm::Jump(s) => {
                    s.segments().iter().all(|g| g.value.generator.modes() == modes)
                }
            };
            if !ok {
                return Err(FlsError::DimensionMismatch("Lindblad term mode count".into()));
            }
        }
        let mut set = Self { modes, terms, hint, class_tag: ClassTag::EC1 };
        let mut tag = None;
        let mut signature = None;
        let times = set.interval_starts(0.0, f64::MAX);
        for t in times {
            let d = set.decompose_at(t)?;
            let sig = d.signature();
            match &signature {
                None => signature = Some(sig),
                Some(s) if *s != sig => {
                    return Err(FlsError::UnsupportedClass(
                        "channel structure changes over time".into(),
                    ))
                }
                _ => {}
            }
            tag = Some(d.tag);
        }
        set.class_tag = tag.unwrap_or(ClassTag::EC1);
        Ok(set)
    }

    pub fn from_operators(modes: usize, ops: Vec<LindbladOperator>, hint: ClassHint) -> Result<Self> {
        Self::new(modes, ops.into_iter().map(LindbladTerm::operator).collect(), hint)
    }

    pub fn class_tag(&self) -> ClassTag {
        self.class_tag
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn breakpoints_in(&self, t0: f64, t1: f64) -> Vec<f64> {
        self.terms.iter().flat_map(|t| t.breakpoints_in(t0, t1)).collect()
    }

    fn interval_starts(&self, t0: f64, t1: f64) -> Vec<f64> {
        let mut pts = vec![t0];
        pts.extend(self.breakpoints_in(t0, t1));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Operators and jumps active at time `t` (terms not defined at `t` are omitted).
    pub fn snapshot(&self, t: f64) -> (Vec<(usize, LindbladOperator)>, Vec<(usize, UnitaryJump)>) {
        let mut ops = Vec::new();
        let mut jumps = Vec::new();
        for (i, term) in self.terms.iter().enumerate() {
            match term {
                LindbladTerm::Operator(s) => {
                    if let Some(op) = s.at(t) {
                        ops.push((i, op.clone()));
                    }
                }
                LindbladTerm::Jump(s) => {
                    if let Some(j) = s.at(t) {
                        jumps.push((i, j.clone()));
                    }
                }
            }
        }
        (ops, jumps)
    }

    pub fn decompose_at(&self, t: f64) -> Result<Decomposition> {
        let (ops, jumps) = self.snapshot(t);
        decompose(&ops, &jumps, self.hint)
    }
}

/// Hamiltonian plus dissipator.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub hamiltonian: QuadraticHamiltonian,
    pub lindblad: LindbladSet,
}

impl Model {
    pub fn new(hamiltonian: QuadraticHamiltonian, lindblad: LindbladSet) -> Result<Self> {
        validate_hamiltonian(&hamiltonian).into_result()?;
        if lindblad.modes != hamiltonian.modes {
            return Err(FlsError::DimensionMismatch("Hamiltonian and Lindblad mode counts".into()));
        }
        Ok(Self { hamiltonian, lindblad })
    }

    pub fn unitary(hamiltonian: QuadraticHamiltonian) -> Result<Self> {
        let modes = hamiltonian.modes;
        Self::new(hamiltonian, LindbladSet::empty(modes))
    }

    pub fn modes(&self) -> usize {
        self.hamiltonian.modes
    }

    pub fn class_tag(&self) -> ClassTag {
        self.lindblad.class_tag()
    }

    /// Sorted breakpoints of every schedule within `[t0, t1]`, endpoints included.
    pub fn breakpoints(&self, t0: f64, t1: f64) -> Vec<f64> {
        let inner = self
            .hamiltonian
            .schedule
            .breakpoints_in(t0, t1)
            .into_iter()
            .chain(self.lindblad.breakpoints_in(t0, t1));
        super::schedule::merge_breakpoints(t0, t1, inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::operator::{annihilate, create, fock_bilinear, QuadraticForm};

    #[test]
    fn classical_fluctuations_are_ec1() {
        let ops = vec![annihilate(0, 2), create(0, 2)];
        assert_eq!(classify_set(&ops, ClassHint::Auto).unwrap(), ClassTag::EC1);
    }

    #[test]
    fn single_loss_is_ec3() {
        assert_eq!(classify_set(&[annihilate(0, 2)], ClassHint::Auto).unwrap(), ClassTag::EC3);
    }

    #[test]
    fn pair_loss_is_general() {
        let pl = fock_bilinear(&annihilate(0, 2), &annihilate(1, 2)).scale(c(0.3, 0.0));
        assert_eq!(classify_set(&[pl], ClassHint::Auto).unwrap(), ClassTag::General);
    }

    #[test]
    fn pair_fluctuations_are_ec1() {
        let pl = fock_bilinear(&annihilate(0, 2), &annihilate(1, 2));
        let pg = pl.adjoint().scale(C64::from_polar(1.0, 0.7));
        assert_eq!(classify_set(&[pl, pg], ClassHint::Auto).unwrap(), ClassTag::EC1);
    }

    #[test]
    fn unequal_rates_do_not_pair() {
        let ops = vec![annihilate(0, 1), create(0, 1).scale(c(1.1, 0.0))];
        assert_eq!(classify_set(&ops, ClassHint::Auto).unwrap(), ClassTag::EC3);
        assert!(matches!(
            classify_set(&ops, ClassHint::EC1),
            Err(FlsError::AmbiguousClass { .. })
        ));
    }

    #[test]
    fn p_splitting_is_accepted() {
        let a = annihilate(1, 2);
        let p: f64 = 0.3;
        let ops = vec![a.scale(c(p.sqrt(), 0.0)), a.adjoint(), a.scale(c(0.0, (1.0 - p).sqrt()))];
        let d = decompose(&ops.iter().cloned().enumerate().collect::<Vec<_>>(), &[], ClassHint::Auto)
            .unwrap();
        assert_eq!(d.tag, ClassTag::EC1);
        assert_eq!(d.slots.len(), 1);
        assert_eq!(d.slots[0].terms, vec![0, 1, 2]);
    }

    #[test]
    fn dephasing_is_hermitian_channel() {
        let n = fock_bilinear(&create(0, 1), &annihilate(0, 1)).scale(c(0.0, 2.0));
        let d = decompose(&[(0, n)], &[], ClassHint::Auto).unwrap();
        assert_eq!(d.tag, ClassTag::EC1);
        match &d.slots[0].channel {
            Channel::Hermitian(h) => {
                assert!(h.a.iter().all(|z| z.im == 0.0));
                assert!((h.a[(0, 1)].re.abs() - 1.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hints_are_checked() {
        let pl = fock_bilinear(&annihilate(0, 2), &annihilate(1, 2));
        assert!(classify_set(&[pl], ClassHint::EC3).is_err());
        assert!(classify_set(&[annihilate(0, 1)], ClassHint::EC2).is_err());
        let both = vec![annihilate(0, 1), create(0, 1)];
        assert_eq!(classify_set(&both, ClassHint::EC3).unwrap(), ClassTag::EC3);
        assert_eq!(classify_set(&both, ClassHint::General).unwrap(), ClassTag::General);
    }

    #[test]
    fn jumps_and_mixed() {
        let j = UnitaryJump::new(1.0, QuadraticForm::zero(1)).unwrap();
        let d = decompose(&[], &[(0, j.clone())], ClassHint::Auto).unwrap();
        assert_eq!(d.tag, ClassTag::EC2);
        let d = decompose(&[(1, annihilate(0, 1))], &[(0, j)], ClassHint::Auto).unwrap();
        assert_eq!(d.tag, ClassTag::Mixed);
    }

    #[test]
    fn too_many_operators_rejected() {
        let ops = vec![annihilate(0, 1); 3];
        assert!(matches!(
            LindbladSet::from_operators(1, ops, ClassHint::Auto),
            Err(FlsError::TooManyOperators { .. })
        ));
    }
}
