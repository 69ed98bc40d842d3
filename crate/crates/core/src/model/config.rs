//! JSON experiment schema.

use super::fock::FockConfiguration;
use super::hamiltonian::QuadraticHamiltonian;
use super::lindblad::{ClassHint, LindbladSet, LindbladTerm, Model};
use super::operator::{LindbladOperator, QuadraticForm, UnitaryJump};
use super::schedule::{Schedule, Segment};
use crate::error::{FlsError, Result};
use crate::linalg::{c, CMat, CVec, RMat, RVec, C64};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexJson {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexJson {
    fn value(self) -> C64 {
        match self {
            Self::Real(x) => c(x, 0.0),
            Self::Pair([re, im]) => c(re, im),
        }
    }

    fn from(z: C64) -> Self {
        Self::Pair([z.re, z.im])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FormJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentJson {
    pub t_start: f64,
    pub t_end: f64,
    #[serde(flatten)]
    pub form: FormJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct TermJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<ComplexJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<ComplexJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<ComplexJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<FormJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
}

/// One Lindblad term; either a constant operator/jump or a list of timed segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct LindbladJson {
    #[serde(flatten)]
    pub term: TermJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segments: Option<Vec<TermJson>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(rename = "L")]
    pub modes: usize,
    #[serde(default)]
    pub hamiltonian: Vec<SegmentJson>,
    #[serde(default)]
    pub lindblad: Vec<LindbladJson>,
    #[serde(default = "default_class", rename = "class")]
    pub class: String,
    pub initial: String,
    pub t_final: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn default_class() -> String {
    "auto".into()
}

fn schema(msg: impl Into<String>) -> FlsError {
    FlsError::Schema(msg.into())
}

fn form_from_json(f: &FormJson, modes: usize, what: &str) -> Result<QuadraticForm> {
    let n = 2 * modes;
    let alpha = match &f.alpha {
        None => RMat::zeros(n, n),
        Some(rows) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(schema(format!("{what}: alpha must be {n}x{n}")));
            }
            RMat::from_fn(n, n, |i, j| rows[i][j])
        }
    };
    let beta = match &f.beta {
        None => RVec::zeros(n),
        Some(v) if v.len() == n => RVec::from_column_slice(v),
        Some(_) => return Err(schema(format!("{what}: beta must have length {n}"))),
    };
    QuadraticForm::new(alpha, beta).map_err(|e| schema(format!("{what}: {e}")))
}

fn form_to_json(f: &QuadraticForm) -> FormJson {
    let n = f.alpha.nrows();
    FormJson {
        alpha: Some((0..n).map(|i| (0..n).map(|j| f.alpha[(i, j)]).collect()).collect()),
        beta: Some(f.beta.iter().copied().collect()),
    }
}

enum TermValue {
    Op(LindbladOperator),
    Jump(UnitaryJump),
}

fn term_from_json(t: &TermJson, modes: usize, what: &str) -> Result<TermValue> {
    let n = 2 * modes;
    let is_jump = t.rate.is_some() || t.generator.is_some();
    let is_op = t.a.is_some() || t.b.is_some() || t.d.is_some();
    if is_jump && is_op {
        return Err(schema(format!("{what}: mixes (a, b, d) with (rate, generator)")));
    }
    if is_jump {
        let rate = t.rate.ok_or_else(|| schema(format!("{what}: jump needs a rate")))?;
        let g = form_from_json(&t.generator.clone().unwrap_or_default(), modes, what)?;
        return UnitaryJump::new(rate, g).map(TermValue::Jump).map_err(|e| schema(format!("{what}: {e}")));
    }
    let a = match &t.a {
        None => CMat::zeros(n, n),
        Some(rows) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(schema(format!("{what}: a must be {n}x{n}")));
            }
            CMat::from_fn(n, n, |i, j| rows[i][j].value())
        }
    };
    let b = match &t.b {
        None => CVec::zeros(n),
        Some(v) if v.len() == n => CVec::from_iterator(n, v.iter().map(|z| z.value())),
        Some(_) => return Err(schema(format!("{what}: b must have length {n}"))),
    };
    let d = t.d.map(|z| z.value()).unwrap_or(c(0.0, 0.0));
    LindbladOperator::new(a, b, d).map(TermValue::Op).map_err(|e| schema(format!("{what}: {e}")))
}

fn op_to_json(op: &LindbladOperator) -> TermJson {
    let n = op.a.nrows();
    TermJson {
        a: Some((0..n).map(|i| (0..n).map(|j| ComplexJson::from(op.a[(i, j)])).collect()).collect()),
        b: Some(op.b.iter().map(|&z| ComplexJson::from(z)).collect()),
        d: Some(ComplexJson::from(op.d)),
        ..Default::default()
    }
}

fn jump_to_json(j: &UnitaryJump) -> TermJson {
    TermJson { rate: Some(j.rate), generator: Some(form_to_json(&j.generator)), ..Default::default() }
}

fn timed(t: &TermJson, mut out: TermJson) -> TermJson {
    out.t_start = t.t_start;
    out.t_end = t.t_end;
    out
}

impl ExperimentConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| schema(e.to_string()))
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text).map_err(|e| match e {
            FlsError::Schema(m) => FlsError::Schema(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn hint(&self) -> Result<ClassHint> {
        ClassHint::parse(&self.class).ok_or_else(|| schema(format!("unknown class {:?}", self.class)))
    }

    pub fn initial_config(&self) -> Result<FockConfiguration> {
        let cfg = FockConfiguration::parse(&self.initial).map_err(|e| schema(e.to_string()))?;
        if cfg.len() != self.modes {
            return Err(schema(format!("initial has {} modes, expected {}", cfg.len(), self.modes)));
        }
        Ok(cfg)
    }

    pub fn hamiltonian(&self) -> Result<QuadraticHamiltonian> {
        if self.modes == 0 {
            return Err(schema("L must be positive"));
        }
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            return Err(schema("t_final must be finite and non-negative"));
        }
        if self.hamiltonian.is_empty() {
            return Ok(QuadraticHamiltonian::zero(self.modes, self.t_final));
        }
        let segs = self
            .hamiltonian
            .iter()
            .enumerate()
            .map(|(i, s)| {
                Ok(Segment {
                    t_start: s.t_start,
                    t_end: s.t_end,
                    value: form_from_json(&s.form, self.modes, &format!("hamiltonian[{i}]"))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        QuadraticHamiltonian::from_segments(self.modes, segs)
    }

    pub fn lindblad_set(&self) -> Result<LindbladSet> {
        let mut terms = Vec::new();
        for (i, l) in self.lindblad.iter().enumerate() {
            let what = format!("lindblad[{i}]");
            let term = match &l.segments {
                None => match term_from_json(&l.term, self.modes, &what)? {
                    TermValue::Op(op) => LindbladTerm::operator(op),
                    TermValue::Jump(j) => LindbladTerm::jump(j),
                },
                Some(segs) => {
                    let mut ops = Vec::new();
                    let mut jumps = Vec::new();
                    for (k, s) in segs.iter().enumerate() {
                        let w = format!("{what}.segments[{k}]");
                        let (t0, t1) = match (s.t_start, s.t_end) {
                            (Some(a), Some(b)) => (a, b),
                            _ => return Err(schema(format!("{w}: t_start and t_end required"))),
                        };
                        match term_from_json(s, self.modes, &w)? {
                            TermValue::Op(op) => ops.push(Segment { t_start: t0, t_end: t1, value: op }),
                            TermValue::Jump(j) => jumps.push(Segment { t_start: t0, t_end: t1, value: j }),
                        }
                    }
                    match (ops.is_empty(), jumps.is_empty()) {
                        (false, true) => LindbladTerm::Operator(Schedule::new(ops)?),
                        (true, false) => LindbladTerm::Jump(Schedule::new(jumps)?),
                        _ => return Err(schema(format!("{what}: segments must all be operators or all jumps"))),
                    }
                }
            };
            terms.push(term);
        }
        LindbladSet::new(self.modes, terms, self.hint()?)
    }

    pub fn model(&self) -> Result<Model> {
        Model::new(self.hamiltonian()?, self.lindblad_set()?)
    }

    /// Serializable description of an in-memory model.
    pub fn from_model(model: &Model, initial: &FockConfiguration, t_final: f64) -> Self {
        let hamiltonian = model
            .hamiltonian
            .schedule
            .segments()
            .iter()
            .map(|s| SegmentJson { t_start: s.t_start, t_end: s.t_end, form: form_to_json(&s.value) })
            .collect();
        let lindblad = model
            .lindblad
            .terms
            .iter()
            .map(|t| {
                let constant = |n: usize, end: f64| n == 1 && end.is_infinite();
                match t {
                    LindbladTerm::Operator(s) if constant(s.segments().len(), s.t_end()) => {
                        LindbladJson { term: op_to_json(&s.segments()[0].value), segments: None }
                    }
                    LindbladTerm::Jump(s) if constant(s.segments().len(), s.t_end()) => {
                        LindbladJson { term: jump_to_json(&s.segments()[0].value), segments: None }
                    }
                    LindbladTerm::Operator(s) => LindbladJson {
                        term: TermJson::default(),
                        segments: Some(
                            s.segments()
                                .iter()
                                .map(|g| timed(&TermJson { t_start: Some(g.t_start), t_end: Some(g.t_end), ..Default::default() }, op_to_json(&g.value)))
                                .collect(),
                        ),
                    },
                    LindbladTerm::Jump(s) => LindbladJson {
                        term: TermJson::default(),
                        segments: Some(
                            s.segments()
                                .iter()
                                .map(|g| timed(&TermJson { t_start: Some(g.t_start), t_end: Some(g.t_end), ..Default::default() }, jump_to_json(&g.value)))
                                .collect(),
                        ),
                    },
                }
            })
            .collect();
        let class = match model.lindblad.hint {
            ClassHint::Auto => "auto",
            ClassHint::EC1 => "EC1",
            ClassHint::EC2 => "EC2",
            ClassHint::EC3 => "EC3",
            ClassHint::General => "general",
        };
        Self {
            modes: model.modes(),
            hamiltonian,
            lindblad,
            class: class.into(),
            initial: initial.to_string(),
            t_final,
            target_epsilon: None,
            seed: None,
        }
    }
}
