use super::operator::QuadraticForm;
use super::schedule::{Schedule, Segment};
use crate::error::{FlsError, Result};
use crate::linalg::antisymmetry_defect;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian {
    pub modes: usize,
    pub schedule: Schedule<QuadraticForm>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    /// `(segment index, max |α + αᵀ|)` for segments that fail antisymmetry.
    pub antisymmetry: Vec<(usize, f64)>,
    pub gaps: Vec<(f64, f64)>,
    pub non_finite: Vec<usize>,
    pub wrong_shape: Vec<usize>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.antisymmetry.is_empty()
            && self.gaps.is_empty()
            && self.non_finite.is_empty()
            && self.wrong_shape.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if let Some(&(_, dev)) = self.antisymmetry.first() {
            return Err(FlsError::NonAntisymmetric(dev));
        }
        if let Some(&(a, b)) = self.gaps.first() {
            return Err(FlsError::ScheduleGap(a, b));
        }
        if !self.non_finite.is_empty() {
            return Err(FlsError::NonFinite("hamiltonian"));
        }
        if let Some(i) = self.wrong_shape.first() {
            return Err(FlsError::DimensionMismatch(format!("segment {i}")));
        }
        Ok(())
    }
}

impl QuadraticHamiltonian {
    pub fn constant(form: QuadraticForm, t_final: f64) -> Self {
        Self { modes: form.modes(), schedule: Schedule::single(t_final, form) }
    }

    pub fn zero(modes: usize, t_final: f64) -> Self {
        Self::constant(QuadraticForm::zero(modes), t_final)
    }

    pub fn from_segments(modes: usize, segments: Vec<Segment<QuadraticForm>>) -> Result<Self> {
        Ok(Self { modes, schedule: Schedule::new(segments)? })
    }

    pub fn t_start(&self) -> f64 {
        self.schedule.segments()[0].t_start
    }

    pub fn t_final(&self) -> f64 {
        self.schedule.t_end()
    }

    pub fn at(&self, t: f64) -> Option<&QuadraticForm> {
        self.schedule.at(t)
    }

    pub fn has_linear(&self) -> bool {
        self.schedule.segments().iter().any(|s| s.value.has_linear())
    }
}

pub fn validate_hamiltonian(h: &QuadraticHamiltonian) -> ValidationReport {
    let mut report = ValidationReport::default();
    let dim = 2 * h.modes;
    for (i, seg) in h.schedule.segments().iter().enumerate() {
        let f = &seg.value;
        if f.alpha.nrows() != dim || f.alpha.ncols() != dim || f.beta.len() != dim {
            report.wrong_shape.push(i);
            continue;
        }
        if f.alpha.iter().chain(f.beta.iter()).any(|x| !x.is_finite()) {
            report.non_finite.push(i);
            continue;
        }
        let defect = antisymmetry_defect(&f.alpha);
        if defect > 1e-12 {
            report.antisymmetry.push((i, defect));
        }
    }
    report.gaps = h.schedule.gaps(0.0, h.t_final());
    report
}
