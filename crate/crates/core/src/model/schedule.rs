use crate::error::{FlsError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Segment<T> {
    pub t_start: f64,
    pub t_end: f64,
    pub value: T,
}

/// Piecewise-constant function of time. Segments are sorted by start time; lookups are
/// right-continuous except at the final end point.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule<T> {
    segments: Vec<Segment<T>>,
}

impl<T> Schedule<T> {
    pub fn new(mut segments: Vec<Segment<T>>) -> Result<Self> {
        if segments.is_empty() {
            return Err(FlsError::InvalidArgument("empty schedule".into()));
        }
        for s in &segments {
            if !(s.t_start.is_finite() && !s.t_end.is_nan()) || s.t_end < s.t_start {
                return Err(FlsError::InvalidArgument(format!(
                    "bad segment [{}, {}]",
                    s.t_start, s.t_end
                )));
            }
        }
        segments.sort_by(|a, b| a.t_start.total_cmp(&b.t_start));
        Ok(Self { segments })
    }

    /// A single segment valid for all `t >= 0`.
    pub fn constant(value: T) -> Self {
        Self { segments: vec![Segment { t_start: 0.0, t_end: f64::INFINITY, value }] }
    }

    pub fn single(t_end: f64, value: T) -> Self {
        Self { segments: vec![Segment { t_start: 0.0, t_end, value }] }
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    pub fn t_end(&self) -> f64 {
        self.segments.last().map(|s| s.t_end).unwrap_or(0.0)
    }

    pub fn index_at(&self, t: f64) -> Option<usize> {
        let mut found = None;
        for (i, s) in self.segments.iter().enumerate() {
            if t >= s.t_start && t < s.t_end {
                return Some(i);
            }
            if t == s.t_end {
                found = Some(i);
            }
        }
        found
    }

    pub fn at(&self, t: f64) -> Option<&T> {
        self.index_at(t).map(|i| &self.segments[i].value)
    }

    /// Interior segment boundaries strictly inside `(t0, t1)`.
    pub fn breakpoints_in(&self, t0: f64, t1: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for s in &self.segments {
            for x in [s.t_start, s.t_end] {
                if x > t0 && x < t1 {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Gaps and overlaps between consecutive segments, plus uncovered parts of `[t0, t1]`.
    pub fn gaps(&self, t0: f64, t1: f64) -> Vec<(f64, f64)> {
        const TOL: f64 = 1e-12;
        let mut out = Vec::new();
        let first = &self.segments[0];
        if first.t_start > t0 + TOL {
            out.push((t0, first.t_start));
        }
        for w in self.segments.windows(2) {
            if (w[1].t_start - w[0].t_end).abs() > TOL * (1.0 + w[0].t_end.abs()) {
                out.push((w[0].t_end, w[1].t_start));
            }
        }
        let last = self.t_end();
        if last < t1 - TOL * (1.0 + t1.abs()) {
            out.push((last, t1));
        }
        out
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Schedule<U> {
        Schedule {
            segments: self
                .segments
                .iter()
                .map(|s| Segment { t_start: s.t_start, t_end: s.t_end, value: f(&s.value) })
                .collect(),
        }
    }
}

/// Sorted, deduplicated union of `[t0, t1]` and all interior breakpoints.
pub fn merge_breakpoints(t0: f64, t1: f64, inner: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut pts: Vec<f64> = inner.into_iter().filter(|&x| x > t0 && x < t1).collect();
    pts.push(t0);
    pts.push(t1);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * (1.0 + b.abs()));
    pts
}
