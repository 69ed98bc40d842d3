use super::{minimal_error, optimal_time, GateSpec};
use crate::error::{FlsError, Result};
use std::f64::consts::PI;
use std::fmt;

/// Classification of a point on the loss/gain ratio axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Hard,
    /// Equal loss and gain: classical pair fluctuations.
    EasyEc1,
    Inconclusive,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Hard => "hard",
            Self::EasyEc1 => "EC1-easy",
            Self::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub ratio: f64,
    pub epsilon: f64,
    pub regime: Regime,
}

/// Smallest gate error `√(8π² x)` reachable with gain/loss ratio `x`, using whichever of the two
/// processes is stronger as the gate.
pub fn min_error_curve(ratio: f64) -> f64 {
    (8.0 * PI * PI * ratio.min(1.0 / ratio)).sqrt()
}

pub fn sweep_hardness_diagram(ratios: &[f64], p0: f64) -> Result<Vec<SweepPoint>> {
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(FlsError::InvalidArgument(format!("p0 = {p0} outside (0, 1)")));
    }
    ratios
        .iter()
        .map(|&ratio| {
            if !(ratio > 0.0) || !ratio.is_finite() {
                return Err(FlsError::InvalidArgument(format!("ratio {ratio}")));
            }
            let epsilon = min_error_curve(ratio);
            let regime = if (ratio - 1.0).abs() <= 1e-12 {
                Regime::EasyEc1
            } else if epsilon <= p0 * (1.0 + 1e-12) {
                Regime::Hard
            } else {
                Regime::Inconclusive
            };
            Ok(SweepPoint { ratio, epsilon, regime })
        })
        .collect()
}

/// `n` log-spaced points from `lo` to `hi`, both included.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Pair-loss rate and interaction ratio at one magnetic field value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeshbachRow {
    pub field: f64,
    pub gamma: f64,
    pub zeta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig4bRow {
    pub field: f64,
    pub gamma: f64,
    pub zeta: f64,
    pub t_opt: f64,
    pub epsilon: f64,
}

/// Parses `field,gamma,zeta` rows after a header row; `#` lines are skipped.
pub fn read_feshbach_table(text: &str) -> Result<Vec<FeshbachRow>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| FlsError::Schema(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let v: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match v {
            Ok(v) if v.len() == 3 => rows.push(FeshbachRow { field: v[0], gamma: v[1], zeta: v[2] }),
            _ => return Err(FlsError::Schema(format!("line {line}: expected field,gamma,zeta"))),
        }
    }
    Ok(rows)
}

/// Optimized gate error for every tabulated field value.
pub fn fig4b(rows: &[FeshbachRow], gamma_prime: f64, epsilon0: f64) -> Result<Vec<Fig4bRow>> {
    rows.iter()
        .map(|r| {
            let spec = GateSpec { j: 1.0, gamma: r.gamma, gamma_prime, zeta: r.zeta, epsilon0, duration: None }.validated()?;
            let (t_opt, _) = optimal_time(&spec)?;
            Ok(Fig4bRow { field: r.field, gamma: r.gamma, zeta: r.zeta, t_opt, epsilon: minimal_error(&spec) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_and_symmetry() {
        let p0 = 0.01;
        let x = p0 * p0 / (8.0 * PI * PI);
        let pts = sweep_hardness_diagram(&[x, 1.0 / x, 1.0, 0.5], p0).unwrap();
        assert!((pts[0].epsilon - p0).abs() < 1e-15);
        assert_eq!(pts[0].regime, Regime::Hard);
        assert!((pts[1].epsilon - pts[0].epsilon).abs() < 1e-15);
        assert_eq!(pts[2].regime, Regime::EasyEc1);
        assert_eq!(pts[3].regime, Regime::Inconclusive);
        for r in log_grid(1e-6, 1e6, 25) {
            assert!((min_error_curve(r) - min_error_curve(1.0 / r)).abs() < 1e-12);
        }
    }

    #[test]
    fn table_parsing() {
        let rows = read_feshbach_table("field,gamma,zeta\n200, 2.5e4, 0\n\n# note\n201,1e4,0.5\n").unwrap();
        assert_eq!(rows.len(), 2);
        assert!(read_feshbach_table("field,gamma,zeta\n1,2,x\n").is_err());
        let out = fig4b(&rows, 1e-2, 0.0).unwrap();
        assert!((out[0].epsilon - 7.948e-3).abs() < 1e-5);
    }
}
