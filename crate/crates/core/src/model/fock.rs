use crate::error::{FlsError, Result};
use std::fmt;

/// Occupation bit string; mode 0 is written first and is the most significant bit of
/// [`FockConfiguration::index`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockConfiguration {
    bits: Vec<bool>,
}

impl FockConfiguration {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self { bits: vec![false; modes] }
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(FlsError::InvalidArgument(format!("bad occupation {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn from_index(index: usize, modes: usize) -> Self {
        Self { bits: (0..modes).map(|n| (index >> (modes - 1 - n)) & 1 == 1).collect() }
    }

    pub fn index(&self) -> usize {
        self.bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, n: usize) -> bool {
        self.bits[n]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn truncated(&self, modes: usize) -> Self {
        Self { bits: self.bits[..modes].to_vec() }
    }

    pub fn extended(&self, extra: &[bool]) -> Self {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(extra);
        Self { bits }
    }
}

impl fmt::Display for FockConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Probability vector over all `2^L` configurations, indexed by [`FockConfiguration::index`].
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub modes: usize,
    pub probs: Vec<f64>,
}

impl Distribution {
    pub fn zeros(modes: usize) -> Self {
        Self { modes, probs: vec![0.0; 1usize << modes] }
    }

    pub fn point(config: &FockConfiguration) -> Self {
        let mut d = Self::zeros(config.len());
        d.probs[config.index()] = 1.0;
        d
    }

    pub fn from_samples<'a>(modes: usize, samples: impl IntoIterator<Item = &'a FockConfiguration>) -> Self {
        let mut d = Self::zeros(modes);
        let mut n = 0usize;
        for s in samples {
            d.probs[s.index()] += 1.0;
            n += 1;
        }
        if n > 0 {
            d.probs.iter_mut().for_each(|p| *p /= n as f64);
        }
        d
    }

    pub fn get(&self, config: &FockConfiguration) -> f64 {
        self.probs[config.index()]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (FockConfiguration, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (FockConfiguration::from_index(i, self.modes), p))
    }

    /// Marginal over the first `modes` modes.
    pub fn marginal_prefix(&self, modes: usize) -> Self {
        let shift = self.modes - modes;
        let mut d = Self::zeros(modes);
        for (i, p) in self.probs.iter().enumerate() {
            d.probs[i >> shift] += p;
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip() {
        let c = FockConfiguration::parse("0110").unwrap();
        assert_eq!(c.index(), 6);
        assert_eq!(FockConfiguration::from_index(6, 4), c);
        assert_eq!(c.to_string(), "0110");
        assert_eq!(c.popcount(), 2);
        assert!(FockConfiguration::parse("01x").is_err());
    }

    #[test]
    fn marginals() {
        let d = Distribution { modes: 2, probs: vec![0.1, 0.2, 0.3, 0.4] };
        let m = d.marginal_prefix(1);
        assert!((m.probs[0] - 0.3).abs() < 1e-15);
        assert!((m.probs[1] - 0.7).abs() < 1e-15);
    }
}
