#![allow(dead_code)]

use fls::linalg::{antisymmetrize, RMat, RVec};
use fls::model::{FockConfiguration, QuadraticForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_form(rng: &mut impl Rng, modes: usize, linear: bool, scale: f64) -> QuadraticForm {
    let n = 2 * modes;
    let raw = RMat::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0) * scale);
    let beta = RVec::from_fn(n, |_, _| if linear { rng.random_range(-1.0..1.0) * scale } else { 0.0 });
    QuadraticForm::new(antisymmetrize(&raw), beta).unwrap()
}

pub fn random_config(rng: &mut impl Rng, modes: usize) -> FockConfiguration {
    FockConfiguration::new((0..modes).map(|_| rng.random_bool(0.5)).collect())
}
