//! Simulation of open free-fermion dynamics.
//!
//! Layout:
//!
//! - [`model`]: Hamiltonians, Lindblad operators, classification, JSON configs
//! - [`pfaffian`]: Pfaffians of complex skew-symmetric matrices
//! - [`gaussian`]: Majorana propagators and linear-term reduction
//! - [`sampler`]: output probabilities and sequential sampling
//! - [`unraveling`]: stochastic trajectories for the three efficient classes
//! - [`oracle`]: dense Jordan–Wigner reference simulation
//! - [`bounds`]: a-priori error bounds and timestep selection
//! - [`gates`]: dissipative CZ gates and their error models
//! - [`cli`]: command implementations behind the `fls` binary

pub mod bounds;
pub mod cli;
pub mod error;
pub mod gates;
pub mod gaussian;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod pfaffian;
pub mod rng;
pub mod sampler;
pub mod unraveling;

pub use error::{FlsError, Result};
