#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cmaes;
pub mod error;
pub mod metrics;
pub mod moea;
pub mod problems;
pub mod rng;
pub mod seeding;
pub mod stats;
pub mod types;

pub use error::{Error, Result};
pub use rng::RngHandle;
pub use types::{clamp, dominance, Bounds, DecisionVector, Dominance, Individual, ObjectiveVector};
