//! Quantum-circuit feature classifier: state-vector and density-matrix
//! simulation, angle encoding, Kraus noise, derivative-free training, data
//! preparation, classical baselines and evaluation statistics.

pub mod baselines;
pub mod data;
pub mod encoding;
pub mod error;
pub mod metrics;
pub mod model;
pub mod noise;
pub mod numerics;
pub mod optimizer;
pub mod quantum;
pub mod seeds;

pub use error::{Error, Result};
