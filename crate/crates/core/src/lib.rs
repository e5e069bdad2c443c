pub mod config;
pub mod dense;
pub mod error;
pub mod experiments;
pub mod formulas;
pub mod models;
pub mod pauli;
pub mod sampler;
pub mod series;
pub mod simulator;

pub use error::{Error, Result};
