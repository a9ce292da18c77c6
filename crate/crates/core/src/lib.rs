//! Wind-farm siting analysis: wind resource and power curves, grid voltage
//! quality, Markov reliability of emergency supplies, geographic smoothing,
//! capacity credit and levelized cost.

pub mod aggregation;
pub mod batch;
pub mod credit;
pub mod economics;
pub mod error;
pub mod markov;
pub mod presets;
pub mod voltage;
pub mod wind;

pub use error::{Error, Result};
