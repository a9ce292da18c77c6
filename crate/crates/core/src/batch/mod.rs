//! Batch orchestration: a TOML run configuration naming sites, turbines,
//! grid points, reliability studies, portfolios, peak windows, cost models
//! and comparisons, executed into CSV files.
//!
//! Names not defined in the file fall back to built-ins: sites `el-galala`
//! (alias `el-dabaa`) and `zafarana`; turbines `scenario-i`..`scenario-iii`,
//! `old-zafarana` and `reliability`; turbine sheets `type-a` and `type-d`;
//! grid points `el-dabaa` and `zafarana`; windows `egypt` and `pjm`; cost
//! model `median`.

mod config;
mod run;

pub use config::*;
pub use run::{run, RunReport, Status, UnitReport};

#[cfg(test)]
mod tests;
