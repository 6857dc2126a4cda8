//! Exact simulation and stationary analysis of a prey-predator community in
//! which a discrete prey population (birth-death jumps) is coupled to a
//! predator density that follows a logistic flow between jumps.
//!
//! * [`model`] closed-form flow, rates, hazard and generator.
//! * [`simulate`] exact samplers for the hybrid process, its individual-based
//!   origin and its averaged limit, plus reproducible replica batches.
//! * [`analysis`] averaged invariant law, mode analysis, histograms,
//!   occupation measures, drift checks and convergence diagnostics.
//! * [`io`] configuration parsing, output bundles and the commands behind the
//!   `preypred` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod io;
pub mod model;
pub mod rng;
pub mod simulate;

pub use error::{Error, Result};
pub use model::{ModelParams, State};
pub use rng::RngStream;
