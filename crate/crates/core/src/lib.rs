#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! The infinite power tower `x^x^x^...` as a discrete dynamical system.
//!
//! * [`tower`]: the step `y ↦ x^y`, finite towers, the curve `g(y) = y^(1/y)`
//!   and the hyperoperation ladder.
//! * [`lambertw`]: real Lambert W and the closed-form fixed points
//!   `W(-ln x)/(-ln x)`.
//! * [`dynamics`]: orbit iteration and diagnosis, stability, cobwebs.
//! * [`analysis`]: regime classification, 2-cycles, bifurcation and region scans.
//! * [`series`]: power-series composition and reversion.
//! * [`cli`]: the `powertower` command-line front end.

pub mod analysis;
pub mod cli;
pub mod consts;
pub mod dynamics;
mod error;
pub mod lambertw;
mod roots;
pub mod series;
pub mod tower;

pub use error::{Error, Result};
