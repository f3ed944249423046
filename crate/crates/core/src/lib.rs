//! Parabolic representations of knot groups through quandle colorings:
//! complex volumes from the closed-form critical point of the dilogarithm
//! potential, twisted Alexander polynomials through Fox calculus, and the
//! connected-sum construction on colorings.

pub mod alexander;
pub mod cli;
pub mod coloring;
pub mod diagram;
pub mod error;
pub mod example;
pub mod fixtures;
pub mod json;
pub mod parabolic;
pub mod scalar;
pub mod volume;

pub use error::{Error, Result};
