//! Linewidth of a single-mode laser or atom laser from its master equation.
//!
//! The crate builds truncated-Fock-space Liouvillians for the standard laser,
//! the atom laser with collisional self-energy, and the atom laser under
//! quantum-non-demolition number measurement with Markovian feedback. It
//! extracts coherence times by a resolvent solve and by time-domain
//! propagation, evaluates the closed-form phase-diffusion results for
//! comparison, and maps laboratory parameters onto the dimensionless model.
//!
//! All numerical code is generic over [`Real`] (`f32`, `f64`); the purely
//! rational parameter maps accept any [`Field`], including exact rationals.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod analytics;
pub mod error;
pub mod linsolve;
pub mod optimize;
pub mod oracle;
pub mod params;
pub mod physical;
pub mod pipeline;
pub mod quadrature;
pub mod scalar;
pub mod solver;
pub mod sparse;
pub mod validation;

#[cfg(test)]
mod testutil;

pub use algebra::{FockOperator, FockSpace, Superoperator};
pub use error::{Error, Result};
pub use params::{dimensionless_bridge, ModelParams};
pub use pipeline::{compute_linewidth, LinewidthReport, PipelineOptions};
pub use scalar::{Field, Real};
pub use solver::{DensityOperator, LinewidthResult};

pub type ModelParams64 = ModelParams<f64>;
pub type ModelParams32 = ModelParams<f32>;
pub type FockOperator64 = FockOperator<f64>;
pub type Superoperator64 = Superoperator<f64>;
pub type Superoperator32 = Superoperator<f32>;
pub type DensityOperator64 = DensityOperator<f64>;
pub type LinewidthResult64 = LinewidthResult<f64>;
pub type LinewidthReport64 = LinewidthReport<f64>;
