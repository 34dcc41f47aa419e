//! One-dimensional finite-volume simulation of the nondimensional
//! three-field model of acid-mediated tumour invasion:
//!
//! ```text
//! u_t = u (1 - u - d w)
//! v_t = r v (1 - v) + D [(1 - u) v_x]_x
//! w_t = c (v - w) + [A(x) w_x]_x
//! ```
//!
//! with a heterogeneous acid diffusivity `A(x)`. The crate provides the
//! model algebra ([`model`]), meshes and diffusion profiles ([`mesh`]), the
//! IMEX finite-volume scheme ([`scheme`]), front diagnostics and
//! homogenization analysis ([`analysis`]) and a preset-driven scenario layer
//! ([`scenarios`]).
//!
//! Numerical code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the common `f64` instantiation.

// `!(x > 0)` guards deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod mesh;
pub mod model;
pub mod scalar;
pub mod scenarios;
pub mod scheme;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type ModelParameters64 = model::ModelParameters<f64>;
pub type DimensionalParameters64 = model::DimensionalParameters<f64>;
pub type Mesh64 = mesh::Mesh<f64>;
pub type DiffusionProfile64 = mesh::DiffusionProfile<f64>;
pub type CellAveragedField64 = mesh::CellAveragedField<f64>;
pub type SimulationState64 = scheme::SimulationState<f64>;
pub type SchemeOptions64 = scheme::SchemeOptions<f64>;
pub type WaveSpeedSeries64 = analysis::WaveSpeedSeries<f64>;

pub type ModelParameters32 = model::ModelParameters<f32>;
pub type Mesh32 = mesh::Mesh<f32>;
pub type DiffusionProfile32 = mesh::DiffusionProfile<f32>;
pub type SimulationState32 = scheme::SimulationState<f32>;
pub type SchemeOptions32 = scheme::SchemeOptions<f32>;
