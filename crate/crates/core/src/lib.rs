//! Bergman kernel and Bergman projection on the fat Hartogs triangles
//! `Ω_k = {(z₁, z₂) ∈ ℂ² : |z₁|^k < |z₂| < 1}`, with quadrature and the
//! numerical experiments that probe `L^p` boundedness of the projection.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod projection;
pub mod quadrature;

pub use error::{Error, Result};
pub use geometry::{DomainSpec, Point2, Stratum};
