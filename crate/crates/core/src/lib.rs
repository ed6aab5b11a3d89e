//! Spectral theory of non-local Schrödinger operators `H = L + v`, where
//! `L ψ = χ ∫ (ψ(x + y) - ψ(x)) a(y) dy` is the generator of a jump process
//! and `v` is a compactly supported non-negative potential.

// `!(x > 0.0)` guards are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod fourier;
pub mod greens;
pub mod kernels;
pub mod quad;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};

/// Crate version, recorded in output headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
