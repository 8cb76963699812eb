//! Integral geometry of convex polytopes: exact tensor-valued curvature
//! measures, exact Crofton coefficients, and Monte Carlo verification of the
//! Crofton formulae over affine flats.
//!
//! The crate is organized bottom-up:
//!
//! - [`exact_scalar`]: arithmetic in the ring of rationals times half-integer
//!   powers of π (Gamma values at half-integers, sphere/ball constants, and
//!   the alternating Gamma-sum identities used as cross-checks).
//! - [`symtensor`]: symmetric tensors over R^n in monomial-coefficient
//!   (polynomial) form, with exact-rational and float backings.
//! - [`polytope`]: desk-scale convex polytope geometry — face lattices,
//!   normal cones, face moment tensors, slicing by affine flats.
//! - [`tencm`]: tensorial curvature measures φ_j^{r,s,ε}, Minkowski tensors,
//!   the Ψ-basis transform, and the intrinsic↔extrinsic conversion.
//! - [`crofton`]: exact evaluation of every Crofton coefficient family and
//!   assembly of formula right-hand sides.
//! - [`grassmann_mc`]: Haar sampling on (affine) Grassmannians and Monte
//!   Carlo verification of the integral identities end-to-end.

pub mod crofton;
pub mod exact_scalar;
pub mod grassmann_mc;
pub mod polytope;
pub mod symtensor;
pub mod tencm;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Mismatched dimensions/ranks/backings between operands.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// Geometrically degenerate input (e.g. not full-dimensional).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// Parameters outside a theorem's stated precondition.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
