//! End-to-end examples: Fredholm modules, the noncommutative torus and the circle.

mod circle;
pub mod contexts;
mod fredholm;
mod torus;

use thiserror::Error;

use crate::hochschild::HochschildError;
use crate::linalg::LinalgError;
use crate::lie_rinehart::LrError;
use crate::pairing::PairingError;
use crate::scalar::ScalarError;
use crate::superalgebra::AlgebraError;

pub use circle::{circle_values, demo_circle, CircleValues};
pub use fredholm::{demo_fredholm, fredholm_values, FredholmModel, FredholmValues, Matrix};
pub use torus::{
    demo_nctorus, rieffel_projection, torus_values, Ramp, RieffelSpec, TorusValues, IDEMPOTENCY_TOLERANCE, INTEGRALITY_TOLERANCE,
    TRACE_TOLERANCE,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DemoError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error(transparent)]
    Lr(#[from] LrError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}
