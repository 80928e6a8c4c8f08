//! Exact computations for the pairing between super Lie–Rinehart homology
//! with partial-trace coefficients and cyclic homology.

pub mod linalg;
pub mod scalar;
pub mod superalgebra;
pub mod hochschild;
pub mod lie_rinehart;
pub mod pairing;
pub mod demos;
pub mod report;
pub mod sampling;
