//! Exact simulation of the resonant Jaynes-Cummings model on a truncated
//! photon-number space, with atom-field entanglement measured by the
//! quantum mutual entropy of the joint state.
//!
//! Module map:
//!
//! * [`linalg`]: dense complex matrices, tensor products, partial traces and a
//!   cyclic Jacobi Hermitian eigensolver.
//! * [`model`]: model parameters, coherent field states, the dressed-state
//!   propagator, exact joint evolution and the closed-form coefficients.
//! * [`entropy`]: von Neumann and relative entropy, the mutual-entropy
//!   degree of entanglement and the Araki-Lieb check.
//! * [`analysis`]: time and lambda scans, collapse/revival detection.
//! * [`exec`]: sequential or rayon-backed evaluation of independent grid points.

pub mod analysis;
pub mod entropy;
mod error;
pub mod exec;
pub mod linalg;
pub mod model;

pub use error::{Error, Result};
pub use num_complex::Complex64;
