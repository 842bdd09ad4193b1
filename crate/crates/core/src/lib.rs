//! Maurer-Cartan elements, twisted modules and local systems over finite
//! dimensional dg algebras, computed with exact arithmetic.

pub mod dg;
pub mod error;
pub mod fixtures;
pub mod holonomy;
pub mod interval;
pub mod linalg;
pub mod mc;
pub mod perturbation;
pub mod random;
pub mod simplicial;

pub use error::{Error, Result};
pub use linalg::{CochainComplex, CohomologyReport, ExactMatrix, Ring, Scalar};
