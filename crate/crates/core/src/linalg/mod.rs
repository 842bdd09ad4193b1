//! Exact linear algebra over the integers, the rationals and prime fields.

pub mod cohomology;
pub mod elim;
pub mod matrix;
pub mod ring;
pub mod scalar;
pub mod smith;
pub mod solve;

pub use cohomology::{cohomology, CochainComplex, CohomologyGroup, CohomologyReport};
pub use elim::{rank, rref};
pub use matrix::ExactMatrix;
pub use ring::Ring;
pub use scalar::Scalar;
pub use smith::{determinant, smith_normal_form, Smith};
pub use solve::{inverse, kernel, solve_linear, solve_matrix, Solution};
