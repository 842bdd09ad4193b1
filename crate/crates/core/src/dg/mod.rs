//! Finite dg algebras, dg modules and twisted modules.

pub mod algebra;
pub mod graded;
pub mod hom;
pub mod map;
pub mod module;

pub use algebra::{
    check_dga, endomorphism_dga, matrix_algebra, tensor_dga, AlgebraJson, Axiom, DgAlgebra, DgaReport, Sparse,
    Truncation, Violation,
};
pub use graded::{vec_ops, GradedModule};
pub use hom::{cone, HomSpace, TwistedHom, TwistedModule};
pub use map::{AlgebraMap, MapReport};
pub use module::{free_hull, free_module, hom_complex, DgModule, HomComplex};
