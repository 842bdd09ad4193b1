//! Finite simplicial sets, normalized cochains and local systems.

pub mod cochains;
pub mod local;
pub mod nerve;
pub mod product;
pub mod sset;

pub use cochains::{cochain_algebra, cochain_offsets};
pub use local::{
    local_system_cohomology, mc_to_rep, rep_to_mc, rep_to_mc_over, twisted_cochains, two_sided_twisted, LocalSystem,
    LocalSystemJson, SimplicialMap,
};
pub use nerve::{nerve, Arrow, FiniteCategory};
pub use product::{ez_algebra_map, product, Product, ProductCell};
pub use sset::{boundary_delta, circle, delta, torus7, ComplexJson, Simplex, SimplicialSet};
