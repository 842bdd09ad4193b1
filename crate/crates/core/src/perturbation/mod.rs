//! Reduced and minimal twisted modules: Hodge data, minimal models, rigidity,
//! free resolutions over the integers and canonical truncation.

mod hodge;
mod minimal;
mod resolution;
mod schema;

pub use hodge::{hodge_data, hodge_data_in_basis, HodgeData};
pub use minimal::{minimal_iso_check, minimal_model, minimal_model_with, EquivalenceReport, IsoCheck, MinimalModel};
pub use resolution::{
    lift_to_free_resolution, truncate_twisted, FreeResolution, ModuleLocalSystem, ResolvedModule, TruncatedModule,
};
pub use schema::{ModuleSystemJson, TwistedModuleJson};

use crate::dg::{vec_ops, GradedModule, HomSpace, TwistedModule};
use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Scalar};

/// A twisted module whose `A⁰` component is `d⁰ ⊗ 1` for a differential `d⁰` on `V`.
#[derive(Clone, Debug)]
pub struct ReducedTwistedModule {
    pub module: TwistedModule,
    pub d0: ExactMatrix,
}

impl ReducedTwistedModule {
    /// Reads off `d⁰` and checks that the module is reduced.
    pub fn new(module: TwistedModule) -> Result<Self> {
        let d0 = reduced_differential(&module).ok_or_else(|| Error::Invalid("twisted module is not reduced".into()))?;
        Ok(ReducedTwistedModule { module, d0 })
    }

    /// `V ⊗ A` with `x = d⁰ ⊗ 1 + rest`; `rest` must lie in `End(V) ⊗ A^{≥1}`.
    pub fn from_parts(module: TwistedModule, d0: ExactMatrix) -> Result<Self> {
        match reduced_differential(&module) {
            Some(d) if d == d0 => Ok(ReducedTwistedModule { module, d0 }),
            _ => Err(Error::Invalid("A⁰ component differs from d⁰ ⊗ 1".into())),
        }
    }

    pub fn v(&self) -> &GradedModule {
        &self.module.v
    }

    /// `d′ = x − d⁰ ⊗ 1`.
    pub fn perturbation(&self) -> Vec<Scalar> {
        let e = self.module.end_space();
        e.sub(&self.module.x, &tensor_one(&e, &self.d0))
    }
}

/// `m ⊗ 1` in `Hom(V, W) ⊗ A` for a matrix `m: V → W`.
pub fn tensor_one(space: &HomSpace, m: &ExactMatrix) -> Vec<Scalar> {
    let mut f = space.zero();
    let unit = space.alg.unit();
    for q in 0..m.rows() {
        for p in 0..m.cols() {
            let c = m.get(q, p);
            if c.is_zero() {
                continue;
            }
            for (k, u) in unit.iter().enumerate() {
                if !u.is_zero() {
                    f[space.index(q, p, k)] = c.mul(u);
                }
            }
        }
    }
    f.into_iter().map(|c| space.ring().norm(c)).collect()
}

/// The matrix coefficient of `a_k`.
pub(crate) fn component(space: &HomSpace, f: &[Scalar], k: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(space.ring(), space.tgt.len(), space.src.len());
    for q in 0..space.tgt.len() {
        for p in 0..space.src.len() {
            m.set(q, p, f[space.index(q, p, k)].clone());
        }
    }
    m
}

/// `d⁰` when the `A⁰` component of `x` is `d⁰ ⊗ 1`.
fn reduced_differential(m: &TwistedModule) -> Option<ExactMatrix> {
    let e = m.end_space();
    let unit = m.alg.unit();
    let deg0 = m.alg.module().in_degree(0);
    let pivot = deg0.iter().copied().find(|&k| !unit[k].is_zero())?;
    let inv = m.ring().inv(&unit[pivot])?;
    let d0 = component(&e, &m.x, pivot).scale(&inv);
    let expected = tensor_one(&e, &d0);
    let ok = deg0.iter().all(|&k| (0..e.dim()).filter(|&i| e.split(i).2 == k).all(|i| m.x[i] == expected[i]));
    ok.then_some(d0)
}

/// The `A⁰` component of the differential is induced by a differential on `V`.
pub fn is_reduced(m: &TwistedModule) -> bool {
    reduced_differential(m).is_some()
}

/// Reduced with `d⁰ = 0`.
pub fn is_minimal(m: &TwistedModule) -> bool {
    let e = m.end_space();
    let deg0 = m.alg.module().in_degree(0);
    (0..e.dim()).all(|i| m.x[i].is_zero() || !deg0.contains(&e.split(i).2))
}

/// `Σ_{n≥0} (−y)^n` for `y` in the filtration-raising part; errors if it does not vanish in time.
pub fn geometric_series(space: &HomSpace, y: &[Scalar]) -> Result<Vec<Scalar>> {
    let bound = space.alg.module().degree_range().map(|(_, hi)| hi.max(0) as usize).unwrap_or(0) + 1;
    let id = space.identity();
    let mut total = id.clone();
    let mut term = id;
    for _ in 0..=bound {
        term = space.neg(&space.compose(y, space, &term));
        if vec_ops::is_zero(&term) {
            return Ok(total);
        }
        total = space.add(&total, &term);
    }
    Err(Error::Inconsistent("geometric series does not terminate within the filtration bound".into()))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::linalg::Ring;
    use crate::simplicial::{cochain_algebra, delta, SimplicialSet};

    #[test]
    fn reduced_detection() {
        let r = Ring::Rationals;
        let a = Arc::new(cochain_algebra(&delta(1), r, 1).unwrap());
        let v = GradedModule::with_degrees(r, &[0, 1]);
        let e = HomSpace::new(v.clone(), v.clone(), a.clone());
        let d0 = ExactMatrix::from_i64(r, &[vec![0, 0], vec![1, 0]]);
        let m = TwistedModule::new(v.clone(), a.clone(), tensor_one(&e, &d0)).unwrap();
        assert!(is_reduced(&m));
        assert!(!is_minimal(&m));
        assert_eq!(ReducedTwistedModule::new(m).unwrap().d0, d0);
        // d⁰ at one of two points only: a non-scalar A⁰ coefficient
        let pts = SimplicialSet::from_ordered_complex(&["a".into(), "b".into()], &[vec![0], vec![1]]).unwrap();
        let a = Arc::new(cochain_algebra(&pts, r, 0).unwrap());
        let e = HomSpace::new(v.clone(), v.clone(), a.clone());
        let mut x = e.zero();
        x[e.index(1, 0, 0)] = Scalar::one();
        let m = TwistedModule::new(v, a, x).unwrap();
        assert!(!is_reduced(&m));
    }
}
