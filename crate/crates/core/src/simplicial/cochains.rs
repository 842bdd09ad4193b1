use super::sset::{Simplex, SimplicialSet};
use crate::dg::{DgAlgebra, GradedModule};
use crate::error::Result;
use crate::linalg::{Ring, Scalar};

/// Offsets of each dimension in the cochain basis (dimension-major order).
pub fn cochain_offsets(x: &SimplicialSet, max_degree: usize) -> Vec<usize> {
    let mut off = Vec::new();
    let mut acc = 0;
    for n in 0..=max_degree.min(x.dim()) {
        off.push(acc);
        acc += x.count(n);
    }
    off.push(acc);
    off
}

/// Normalized cochains with `(dφ)(σ) = φ(Σ (-1)^i d_i σ)` and the Alexander–Whitney product.
pub fn cochain_algebra(x: &SimplicialSet, ring: Ring, max_degree: usize) -> Result<DgAlgebra> {
    let top = max_degree.min(x.dim());
    let off = cochain_offsets(x, top);
    let mut basis = Vec::new();
    for n in 0..=top {
        for l in x.labels(n) {
            basis.push((l.clone(), n as i32));
        }
    }
    let module = GradedModule::new(ring, basis)?;
    let mut unit = vec![Scalar::zero(); module.len()];
    for u in unit.iter_mut().take(x.count(0)) {
        *u = Scalar::one();
    }
    let mut diff = Vec::new();
    let mut mult = Vec::new();
    for n in 0..=top {
        for k in 0..x.count(n) {
            let s = Simplex::nondegenerate(n, k);
            let me = off[n] + k;
            if n >= 1 {
                for i in 0..=n {
                    let f = x.face(&s, i);
                    if f.is_nondegenerate() {
                        diff.push((off[n - 1] + f.root, me, Scalar::from_int(if i % 2 == 0 { 1 } else { -1 })));
                    }
                }
            }
            for p in 0..=n {
                let fr = x.front(&s, p);
                let bk = x.back(&s, n - p);
                if fr.is_nondegenerate() && bk.is_nondegenerate() {
                    mult.push((off[p] + fr.root, off[n - p] + bk.root, me, Scalar::one()));
                }
            }
        }
    }
    DgAlgebra::new(module, unit, diff, mult)
}
