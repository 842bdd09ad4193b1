//! Seeded generators for local systems and reduced twisted modules.

use std::sync::Arc;

use rand::Rng;

use crate::dg::{DgAlgebra, GradedModule, HomSpace, TwistedModule};
use crate::error::{Error, Result};
use crate::linalg::{inverse, kernel, ExactMatrix, Ring, Scalar};
use crate::perturbation::ReducedTwistedModule;
use crate::simplicial::{cochain_algebra, cochain_offsets, LocalSystem, SimplicialSet};

fn small(ring: Ring, rng: &mut impl Rng, bound: i64) -> Scalar {
    ring.from_int(rng.gen_range(-bound..=bound))
}

/// Uniform small-entry invertible matrix.
pub fn random_invertible(ring: Ring, n: usize, rng: &mut impl Rng) -> ExactMatrix {
    loop {
        let mut m = ExactMatrix::zeros(ring, n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, small(ring, rng, 2));
            }
        }
        let unimodular =
            inverse(&m).ok().flatten().is_some_and(|inv| inv.to_rows().iter().flatten().all(|c| c.is_integer()));
        if (ring.is_field() && inverse(&m).ok().flatten().is_some()) || unimodular {
            return m;
        }
    }
}

/// Block-diagonal invertible matrix preserving the grading of `v`.
pub fn random_degree_preserving(v: &GradedModule, rng: &mut impl Rng) -> ExactMatrix {
    let ring = v.ring();
    let mut g = ExactMatrix::zeros(ring, v.len(), v.len());
    let Some((lo, hi)) = v.degree_range() else {
        return g;
    };
    for k in lo..=hi {
        let idx = v.in_degree(k);
        let b = random_invertible(ring, idx.len(), rng);
        for (a, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                g.set(i, j, b.get(a, c).clone());
            }
        }
    }
    g
}

fn power(m: &ExactMatrix, inv: &ExactMatrix, k: i64) -> ExactMatrix {
    let base = if k >= 0 { m } else { inv };
    let mut out = ExactMatrix::identity(m.ring(), m.rows());
    for _ in 0..k.unsigned_abs() {
        out = out.mul(base).expect("square");
    }
    out
}

/// Integer 1-cocycles of the base: a basis of `ker(δ: C¹ → C²)` over ℤ.
fn integer_cocycles(base: &SimplicialSet) -> Result<Vec<Vec<i64>>> {
    let c = cochain_algebra(base, Ring::Integers, 2)?;
    let d1 = c.d_matrix(1);
    let ker = if d1.rows() == 0 {
        (0..base.count(1)).map(|j| crate::dg::vec_ops::unit(base.count(1), j)).collect()
    } else {
        kernel(&d1)?
    };
    ker.iter()
        .map(|v| v.iter().map(|c| c.to_i64().ok_or_else(|| Error::Internal("cocycle entry".into()))).collect())
        .collect()
}

/// `F(σ) = G_{σ₀} C^{α(σ)} G_{σ₁}⁻¹` for random vertex frames `G`, an invertible `C` and an integer cocycle `α`.
pub fn random_local_system(base: &SimplicialSet, ring: Ring, rank: usize, rng: &mut impl Rng) -> Result<LocalSystem> {
    let frames: Vec<ExactMatrix> = (0..base.count(0)).map(|_| random_invertible(ring, rank, rng)).collect();
    let mono = random_transports(base, &frames, &random_invertible(ring, rank, rng), rng)?;
    LocalSystem::new(base.clone(), ring, rank, mono)
}

fn random_transports(
    base: &SimplicialSet,
    frames: &[ExactMatrix],
    c: &ExactMatrix,
    rng: &mut impl Rng,
) -> Result<Vec<ExactMatrix>> {
    let cinv = inverse(c)?.ok_or_else(|| Error::Internal("C is invertible".into()))?;
    let cocycles = integer_cocycles(base)?;
    let mut alpha = vec![0i64; base.count(1)];
    for z in &cocycles {
        let k = rng.gen_range(-1..=1);
        for (a, zi) in alpha.iter_mut().zip(z) {
            *a += k * zi;
        }
    }
    let inv_frames: Vec<ExactMatrix> = frames.iter().map(|g| inverse(g).ok().flatten().expect("frame")).collect();
    (0..base.count(1))
        .map(|e| {
            let v = base.vertices(1, e);
            Ok(frames[v[0]].mul(&power(c, &cinv, alpha[e]))?.mul(&inv_frames[v[1]])?)
        })
        .collect()
}

/// A complex `(V, d⁰)` with a group of chain automorphisms to sample from.
struct RandomComplex {
    v: GradedModule,
    d0: ExactMatrix,
    basis: ExactMatrix,
    basis_inv: ExactMatrix,
    harmonic: Vec<usize>,
    pairs: Vec<(usize, usize)>,
}

impl RandomComplex {
    fn new(ring: Ring, rng: &mut impl Rng, max_dim: usize, lo: i32, hi: i32) -> Self {
        let n = rng.gen_range(1..=max_dim);
        let mut degrees: Vec<i32> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
        degrees.sort_unstable();
        let mut used = vec![false; n];
        let mut pairs = Vec::new();
        for i in 0..n {
            if used[i] || rng.gen_bool(0.4) {
                continue;
            }
            if let Some(j) = (0..n).find(|&j| !used[j] && j != i && degrees[j] == degrees[i] + 1) {
                used[i] = true;
                used[j] = true;
                pairs.push((i, j));
            }
        }
        let harmonic: Vec<usize> = (0..n).filter(|&i| !used[i]).collect();
        let mut std_d = ExactMatrix::zeros(ring, n, n);
        for &(u, b) in &pairs {
            std_d.set(b, u, Scalar::one());
        }
        let basis = loop {
            let mut g = ExactMatrix::zeros(ring, n, n);
            for i in 0..n {
                for j in 0..n {
                    if degrees[i] == degrees[j] {
                        g.set(i, j, small(ring, rng, 2));
                    }
                }
            }
            if inverse(&g).ok().flatten().is_some() {
                break g;
            }
        };
        let basis_inv = inverse(&basis).ok().flatten().expect("invertible");
        let d0 = basis.mul(&std_d).and_then(|m| m.mul(&basis_inv)).expect("square");
        RandomComplex { v: GradedModule::with_degrees(ring, &degrees), d0, basis, basis_inv, harmonic, pairs }
    }

    /// Block automorphism commuting with `d⁰`: arbitrary on harmonic vectors of equal degree,
    /// one matrix acting alike on sources and targets of pairs of equal degree.
    fn automorphism(&self, rng: &mut impl Rng) -> ExactMatrix {
        let ring = self.v.ring();
        let n = self.v.len();
        let deg = |i: usize| self.v.degree(i);
        let mut m = ExactMatrix::zeros(ring, n, n);
        let mut groups: std::collections::BTreeMap<(u8, i32), Vec<usize>> = Default::default();
        for &h in &self.harmonic {
            groups.entry((0, deg(h))).or_default().push(h);
        }
        for (k, &(u, _)) in self.pairs.iter().enumerate() {
            groups.entry((1, deg(u))).or_default().push(k);
        }
        for ((kind, _), members) in groups {
            let block = random_invertible(ring, members.len(), rng);
            for (a, &i) in members.iter().enumerate() {
                for (b, &j) in members.iter().enumerate() {
                    let c = block.get(a, b).clone();
                    if kind == 0 {
                        m.set(i, j, c);
                    } else {
                        let (ui, bi) = self.pairs[i];
                        let (uj, bj) = self.pairs[j];
                        m.set(ui, uj, c.clone());
                        m.set(bi, bj, c);
                    }
                }
            }
        }
        self.basis.mul(&m).and_then(|x| x.mul(&self.basis_inv)).expect("square")
    }
}

/// Reduced twisted module on `base`: a local system of complexes, gauge transformed by
/// `1 + N` with `N` of algebra degree 1 to create higher components.
pub fn random_reduced_module(
    base: &SimplicialSet,
    ring: Ring,
    max_dim: usize,
    degrees: (i32, i32),
    rng: &mut impl Rng,
) -> Result<ReducedTwistedModule> {
    let alg = Arc::new(cochain_algebra(base, ring, base.dim())?);
    random_reduced_module_over(base, alg, max_dim, degrees, rng)
}

pub fn random_reduced_module_over(
    base: &SimplicialSet,
    alg: Arc<DgAlgebra>,
    max_dim: usize,
    degrees: (i32, i32),
    rng: &mut impl Rng,
) -> Result<ReducedTwistedModule> {
    let ring = alg.ring();
    let cx = RandomComplex::new(ring, rng, max_dim, degrees.0, degrees.1);
    let frames: Vec<ExactMatrix> = (0..base.count(0)).map(|_| cx.automorphism(rng)).collect();
    let mono = random_transports(base, &frames, &cx.automorphism(rng), rng)?;
    let v = cx.v.clone();
    let n = v.len();
    let e = HomSpace::new(v.clone(), v.clone(), alg.clone());
    let off = cochain_offsets(base, base.dim());
    let mut x = crate::perturbation::tensor_one(&e, &cx.d0);
    let id = ExactMatrix::identity(ring, n);
    for (k, f) in mono.iter().enumerate() {
        let psi = f.sub(&id)?;
        for q in 0..n {
            for p in 0..n {
                if !psi.get(q, p).is_zero() {
                    x[e.index(q, p, off[1] + k)] = psi.get(q, p).clone();
                }
            }
        }
    }
    // gauge by g = 1 + N
    let mut nil = e.zero();
    for k in off[1]..off.get(2).copied().unwrap_or(off[1]) {
        for q in 0..n {
            for p in 0..n {
                if v.degree(q) == v.degree(p) - 1 && rng.gen_bool(0.5) {
                    nil[e.index(q, p, k)] = small(ring, rng, 2);
                }
            }
        }
    }
    let g = e.add(&e.identity(), &nil);
    let ginv = crate::perturbation::geometric_series(&e, &nil)?;
    let gx = e.compose(&e.compose(&g, &e, &x), &e, &ginv);
    let x = e.sub(&gx, &e.compose(&e.d(&g), &e, &ginv));
    let m = TwistedModule::new(v, alg, x).map_err(|err| Error::Internal(format!("random module: {err}")))?;
    ReducedTwistedModule::from_parts(m, cx.d0)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::simplicial::{circle, delta};

    #[test]
    fn local_systems_satisfy_cocycle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for base in [circle(3), delta(2)] {
            for _ in 0..5 {
                random_local_system(&base, Ring::prime_field(7).unwrap(), 2, &mut rng).unwrap();
            }
        }
    }

    #[test]
    fn reduced_modules_are_reduced() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let m = random_reduced_module(&delta(2), Ring::Rationals, 6, (-3, 3), &mut rng).unwrap();
            assert!(crate::perturbation::is_reduced(&m.module));
        }
    }
}
