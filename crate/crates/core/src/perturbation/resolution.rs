use std::sync::Arc;

use super::{component, ReducedTwistedModule};
use crate::dg::{vec_ops, DgAlgebra, GradedModule, HomSpace, TwistedModule};
use crate::error::{Error, Result};
use crate::linalg::{kernel, solve_linear, solve_matrix, ExactMatrix, Ring, Scalar};
use crate::simplicial::{cochain_algebra, cochain_offsets, SimplicialSet};

/// Finite free complex `W` in degrees `≤ 0` resolving `V = H⁰(W)`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub w: GradedModule,
    pub d: ExactMatrix,
}

impl FreeResolution {
    /// `m: ℤ^c → ℤ^r` in degrees −1, 0 for a presentation matrix `m`.
    pub fn presentation(m: &ExactMatrix) -> Result<Self> {
        let (r0, r1) = (m.rows(), m.cols());
        let mut degrees = vec![-1; r1];
        degrees.extend(vec![0; r0]);
        let w = GradedModule::with_degrees(m.ring(), &degrees);
        let mut d = ExactMatrix::zeros(m.ring(), r0 + r1, r0 + r1);
        d.set_block(r1, 0, m);
        Ok(FreeResolution { w, d })
    }

    fn block(&self, k: i32) -> (Vec<usize>, Vec<usize>, ExactMatrix) {
        let src = self.w.in_degree(k);
        let tgt = self.w.in_degree(k + 1);
        let mut m = ExactMatrix::zeros(self.d.ring(), tgt.len(), src.len());
        for (r, &i) in tgt.iter().enumerate() {
            for (c, &j) in src.iter().enumerate() {
                m.set(r, c, self.d.get(i, j).clone());
            }
        }
        (src, tgt, m)
    }
}

/// A local system of modules `V = H⁰(W)` on `X`: per edge, the action on the generators `W⁰`.
#[derive(Clone, Debug)]
pub struct ModuleLocalSystem {
    pub base: SimplicialSet,
    pub resolution: FreeResolution,
    pub monodromy: Vec<ExactMatrix>,
}

/// `(W ⊗ C*(X), D_W = Σ w_i)` with the stages `w_i` and the chain lifts of the monodromy.
#[derive(Clone, Debug)]
pub struct ResolvedModule {
    pub module: TwistedModule,
    pub stages: Vec<Vec<Scalar>>,
    pub lifts: Vec<ExactMatrix>,
}

fn lift_chain_map(res: &FreeResolution, top: &ExactMatrix) -> Result<ExactMatrix> {
    let ring = res.d.ring();
    let n = res.w.len();
    let mut f = ExactMatrix::zeros(ring, n, n);
    let deg0 = res.w.in_degree(0);
    if top.rows() != deg0.len() || top.cols() != deg0.len() {
        return Err(Error::Dimension(format!("monodromy must act on the {} generators", deg0.len())));
    }
    for (r, &i) in deg0.iter().enumerate() {
        for (c, &j) in deg0.iter().enumerate() {
            f.set(i, j, top.get(r, c).clone());
        }
    }
    let lo = res.w.degree_range().map(|(lo, _)| lo).unwrap_or(0);
    for k in (lo..0).rev() {
        let (src, tgt, dk) = res.block(k);
        // F_{k+1} ∘ d_k as a map W^k → W^{k+1}
        let mut fd = ExactMatrix::zeros(ring, tgt.len(), src.len());
        for (r, &i) in tgt.iter().enumerate() {
            for (c, &j) in src.iter().enumerate() {
                let mut acc = Scalar::zero();
                for &l in &tgt {
                    acc = ring.add(&acc, &ring.mul(f.get(i, l), res.d.get(l, j)));
                }
                fd.set(r, c, acc);
            }
        }
        let fk = solve_matrix(&dk, &fd)?.ok_or_else(|| Error::Obstruction {
            stage: 1,
            detail: format!("monodromy does not lift through degree {k} of the resolution"),
        })?;
        for (r, &i) in src.iter().enumerate() {
            for (c, &j) in src.iter().enumerate() {
                f.set(i, j, fk.get(r, c).clone());
            }
        }
    }
    Ok(f)
}

/// Inductive construction of `D_W = w₀ + w₁ + …` with `(D_W)² = 0`.
///
/// Stage `k ≥ 2` solves `[w₀, w_k] = −(d w_{k−1} + Σ_{0<i<k} w_i w_{k−i})`.
pub fn lift_to_free_resolution(data: &ModuleLocalSystem) -> Result<ResolvedModule> {
    let res = &data.resolution;
    let ring = res.d.ring();
    if res.w.degrees().iter().any(|&d| d > 0) {
        return Err(Error::Invalid("resolution must sit in degrees ≤ 0".into()));
    }
    if !res.d.mul(&res.d)?.is_zero() {
        return Err(Error::DSquared { degree: 0, row: 0, col: 0 });
    }
    let base = &data.base;
    if data.monodromy.len() != base.count(1) {
        return Err(Error::Dimension(format!(
            "{} edges but {} monodromy matrices",
            base.count(1),
            data.monodromy.len()
        )));
    }
    let top = base.dim();
    let alg = Arc::new(cochain_algebra(base, ring, top)?);
    let off = cochain_offsets(base, top);
    let e = HomSpace::new(res.w.clone(), res.w.clone(), alg.clone());
    let lifts = data.monodromy.iter().map(|m| lift_chain_map(res, m)).collect::<Result<Vec<_>>>()?;
    let w0 = super::tensor_one(&e, &res.d);
    let mut w1 = e.zero();
    let id = ExactMatrix::identity(ring, res.w.len());
    for (k, f) in lifts.iter().enumerate() {
        let psi = f.sub(&id)?;
        for q in 0..psi.rows() {
            for p in 0..psi.cols() {
                if !psi.get(q, p).is_zero() {
                    w1[e.index(q, p, off[1] + k)] = psi.get(q, p).clone();
                }
            }
        }
    }
    let mut stages = vec![w0.clone(), w1];
    for k in 2..=top {
        let mut rhs = e.d(&stages[k - 1]);
        for i in 1..k {
            rhs = e.add(&rhs, &e.compose(&stages[i], &e, &stages[k - i]));
        }
        let rhs = e.neg(&rhs);
        stages.push(solve_stage(&e, &w0, &rhs, &alg, k)?);
    }
    let mut x = e.zero();
    for s in &stages {
        x = e.add(&x, s);
    }
    let module = TwistedModule::new(res.w.clone(), alg, x).map_err(|err| Error::Internal(format!("D_W: {err}")))?;
    Ok(ResolvedModule { module, stages, lifts })
}

/// `w` of total degree 1 and algebra degree `k` with `w₀w + ww₀ = rhs`.
fn solve_stage(e: &HomSpace, w0: &[Scalar], rhs: &[Scalar], alg: &DgAlgebra, k: usize) -> Result<Vec<Scalar>> {
    let adeg = |i: usize| alg.degree(e.split(i).2) as usize;
    let unknowns: Vec<usize> = (0..e.dim()).filter(|&i| e.degree(i) == 1 && adeg(i) == k).collect();
    let rows: Vec<usize> = (0..e.dim()).filter(|&i| e.degree(i) == 2 && adeg(i) == k).collect();
    if rhs.iter().enumerate().any(|(i, c)| !c.is_zero() && !rows.contains(&i)) {
        return Err(Error::Internal(format!("stage {k} residual outside the expected component")));
    }
    let mut m = ExactMatrix::zeros(e.ring(), rows.len(), unknowns.len());
    for (c, &u) in unknowns.iter().enumerate() {
        let mut b = e.zero();
        b[u] = Scalar::one();
        let br = e.add(&e.compose(w0, e, &b), &e.compose(&b, e, w0));
        for (r, &i) in rows.iter().enumerate() {
            m.set(r, c, br[i].clone());
        }
    }
    let target: Vec<Scalar> = rows.iter().map(|&i| rhs[i].clone()).collect();
    let sol = solve_linear(&m, &target)?
        .ok_or_else(|| Error::Obstruction { stage: k, detail: "obstruction class is nonzero".into() })?;
    let mut w = e.zero();
    for (c, &u) in unknowns.iter().enumerate() {
        w[u] = sol.particular[c].clone();
    }
    Ok(w)
}

/// `τ_{≤i}M` and the inclusion `τ_{≤i}M → M`.
#[derive(Clone, Debug)]
pub struct TruncatedModule {
    pub module: TwistedModule,
    /// closed degree 0 element of `Hom(τV, V) ⊗ A`
    pub map: Vec<Scalar>,
    /// columns: basis of `τ_{≤i}V` inside `V`
    pub basis: ExactMatrix,
}

/// Kernel truncation `V^{<i} ⊕ ker(d⁰|V^i)`; `D_V` restricts to it.
///
/// Over the integers the kernel is a saturated sublattice, hence free, so the
/// truncation is its own free resolution.
pub fn truncate_twisted(m: &ReducedTwistedModule, i: i32) -> Result<TruncatedModule> {
    let v = m.v();
    let ring: Ring = v.ring();
    let n = v.len();
    let mut cols: Vec<(Vec<Scalar>, i32)> = Vec::new();
    for p in 0..n {
        if v.degree(p) < i {
            let mut c = vec![Scalar::zero(); n];
            c[p] = Scalar::one();
            cols.push((c, v.degree(p)));
        }
    }
    let idx = v.in_degree(i);
    if !idx.is_empty() {
        let next = v.in_degree(i + 1);
        let z: Vec<Vec<Scalar>> = if next.is_empty() {
            (0..idx.len()).map(|j| vec_ops::unit(idx.len(), j)).collect()
        } else {
            let mut dk = ExactMatrix::zeros(ring, next.len(), idx.len());
            for (r, &a) in next.iter().enumerate() {
                for (c, &b) in idx.iter().enumerate() {
                    dk.set(r, c, m.d0.get(a, b).clone());
                }
            }
            kernel(&dk)?
        };
        for zc in z {
            let mut c = vec![Scalar::zero(); n];
            for (p, &j) in idx.iter().enumerate() {
                c[j] = zc[p].clone();
            }
            cols.push((c, i));
        }
    }
    let r = cols.len();
    let mut basis = ExactMatrix::zeros(ring, n, r);
    for (c, (col, _)) in cols.iter().enumerate() {
        for (row, x) in col.iter().enumerate() {
            basis.set(row, c, x.clone());
        }
    }
    let labels: Vec<(String, i32)> = cols.iter().enumerate().map(|(c, (_, d))| (format!("τ{c}"), *d)).collect();
    let tv = GradedModule::new(ring, labels)?;
    let alg = m.module.alg.clone();
    let e = m.module.end_space();
    let te = HomSpace::new(tv.clone(), tv.clone(), alg.clone());
    let mut x = te.zero();
    for k in 0..alg.dim() {
        let xk = component(&e, &m.module.x, k);
        if xk.is_zero() || r == 0 {
            continue;
        }
        let yk = solve_matrix(&basis, &xk.mul(&basis)?)?
            .ok_or_else(|| Error::Internal("differential does not preserve the truncation".into()))?;
        for q in 0..r {
            for p in 0..r {
                x[te.index(q, p, k)] = yk.get(q, p).clone();
            }
        }
    }
    let module =
        TwistedModule::new(tv.clone(), alg.clone(), x).map_err(|err| Error::Internal(format!("truncation: {err}")))?;
    let hs = HomSpace::new(tv, v.clone(), alg);
    let map = super::tensor_one(&hs, &basis);
    Ok(TruncatedModule { module, map, basis })
}
