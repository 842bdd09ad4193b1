//! `Hom(V, W) ⊗ A` and twisted modules `(V ⊗ A, 1⊗d + x)`.

use std::sync::Arc;

use super::algebra::{DgAlgebra, Sparse};
use super::graded::{vec_ops, GradedModule};
use crate::error::{Error, Result};
use crate::linalg::{cohomology, CochainComplex, CohomologyReport, ExactMatrix, Ring, Scalar};

/// The graded module `Hom(V, W) ⊗ A`, acting on `V⊗A` from the left.
///
/// Basis element `(q, p, k)` is `e_{qp} ⊗ a_k` with `e_{qp}: v_p ↦ w_q`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub src: GradedModule,
    pub tgt: GradedModule,
    pub alg: Arc<DgAlgebra>,
}

impl HomSpace {
    pub fn new(src: GradedModule, tgt: GradedModule, alg: Arc<DgAlgebra>) -> Self {
        HomSpace { src, tgt, alg }
    }

    /// `V ⊗ A` viewed as `Hom(k, V) ⊗ A`.
    pub fn vectors(v: &GradedModule, alg: Arc<DgAlgebra>) -> Self {
        let ground = GradedModule::new(v.ring(), vec![("1".into(), 0)]).expect("single label");
        HomSpace { src: ground, tgt: v.clone(), alg }
    }

    pub fn ring(&self) -> Ring {
        self.alg.ring()
    }

    pub fn dim(&self) -> usize {
        self.tgt.len() * self.src.len() * self.alg.dim()
    }

    #[inline]
    pub fn index(&self, q: usize, p: usize, k: usize) -> usize {
        (q * self.src.len() + p) * self.alg.dim() + k
    }

    #[inline]
    pub fn split(&self, i: usize) -> (usize, usize, usize) {
        let na = self.alg.dim();
        let np = self.src.len();
        (i / (np * na), (i / na) % np, i % na)
    }

    pub fn degree(&self, i: usize) -> i32 {
        let (q, p, k) = self.split(i);
        self.tgt.degree(q) - self.src.degree(p) + self.alg.degree(k)
    }

    pub fn zero(&self) -> Vec<Scalar> {
        vec_ops::zeros(self.dim())
    }

    /// `e_{qp} ⊗ a` for an algebra element `a`.
    pub fn elementary(&self, q: usize, p: usize, a: &[Scalar]) -> Vec<Scalar> {
        let mut f = self.zero();
        for (k, c) in a.iter().enumerate() {
            if !c.is_zero() {
                f[self.index(q, p, k)] = c.clone();
            }
        }
        f
    }

    /// The algebra coefficient of `e_{qp}`.
    pub fn entry(&self, f: &[Scalar], q: usize, p: usize) -> Vec<Scalar> {
        let na = self.alg.dim();
        let s = self.index(q, p, 0);
        f[s..s + na].to_vec()
    }

    /// Identity `Σ e_pp ⊗ 1`; requires `src == tgt`.
    pub fn identity(&self) -> Vec<Scalar> {
        let mut f = self.zero();
        for p in 0..self.src.len() {
            for (k, c) in self.alg.unit().iter().enumerate() {
                if !c.is_zero() {
                    f[self.index(p, p, k)] = c.clone();
                }
            }
        }
        f
    }

    pub fn module(&self) -> GradedModule {
        let mut basis = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let (q, p, k) = self.split(i);
            let label = if self.src.len() == 1 && self.src.label(0) == "1" {
                format!("{}⊗{}", self.tgt.label(q), self.alg.label(k))
            } else {
                format!("E[{},{}]⊗{}", self.tgt.label(q), self.src.label(p), self.alg.label(k))
            };
            basis.push((label, self.degree(i)));
        }
        GradedModule::new(self.ring(), basis).expect("labels are distinct")
    }

    /// Internal differential `(-1)^{|e_qp|} e_qp ⊗ da`.
    pub fn d(&self, f: &[Scalar]) -> Vec<Scalar> {
        let r = self.ring();
        let mut out = self.zero();
        for (i, c) in f.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (q, p, k) = self.split(i);
            let odd = (self.tgt.degree(q) - self.src.degree(p)).rem_euclid(2) == 1;
            for (k2, dk) in self.alg.d_basis(k) {
                let t = self.index(q, p, *k2);
                let v = c.mul(dk);
                out[t] = out[t].add(&if odd { v.neg() } else { v });
            }
        }
        out.into_iter().map(|s| r.norm(s)).collect()
    }

    /// Composite `f ∘ g` with `f ∈ self = Hom(V, W)⊗A`, `g ∈ inner = Hom(U, V)⊗A`.
    pub fn compose(&self, f: &[Scalar], inner: &HomSpace, g: &[Scalar]) -> Vec<Scalar> {
        let out_space = HomSpace { src: inner.src.clone(), tgt: self.tgt.clone(), alg: self.alg.clone() };
        let r = self.ring();
        let na = self.alg.dim();
        let mut out = out_space.zero();
        // group nonzeros of g by their target index p
        let mut g_by_p: Vec<Vec<(usize, usize, &Scalar)>> = vec![Vec::new(); inner.tgt.len()];
        for (i, c) in g.iter().enumerate() {
            if !c.is_zero() {
                let (p, l, k) = inner.split(i);
                g_by_p[p].push((l, k, c));
            }
        }
        for (i, c) in f.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (q, p, ka) = self.split(i);
            let da = self.alg.degree(ka);
            for &(l, kb, cb) in &g_by_p[p] {
                let prod = self.alg.basis_product(ka, kb);
                if prod.is_empty() {
                    continue;
                }
                let sgn = (da * (self.src.degree(p) - inner.src.degree(l))).rem_euclid(2) == 1;
                let cc = c.mul(cb);
                let cc = if sgn { cc.neg() } else { cc };
                let base = (q * inner.src.len() + l) * na;
                for (kc, coef) in prod {
                    out[base + kc] = out[base + kc].add(&cc.mul(coef));
                }
            }
        }
        out.into_iter().map(|s| r.norm(s)).collect()
    }

    pub fn add(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        vec_ops::add(self.ring(), a, b)
    }

    pub fn sub(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        vec_ops::sub(self.ring(), a, b)
    }

    pub fn neg(&self, a: &[Scalar]) -> Vec<Scalar> {
        vec_ops::neg(self.ring(), a)
    }

    pub fn degree_of(&self, f: &[Scalar]) -> Result<Option<i32>> {
        let mut deg = None;
        for (i, c) in f.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = self.degree(i);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(Error::Degree { expected: e, found: format!("{d}") });
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn expect_degree(&self, f: &[Scalar], d: i32) -> Result<()> {
        if f.len() != self.dim() {
            return Err(Error::Dimension(format!("element of length {} in a space of rank {}", f.len(), self.dim())));
        }
        match self.degree_of(f)? {
            Some(e) if e != d => Err(Error::Degree { expected: d, found: format!("{e}") }),
            _ => Ok(()),
        }
    }

    /// Split into homogeneous components.
    pub fn homogeneous_parts(&self, f: &[Scalar]) -> Vec<(i32, Vec<Scalar>)> {
        let mut parts: std::collections::BTreeMap<i32, Vec<Scalar>> = Default::default();
        for (i, c) in f.iter().enumerate() {
            if !c.is_zero() {
                parts.entry(self.degree(i)).or_insert_with(|| self.zero())[i] = c.clone();
            }
        }
        parts.into_iter().collect()
    }

    /// Same element with source shifted by `k` (`V[k]`): coefficients gain `(-1)^{k|a|}`.
    pub fn reindex_source_shift(&self, f: &[Scalar], k: i32) -> Vec<Scalar> {
        let r = self.ring();
        f.iter()
            .enumerate()
            .map(|(i, c)| {
                let (_, _, ka) = self.split(i);
                if (k * self.alg.degree(ka)).rem_euclid(2) == 1 {
                    r.neg(c)
                } else {
                    c.clone()
                }
            })
            .collect()
    }

    pub fn format(&self, f: &[Scalar]) -> String {
        self.module().format(f)
    }
}

/// Twisted module `(V ⊗ A, D = 1⊗d + x)` for a Maurer-Cartan element `x ∈ End(V)⊗A`.
#[derive(Clone, Debug)]
pub struct TwistedModule {
    pub v: GradedModule,
    pub alg: Arc<DgAlgebra>,
    pub x: Vec<Scalar>,
}

impl TwistedModule {
    /// Checks that `x` has degree 1 and satisfies `dx + x² = 0`.
    pub fn new(v: GradedModule, alg: Arc<DgAlgebra>, x: Vec<Scalar>) -> Result<Self> {
        let m = TwistedModule { v, alg, x };
        m.end_space().expect_degree(&m.x, 1)?;
        let res = m.mc_residual();
        if !vec_ops::is_zero(&res) {
            return Err(Error::NotMc(m.end_space().format(&res)));
        }
        Ok(m)
    }

    pub fn new_unchecked(v: GradedModule, alg: Arc<DgAlgebra>, x: Vec<Scalar>) -> Self {
        TwistedModule { v, alg, x }
    }

    /// `V ⊗ A` with `x = 0`.
    pub fn untwisted(v: GradedModule, alg: Arc<DgAlgebra>) -> Self {
        let n = v.len() * v.len() * alg.dim();
        TwistedModule { v, alg, x: vec_ops::zeros(n) }
    }

    pub fn ring(&self) -> Ring {
        self.alg.ring()
    }

    pub fn end_space(&self) -> HomSpace {
        HomSpace::new(self.v.clone(), self.v.clone(), self.alg.clone())
    }

    pub fn vector_space(&self) -> HomSpace {
        HomSpace::vectors(&self.v, self.alg.clone())
    }

    pub fn mc_residual(&self) -> Vec<Scalar> {
        let e = self.end_space();
        e.add(&e.d(&self.x), &e.compose(&self.x, &e, &self.x))
    }

    pub fn dim(&self) -> usize {
        self.v.len() * self.alg.dim()
    }

    /// `D(m) = (1⊗d)(m) + x·m`.
    pub fn apply_d(&self, m: &[Scalar]) -> Vec<Scalar> {
        let vs = self.vector_space();
        let e = self.end_space();
        vs.add(&vs.d(m), &e.compose(&self.x, &vs, m))
    }

    /// The differential as a sparse operator on the basis `v_p ⊗ a_k`.
    pub fn differential(&self) -> Vec<Sparse> {
        let vs = self.vector_space();
        (0..vs.dim())
            .map(|i| {
                let mut b = vs.zero();
                b[i] = Scalar::one();
                self.apply_d(&b).into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
            })
            .collect()
    }

    pub fn complex(&self) -> CochainComplex {
        super::algebra::complex_from_sparse(&self.vector_space().module(), &self.differential())
    }

    pub fn cohomology(&self) -> Result<CohomologyReport> {
        cohomology(&self.complex())
    }

    /// As a right dg module over the algebra.
    pub fn to_dg_module(&self) -> super::module::DgModule {
        let vs = self.vector_space();
        let na = self.alg.dim();
        let mut action = Vec::with_capacity(vs.dim());
        for i in 0..vs.dim() {
            let (p, _, k) = vs.split(i);
            let row: Vec<(usize, Sparse)> = self
                .alg
                .products_from(k)
                .iter()
                .map(|(j, e)| (*j, e.iter().map(|(kk, c)| (p * na + kk, c.clone())).collect()))
                .collect();
            action.push(row);
        }
        super::module::DgModule::from_parts(vs.module(), self.alg.clone(), action, self.differential())
            .expect("twisted modules are valid dg modules")
    }

    /// `M[k]`: degrees drop by `k` and the differential is multiplied by `(-1)^k`.
    pub fn shift(&self, k: i32) -> TwistedModule {
        let e = self.end_space();
        let x = e.reindex_source_shift(&self.x, k);
        let x = if k.rem_euclid(2) == 1 { e.neg(&x) } else { x };
        TwistedModule { v: self.v.shift(k), alg: self.alg.clone(), x }
    }

    pub fn is_mc(&self) -> bool {
        vec_ops::is_zero(&self.mc_residual())
    }
}

/// `Hom_A(M, N)` between twisted modules as `Hom(V, W) ⊗ A` with
/// `D f = d f + y∘f - (-1)^{|f|} f∘x`.
#[derive(Clone, Debug)]
pub struct TwistedHom {
    pub src: TwistedModule,
    pub tgt: TwistedModule,
    pub space: HomSpace,
}

impl TwistedHom {
    pub fn new(src: &TwistedModule, tgt: &TwistedModule) -> Result<Self> {
        if !Arc::ptr_eq(&src.alg, &tgt.alg) && src.alg.dim() != tgt.alg.dim() {
            return Err(Error::Invalid("twisted modules over different algebras".into()));
        }
        let space = HomSpace::new(src.v.clone(), tgt.v.clone(), src.alg.clone());
        Ok(TwistedHom { src: src.clone(), tgt: tgt.clone(), space })
    }

    pub fn apply_d(&self, f: &[Scalar]) -> Vec<Scalar> {
        let s = &self.space;
        let mut out = s.d(f);
        out = s.add(&out, &self.tgt.end_space().compose(&self.tgt.x, s, f));
        for (deg, part) in s.homogeneous_parts(f) {
            let fx = s.compose(&part, &self.src.end_space(), &self.src.x);
            out = if deg.rem_euclid(2) == 1 { s.add(&out, &fx) } else { s.sub(&out, &fx) };
        }
        out
    }

    pub fn differential(&self) -> Vec<Sparse> {
        (0..self.space.dim())
            .map(|i| {
                let mut b = self.space.zero();
                b[i] = Scalar::one();
                self.apply_d(&b).into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
            })
            .collect()
    }

    pub fn complex(&self) -> CochainComplex {
        super::algebra::complex_from_sparse(&self.space.module(), &self.differential())
    }

    pub fn is_closed(&self, f: &[Scalar]) -> bool {
        vec_ops::is_zero(&self.apply_d(f))
    }

    /// Matrix of the degree-`k` differential and the basis indices of its source and target.
    pub fn d_matrix(&self, k: i32) -> (ExactMatrix, Vec<usize>, Vec<usize>) {
        let m = self.space.module();
        let src = m.in_degree(k);
        let tgt = m.in_degree(k + 1);
        let mut pos = vec![usize::MAX; m.len()];
        for (p, &t) in tgt.iter().enumerate() {
            pos[t] = p;
        }
        let mut mat = ExactMatrix::zeros(self.space.ring(), tgt.len(), src.len());
        for (c, &j) in src.iter().enumerate() {
            let mut b = self.space.zero();
            b[j] = Scalar::one();
            for (i, v) in self.apply_d(&b).into_iter().enumerate() {
                if !v.is_zero() {
                    mat.set(pos[i], c, v);
                }
            }
        }
        (mat, src, tgt)
    }
}

/// Mapping cone `N ⊕ M[1]` of a closed degree-0 map `f: M → N`, with
/// `D(n, m) = (D_N n + f(m), -D_M m)`.
pub fn cone(f: &[Scalar], m: &TwistedModule, n: &TwistedModule) -> Result<TwistedModule> {
    let hom = TwistedHom::new(m, n)?;
    hom.space.expect_degree(f, 0)?;
    if !hom.is_closed(f) {
        return Err(Error::Invalid("cone of a map that is not closed".into()));
    }
    let ms = m.shift(1);
    let u = n.v.direct_sum(&ms.v, "N:", "M[1]:")?;
    let nn = n.v.len();
    let nm = m.v.len();
    let alg = m.alg.clone();
    let us = HomSpace::new(u.clone(), u.clone(), alg.clone());
    let mut x = us.zero();
    let na = alg.dim();
    let copy = |x: &mut Vec<Scalar>, blk: &[Scalar], bs: &HomSpace, qoff: usize, poff: usize| {
        for (i, c) in blk.iter().enumerate() {
            if !c.is_zero() {
                let (q, p, k) = bs.split(i);
                x[us.index(q + qoff, p + poff, k)] = c.clone();
            }
        }
    };
    copy(&mut x, &n.x, &n.end_space(), 0, 0);
    copy(&mut x, &ms.x, &ms.end_space(), nn, nn);
    let fs = HomSpace::new(ms.v.clone(), n.v.clone(), alg.clone());
    let fshift = hom.space.reindex_source_shift(f, 1);
    copy(&mut x, &fshift, &fs, 0, nn);
    let _ = (nm, na);
    TwistedModule::new(u, alg, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::algebra::{check_dga, endomorphism_dga};

    fn ground(r: Ring) -> Arc<DgAlgebra> {
        Arc::new(DgAlgebra::ground(r))
    }

    #[test]
    fn end_space_matches_endomorphism_dga() {
        // interval cochains as a small non-trivial algebra
        let r = Ring::Integers;
        let m = GradedModule::new(r, vec![("p".into(), 0), ("q".into(), 0), ("e".into(), 1)]).unwrap();
        let alg = DgAlgebra::new(
            m,
            vec![Scalar::one(), Scalar::one(), Scalar::zero()],
            vec![(0, 2, Scalar::from_int(-1)), (1, 2, Scalar::one())],
            vec![
                (0, 0, 0, Scalar::one()),
                (1, 1, 1, Scalar::one()),
                (0, 2, 2, Scalar::one()),
                (2, 1, 2, Scalar::one()),
            ],
        )
        .unwrap();
        assert!(check_dga(&alg).is_ok());
        let alg = Arc::new(alg);
        let v = GradedModule::with_degrees(r, &[0, -1]);
        let end = endomorphism_dga(&alg, &v).unwrap();
        assert!(check_dga(&end).is_ok());
        let hs = HomSpace::new(v.clone(), v.clone(), alg.clone());
        for i in 0..end.dim() {
            assert_eq!(end.degree(i), hs.degree(i));
            let b = end.basis(i);
            assert_eq!(end.d(&b), hs.d(&b));
            for j in 0..end.dim() {
                let c = end.basis(j);
                assert_eq!(end.mul(&b, &c), hs.compose(&b, &hs, &c));
            }
        }
    }

    #[test]
    fn cone_of_two_on_a_point() {
        let r = Ring::Integers;
        let a = ground(r);
        let v = GradedModule::uniform(r, 1, 0);
        let m = TwistedModule::untwisted(v.clone(), a.clone());
        let two = vec![Scalar::from_int(2)];
        let c = cone(&two, &m, &m).unwrap();
        let h = c.cohomology().unwrap();
        assert_eq!(h.degree(0).torsion, vec![num_bigint::BigInt::from(2)]);
        assert_eq!(h.degree(0).rank, 0);
        assert!(h.degree(-1).is_zero() && h.degree(1).is_zero());
    }
}
