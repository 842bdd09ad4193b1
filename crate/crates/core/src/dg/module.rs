use std::sync::Arc;

use super::algebra::{complex_from_sparse, DgAlgebra, Sparse};
use super::graded::{vec_ops, GradedModule};
use crate::error::{Error, Result};
use crate::linalg::{cohomology, kernel, solve_linear, CochainComplex, CohomologyReport, ExactMatrix, Scalar};

/// Finite right dg module over a dg algebra.
#[derive(Clone, Debug)]
pub struct DgModule {
    module: GradedModule,
    alg: Arc<DgAlgebra>,
    // action[i] = sorted (j, m_i · a_j)
    action: Vec<Vec<(usize, Sparse)>>,
    diff: Vec<Sparse>,
}

impl DgModule {
    pub fn from_parts(
        module: GradedModule,
        alg: Arc<DgAlgebra>,
        action: Vec<Vec<(usize, Sparse)>>,
        diff: Vec<Sparse>,
    ) -> Result<Self> {
        let n = module.len();
        if action.len() != n || diff.len() != n {
            return Err(Error::Dimension("module structure does not match the basis".into()));
        }
        for (i, e) in diff.iter().enumerate() {
            for (k, _) in e {
                if module.degree(*k) != module.degree(i) + 1 {
                    return Err(Error::Degree {
                        expected: module.degree(i) + 1,
                        found: format!("D({}) contains {}", module.label(i), module.label(*k)),
                    });
                }
            }
        }
        for (i, row) in action.iter().enumerate() {
            for (j, e) in row {
                for (k, _) in e {
                    if module.degree(*k) != module.degree(i) + alg.degree(*j) {
                        return Err(Error::Degree {
                            expected: module.degree(i) + alg.degree(*j),
                            found: format!("{}·{}", module.label(i), alg.label(*j)),
                        });
                    }
                }
            }
        }
        Ok(DgModule { module, alg, action, diff })
    }

    /// A complex of free modules over the ground ring, as a module over it.
    pub fn over_ground(module: GradedModule, diff: Vec<Sparse>) -> Result<Self> {
        let alg = Arc::new(DgAlgebra::ground(module.ring()));
        let action = (0..module.len()).map(|i| vec![(0usize, vec![(i, Scalar::one())])]).collect();
        Self::from_parts(module, alg, action, diff)
    }

    /// The algebra acting on itself from the right.
    pub fn regular(alg: Arc<DgAlgebra>) -> Self {
        let action = (0..alg.dim()).map(|i| alg.products_from(i).to_vec()).collect();
        let diff = (0..alg.dim()).map(|i| alg.d_basis(i).clone()).collect();
        DgModule { module: alg.module().clone(), alg, action, diff }
    }

    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn algebra(&self) -> &Arc<DgAlgebra> {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.module.len()
    }

    pub fn differential(&self) -> &[Sparse] {
        &self.diff
    }

    pub fn d(&self, m: &[Scalar]) -> Vec<Scalar> {
        let r = self.module.ring();
        let mut acc = vec_ops::zeros(self.dim());
        for (i, c) in m.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, v) in &self.diff[i] {
                acc[*k] = acc[*k].add(&c.mul(v));
            }
        }
        acc.into_iter().map(|s| r.norm(s)).collect()
    }

    pub fn act(&self, m: &[Scalar], a: &[Scalar]) -> Vec<Scalar> {
        let r = self.module.ring();
        let mut acc = vec_ops::zeros(self.dim());
        for (i, c) in m.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, e) in &self.action[i] {
                if a[*j].is_zero() {
                    continue;
                }
                let cc = c.mul(&a[*j]);
                for (k, v) in e {
                    acc[*k] = acc[*k].add(&cc.mul(v));
                }
            }
        }
        acc.into_iter().map(|s| r.norm(s)).collect()
    }

    pub fn basis(&self, i: usize) -> Vec<Scalar> {
        vec_ops::unit(self.dim(), i)
    }

    pub fn complex(&self) -> CochainComplex {
        complex_from_sparse(&self.module, &self.diff)
    }

    pub fn cohomology(&self) -> Result<CohomologyReport> {
        cohomology(&self.complex())
    }

    /// Violated module axioms: `D² = 0`, Leibniz, `(m a) b = m (ab)`, `m·1 = m`.
    pub fn check(&self) -> Vec<String> {
        let a = &self.alg;
        let r = self.module.ring();
        let mut out = Vec::new();
        for i in 0..self.dim() {
            let m = self.basis(i);
            if !vec_ops::is_zero(&self.d(&self.d(&m))) {
                out.push(format!("D^2({}) != 0", self.module.label(i)));
            }
            if self.act(&m, a.unit()) != m {
                out.push(format!("{}·1 != {}", self.module.label(i), self.module.label(i)));
            }
            for j in 0..a.dim() {
                let x = a.basis(j);
                let lhs = self.d(&self.act(&m, &x));
                let mut rhs = self.act(&self.d(&m), &x);
                let mdx = self.act(&m, &a.d(&x));
                rhs = if self.module.degree(i).rem_euclid(2) == 1 {
                    vec_ops::sub(r, &rhs, &mdx)
                } else {
                    vec_ops::add(r, &rhs, &mdx)
                };
                if lhs != rhs {
                    out.push(format!("Leibniz fails on ({}, {})", self.module.label(i), a.label(j)));
                }
                for (k, _) in a.products_from(j) {
                    let y = a.basis(*k);
                    if self.act(&self.act(&m, &x), &y) != self.act(&m, &a.mul(&x, &y)) {
                        out.push(format!(
                            "associativity fails on ({}, {}, {})",
                            self.module.label(i),
                            a.label(j),
                            a.label(*k)
                        ));
                    }
                }
            }
        }
        out
    }

    /// `M[k]`: degrees drop by `k`, differential gains `(-1)^k`, action unchanged.
    pub fn shift(&self, k: i32) -> DgModule {
        let r = self.module.ring();
        let diff = if k.rem_euclid(2) == 1 {
            self.diff.iter().map(|e| e.iter().map(|(i, c)| (*i, r.neg(c))).collect()).collect()
        } else {
            self.diff.clone()
        };
        DgModule { module: self.module.shift(k), alg: self.alg.clone(), action: self.action.clone(), diff }
    }
}

/// `Hom_A(M, N)` as a complex over the ground ring, with the maps realizing each basis element.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub complex: DgModule,
    /// `maps[i]` is the matrix (rows: N basis, columns: M basis) of basis element `i`.
    pub maps: Vec<ExactMatrix>,
}

impl HomComplex {
    /// Coordinates of an A-linear map in the chosen basis.
    pub fn coordinates(&self, f: &ExactMatrix, degree: i32) -> Result<Option<Vec<Scalar>>> {
        let idx = self.complex.module().in_degree(degree);
        let r = f.ring();
        let rows = f.rows() * f.cols();
        let mut a = ExactMatrix::zeros(r, rows, idx.len());
        for (c, &i) in idx.iter().enumerate() {
            let m = &self.maps[i];
            for p in 0..m.rows() {
                for q in 0..m.cols() {
                    a.set(p * m.cols() + q, c, m.get(p, q).clone());
                }
            }
        }
        let mut b = Vec::with_capacity(rows);
        for p in 0..f.rows() {
            for q in 0..f.cols() {
                b.push(f.get(p, q).clone());
            }
        }
        Ok(solve_linear(&a, &b)?.map(|s| {
            let mut v = vec_ops::zeros(self.complex.dim());
            for (c, &i) in idx.iter().enumerate() {
                v[i] = s.particular[c].clone();
            }
            v
        }))
    }

    pub fn map_of(&self, v: &[Scalar]) -> ExactMatrix {
        let mut acc = self.maps[0].scale(&Scalar::zero());
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.maps[i].scale(c)).expect("same shape");
            }
        }
        acc
    }
}

fn module_matrix(m: &DgModule, op: impl Fn(&[Scalar]) -> Vec<Scalar>) -> ExactMatrix {
    let n = m.dim();
    let mut mat = ExactMatrix::zeros(m.module().ring(), n, n);
    for j in 0..n {
        for (i, v) in op(&m.basis(j)).into_iter().enumerate() {
            if !v.is_zero() {
                mat.set(i, j, v);
            }
        }
    }
    mat
}

/// Right A-linear maps `M → N` of every degree, with `d(f) = D_N f - (-1)^{|f|} f D_M`.
pub fn hom_complex(m: &DgModule, n: &DgModule) -> Result<HomComplex> {
    if m.alg.dim() != n.alg.dim() || m.module.ring() != n.module.ring() {
        return Err(Error::Invalid("modules over different algebras".into()));
    }
    let r = m.module.ring();
    let a = &m.alg;
    let (nm, nn) = (m.dim(), n.dim());
    let (Some((mlo, mhi)), Some((nlo, nhi))) = (m.module.degree_range(), n.module.degree_range()) else {
        let module = GradedModule::zero(r);
        return Ok(HomComplex { complex: DgModule::over_ground(module, vec![])?, maps: vec![] });
    };
    let dm = module_matrix(m, |x| m.d(x));
    let dn = module_matrix(n, |x| n.d(x));
    let mut maps: Vec<(i32, ExactMatrix)> = Vec::new();
    for k in (nlo - mhi)..=(nhi - mlo) {
        // unknowns: entries f[q][p] with deg n_q - deg m_p = k
        let vars: Vec<(usize, usize)> = (0..nn)
            .flat_map(|q| (0..nm).map(move |p| (q, p)))
            .filter(|&(q, p)| n.module.degree(q) - m.module.degree(p) == k)
            .collect();
        if vars.is_empty() {
            continue;
        }
        let mut var_of = std::collections::HashMap::new();
        for (v, &(q, p)) in vars.iter().enumerate() {
            var_of.insert((q, p), v);
        }
        // f(m_p · a_j) = f(m_p) · a_j, one equation per output coordinate
        let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
        for p in 0..nm {
            for j in 0..a.dim() {
                let mpa = m.act(&m.basis(p), &a.basis(j));
                let mut eq: Vec<std::collections::BTreeMap<usize, Scalar>> = vec![Default::default(); nn];
                for (p2, c) in mpa.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for q in 0..nn {
                        if let Some(&v) = var_of.get(&(q, p2)) {
                            let e = eq[q].entry(v).or_insert_with(Scalar::zero);
                            *e = r.add(e, c);
                        }
                    }
                }
                for q in 0..nn {
                    if let Some(&v) = var_of.get(&(q, p)) {
                        let nqa = n.act(&n.basis(q), &a.basis(j));
                        for (t, c) in nqa.iter().enumerate() {
                            if !c.is_zero() {
                                let e = eq[t].entry(v).or_insert_with(Scalar::zero);
                                *e = r.sub(e, c);
                            }
                        }
                    }
                }
                for e in eq {
                    let row: Vec<(usize, Scalar)> = e.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
        let mut cm = ExactMatrix::zeros(r, rows.len(), vars.len());
        for (i, row) in rows.iter().enumerate() {
            for (v, c) in row {
                cm.set(i, *v, c.clone());
            }
        }
        for kv in kernel(&cm)? {
            let mut f = ExactMatrix::zeros(r, nn, nm);
            for (v, c) in kv.iter().enumerate() {
                if !c.is_zero() {
                    let (q, p) = vars[v];
                    f.set(q, p, c.clone());
                }
            }
            maps.push((k, f));
        }
    }
    let basis: Vec<(String, i32)> = maps.iter().enumerate().map(|(i, (k, _))| (format!("f{i}"), *k)).collect();
    let module = GradedModule::new(r, basis)?;
    let mats: Vec<ExactMatrix> = maps.into_iter().map(|(_, f)| f).collect();
    let mut hc =
        HomComplex { complex: DgModule::over_ground(module.clone(), vec![Vec::new(); mats.len()])?, maps: mats };
    let mut diff = Vec::with_capacity(hc.maps.len());
    for (i, f) in hc.maps.iter().enumerate() {
        let k = module.degree(i);
        let df = dn.mul(f)?;
        let fd = f.mul(&dm)?;
        let df = if k.rem_euclid(2) == 1 { df.add(&fd)? } else { df.sub(&fd)? };
        if df.is_zero() {
            diff.push(Vec::new());
            continue;
        }
        let coords = hc.coordinates(&df, k + 1)?.ok_or_else(|| Error::Internal("d(f) is not A-linear".into()))?;
        diff.push(coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect());
    }
    hc.complex = DgModule::over_ground(module, diff)?;
    Ok(hc)
}

/// Free hull `G(L) = L ⊕ L[-1]` (formal symbols `x + dy`) with `D(x + dy) = dx`
/// and `(x + dy)·a = xa + d(ya) - (-1)^{|y|} y·da`; the differential of `l` is ignored.
pub fn free_hull(l: &DgModule) -> Result<DgModule> {
    let n = l.dim();
    let r = l.module.ring();
    let a = &l.alg;
    let mut basis: Vec<(String, i32)> = l.module.basis_pairs();
    basis.extend(l.module.basis_pairs().into_iter().map(|(s, d)| (format!("d({s})"), d + 1)));
    let module = GradedModule::new(r, basis)?;
    let mut action = Vec::with_capacity(2 * n);
    for i in 0..n {
        action.push(l.action[i].clone());
    }
    for i in 0..n {
        let odd = l.module.degree(i).rem_euclid(2) == 1;
        let mut row = Vec::new();
        for j in 0..a.dim() {
            let ya = l.act(&l.basis(i), &a.basis(j));
            let yda = l.act(&l.basis(i), &a.d(&a.basis(j)));
            let mut e: Sparse = Vec::new();
            for (k, c) in yda.iter().enumerate() {
                if !c.is_zero() {
                    e.push((k, if odd { c.clone() } else { r.neg(c) }));
                }
            }
            for (k, c) in ya.iter().enumerate() {
                if !c.is_zero() {
                    e.push((n + k, c.clone()));
                }
            }
            if !e.is_empty() {
                row.push((j, e));
            }
        }
        action.push(row);
    }
    let mut diff: Vec<Sparse> = (0..n).map(|i| vec![(n + i, Scalar::one())]).collect();
    diff.extend((0..n).map(|_| Vec::new()));
    DgModule::from_parts(module, a.clone(), action, diff)
}

/// Free graded module `⊕ A[-d_i]` on generators of the given degrees (right action only).
pub fn free_module(alg: Arc<DgAlgebra>, generator_degrees: &[i32]) -> Result<DgModule> {
    let na = alg.dim();
    let r = alg.ring();
    let mut basis = Vec::new();
    let mut action = Vec::new();
    for (g, &dg) in generator_degrees.iter().enumerate() {
        for k in 0..na {
            basis.push((format!("g{g}⊗{}", alg.label(k)), dg + alg.degree(k)));
            action.push(
                alg.products_from(k)
                    .iter()
                    .map(|(j, e)| (*j, e.iter().map(|(kk, c)| (g * na + kk, c.clone())).collect()))
                    .collect(),
            );
        }
    }
    let module = GradedModule::new(r, basis)?;
    let diff = vec![Vec::new(); module.len()];
    DgModule::from_parts(module, alg, action, diff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Ring;

    fn interval(r: Ring) -> Arc<DgAlgebra> {
        let m = GradedModule::new(r, vec![("p".into(), 0), ("q".into(), 0), ("e".into(), 1)]).unwrap();
        Arc::new(
            DgAlgebra::new(
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
            .unwrap(),
        )
    }

    #[test]
    fn hom_of_regular_module_is_the_algebra() {
        let a = interval(Ring::Integers);
        let m = DgModule::regular(a.clone());
        assert!(m.check().is_empty());
        let h = hom_complex(&m, &m).unwrap();
        for k in -1..=1 {
            assert_eq!(h.complex.module().in_degree(k).len(), a.module().in_degree(k).len());
        }
        // evaluation at the unit is a chain map onto A
        let eval = |f: &ExactMatrix| f.mul_vec(a.unit()).unwrap();
        for i in 0..h.maps.len() {
            let df = h.map_of(&h.complex.d(&h.complex.basis(i)));
            assert_eq!(eval(&df), a.d(&eval(&h.maps[i])));
        }
        assert!(h.complex.cohomology().unwrap().same_groups(&DgModule::regular(a).cohomology().unwrap()));
    }

    #[test]
    fn identity_is_closed() {
        let a = interval(Ring::Rationals);
        let m = DgModule::regular(a.clone());
        let h = hom_complex(&m, &m).unwrap();
        let id = ExactMatrix::identity(Ring::Rationals, m.dim());
        let v = h.coordinates(&id, 0).unwrap().unwrap();
        assert!(vec_ops::is_zero(&h.complex.d(&v)));
    }

    #[test]
    fn free_hull_of_free_module() {
        let a = interval(Ring::Integers);
        let l = free_module(a.clone(), &[0, 1]).unwrap();
        let g = free_hull(&l).unwrap();
        assert!(g.check().is_empty(), "{:?}", g.check());
        assert_eq!(g.dim(), 2 * l.dim());
        assert!(g.cohomology().unwrap().is_zero());
        let empty = free_module(a, &[]).unwrap();
        assert_eq!(free_hull(&empty).unwrap().dim(), 0);
    }
}
