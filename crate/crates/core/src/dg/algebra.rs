use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::graded::{vec_ops, GradedModule};
use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Ring, Scalar};

/// Sparse vector as `(basis index, coefficient)` pairs.
pub type Sparse = Vec<(usize, Scalar)>;

/// Weight filtration declaring that basis elements of weight above `bound`
/// have been discarded. Axioms are then only checked where no discarded
/// term can contribute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub weights: Vec<u32>,
    pub bound: u32,
}

/// Finite dg algebra given by structure constants.
#[derive(Clone)]
pub struct DgAlgebra {
    module: GradedModule,
    unit: Vec<Scalar>,
    diff: Vec<Sparse>,
    // mult[i] = sorted list of (j, b_i * b_j)
    mult: Vec<Vec<(usize, Sparse)>>,
    truncation: Option<Truncation>,
}

fn merge_sparse(r: Ring, entries: impl IntoIterator<Item = (usize, Scalar)>) -> Sparse {
    let mut m: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (k, c) in entries {
        let e = m.entry(k).or_insert_with(Scalar::zero);
        *e = r.add(e, &c);
    }
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn dense_to_sparse(v: &[Scalar]) -> Sparse {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

impl DgAlgebra {
    /// Build from `d(b_from)` entries and `b_left * b_right` entries; degrees are validated.
    pub fn new(
        module: GradedModule,
        unit: Vec<Scalar>,
        diff: Vec<(usize, usize, Scalar)>,
        mult: Vec<(usize, usize, usize, Scalar)>,
    ) -> Result<Self> {
        let n = module.len();
        let r = module.ring();
        let mut dl: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
        for (from, to, c) in diff {
            if from >= n || to >= n {
                return Err(Error::Invalid("differential entry out of range".into()));
            }
            dl[from].push((to, r.try_element(&c)?));
        }
        let mut ml: Vec<BTreeMap<usize, Vec<(usize, Scalar)>>> = vec![BTreeMap::new(); n];
        for (a, b, k, c) in mult {
            if a >= n || b >= n || k >= n {
                return Err(Error::Invalid("product entry out of range".into()));
            }
            ml[a].entry(b).or_default().push((k, r.try_element(&c)?));
        }
        let diff: Vec<Sparse> = dl.into_iter().map(|e| merge_sparse(r, e)).collect();
        let mult: Vec<Vec<(usize, Sparse)>> = ml
            .into_iter()
            .map(|m| m.into_iter().map(|(j, e)| (j, merge_sparse(r, e))).filter(|(_, e)| !e.is_empty()).collect())
            .collect();
        let unit: Vec<Scalar> = unit.iter().map(|c| r.try_element(c)).collect::<Result<_>>()?;
        Self::from_parts(module, unit, diff, mult, None)
    }

    pub(crate) fn from_parts(
        module: GradedModule,
        unit: Vec<Scalar>,
        diff: Vec<Sparse>,
        mult: Vec<Vec<(usize, Sparse)>>,
        truncation: Option<Truncation>,
    ) -> Result<Self> {
        let n = module.len();
        if unit.len() != n || diff.len() != n || mult.len() != n {
            return Err(Error::Dimension("structure data does not match the basis".into()));
        }
        module.expect_degree(&unit, 0)?;
        for (i, e) in diff.iter().enumerate() {
            for (k, _) in e {
                if module.degree(*k) != module.degree(i) + 1 {
                    return Err(Error::Degree {
                        expected: module.degree(i) + 1,
                        found: format!("d({}) contains {}", module.label(i), module.label(*k)),
                    });
                }
            }
        }
        for (i, row) in mult.iter().enumerate() {
            for (j, e) in row {
                for (k, _) in e {
                    if module.degree(*k) != module.degree(i) + module.degree(*j) {
                        return Err(Error::Degree {
                            expected: module.degree(i) + module.degree(*j),
                            found: format!("{}*{} contains {}", module.label(i), module.label(*j), module.label(*k)),
                        });
                    }
                }
            }
        }
        if let Some(t) = &truncation {
            if t.weights.len() != n {
                return Err(Error::Dimension("truncation weights do not match the basis".into()));
            }
        }
        Ok(DgAlgebra { module, unit, diff, mult, truncation })
    }

    /// The ground ring as a dg algebra with basis `{1}`.
    pub fn ground(ring: Ring) -> Self {
        let m = GradedModule::new(ring, vec![("1".into(), 0)]).expect("single label");
        DgAlgebra::new(m, vec![Scalar::one()], vec![], vec![(0, 0, 0, Scalar::one())]).expect("valid")
    }

    pub fn with_truncation(mut self, t: Truncation) -> Result<Self> {
        if t.weights.len() != self.dim() {
            return Err(Error::Dimension("truncation weights do not match the basis".into()));
        }
        self.truncation = Some(t);
        Ok(self)
    }

    pub fn truncation(&self) -> Option<&Truncation> {
        self.truncation.as_ref()
    }

    pub fn ring(&self) -> Ring {
        self.module.ring()
    }

    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn dim(&self) -> usize {
        self.module.len()
    }

    pub fn label(&self, i: usize) -> &str {
        self.module.label(i)
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.module.degree(i)
    }

    pub fn index_of(&self, l: &str) -> Option<usize> {
        self.module.index_of(l)
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn one(&self) -> Vec<Scalar> {
        self.unit.clone()
    }

    pub fn zero(&self) -> Vec<Scalar> {
        vec_ops::zeros(self.dim())
    }

    pub fn basis(&self, i: usize) -> Vec<Scalar> {
        vec_ops::unit(self.dim(), i)
    }

    /// Element from `(label, coefficient)` pairs.
    pub fn element(&self, terms: &[(&str, i64)]) -> Result<Vec<Scalar>> {
        let t: Vec<(&str, Scalar)> = terms.iter().map(|(l, c)| (*l, Scalar::from_int(*c))).collect();
        self.module.vector(&t)
    }

    pub fn d_basis(&self, i: usize) -> &Sparse {
        &self.diff[i]
    }

    /// `b_i * b_j` as a sparse vector.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        match self.mult[i].binary_search_by_key(&j, |(k, _)| *k) {
            Ok(p) => &self.mult[i][p].1,
            Err(_) => &[],
        }
    }

    pub fn products_from(&self, i: usize) -> &[(usize, Sparse)] {
        &self.mult[i]
    }

    pub fn d(&self, x: &[Scalar]) -> Vec<Scalar> {
        let r = self.ring();
        let mut acc = self.zero();
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, dk) in &self.diff[i] {
                acc[*k] = acc[*k].add(&c.mul(dk));
            }
        }
        acc.into_iter().map(|s| r.norm(s)).collect()
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let r = self.ring();
        let mut acc = self.zero();
        let ynz: Vec<usize> = (0..y.len()).filter(|&j| !y[j].is_zero()).collect();
        if ynz.is_empty() {
            return acc;
        }
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let row = &self.mult[i];
            if ynz.len() < row.len() {
                for &j in &ynz {
                    if let Ok(p) = row.binary_search_by_key(&j, |(k, _)| *k) {
                        let c = xi.mul(&y[j]);
                        for (k, ck) in &row[p].1 {
                            acc[*k] = acc[*k].add(&c.mul(ck));
                        }
                    }
                }
            } else {
                for (j, res) in row {
                    if y[*j].is_zero() {
                        continue;
                    }
                    let c = xi.mul(&y[*j]);
                    for (k, ck) in res {
                        acc[*k] = acc[*k].add(&c.mul(ck));
                    }
                }
            }
        }
        acc.into_iter().map(|s| r.norm(s)).collect()
    }

    pub fn add(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        vec_ops::add(self.ring(), x, y)
    }

    pub fn sub(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        vec_ops::sub(self.ring(), x, y)
    }

    pub fn neg(&self, x: &[Scalar]) -> Vec<Scalar> {
        vec_ops::neg(self.ring(), x)
    }

    pub fn scale(&self, c: &Scalar, x: &[Scalar]) -> Vec<Scalar> {
        vec_ops::scale(self.ring(), c, x)
    }

    /// `b ↦ (-1)^{k|b|} b` applied termwise.
    pub fn parity(&self, x: &[Scalar], k: i32) -> Vec<Scalar> {
        let r = self.ring();
        x.iter()
            .enumerate()
            .map(|(i, c)| if (k * self.degree(i)).rem_euclid(2) == 1 { r.neg(c) } else { c.clone() })
            .collect()
    }

    /// Split into homogeneous components.
    pub fn homogeneous_parts(&self, x: &[Scalar]) -> Vec<(i32, Vec<Scalar>)> {
        let mut parts: BTreeMap<i32, Vec<Scalar>> = BTreeMap::new();
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                parts.entry(self.degree(i)).or_insert_with(|| self.zero())[i] = c.clone();
            }
        }
        parts.into_iter().collect()
    }

    /// Graded commutator `[x, y] = xy - (-1)^{|x||y|} yx`, bilinear in homogeneous parts.
    pub fn commutator(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut acc = self.zero();
        let xs = self.homogeneous_parts(x);
        let ys = self.homogeneous_parts(y);
        for (dx, xp) in &xs {
            for (dy, yp) in &ys {
                let xy = self.mul(xp, yp);
                let yx = self.mul(yp, xp);
                let term = if (dx * dy).rem_euclid(2) == 1 { self.add(&xy, &yx) } else { self.sub(&xy, &yx) };
                acc = self.add(&acc, &term);
            }
        }
        acc
    }

    pub fn degree_of(&self, x: &[Scalar]) -> Result<Option<i32>> {
        self.module.degree_of(x)
    }

    pub fn expect_degree(&self, x: &[Scalar], d: i32) -> Result<()> {
        self.module.expect_degree(x, d)
    }

    pub fn format(&self, x: &[Scalar]) -> String {
        self.module.format(x)
    }

    pub fn format_sparse(&self, x: &Sparse) -> String {
        let mut v = self.zero();
        for (k, c) in x {
            v[*k] = c.clone();
        }
        self.module.format(&v)
    }

    /// `d` on a sparse vector.
    pub fn sp_d(&self, x: &Sparse) -> Sparse {
        merge_sparse(self.ring(), x.iter().flat_map(|(i, c)| self.diff[*i].iter().map(move |(k, v)| (*k, c.mul(v)))))
    }

    /// Product of sparse vectors.
    pub fn sp_mul(&self, x: &Sparse, y: &Sparse) -> Sparse {
        let mut out = Vec::new();
        for (i, c) in x {
            for (j, e) in y {
                let cc = c.mul(e);
                for (k, v) in self.basis_product(*i, *j) {
                    out.push((*k, cc.mul(v)));
                }
            }
        }
        merge_sparse(self.ring(), out)
    }

    /// Matrix of `y ↦ g·y` (or `y ↦ y·g`) restricted to the given source and target indices.
    pub fn mult_matrix(&self, g: &[Scalar], left: bool, src: &[usize], tgt: &[usize]) -> ExactMatrix {
        let r = self.ring();
        let mut pos = vec![usize::MAX; self.dim()];
        for (p, &t) in tgt.iter().enumerate() {
            pos[t] = p;
        }
        let mut m = ExactMatrix::zeros(r, tgt.len(), src.len());
        for (c, &j) in src.iter().enumerate() {
            let b = self.basis(j);
            let prod = if left { self.mul(g, &b) } else { self.mul(&b, g) };
            for (k, v) in prod.iter().enumerate() {
                if !v.is_zero() {
                    debug_assert!(pos[k] != usize::MAX, "product leaves the target subspace");
                    if pos[k] != usize::MAX {
                        m.set(pos[k], c, v.clone());
                    }
                }
            }
        }
        m
    }

    /// Two-sided inverse of a degree-0 element, found by a linear solve in degree 0.
    pub fn inverse(&self, g: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        self.expect_degree(g, 0)?;
        let deg0 = self.module.in_degree(0);
        let lm = self.mult_matrix(g, true, &deg0, &deg0);
        let one: Vec<Scalar> = deg0.iter().map(|&i| self.unit[i].clone()).collect();
        let Some(sol) = crate::linalg::solve_linear(&lm, &one)? else {
            return Ok(None);
        };
        let mut h = self.zero();
        for (p, &i) in deg0.iter().enumerate() {
            h[i] = sol.particular[p].clone();
        }
        if self.mul(&h, g) != self.unit || self.mul(g, &h) != self.unit {
            return Ok(None);
        }
        Ok(Some(h))
    }

    /// Algebra with the same product and unit and a replaced differential.
    pub fn with_differential(&self, diff: Vec<Sparse>) -> Result<Self> {
        Self::from_parts(self.module.clone(), self.unit.clone(), diff, self.mult.clone(), self.truncation.clone())
    }

    /// Differential given by a function on basis elements.
    pub fn differential_from(&self, f: impl Fn(usize) -> Vec<Scalar>) -> Vec<Sparse> {
        (0..self.dim()).map(|i| dense_to_sparse(&f(i))).collect()
    }

    /// Differential restricted to `A^k → A^{k+1}` as a matrix.
    pub fn d_matrix(&self, k: i32) -> ExactMatrix {
        let src = self.module.in_degree(k);
        let tgt = self.module.in_degree(k + 1);
        let mut pos = vec![usize::MAX; self.dim()];
        for (p, &t) in tgt.iter().enumerate() {
            pos[t] = p;
        }
        let mut m = ExactMatrix::zeros(self.ring(), tgt.len(), src.len());
        for (c, &j) in src.iter().enumerate() {
            for (k2, v) in &self.diff[j] {
                m.set(pos[*k2], c, v.clone());
            }
        }
        m
    }

    /// The underlying cochain complex.
    pub fn complex(&self) -> crate::linalg::CochainComplex {
        complex_from_sparse(&self.module, &self.diff)
    }

    /// Same algebra over another ring (entries reduced).
    pub fn change_ring(&self, ring: Ring) -> Result<Self> {
        let module = GradedModule::new(ring, self.module.basis_pairs())?;
        let conv = |s: &Sparse| -> Result<Sparse> {
            Ok(s.iter()
                .map(|(k, c)| Ok((*k, ring.try_element(c)?)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .collect())
        };
        let diff = self.diff.iter().map(conv).collect::<Result<_>>()?;
        let mult = self
            .mult
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(j, e)| Ok((*j, conv(e)?)))
                    .collect::<Result<Vec<_>>>()
                    .map(|v| v.into_iter().filter(|(_, e)| !e.is_empty()).collect())
            })
            .collect::<Result<_>>()?;
        let unit = self.unit.iter().map(|c| ring.try_element(c)).collect::<Result<_>>()?;
        Self::from_parts(module, unit, diff, mult, self.truncation.clone())
    }

    /// Opposite algebra: `a ·op b = (-1)^{|a||b|} b a`, same differential.
    pub fn opposite(&self) -> Result<Self> {
        let mult: Vec<(usize, usize, usize, Scalar)> = self
            .mult_entries()
            .into_iter()
            .map(|(i, j, k, c)| {
                let odd = (self.degree(i) * self.degree(j)).rem_euclid(2) == 1;
                (j, i, k, if odd { c.neg() } else { c })
            })
            .collect();
        let op = DgAlgebra::new(self.module.clone(), self.unit.clone(), self.diff_entries(), mult)?;
        match &self.truncation {
            Some(t) => op.with_truncation(t.clone()),
            None => Ok(op),
        }
    }

    /// Structure constants as `(left, right, result, coefficient)`.
    pub fn mult_entries(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for (i, row) in self.mult.iter().enumerate() {
            for (j, e) in row {
                for (k, c) in e {
                    out.push((i, *j, *k, c.clone()));
                }
            }
        }
        out
    }

    pub fn diff_entries(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out = Vec::new();
        for (i, e) in self.diff.iter().enumerate() {
            for (k, c) in e {
                out.push((i, *k, c.clone()));
            }
        }
        out
    }

    pub fn to_json(&self) -> AlgebraJson {
        let l = |i: usize| self.label(i).to_string();
        let unit = match dense_to_sparse(&self.unit).as_slice() {
            [(i, c)] if c.is_one() => UnitJson::Label(l(*i)),
            terms => UnitJson::Terms(terms.iter().map(|(i, c)| (l(*i), c.clone())).collect()),
        };
        AlgebraJson {
            ring: self.ring(),
            basis: self.module.basis_pairs(),
            unit,
            diff: self.diff_entries().into_iter().map(|(a, b, c)| (l(a), l(b), c)).collect(),
            mult: self.mult_entries().into_iter().map(|(a, b, k, c)| (l(a), l(b), l(k), c)).collect(),
            truncation: self.truncation.as_ref().map(|t| TruncationJson {
                weights: (0..self.dim()).map(|i| (l(i), t.weights[i])).collect(),
                bound: t.bound,
            }),
        }
    }

    pub fn from_json(j: &AlgebraJson) -> Result<Self> {
        let module = GradedModule::new(j.ring, j.basis.clone())?;
        let idx = |s: &str| module.index_of(s).ok_or_else(|| Error::Invalid(format!("unknown basis label {s:?}")));
        let mut unit = vec_ops::zeros(module.len());
        match &j.unit {
            UnitJson::Label(s) => unit[idx(s)?] = Scalar::one(),
            UnitJson::Terms(t) => {
                for (s, c) in t {
                    unit[idx(s)?] = c.clone();
                }
            }
        }
        let diff = j.diff.iter().map(|(a, b, c)| Ok((idx(a)?, idx(b)?, c.clone()))).collect::<Result<_>>()?;
        let mult =
            j.mult.iter().map(|(a, b, k, c)| Ok((idx(a)?, idx(b)?, idx(k)?, c.clone()))).collect::<Result<_>>()?;
        let mut alg = DgAlgebra::new(module.clone(), unit, diff, mult)?;
        if let Some(t) = &j.truncation {
            let mut w = vec![0; module.len()];
            for (s, v) in &t.weights {
                w[idx(s)?] = *v;
            }
            alg = alg.with_truncation(Truncation { weights: w, bound: t.bound })?;
        }
        Ok(alg)
    }
}

/// Cochain complex spanned by a graded basis with a sparse differential.
pub(crate) fn complex_from_sparse(module: &GradedModule, diff: &[Sparse]) -> crate::linalg::CochainComplex {
    let ring = module.ring();
    let Some((lo, hi)) = module.degree_range() else {
        return crate::linalg::CochainComplex { ring, start: 0, dims: vec![0], d: vec![] };
    };
    let by_deg: Vec<Vec<usize>> = (lo..=hi).map(|k| module.in_degree(k)).collect();
    let mut pos = vec![0usize; module.len()];
    for idx in &by_deg {
        for (p, &i) in idx.iter().enumerate() {
            pos[i] = p;
        }
    }
    let mut d = Vec::new();
    for k in 0..by_deg.len() - 1 {
        let mut m = ExactMatrix::zeros(ring, by_deg[k + 1].len(), by_deg[k].len());
        for (c, &j) in by_deg[k].iter().enumerate() {
            for (t, v) in &diff[j] {
                m.set(pos[*t], c, v.clone());
            }
        }
        d.push(m);
    }
    crate::linalg::CochainComplex { ring, start: lo, dims: by_deg.iter().map(|v| v.len()).collect(), d }
}

impl fmt::Debug for DgAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DgAlgebra(dim {}, over {})", self.dim(), self.ring())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UnitJson {
    Label(String),
    Terms(Vec<(String, Scalar)>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TruncationJson {
    pub weights: Vec<(String, u32)>,
    pub bound: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub ring: Ring,
    pub basis: Vec<(String, i32)>,
    pub unit: UnitJson,
    #[serde(default)]
    pub diff: Vec<(String, String, Scalar)>,
    #[serde(default)]
    pub mult: Vec<(String, String, String, Scalar)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<TruncationJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    DSquared,
    Leibniz,
    Associativity,
    LeftUnit,
    RightUnit,
    UnitClosed,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<String>,
    pub residual: String,
}

/// Result of `check_dga`.
#[derive(Clone, Debug, Serialize)]
pub struct DgaReport {
    pub violations: Vec<Violation>,
    pub checked: usize,
    pub not_checked: usize,
}

impl DgaReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, axiom: Axiom, witness: &[&str]) -> bool {
        self.violations
            .iter()
            .any(|v| v.axiom == axiom && v.witness.iter().map(|s| s.as_str()).eq(witness.iter().copied()))
    }
}

/// Verify `d² = 0`, the Leibniz rule, associativity and the unit laws on basis elements.
pub fn check_dga(a: &DgAlgebra) -> DgaReport {
    let n = a.dim();
    let mut violations = Vec::new();
    let mut checked = 0usize;
    let mut not_checked = 0usize;
    let (weights, bound, raise, additive) = match a.truncation() {
        Some(t) => {
            let mut raise = 0i64;
            for i in 0..n {
                for (k, _) in a.d_basis(i) {
                    raise = raise.max(t.weights[*k] as i64 - t.weights[i] as i64);
                }
            }
            let additive = (0..n).all(|i| {
                a.products_from(i)
                    .iter()
                    .all(|(j, e)| e.iter().all(|(k, _)| t.weights[*k] == t.weights[i] + t.weights[*j]))
            });
            (t.weights.clone(), t.bound as i64, raise, additive)
        }
        None => (vec![0; n], i64::MAX / 4, 0, true),
    };
    let w = |i: usize| weights[i] as i64;
    let lab = |i: usize| a.label(i).to_string();

    let unit_sp = |i: usize| -> Sparse { vec![(i, Scalar::one())] };
    for i in 0..n {
        if w(i) + 2 * raise > bound {
            not_checked += 1;
            continue;
        }
        checked += 1;
        let dd = a.sp_d(&a.sp_d(&unit_sp(i)));
        if !dd.is_empty() {
            violations.push(Violation {
                axiom: Axiom::DSquared,
                witness: vec![lab(i)],
                residual: a.format_sparse(&dd),
            });
        }
    }

    let mut by_weight: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        by_weight.entry(w(i)).or_default().push(i);
    }
    let r = a.ring();
    for i in 0..n {
        let x = unit_sp(i);
        let dx = a.sp_d(&x);
        let odd = a.degree(i).rem_euclid(2) == 1;
        for (&wj, js) in &by_weight {
            if w(i) + wj + raise > bound {
                not_checked += js.len();
                continue;
            }
            for &j in js {
                checked += 1;
                let y = unit_sp(j);
                let lhs = a.sp_d(&a.sp_mul(&x, &y));
                let r1 = a.sp_mul(&dx, &y);
                let xdy = a.sp_mul(&x, &a.sp_d(&y));
                let terms = lhs
                    .into_iter()
                    .chain(r1.into_iter().map(|(k, c)| (k, r.neg(&c))))
                    .chain(xdy.into_iter().map(|(k, c)| (k, if odd { c } else { r.neg(&c) })));
                let res = merge_sparse(r, terms);
                if !res.is_empty() {
                    violations.push(Violation {
                        axiom: Axiom::Leibniz,
                        witness: vec![lab(i), lab(j)],
                        residual: a.format_sparse(&res),
                    });
                }
            }
        }
    }

    // associativity: only triples where some partial product is nonzero can fail
    let mut seen = std::collections::HashSet::new();
    let mut check_triple = |i: usize, j: usize, k: usize, violations: &mut Vec<Violation>| {
        if !seen.insert((i, j, k)) {
            return;
        }
        let l = a.sp_mul(&a.basis_product(i, j).to_vec(), &unit_sp(k));
        let rr = a.sp_mul(&unit_sp(i), &a.basis_product(j, k).to_vec());
        if l != rr {
            let diff = merge_sparse(r, l.into_iter().chain(rr.into_iter().map(|(k, c)| (k, r.neg(&c)))));
            violations.push(Violation {
                axiom: Axiom::Associativity,
                witness: vec![lab(i), lab(j), lab(k)],
                residual: a.format_sparse(&diff),
            });
        }
    };
    let prune = a.truncation().is_some() && additive;
    for i in 0..n {
        for (j, _) in a.products_from(i) {
            for k in 0..n {
                if prune && w(i) + w(*j) + w(k) > bound {
                    continue;
                }
                check_triple(i, *j, k, &mut violations);
            }
        }
    }
    for j in 0..n {
        for (k, _) in a.products_from(j) {
            for i in 0..n {
                if prune && w(i) + w(j) + w(*k) > bound {
                    continue;
                }
                check_triple(i, j, *k, &mut violations);
            }
        }
    }
    checked += seen.len();

    let one = a.one();
    let d1 = a.d(&one);
    if !vec_ops::is_zero(&d1) {
        violations.push(Violation { axiom: Axiom::UnitClosed, witness: vec![], residual: a.format(&d1) });
    }
    for i in 0..n {
        let b = a.basis(i);
        if a.mul(&one, &b) != b {
            violations.push(Violation {
                axiom: Axiom::LeftUnit,
                witness: vec![lab(i)],
                residual: a.format(&a.mul(&one, &b)),
            });
        }
        if a.mul(&b, &one) != b {
            violations.push(Violation {
                axiom: Axiom::RightUnit,
                witness: vec![lab(i)],
                residual: a.format(&a.mul(&b, &one)),
            });
        }
        checked += 2;
    }
    DgaReport { violations, checked, not_checked }
}

/// `A ⊗ B` with the Koszul sign `(a⊗x)(b⊗y) = (-1)^{|x||b|} ab⊗xy`.
pub fn tensor_dga(a: &DgAlgebra, b: &DgAlgebra) -> Result<DgAlgebra> {
    if a.ring() != b.ring() {
        return Err(Error::Invalid(format!("ring mismatch: {} vs {}", a.ring(), b.ring())));
    }
    let r = a.ring();
    let (na, nb) = (a.dim(), b.dim());
    let idx = |i: usize, j: usize| i * nb + j;
    let mut basis = Vec::with_capacity(na * nb);
    for i in 0..na {
        for j in 0..nb {
            basis.push((format!("{}⊗{}", a.label(i), b.label(j)), a.degree(i) + b.degree(j)));
        }
    }
    let module = GradedModule::new(r, basis)?;
    let mut unit = vec_ops::zeros(na * nb);
    for (i, ci) in a.unit().iter().enumerate() {
        for (j, cj) in b.unit().iter().enumerate() {
            if !ci.is_zero() && !cj.is_zero() {
                unit[idx(i, j)] = r.mul(ci, cj);
            }
        }
    }
    let mut diff = Vec::with_capacity(na * nb);
    for i in 0..na {
        for j in 0..nb {
            let mut e: Vec<(usize, Scalar)> = a.d_basis(i).iter().map(|(k, c)| (idx(*k, j), c.clone())).collect();
            let s = r.sign(a.degree(i) as i64);
            e.extend(b.d_basis(j).iter().map(|(k, c)| (idx(i, *k), r.mul(&s, c))));
            diff.push(merge_sparse(r, e));
        }
    }
    let mut mult: Vec<Vec<(usize, Sparse)>> = vec![Vec::new(); na * nb];
    for i in 0..na {
        for j in 0..nb {
            let mut row: BTreeMap<usize, Sparse> = BTreeMap::new();
            for (i2, ea) in a.products_from(i) {
                for (j2, eb) in b.products_from(j) {
                    let s = r.sign((b.degree(j) * a.degree(*i2)) as i64);
                    let mut e = Vec::with_capacity(ea.len() * eb.len());
                    for (ka, ca) in ea {
                        for (kb, cb) in eb {
                            e.push((idx(*ka, *kb), r.mul(&s, &r.mul(ca, cb))));
                        }
                    }
                    let e = merge_sparse(r, e);
                    if !e.is_empty() {
                        row.insert(idx(*i2, *j2), e);
                    }
                }
            }
            mult[idx(i, j)] = row.into_iter().collect();
        }
    }
    let truncation = match (a.truncation(), b.truncation()) {
        (None, None) => None,
        (ta, tb) => {
            let wa = |i: usize| ta.map_or(0, |t| t.weights[i]);
            let wb = |j: usize| tb.map_or(0, |t| t.weights[j]);
            let bound = ta.map_or(0, |t| t.bound) + tb.map_or(0, |t| t.bound);
            let weights = (0..na).flat_map(|i| (0..nb).map(move |j| (i, j))).map(|(i, j)| wa(i) + wb(j)).collect();
            Some(Truncation { weights, bound })
        }
    };
    DgAlgebra::from_parts(module, unit, diff, mult, truncation)
}

/// Graded matrix algebra `End(V)` with zero differential; `e_ij` maps `v_j` to `v_i`.
pub fn matrix_algebra(v: &GradedModule) -> DgAlgebra {
    let r = v.ring();
    let n = v.len();
    let mut basis = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            basis.push((format!("E[{},{}]", v.label(i), v.label(j)), v.degree(i) - v.degree(j)));
        }
    }
    let module = GradedModule::new(r, basis).expect("distinct labels");
    let mut unit = vec_ops::zeros(n * n);
    for i in 0..n {
        unit[i * n + i] = Scalar::one();
    }
    let mut mult = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            mult.push((0..n).map(|l| (j * n + l, vec![(i * n + l, Scalar::one())])).collect());
        }
    }
    DgAlgebra::from_parts(module, unit, vec![Vec::new(); n * n], mult, None).expect("valid matrix algebra")
}

/// `End(V) ⊗ A`: the algebra in which Maurer-Cartan elements define twisted modules `V⊗A`.
pub fn endomorphism_dga(a: &DgAlgebra, v: &GradedModule) -> Result<DgAlgebra> {
    tensor_dga(&matrix_algebra(v), a)
}
