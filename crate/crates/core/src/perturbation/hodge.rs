use crate::dg::GradedModule;
use crate::error::{Error, Result};
use crate::linalg::{inverse, kernel, rank, ExactMatrix, Scalar};

/// Abstract Hodge decomposition `V = H ⊕ d⁰(V) ⊕ U` of a complex over a field.
#[derive(Clone, Debug)]
pub struct HodgeData {
    /// degree −1 contraction, inverse to `d⁰` on its image
    pub s: ExactMatrix,
    /// projection onto the harmonic subspace
    pub t: ExactMatrix,
    /// columns span the harmonic subspace
    pub include: ExactMatrix,
    /// `project · include = 1`, `include · project = t`
    pub project: ExactMatrix,
    pub harmonic: GradedModule,
}

impl HodgeData {
    /// Names of the violated identities.
    pub fn violations(&self, d0: &ExactMatrix) -> Vec<&'static str> {
        let r = d0.ring();
        let n = d0.rows();
        let id = ExactMatrix::identity(r, n);
        let mul = |a: &ExactMatrix, b: &ExactMatrix| a.mul(b).expect("square");
        let mut bad = Vec::new();
        let lhs = mul(d0, &self.s).add(&mul(&self.s, d0)).expect("square");
        if lhs != id.sub(&self.t).expect("square") {
            bad.push("d⁰s + sd⁰ = 1 − t");
        }
        if mul(&self.t, &self.t) != self.t {
            bad.push("t² = t");
        }
        if !mul(&self.s, &self.t).is_zero() || !mul(&self.t, &self.s).is_zero() {
            bad.push("st = ts = 0");
        }
        if !mul(&self.s, &self.s).is_zero() {
            bad.push("s² = 0");
        }
        if mul(&self.project, &self.include) != ExactMatrix::identity(r, self.harmonic.len()) {
            bad.push("project · include = 1");
        }
        if mul(&self.include, &self.project) != self.t {
            bad.push("include · project = t");
        }
        bad
    }
}

fn check_differential(v: &GradedModule, d0: &ExactMatrix) -> Result<()> {
    let n = v.len();
    if d0.rows() != n || d0.cols() != n {
        return Err(Error::Dimension(format!("d⁰ must be {n}x{n}")));
    }
    for q in 0..n {
        for p in 0..n {
            if !d0.get(q, p).is_zero() && v.degree(q) != v.degree(p) + 1 {
                return Err(Error::Degree { expected: 1, found: format!("{}", v.degree(q) - v.degree(p)) });
            }
        }
    }
    let sq = d0.mul(d0)?;
    if let Some((row, col)) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| !sq.get(i, j).is_zero()) {
        return Err(Error::DSquared { degree: v.degree(col), row, col });
    }
    Ok(())
}

fn rank_of(ring: crate::linalg::Ring, rows: usize, cols: &[Vec<Scalar>]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let mut m = ExactMatrix::zeros(ring, rows, cols.len());
    for (c, col) in cols.iter().enumerate() {
        for (r, x) in col.iter().enumerate() {
            m.set(r, c, x.clone());
        }
    }
    rank(&m)
}

/// Candidates that extend `base` to a larger independent set, chosen greedily.
fn extend(
    ring: crate::linalg::Ring,
    rows: usize,
    base: &[Vec<Scalar>],
    candidates: &[Vec<Scalar>],
) -> Vec<Vec<Scalar>> {
    let mut cols = base.to_vec();
    let mut current = rank_of(ring, rows, &cols);
    let mut added = Vec::new();
    for c in candidates {
        cols.push(c.clone());
        let r = rank_of(ring, rows, &cols);
        if r > current {
            current = r;
            added.push(c.clone());
        } else {
            cols.pop();
        }
    }
    added
}

/// Hodge data by Gaussian elimination in the standard basis.
pub fn hodge_data(v: &GradedModule, d0: &ExactMatrix) -> Result<HodgeData> {
    let ring = v.ring();
    if !ring.is_field() {
        return Err(Error::NotField(ring));
    }
    check_differential(v, d0)?;
    let n = v.len();
    let Some((lo, hi)) = v.degree_range() else {
        let z = ExactMatrix::zeros(ring, 0, 0);
        return Ok(HodgeData {
            s: z.clone(),
            t: z.clone(),
            include: z.clone(),
            project: z,
            harmonic: GradedModule::zero(ring),
        });
    };
    let embed = |idx: &[usize], c: &[Scalar]| {
        let mut w = vec![Scalar::zero(); n];
        for (p, &i) in idx.iter().enumerate() {
            w[i] = c[p].clone();
        }
        w
    };
    // per degree: harmonic, boundary and complement vectors in V coordinates
    let mut harmonic: Vec<(Vec<Scalar>, i32)> = Vec::new();
    let mut pairs: Vec<(Vec<Scalar>, Vec<Scalar>)> = Vec::new();
    let mut boundaries_in: std::collections::BTreeMap<i32, Vec<Vec<Scalar>>> = Default::default();
    for k in lo..=hi {
        let idx = v.in_degree(k);
        if idx.is_empty() {
            continue;
        }
        let next = v.in_degree(k + 1);
        let mut dk = ExactMatrix::zeros(ring, next.len(), idx.len());
        for (r, &i) in next.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                dk.set(r, c, d0.get(i, j).clone());
            }
        }
        let z: Vec<Vec<Scalar>> =
            if next.is_empty() { (0..idx.len()).map(|j| unit(idx.len(), j)).collect() } else { kernel(&dk)? };
        let units: Vec<Vec<Scalar>> = (0..idx.len()).map(|j| unit(idx.len(), j)).collect();
        let u = extend(ring, idx.len(), &z, &units);
        for uc in &u {
            let b = dk.mul_vec(uc)?;
            let (uv, bv) = (embed(&idx, uc), embed(&next, &b));
            boundaries_in.entry(k + 1).or_default().push(bv.clone());
            pairs.push((uv, bv));
        }
        let b_here: Vec<Vec<Scalar>> = boundaries_in
            .get(&k)
            .map(|bs| bs.iter().map(|b| idx.iter().map(|&i| b[i].clone()).collect()).collect())
            .unwrap_or_default();
        for h in extend(ring, idx.len(), &b_here, &z) {
            harmonic.push((embed(&idx, &h), k));
        }
    }
    // basis order: harmonic, boundaries, complements
    let r = harmonic.len();
    let m = pairs.len();
    let mut p = ExactMatrix::zeros(ring, n, n);
    let columns =
        harmonic.iter().map(|(h, _)| h).chain(pairs.iter().map(|(_, b)| b)).chain(pairs.iter().map(|(u, _)| u));
    for (c, col) in columns.enumerate() {
        for (i, x) in col.iter().enumerate() {
            p.set(i, c, x.clone());
        }
    }
    let pinv = inverse(&p)?.ok_or_else(|| Error::Internal("Hodge basis is not a basis".into()))?;
    let mut s_new = ExactMatrix::zeros(ring, n, n);
    let mut t_new = ExactMatrix::zeros(ring, n, n);
    for j in 0..m {
        s_new.set(r + m + j, r + j, Scalar::one());
    }
    for j in 0..r {
        t_new.set(j, j, Scalar::one());
    }
    let s = p.mul(&s_new)?.mul(&pinv)?;
    let t = p.mul(&t_new)?.mul(&pinv)?;
    let include = p.block(0, n, 0, r);
    let project = pinv.block(0, r, 0, n);
    let degrees: Vec<i32> = harmonic.iter().map(|(_, d)| *d).collect();
    let labels = (0..r).map(|i| (format!("h{i}"), degrees[i])).collect();
    let hd = HodgeData { s, t, include, project, harmonic: GradedModule::new(ring, labels)? };
    debug_assert!(hd.violations(d0).is_empty());
    Ok(hd)
}

/// Hodge data computed after the degree-preserving change of basis `g`: other complements.
pub fn hodge_data_in_basis(v: &GradedModule, d0: &ExactMatrix, g: &ExactMatrix) -> Result<HodgeData> {
    let ginv = inverse(g)?.ok_or_else(|| Error::NotInvertible("change of basis".into()))?;
    let conj = ginv.mul(d0)?.mul(g)?;
    let h = hodge_data(v, &conj)?;
    Ok(HodgeData {
        s: g.mul(&h.s)?.mul(&ginv)?,
        t: g.mul(&h.t)?.mul(&ginv)?,
        include: g.mul(&h.include)?,
        project: h.project.mul(&ginv)?,
        harmonic: h.harmonic,
    })
}

fn unit(n: usize, j: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[j] = Scalar::one();
    v
}
