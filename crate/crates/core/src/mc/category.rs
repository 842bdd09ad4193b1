use super::{twisted_matrix, McElement};
use crate::dg::DgAlgebra;
use crate::error::Result;
use crate::linalg::{kernel, rank, solve_linear, ExactMatrix, Ring, Scalar};

/// Basis indices whose twisted differential is computed without truncation loss.
pub(crate) fn exact_region(a: &DgAlgebra, elems: &[&[Scalar]]) -> Vec<bool> {
    let Some(t) = a.truncation() else {
        return vec![true; a.dim()];
    };
    let w = |i: usize| t.weights[i] as i64;
    let mut raise = 0i64;
    for i in 0..a.dim() {
        for (k, _) in a.d_basis(i) {
            raise = raise.max(w(*k) - w(i));
        }
    }
    for e in elems {
        for (i, c) in e.iter().enumerate() {
            if !c.is_zero() {
                raise = raise.max(w(i));
            }
        }
    }
    (0..a.dim()).map(|i| w(i) + raise <= t.bound as i64).collect()
}

fn max_weight(a: &DgAlgebra, v: &[Scalar]) -> i64 {
    match a.truncation() {
        None => 0,
        Some(t) => {
            v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| t.weights[i] as i64).max().unwrap_or(0)
        }
    }
}

/// `H⁰` of `A^[x,y]` restricted to the exact region, over a field.
#[derive(Clone, Debug)]
pub struct H0Space {
    pub ring: Ring,
    /// representatives of a basis, as elements of `A`
    pub reps: Vec<Vec<Scalar>>,
    boundaries: Vec<Vec<Scalar>>,
    pub region: Vec<bool>,
    deg0: Vec<usize>,
}

impl H0Space {
    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of a cocycle in the representative basis.
    pub fn coordinates(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if self.deg0.is_empty() {
            return Ok(Some(Vec::new()));
        }
        let cols: Vec<&Vec<Scalar>> = self.reps.iter().chain(self.boundaries.iter()).collect();
        let mut m = ExactMatrix::zeros(self.ring, self.deg0.len(), cols.len());
        for (c, col) in cols.iter().enumerate() {
            for (r, &i) in self.deg0.iter().enumerate() {
                m.set(r, c, col[i].clone());
            }
        }
        let rhs: Vec<Scalar> = self.deg0.iter().map(|&i| v[i].clone()).collect();
        if v.iter().enumerate().any(|(i, c)| !c.is_zero() && !self.deg0.contains(&i)) {
            return Ok(None);
        }
        Ok(solve_linear(&m, &rhs)?.map(|s| s.particular[..self.reps.len()].to_vec()))
    }
}

/// `H⁰(A^[x,y])`; over the integers only the free part, computed over the rationals.
pub fn hom_h0(a: &DgAlgebra, x: &[Scalar], y: &[Scalar]) -> Result<H0Space> {
    let region = exact_region(a, &[x, y]);
    let deg0: Vec<usize> = a.module().in_degree(0).into_iter().filter(|&i| region[i]).collect();
    let degm1: Vec<usize> = a.module().in_degree(-1).into_iter().filter(|&i| region[i]).collect();
    let deg1 = a.module().in_degree(1);
    let ring = if a.ring().is_field() { a.ring() } else { Ring::Rationals };
    let conv = |m: ExactMatrix| m.change_ring(ring);
    let z = kernel(&conv(twisted_matrix(a, x, y, &deg0, &deg1))?)?;
    let dm = conv(twisted_matrix(a, x, y, &degm1, &a.module().in_degree(0)))?;
    let embed = |idx: &[usize], c: &[Scalar]| {
        let mut v = vec![Scalar::zero(); a.dim()];
        for (p, &i) in idx.iter().enumerate() {
            v[i] = c[p].clone();
        }
        v
    };
    let all0 = a.module().in_degree(0);
    let boundaries: Vec<Vec<Scalar>> = (0..dm.cols()).map(|j| embed(&all0, &dm.col(j))).collect();
    let restrict = |v: &Vec<Scalar>| -> Vec<Scalar> { all0.iter().map(|&i| v[i].clone()).collect() };
    let mut cols: Vec<Vec<Scalar>> = boundaries.iter().map(restrict).collect();
    let mut current = rank_of(ring, all0.len(), &cols);
    let mut reps = Vec::new();
    for zc in &z {
        let v = embed(&deg0, zc);
        cols.push(restrict(&v));
        let r = rank_of(ring, all0.len(), &cols);
        if r > current {
            current = r;
            reps.push(v);
        } else {
            cols.pop();
        }
    }
    Ok(H0Space { ring, reps, boundaries, region, deg0: all0 })
}

fn rank_of(ring: Ring, rows: usize, cols: &[Vec<Scalar>]) -> usize {
    let mut m = ExactMatrix::zeros(ring, rows, cols.len());
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            m.set(r, c, v.clone());
        }
    }
    rank(&m)
}

/// Composition `[f]∘[g]` of representatives, `None` where truncation prevents the computation.
#[derive(Clone, Debug)]
pub struct CompositionEntry {
    pub objects: (usize, usize, usize),
    /// representative indices in `Hom(j,k)` and `Hom(i,j)`
    pub reps: (usize, usize),
    pub result: Option<Vec<Scalar>>,
}

#[derive(Clone, Debug)]
pub struct McCategoryTable {
    pub hom: Vec<Vec<H0Space>>,
    pub compositions: Vec<CompositionEntry>,
    pub identities: Vec<Option<Vec<Scalar>>>,
    pub isomorphic: Vec<(usize, usize)>,
}

impl McCategoryTable {
    pub fn ranks(&self) -> Vec<Vec<usize>> {
        self.hom.iter().map(|r| r.iter().map(|h| h.rank()).collect()).collect()
    }
}

fn compose_class(a: &DgAlgebra, target: &H0Space, f: &[Scalar], g: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if let Some(t) = a.truncation() {
        if max_weight(a, f) + max_weight(a, g) > t.bound as i64 {
            return Ok(None);
        }
    }
    let p = a.mul(f, g);
    if p.iter().enumerate().any(|(i, c)| !c.is_zero() && !target.region[i]) {
        return Ok(None);
    }
    let p = p.into_iter().map(|c| target.ring.try_element(&c)).collect::<Result<Vec<_>>>()?;
    target.coordinates(&p)
}

/// Homotopy category of MC elements on the given objects, in degree 0.
pub fn mc_category_h0(a: &DgAlgebra, xs: &[McElement]) -> Result<McCategoryTable> {
    let n = xs.len();
    let mut hom = Vec::with_capacity(n);
    for x in xs {
        let mut row = Vec::with_capacity(n);
        for y in xs {
            row.push(hom_h0(a, &x.value, &y.value)?);
        }
        hom.push(row);
    }
    let mut compositions = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for (p, f) in hom[j][k].reps.iter().enumerate() {
                    for (q, g) in hom[i][j].reps.iter().enumerate() {
                        let result = compose_class(a, &hom[i][k], f, g)?;
                        compositions.push(CompositionEntry { objects: (i, j, k), reps: (p, q), result });
                    }
                }
            }
        }
    }
    let one = a.one();
    let identities = (0..n).map(|i| hom[i][i].coordinates(&one)).collect::<Result<Vec<_>>>()?;
    let mut isomorphic = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if is_iso_pair(a, &hom, &identities, i, j)? {
                isomorphic.push((i, j));
            }
        }
    }
    Ok(McCategoryTable { hom, compositions, identities, isomorphic })
}

/// Some basis representative of `Hom(i,j)` with an inverse class in `Hom(j,i)`.
fn is_iso_pair(a: &DgAlgebra, hom: &[Vec<H0Space>], ids: &[Option<Vec<Scalar>>], i: usize, j: usize) -> Result<bool> {
    let (Some(id_i), Some(id_j)) = (&ids[i], &ids[j]) else {
        return Ok(false);
    };
    let (fwd, bwd) = (&hom[i][j], &hom[j][i]);
    if fwd.rank() == 0 || bwd.rank() == 0 {
        return Ok(false);
    }
    let ring = fwd.ring;
    for f in &fwd.reps {
        // g ↦ ([g f], [f g]) is linear in the coordinates of g
        let rows = id_i.len() + id_j.len();
        let mut m = ExactMatrix::zeros(ring, rows, bwd.rank());
        let mut ok = true;
        for (c, g) in bwd.reps.iter().enumerate() {
            let (Some(gf), Some(fg)) = (compose_class(a, &hom[i][i], g, f)?, compose_class(a, &hom[j][j], f, g)?)
            else {
                ok = false;
                break;
            };
            for (r, v) in gf.into_iter().chain(fg).enumerate() {
                m.set(r, c, v);
            }
        }
        if !ok {
            continue;
        }
        let rhs: Vec<Scalar> = id_i.iter().chain(id_j.iter()).cloned().collect();
        if solve_linear(&m, &rhs)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fixtures::polynomial_de_rham;

    #[test]
    fn ground_ring_single_object() {
        let a = Arc::new(DgAlgebra::ground(Ring::Rationals));
        let t = mc_category_h0(&a, &[McElement::zero(a.clone())]).unwrap();
        assert_eq!(t.ranks(), vec![vec![1]]);
        assert_eq!(t.identities[0], Some(vec![Scalar::one()]));
    }

    #[test]
    fn de_rham_objects_are_orthogonal() {
        let a = Arc::new(polynomial_de_rham(Ring::Rationals, 8));
        let mk = |c: i64| McElement::new(a.clone(), a.element(&[("z dz", c)]).unwrap()).unwrap();
        let t = mc_category_h0(&a, &[mk(0), mk(1), mk(2)]).unwrap();
        assert_eq!(t.ranks(), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(t.isomorphic.is_empty());
        let dz = McElement::new(a.clone(), a.element(&[("dz", 1)]).unwrap()).unwrap();
        assert_eq!(hom_h0(&a, &a.zero(), &dz.value).unwrap().rank(), 0);
    }
}
