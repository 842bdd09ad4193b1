use super::algebra::DgAlgebra;
use super::graded::vec_ops;
use crate::error::{Error, Result};
use crate::linalg::Scalar;

/// Linear map between finite dg algebras given on basis elements.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    pub images: Vec<Vec<Scalar>>,
}

/// Failures found by [`AlgebraMap::check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MapReport {
    pub degree: Vec<String>,
    pub chain: Vec<String>,
    pub multiplicative: Vec<String>,
    pub unit: bool,
}

impl MapReport {
    pub fn is_ok(&self) -> bool {
        self.degree.is_empty() && self.chain.is_empty() && self.multiplicative.is_empty() && self.unit
    }
}

impl AlgebraMap {
    pub fn new(src: &DgAlgebra, tgt: &DgAlgebra, images: Vec<Vec<Scalar>>) -> Result<Self> {
        if images.len() != src.dim() || images.iter().any(|v| v.len() != tgt.dim()) {
            return Err(Error::Dimension("map images do not match the algebras".into()));
        }
        Ok(AlgebraMap { images })
    }

    pub fn apply(&self, tgt: &DgAlgebra, x: &[Scalar]) -> Vec<Scalar> {
        let mut out = tgt.zero();
        for (i, c) in x.iter().enumerate() {
            vec_ops::axpy(tgt.ring(), &mut out, c, &self.images[i]);
        }
        out
    }

    /// Degree preservation, `f∘d = d∘f`, `f(ab) = f(a)f(b)` on all basis pairs, `f(1) = 1`.
    pub fn check(&self, src: &DgAlgebra, tgt: &DgAlgebra) -> MapReport {
        let mut rep = MapReport::default();
        for i in 0..src.dim() {
            if tgt.expect_degree(&self.images[i], src.degree(i)).is_err() {
                rep.degree.push(src.label(i).to_string());
            }
            let lhs = self.apply(tgt, &src.d(&src.basis(i)));
            if lhs != tgt.d(&self.images[i]) {
                rep.chain.push(src.label(i).to_string());
            }
        }
        for i in 0..src.dim() {
            if vec_ops::is_zero(&self.images[i]) {
                // f(b_i b_j) must then vanish for all j
                for (j, e) in src.products_from(i) {
                    let v = self.apply(tgt, &sparse_dense(src.dim(), e));
                    if !vec_ops::is_zero(&v) {
                        rep.multiplicative.push(format!("{}*{}", src.label(i), src.label(*j)));
                    }
                }
                continue;
            }
            for j in 0..src.dim() {
                let lhs = self.apply(tgt, &src.mul(&src.basis(i), &src.basis(j)));
                let rhs = tgt.mul(&self.images[i], &self.images[j]);
                if lhs != rhs {
                    rep.multiplicative.push(format!("{}*{}", src.label(i), src.label(j)));
                }
            }
        }
        rep.unit = self.apply(tgt, src.unit()) == tgt.unit();
        rep
    }
}

fn sparse_dense(n: usize, e: &[(usize, Scalar)]) -> Vec<Scalar> {
    let mut v = vec_ops::zeros(n);
    for (k, c) in e {
        v[*k] = c.clone();
    }
    v
}
