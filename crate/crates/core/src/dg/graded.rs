use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{Ring, Scalar};

/// Free graded module with a labelled, finite basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    ring: Ring,
    labels: Vec<String>,
    degrees: Vec<i32>,
    index: HashMap<String, usize>,
}

impl GradedModule {
    pub fn new(ring: Ring, basis: Vec<(String, i32)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(basis.len());
        let mut labels = Vec::with_capacity(basis.len());
        let mut degrees = Vec::with_capacity(basis.len());
        for (i, (l, d)) in basis.into_iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate basis label {l:?}")));
            }
            labels.push(l);
            degrees.push(d);
        }
        Ok(GradedModule { ring, labels, degrees, index })
    }

    /// Rank-`n` module with basis `v0..v{n-1}` in the given degree.
    pub fn uniform(ring: Ring, n: usize, degree: i32) -> Self {
        Self::new(ring, (0..n).map(|i| (format!("v{i}"), degree)).collect()).expect("distinct labels")
    }

    /// Module with basis `v0..` in the listed degrees.
    pub fn with_degrees(ring: Ring, degrees: &[i32]) -> Self {
        Self::new(ring, degrees.iter().enumerate().map(|(i, &d)| (format!("v{i}"), d)).collect())
            .expect("distinct labels")
    }

    pub fn zero(ring: Ring) -> Self {
        Self::new(ring, Vec::new()).expect("empty")
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn basis_pairs(&self) -> Vec<(String, i32)> {
        self.labels.iter().cloned().zip(self.degrees.iter().copied()).collect()
    }

    /// Indices of basis elements of degree `d`.
    pub fn in_degree(&self, d: i32) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degrees[i] == d).collect()
    }

    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let lo = self.degrees.iter().min()?;
        let hi = self.degrees.iter().max()?;
        Some((*lo, *hi))
    }

    /// `V[k]` with `V[k]^i = V^{i+k}`: every degree drops by `k`.
    pub fn shift(&self, k: i32) -> Self {
        GradedModule { degrees: self.degrees.iter().map(|d| d - k).collect(), ..self.clone() }
    }

    /// Direct sum with labels prefixed to keep them distinct.
    pub fn direct_sum(&self, o: &GradedModule, left: &str, right: &str) -> Result<Self> {
        let mut basis: Vec<(String, i32)> =
            self.basis_pairs().into_iter().map(|(l, d)| (format!("{left}{l}"), d)).collect();
        basis.extend(o.basis_pairs().into_iter().map(|(l, d)| (format!("{right}{l}"), d)));
        Self::new(self.ring, basis)
    }

    /// Degree of a vector: `Ok(None)` for zero, error when inhomogeneous.
    pub fn degree_of(&self, v: &[Scalar]) -> Result<Option<i32>> {
        let mut deg = None;
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match deg {
                None => deg = Some(self.degrees[i]),
                Some(d) if d != self.degrees[i] => {
                    return Err(Error::Degree {
                        expected: d,
                        found: format!("{} in {}", self.degrees[i], self.labels[i]),
                    })
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Check that `v` is zero or homogeneous of degree `d`.
    pub fn expect_degree(&self, v: &[Scalar], d: i32) -> Result<()> {
        if v.len() != self.len() {
            return Err(Error::Dimension(format!("vector of length {} in a module of rank {}", v.len(), self.len())));
        }
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() && self.degrees[i] != d {
                return Err(Error::Degree { expected: d, found: format!("{} in {}", self.degrees[i], self.labels[i]) });
            }
        }
        Ok(())
    }

    /// Human readable linear combination.
    pub fn format(&self, v: &[Scalar]) -> String {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if c.is_one() { self.labels[i].clone() } else { format!("{c}*{}", self.labels[i]) })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Nonzero entries as `(label, coefficient)` pairs.
    pub fn terms(&self, v: &[Scalar]) -> Vec<(String, Scalar)> {
        v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (self.labels[i].clone(), c.clone())).collect()
    }

    /// Dense vector from `(label, coefficient)` pairs.
    pub fn vector(&self, terms: &[(&str, Scalar)]) -> Result<Vec<Scalar>> {
        let mut v = vec![Scalar::zero(); self.len()];
        for (l, c) in terms {
            let i = self.index_of(l).ok_or_else(|| Error::Invalid(format!("unknown basis label {l:?}")))?;
            v[i] = self.ring.add(&v[i], &self.ring.try_element(c)?);
        }
        Ok(v)
    }
}

/// Dense vector helpers parameterized by the ring.
pub mod vec_ops {
    use crate::linalg::{Ring, Scalar};

    pub fn zeros(n: usize) -> Vec<Scalar> {
        vec![Scalar::zero(); n]
    }

    pub fn unit(n: usize, i: usize) -> Vec<Scalar> {
        let mut v = zeros(n);
        v[i] = Scalar::one();
        v
    }

    pub fn add(r: Ring, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        a.iter().zip(b).map(|(x, y)| r.add(x, y)).collect()
    }

    pub fn sub(r: Ring, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        a.iter().zip(b).map(|(x, y)| r.sub(x, y)).collect()
    }

    pub fn neg(r: Ring, a: &[Scalar]) -> Vec<Scalar> {
        a.iter().map(|x| r.neg(x)).collect()
    }

    pub fn scale(r: Ring, c: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
        a.iter().map(|x| r.mul(c, x)).collect()
    }

    /// `a += c * b`
    pub fn axpy(r: Ring, a: &mut [Scalar], c: &Scalar, b: &[Scalar]) {
        if c.is_zero() {
            return;
        }
        for (x, y) in a.iter_mut().zip(b) {
            if !y.is_zero() {
                *x = r.add(x, &c.mul(y));
            }
        }
    }

    pub fn is_zero(a: &[Scalar]) -> bool {
        a.iter().all(|x| x.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_unique() {
        let r = Ring::Integers;
        assert!(GradedModule::new(r, vec![("a".into(), 0), ("a".into(), 1)]).is_err());
        let m = GradedModule::new(r, vec![("a".into(), 0), ("b".into(), -1)]).unwrap();
        assert_eq!(m.shift(1).degrees(), &[-1, -2]);
        assert_eq!(m.in_degree(-1), vec![1]);
        assert_eq!(m.degree_range(), Some((-1, 0)));
    }

    #[test]
    fn degree_detection() {
        let m = GradedModule::with_degrees(Ring::Rationals, &[0, 1, 1]);
        let v = vec![Scalar::zero(), Scalar::one(), Scalar::from_int(2)];
        assert_eq!(m.degree_of(&v).unwrap(), Some(1));
        assert!(m.degree_of(&[Scalar::one(), Scalar::one(), Scalar::zero()]).is_err());
        assert_eq!(m.format(&v), "v1 + 2*v2");
    }
}
