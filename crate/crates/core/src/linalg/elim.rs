//! Gaussian elimination over fields.

use super::matrix::ExactMatrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: ExactMatrix,
    pub pivots: Vec<usize>,
}

pub fn rref(m: &ExactMatrix) -> Result<Rref> {
    let ring = m.ring();
    if !ring.is_field() {
        return Err(Error::NotField(ring));
    }
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let Some(p) = (r..a.rows()).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = ring.inv(a.get(r, c)).expect("nonzero field element");
        a.scale_row(r, &inv);
        for i in 0..a.rows() {
            if i != r && !a.get(i, c).is_zero() {
                let f = a.get(i, c).neg();
                a.add_row_multiple(i, r, &f);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(Rref { matrix: a, pivots })
}

/// Rank; over the integers this is the rank over the rationals.
pub fn rank(m: &ExactMatrix) -> usize {
    if m.ring().is_field() {
        rref(m).expect("field").pivots.len()
    } else {
        let q = m.change_ring(super::Ring::Rationals).expect("integers embed in rationals");
        rref(&q).expect("field").pivots.len()
    }
}

/// Basis of the right kernel over a field, one vector per free column.
pub fn kernel_field(m: &ExactMatrix) -> Result<Vec<Vec<Scalar>>> {
    let ring = m.ring();
    let Rref { matrix, pivots } = rref(m)?;
    let n = m.cols();
    let mut is_pivot = vec![None; n];
    for (k, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(k);
    }
    let mut basis = Vec::new();
    for f in 0..n {
        if is_pivot[f].is_some() {
            continue;
        }
        let mut v = vec![Scalar::zero(); n];
        v[f] = Scalar::one();
        for (k, &c) in pivots.iter().enumerate() {
            v[c] = ring.neg(matrix.get(k, f));
        }
        basis.push(v);
    }
    Ok(basis)
}

/// One solution of `m x = b` over a field, or `None`.
pub fn particular_field(m: &ExactMatrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows() {
        return Err(Error::Dimension(format!("right-hand side of length {} for {} rows", b.len(), m.rows())));
    }
    let aug = m.hstack(&ExactMatrix::from_column(m.ring(), b))?;
    let Rref { matrix, pivots } = rref(&aug)?;
    if pivots.last() == Some(&m.cols()) {
        return Ok(None);
    }
    let mut x = vec![Scalar::zero(); m.cols()];
    for (k, &c) in pivots.iter().enumerate() {
        x[c] = matrix.get(k, m.cols()).clone();
    }
    Ok(Some(x))
}

/// Inverse of a square matrix over a field.
pub fn inverse_field(m: &ExactMatrix) -> Result<Option<ExactMatrix>> {
    if !m.is_square() {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Some(m.clone()));
    }
    let aug = m.hstack(&ExactMatrix::identity(m.ring(), n))?;
    let Rref { matrix, pivots } = rref(&aug)?;
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Ok(None);
    }
    Ok(Some(matrix.block(0, n, n, 2 * n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Ring;

    #[test]
    fn kernel_of_row() {
        let m = ExactMatrix::from_i64(Ring::Rationals, &[vec![1, 1]]);
        let k = kernel_field(&m).unwrap();
        assert_eq!(k, vec![vec![Scalar::from_int(-1), Scalar::one()]]);
    }

    #[test]
    fn inverse_mod_p() {
        let m = ExactMatrix::from_i64(Ring::PrimeField(7), &[vec![2, 1], vec![1, 1]]);
        let inv = inverse_field(&m).unwrap().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), ExactMatrix::identity(Ring::PrimeField(7), 2));
        let s = ExactMatrix::from_i64(Ring::Rationals, &[vec![1, 2], vec![2, 4]]);
        assert!(inverse_field(&s).unwrap().is_none());
    }
}
