use super::elim::{kernel_field, particular_field};
use super::matrix::ExactMatrix;
use super::ring::Ring;
use super::scalar::Scalar;
use super::smith::smith_normal_form;
use crate::error::{Error, Result};

/// A solution of `A x = b` and a basis of the homogeneous solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<Scalar>,
    pub kernel: Vec<Vec<Scalar>>,
}

/// Solve `a x = b` in the ring of `a` (integer solutions over the integers).
pub fn solve_linear(a: &ExactMatrix, b: &[Scalar]) -> Result<Option<Solution>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!("right-hand side of length {} for {} rows", b.len(), a.rows())));
    }
    let ring = a.ring();
    let b: Vec<Scalar> = b.iter().map(|s| ring.try_element(s)).collect::<Result<_>>()?;
    if ring.is_field() {
        let Some(x) = particular_field(a, &b)? else {
            return Ok(None);
        };
        return Ok(Some(Solution { particular: x, kernel: kernel_field(a)? }));
    }
    let s = smith_normal_form(a)?;
    let ub = s.u.mul_vec(&b)?;
    let r = s.rank();
    let mut y = vec![Scalar::zero(); a.cols()];
    for (i, yi) in ub.iter().enumerate() {
        if i < r {
            let (q, rem) = yi.div_rem_euclid(&s.invariants[i]);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !yi.is_zero() {
            return Ok(None);
        }
    }
    let x = s.v.mul_vec(&y)?;
    let kernel = (r..a.cols()).map(|j| s.v.col(j)).collect();
    Ok(Some(Solution { particular: x, kernel }))
}

/// Basis of the kernel; over the integers a basis of the saturated kernel lattice.
pub fn kernel(a: &ExactMatrix) -> Result<Vec<Vec<Scalar>>> {
    if a.ring().is_field() {
        kernel_field(a)
    } else {
        let s = smith_normal_form(a)?;
        Ok((s.rank()..a.cols()).map(|j| s.v.col(j)).collect())
    }
}

/// Solve `a X = b` column by column; `None` if some column is unsolvable.
pub fn solve_matrix(a: &ExactMatrix, b: &ExactMatrix) -> Result<Option<ExactMatrix>> {
    if a.rows() != b.rows() {
        return Err(Error::Dimension("solve_matrix row mismatch".into()));
    }
    let ring = a.ring();
    let mut out = ExactMatrix::zeros(ring, a.cols(), b.cols());
    if ring.is_field() {
        // one elimination for all right-hand sides
        let aug = a.hstack(b)?;
        let r = super::elim::rref(&aug)?;
        if r.pivots.iter().any(|&c| c >= a.cols()) {
            return Ok(None);
        }
        for j in 0..b.cols() {
            for (k, &c) in r.pivots.iter().enumerate() {
                out.set(c, j, r.matrix.get(k, a.cols() + j).clone());
            }
        }
        return Ok(Some(out));
    }
    for j in 0..b.cols() {
        match solve_linear(a, &b.col(j))? {
            Some(sol) => {
                for (i, v) in sol.particular.into_iter().enumerate() {
                    out.set(i, j, v);
                }
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Two-sided inverse over the ring of `m`, if it exists.
pub fn inverse(m: &ExactMatrix) -> Result<Option<ExactMatrix>> {
    if !m.is_square() {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    if m.ring().is_field() {
        return super::elim::inverse_field(m);
    }
    let q = m.change_ring(Ring::Rationals)?;
    match super::elim::inverse_field(&q)? {
        Some(inv) => match inv.change_ring(Ring::Integers) {
            Ok(z) => Ok(Some(z)),
            Err(_) => Ok(None),
        },
        None => Ok(None),
    }
}
