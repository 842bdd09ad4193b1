use super::matrix::ExactMatrix;
use super::ring::Ring;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Smith normal form `U·M·V = D` over the integers.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: ExactMatrix,
    pub d: ExactMatrix,
    pub v: ExactMatrix,
    /// Nonzero diagonal entries `d_1 | d_2 | ...`, all positive.
    pub invariants: Vec<Scalar>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }
}

fn min_abs_in(a: &ExactMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, Scalar)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().map_or(true, |(_, _, b)| ax < *b) {
                if ax.is_one() {
                    return Some((i, j));
                }
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn smith_normal_form(m: &ExactMatrix) -> Result<Smith> {
    if m.ring() != Ring::Integers {
        return Err(Error::Invalid(format!("Smith normal form needs integer matrices, got {}", m.ring())));
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = ExactMatrix::identity(Ring::Integers, rows);
    let mut v = ExactMatrix::identity(Ring::Integers, cols);
    let mut invariants = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_in(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let p = a.get(t, t).clone();
            let mut smaller: Option<(bool, usize)> = None;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let (q, r) = a.get(i, t).div_rem_euclid(&p);
                let nq = q.neg();
                a.add_row_multiple(i, t, &nq);
                u.add_row_multiple(i, t, &nq);
                if !r.is_zero() && smaller.is_none() {
                    smaller = Some((true, i));
                }
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let (q, r) = a.get(t, j).div_rem_euclid(&p);
                let nq = q.neg();
                a.add_col_multiple(j, t, &nq);
                v.add_col_multiple(j, t, &nq);
                if !r.is_zero() && smaller.is_none() {
                    smaller = Some((false, j));
                }
            }
            if smaller.is_some() {
                // a remainder is now strictly smaller than the pivot; move the smallest one in
                let mut best = (true, t, p.abs());
                for i in t + 1..rows {
                    let x = a.get(i, t);
                    if !x.is_zero() && x.abs() < best.2 {
                        best = (true, i, x.abs());
                    }
                }
                for j in t + 1..cols {
                    let x = a.get(t, j);
                    if !x.is_zero() && x.abs() < best.2 {
                        best = (false, j, x.abs());
                    }
                }
                if best.0 {
                    a.swap_rows(t, best.1);
                    u.swap_rows(t, best.1);
                } else {
                    a.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                }
                continue;
            }
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a.get(i, j).div_rem_euclid(&p).1.is_zero());
            match bad {
                Some((i, _)) => {
                    a.add_row_multiple(t, i, &Scalar::one());
                    u.add_row_multiple(t, i, &Scalar::one());
                }
                None => break,
            }
        }
        if a.get(t, t).signum() < 0 {
            let m1 = Scalar::from_int(-1);
            a.scale_row(t, &m1);
            u.scale_row(t, &m1);
        }
        invariants.push(a.get(t, t).clone());
        t += 1;
    }
    Ok(Smith { u, d: a, v, invariants })
}

/// Determinant by fraction-free elimination (Bareiss), exact in any ring.
pub fn determinant(m: &ExactMatrix) -> Result<Scalar> {
    if !m.is_square() {
        return Err(Error::Dimension("determinant of a non-square matrix".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Scalar::one());
    }
    let ring = m.ring();
    let work_ring = if ring == Ring::Integers { Ring::Rationals } else { ring };
    let mut a = m.change_ring(work_ring)?;
    let mut det = Scalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
            return Ok(Scalar::zero());
        };
        if p != c {
            a.swap_rows(p, c);
            det = work_ring.neg(&det);
        }
        let piv = a.get(c, c).clone();
        det = work_ring.mul(&det, &piv);
        let inv = work_ring.inv(&piv).expect("field");
        for i in c + 1..n {
            if !a.get(i, c).is_zero() {
                let f = work_ring.mul(a.get(i, c), &inv).neg();
                a.add_row_multiple(i, c, &f);
            }
        }
    }
    ring.try_element(&det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(m: &ExactMatrix) -> Smith {
        let s = smith_normal_form(m).unwrap();
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d);
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in s.invariants.windows(2) {
            assert!(w[1].div_rem_euclid(&w[0]).1.is_zero());
        }
        assert!(determinant(&s.u).unwrap().abs().is_one());
        assert!(determinant(&s.v).unwrap().abs().is_one());
        s
    }

    #[test]
    fn small_cases() {
        let s = check(&ExactMatrix::from_i64(Ring::Integers, &[vec![2]]));
        assert_eq!(s.u, ExactMatrix::identity(Ring::Integers, 1));
        assert_eq!(s.v, ExactMatrix::identity(Ring::Integers, 1));
        assert_eq!(s.invariants, vec![Scalar::from_int(2)]);
        let s = check(&ExactMatrix::from_i64(Ring::Integers, &[vec![0]]));
        assert!(s.invariants.is_empty());
        assert!(s.d.is_zero());
        let s = check(&ExactMatrix::from_i64(Ring::Integers, &[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.invariants, vec![Scalar::from_int(2), Scalar::from_int(4)]);
    }

    #[test]
    fn divisibility_fixup() {
        let s = check(&ExactMatrix::from_i64(Ring::Integers, &[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.invariants, vec![Scalar::from_int(1), Scalar::from_int(6)]);
    }

    #[test]
    fn rejects_fields() {
        assert!(smith_normal_form(&ExactMatrix::identity(Ring::Rationals, 2)).is_err());
    }

    #[test]
    fn determinant_values() {
        let m = ExactMatrix::from_i64(Ring::Integers, &[vec![2, 1], vec![7, 4]]);
        assert_eq!(determinant(&m).unwrap(), Scalar::from_int(1));
        let m = ExactMatrix::from_i64(Ring::Integers, &[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 9]]);
        assert_eq!(determinant(&m).unwrap(), Scalar::from_int(-3));
    }

    fn int_matrix() -> impl Strategy<Value = ExactMatrix> {
        (1usize..=12, 1usize..=12).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-20i64..=20, c), r)
                .prop_map(|rows| ExactMatrix::from_i64(Ring::Integers, &rows))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn smith_invariants(m in int_matrix()) {
            let s = check(&m);
            prop_assert_eq!(s.rank(), crate::linalg::elim::rank(&m));
        }
    }
}
