use std::fmt;

use super::ring::Ring;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Dense matrix with exact entries in a fixed ring.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Self {
        ExactMatrix { ring, rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    /// Build from row vectors, normalizing every entry into the ring.
    pub fn from_rows(ring: Ring, rows: &[Vec<Scalar>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension("ragged rows".into()));
            }
            for s in row {
                data.push(ring.try_element(s)?);
            }
        }
        Ok(ExactMatrix { ring, rows: r, cols: c, data })
    }

    pub fn from_i64(ring: Ring, rows: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect()).collect();
        Self::from_rows(ring, &rows).expect("integer entries lie in every ring")
    }

    pub fn from_column(ring: Ring, v: &[Scalar]) -> Self {
        ExactMatrix { ring, rows: v.len(), cols: 1, data: v.iter().map(|s| ring.norm(s.clone())).collect() }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = self.ring.norm(v);
    }

    /// Add `v` to entry `(i, j)`.
    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: &Scalar) {
        let k = i * self.cols + j;
        self.data[k] = self.ring.add(&self.data[k], v);
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Change the coefficient ring, reducing entries as needed.
    pub fn change_ring(&self, ring: Ring) -> Result<Self> {
        let data = self.data.iter().map(|s| ring.try_element(s)).collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix { ring, rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.ring != o.ring {
            return Err(Error::Invalid(format!("ring mismatch: {} vs {}", self.ring, o.ring)));
        }
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::Dimension(format!("{}x{} vs {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let data = self.data.iter().zip(&o.data).map(|(a, b)| self.ring.add(a, b)).collect();
        Ok(ExactMatrix { data, ..*self })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let data = self.data.iter().zip(&o.data).map(|(a, b)| self.ring.sub(a, b)).collect();
        Ok(ExactMatrix { data, ..*self })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let data = self.data.iter().map(|a| self.ring.mul(a, c)).collect();
        ExactMatrix { data, ..*self }
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.ring != o.ring {
            return Err(Error::Invalid("ring mismatch in product".into()));
        }
        if self.cols != o.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut acc = vec![Scalar::zero(); self.rows * o.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let orow = o.row(k);
                let out = &mut acc[i * o.cols..(i + 1) * o.cols];
                for (j, b) in orow.iter().enumerate() {
                    if !b.is_zero() {
                        out[j] = out[j].add(&a.mul(b));
                    }
                }
            }
        }
        let data = acc.into_iter().map(|s| self.ring.norm(s)).collect();
        Ok(ExactMatrix { ring: self.ring, rows: self.rows, cols: o.cols, data })
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut s = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s = s.add(&a.mul(b));
                    }
                }
                self.ring.norm(s)
            })
            .collect())
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut m = Self::zeros(self.ring, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m.data[(i - r0) * (c1 - c0) + (j - c0)] = self.get(i, j).clone();
            }
        }
        m
    }

    /// Copy `b` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = b.get(i, j).clone();
            }
        }
    }

    pub fn hstack(&self, o: &Self) -> Result<Self> {
        if self.rows != o.rows {
            return Err(Error::Dimension("hstack row mismatch".into()));
        }
        let mut m = Self::zeros(self.ring, self.rows, self.cols + o.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, o);
        Ok(m)
    }

    pub fn vstack(&self, o: &Self) -> Result<Self> {
        if self.cols != o.cols {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let mut m = Self::zeros(self.ring, self.rows + o.rows, self.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, 0, o);
        Ok(m)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let v = self.ring.add(&self.data[dst * self.cols + j], &c.mul(s));
                self.data[dst * self.cols + j] = v;
            }
        }
    }

    /// col[dst] += c * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let v = self.ring.add(&self.data[i * self.cols + dst], &c.mul(s));
                self.data[i * self.cols + dst] = v;
            }
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &Scalar) {
        for j in 0..self.cols {
            let v = self.ring.mul(&self.data[i * self.cols + j], c);
            self.data[i * self.cols + j] = v;
        }
    }

    pub fn scale_col(&mut self, j: usize, c: &Scalar) {
        for i in 0..self.rows {
            let v = self.ring.mul(&self.data[i * self.cols + j], c);
            self.data[i * self.cols + j] = v;
        }
    }

    /// Parse the text format: a header line `rows cols ring`, then entries in row-major order.
    pub fn parse_text(s: &str) -> Result<Self> {
        let mut tokens = s.split_whitespace();
        let mut next = |what: &str| tokens.next().ok_or_else(|| Error::Invalid(format!("missing {what}")));
        let rows: usize = next("row count")?.parse().map_err(|_| Error::Invalid("bad row count".into()))?;
        let cols: usize = next("column count")?.parse().map_err(|_| Error::Invalid("bad column count".into()))?;
        let ring: Ring = next("ring")?.parse()?;
        let mut data = Vec::with_capacity(rows * cols);
        for k in 0..rows * cols {
            let t = next(&format!("entry {k}"))?;
            let v: Scalar = t.parse().map_err(|e: super::scalar::ParseScalarError| Error::Invalid(e.to_string()))?;
            data.push(ring.try_element(&v)?);
        }
        if tokens.next().is_some() {
            return Err(Error::Invalid("trailing entries after matrix".into()));
        }
        Ok(ExactMatrix { ring, rows, cols, data })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.ring);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} over {}", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", line.join(", "))?;
        }
        Ok(())
    }
}
