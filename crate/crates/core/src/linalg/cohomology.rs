use num_bigint::BigInt;
use serde_json::{json, Value};

use super::elim::rank;
use super::matrix::ExactMatrix;
use super::ring::Ring;
use super::smith::smith_normal_form;
use crate::error::{Error, Result};

/// Finite cochain complex `C^start -> C^{start+1} -> ...` of free modules.
///
/// `d[i]` maps `C^{start+i}` to `C^{start+i+1}`, so it has `dims[i+1]` rows and `dims[i]` columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    pub ring: Ring,
    pub start: i32,
    pub dims: Vec<usize>,
    pub d: Vec<ExactMatrix>,
}

impl CochainComplex {
    /// Build from differentials alone; the dimensions are read off the matrices.
    pub fn from_differentials(ring: Ring, start: i32, d: Vec<ExactMatrix>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::Invalid("a complex needs at least one differential or explicit dimensions".into()));
        }
        let mut dims = vec![d[0].cols()];
        for (i, m) in d.iter().enumerate() {
            if m.cols() != dims[i] {
                return Err(Error::Dimension(format!(
                    "differential {} has {} columns but the previous target has rank {}",
                    i,
                    m.cols(),
                    dims[i]
                )));
            }
            dims.push(m.rows());
        }
        let c = CochainComplex { ring, start, dims, d };
        c.validate()?;
        Ok(c)
    }

    pub fn new(ring: Ring, start: i32, dims: Vec<usize>, d: Vec<ExactMatrix>) -> Result<Self> {
        let c = CochainComplex { ring, start, dims, d };
        c.validate()?;
        Ok(c)
    }

    /// Composability, ring agreement and `d∘d = 0`.
    pub fn validate(&self) -> Result<()> {
        if self.d.len() + 1 != self.dims.len() && !(self.dims.is_empty() && self.d.is_empty()) {
            return Err(Error::Dimension(format!("{} differentials for {} modules", self.d.len(), self.dims.len())));
        }
        for (i, m) in self.d.iter().enumerate() {
            if m.ring() != self.ring {
                return Err(Error::Invalid(format!("differential {i} is over {} not {}", m.ring(), self.ring)));
            }
            if m.cols() != self.dims[i] || m.rows() != self.dims[i + 1] {
                return Err(Error::Dimension(format!(
                    "differential in degree {} is {}x{}, expected {}x{}",
                    self.start + i as i32,
                    m.rows(),
                    m.cols(),
                    self.dims[i + 1],
                    self.dims[i]
                )));
            }
        }
        for i in 1..self.d.len() {
            let dd = self.d[i].mul(&self.d[i - 1])?;
            for r in 0..dd.rows() {
                for c in 0..dd.cols() {
                    if !dd.get(r, c).is_zero() {
                        return Err(Error::DSquared { degree: self.start + i as i32 - 1, row: r, col: c });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn end(&self) -> i32 {
        self.start + self.dims.len() as i32 - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl CohomologyGroup {
    pub fn free(rank: usize) -> Self {
        CohomologyGroup { rank, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn to_json(&self) -> Value {
        if self.torsion.is_empty() {
            json!({ "rank": self.rank })
        } else {
            let t: Vec<Value> = self
                .torsion
                .iter()
                .map(|b| match i64::try_from(b) {
                    Ok(v) => json!(v),
                    Err(_) => json!(b.to_string()),
                })
                .collect();
            json!({ "rank": self.rank, "torsion": t })
        }
    }
}

/// Free rank and torsion invariant factors of each cohomology group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub ring: Ring,
    pub start: i32,
    pub groups: Vec<CohomologyGroup>,
}

impl CohomologyReport {
    pub fn degree(&self, k: i32) -> CohomologyGroup {
        let i = k - self.start;
        if i < 0 || i as usize >= self.groups.len() {
            CohomologyGroup::free(0)
        } else {
            self.groups[i as usize].clone()
        }
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.rank).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.groups.iter().all(|g| g.is_zero())
    }

    /// Equality as graded groups, ignoring leading and trailing zero groups.
    pub fn same_groups(&self, o: &CohomologyReport) -> bool {
        let lo = self.start.min(o.start);
        let hi = (self.start + self.groups.len() as i32).max(o.start + o.groups.len() as i32);
        (lo..hi).all(|k| self.degree(k) == o.degree(k))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring.to_string(),
            "start": self.start,
            "H": self.groups.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Cohomology of a finite complex with torsion over the integers.
pub fn cohomology(c: &CochainComplex) -> Result<CohomologyReport> {
    c.validate()?;
    let n = c.dims.len();
    let mut ranks = Vec::with_capacity(c.d.len());
    let mut torsion = Vec::with_capacity(c.d.len());
    for m in &c.d {
        if c.ring.is_field() {
            ranks.push(rank(m));
            torsion.push(Vec::new());
        } else {
            let s = smith_normal_form(m)?;
            ranks.push(s.rank());
            torsion.push(s.invariants.iter().filter(|x| !x.is_one()).map(|x| x.numer()).collect::<Vec<_>>());
        }
    }
    let mut groups = Vec::with_capacity(n);
    for i in 0..n {
        let out = if i < ranks.len() { ranks[i] } else { 0 };
        let inc = if i > 0 { ranks[i - 1] } else { 0 };
        let rank = c.dims[i] - out - inc;
        let t = if i > 0 { torsion[i - 1].clone() } else { Vec::new() };
        groups.push(CohomologyGroup { rank, torsion: t });
    }
    Ok(CohomologyReport { ring: c.ring, start: c.start, groups })
}
