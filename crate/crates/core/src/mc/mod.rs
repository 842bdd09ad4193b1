//! Maurer–Cartan elements, twistings, gauge and homotopy gauge equivalence.

mod category;
mod search;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dg::{vec_ops, DgAlgebra, DgModule, Sparse};
use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Scalar};

pub use category::{hom_h0, mc_category_h0, H0Space, McCategoryTable};
pub use search::{search_homotopy_gauge, Invariants, SearchOutcome};

/// A degree-1 element `x` with `d(x) + x² = 0`.
#[derive(Clone, Debug)]
pub struct McElement {
    pub algebra: Arc<DgAlgebra>,
    pub value: Vec<Scalar>,
}

impl McElement {
    pub fn new(algebra: Arc<DgAlgebra>, value: Vec<Scalar>) -> Result<Self> {
        let check = is_mc(&algebra, &value)?;
        if !check.mc {
            return Err(Error::NotMc(format!("residual {}", algebra.format(&check.residual))));
        }
        Ok(McElement { algebra, value })
    }

    /// For negative tests: no MC check.
    pub fn unchecked(algebra: Arc<DgAlgebra>, value: Vec<Scalar>) -> Self {
        McElement { algebra, value }
    }

    pub fn zero(algebra: Arc<DgAlgebra>) -> Self {
        let value = algebra.zero();
        McElement { algebra, value }
    }

    pub fn to_json(&self) -> McJson {
        McJson { algebra: None, value: self.algebra.module().terms(&self.value) }
    }

    pub fn from_json(algebra: Arc<DgAlgebra>, j: &McJson) -> Result<Self> {
        let terms: Vec<(&str, Scalar)> = j.value.iter().map(|(l, c)| (l.as_str(), c.clone())).collect();
        let v = algebra.module().vector(&terms)?;
        McElement::new(algebra, v)
    }
}

/// `{ algebra: ref, value: [[label, coeff]...] }`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct McJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    pub value: Vec<(String, Scalar)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McCheck {
    pub mc: bool,
    pub residual: Vec<Scalar>,
}

/// `d(x) + x²` and whether it vanishes.
pub fn is_mc(a: &DgAlgebra, x: &[Scalar]) -> Result<McCheck> {
    a.expect_degree(x, 1)?;
    let residual = mc_residual(a, x);
    Ok(McCheck { mc: vec_ops::is_zero(&residual), residual })
}

pub fn mc_residual(a: &DgAlgebra, x: &[Scalar]) -> Vec<Scalar> {
    a.add(&a.d(x), &a.mul(x, x))
}

fn sparse(v: Vec<Scalar>) -> Sparse {
    v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
}

/// `D(b) = d(b) + y b - (-1)^{|b|} b x`.
pub fn twisted_d(a: &DgAlgebra, x: &[Scalar], y: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = a.add(&a.d(b), &a.mul(y, b));
    for (deg, part) in a.homogeneous_parts(b) {
        let px = a.mul(&part, x);
        out = if deg.rem_euclid(2) == 1 { a.add(&out, &px) } else { a.sub(&out, &px) };
    }
    out
}

/// Right module `A^[x]` with `D(b) = d(b) + x b`.
pub fn twist_module(a: &Arc<DgAlgebra>, x: &McElement) -> Result<DgModule> {
    let x = require_mc(a, x)?;
    let n = a.dim();
    let diff = (0..n).map(|i| sparse(a.add(&a.d(&a.basis(i)), &a.mul(&x, &a.basis(i))))).collect();
    let action = (0..n).map(|i| a.products_from(i).to_vec()).collect();
    DgModule::from_parts(a.module().clone(), a.clone(), action, diff)
}

/// `A^x`: same product, differential `d(b) + [x, b]`.
pub fn twist_algebra(a: &DgAlgebra, x: &McElement) -> Result<DgAlgebra> {
    let x = require_mc(a, x)?;
    let diff = a.differential_from(|i| {
        let b = a.basis(i);
        a.add(&a.d(&b), &a.commutator(&x, &b))
    });
    a.with_differential(diff)
}

/// The complex `A^[x,y]` over the ground ring.
pub fn hom_twist(a: &DgAlgebra, x: &McElement, y: &McElement) -> Result<DgModule> {
    let x = require_mc(a, x)?;
    let y = require_mc(a, y)?;
    let diff = (0..a.dim()).map(|i| sparse(twisted_d(a, &x, &y, &a.basis(i)))).collect();
    DgModule::over_ground(a.module().clone(), diff)
}

fn require_mc(a: &DgAlgebra, x: &McElement) -> Result<Vec<Scalar>> {
    if x.value.len() != a.dim() {
        return Err(Error::Dimension("element does not belong to the algebra".into()));
    }
    let c = is_mc(a, &x.value)?;
    if !c.mc {
        return Err(Error::NotMc(format!("residual {}", a.format(&c.residual))));
    }
    Ok(x.value.clone())
}

/// `g·x = g x g⁻¹ - d(g) g⁻¹`.
pub fn gauge_act(a: &DgAlgebra, g: &[Scalar], x: &McElement) -> Result<McElement> {
    let gi = a.inverse(g)?.ok_or_else(|| Error::NotInvertible(a.format(g)))?;
    let v = a.sub(&a.mul(&a.mul(g, &x.value), &gi), &a.mul(&a.d(g), &gi));
    let check = is_mc(a, &v)?;
    if !check.mc {
        return Err(Error::Internal("gauge action left the MC set".into()));
    }
    Ok(McElement { algebra: x.algebra.clone(), value: v })
}

/// `d g + y g - g x = 0` with `g` invertible.
pub fn is_gauge_pair(a: &DgAlgebra, g: &[Scalar], x: &[Scalar], y: &[Scalar]) -> bool {
    if a.expect_degree(g, 0).is_err() {
        return false;
    }
    vec_ops::is_zero(&twisted_d(a, x, y, g)) && matches!(a.inverse(g), Ok(Some(_)))
}

/// `g: x → y`, `h: y → x` and homotopies `wx`, `wy` of degree -1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyGaugeCertificate {
    pub g: Vec<Scalar>,
    pub h: Vec<Scalar>,
    pub wx: Vec<Scalar>,
    pub wy: Vec<Scalar>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateJson {
    pub g: Vec<(String, Scalar)>,
    pub h: Vec<(String, Scalar)>,
    pub wx: Vec<(String, Scalar)>,
    pub wy: Vec<(String, Scalar)>,
}

impl HomotopyGaugeCertificate {
    pub fn trivial(a: &DgAlgebra) -> Self {
        HomotopyGaugeCertificate { g: a.one(), h: a.one(), wx: a.zero(), wy: a.zero() }
    }

    pub fn to_json(&self, a: &DgAlgebra) -> CertificateJson {
        let t = |v: &[Scalar]| a.module().terms(v);
        CertificateJson { g: t(&self.g), h: t(&self.h), wx: t(&self.wx), wy: t(&self.wy) }
    }

    pub fn from_json(a: &DgAlgebra, j: &CertificateJson) -> Result<Self> {
        let v = |t: &[(String, Scalar)]| {
            let terms: Vec<(&str, Scalar)> = t.iter().map(|(l, c)| (l.as_str(), c.clone())).collect();
            a.module().vector(&terms)
        };
        Ok(HomotopyGaugeCertificate { g: v(&j.g)?, h: v(&j.h)?, wx: v(&j.wx)?, wy: v(&j.wy)? })
    }
}

/// Outcome of the four homotopy gauge conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    /// residual of each condition, empty when it holds
    pub residuals: [Vec<Scalar>; 4],
    pub degrees_ok: bool,
}

impl CertificateReport {
    pub fn is_ok(&self) -> bool {
        self.degrees_ok && self.residuals.iter().all(|r| vec_ops::is_zero(r))
    }

    /// First failing condition, numbered 1 to 4.
    pub fn first_failure(&self) -> Option<usize> {
        self.residuals.iter().position(|r| !vec_ops::is_zero(r)).map(|i| i + 1)
    }
}

/// `dg + yg - gx = 0`, `dh + xh - hy = 0`, `hg - 1 = d^x(wx)`, `gh - 1 = d^y(wy)`.
pub fn verify_homotopy_gauge(
    a: &DgAlgebra,
    x: &[Scalar],
    y: &[Scalar],
    c: &HomotopyGaugeCertificate,
) -> CertificateReport {
    let degrees_ok = a.expect_degree(&c.g, 0).is_ok()
        && a.expect_degree(&c.h, 0).is_ok()
        && a.expect_degree(&c.wx, -1).is_ok()
        && a.expect_degree(&c.wy, -1).is_ok();
    let r1 = twisted_d(a, x, y, &c.g);
    let r2 = twisted_d(a, y, x, &c.h);
    let r3 = a.sub(&a.sub(&a.mul(&c.h, &c.g), &a.one()), &twisted_d(a, x, x, &c.wx));
    let r4 = a.sub(&a.sub(&a.mul(&c.g, &c.h), &a.one()), &twisted_d(a, y, y, &c.wy));
    CertificateReport { residuals: [r1, r2, r3, r4], degrees_ok }
}

/// Matrix of `b ↦ D(b)` on the listed source indices, rows indexed by `tgt`.
pub(crate) fn twisted_matrix(a: &DgAlgebra, x: &[Scalar], y: &[Scalar], src: &[usize], tgt: &[usize]) -> ExactMatrix {
    let mut pos = vec![usize::MAX; a.dim()];
    for (p, &t) in tgt.iter().enumerate() {
        pos[t] = p;
    }
    let mut m = ExactMatrix::zeros(a.ring(), tgt.len(), src.len());
    for (c, &j) in src.iter().enumerate() {
        for (i, v) in twisted_d(a, x, y, &a.basis(j)).into_iter().enumerate() {
            if !v.is_zero() && pos[i] != usize::MAX {
                m.set(pos[i], c, v);
            }
        }
    }
    m
}
