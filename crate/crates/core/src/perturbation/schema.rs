//! JSON forms of twisted modules over cochain algebras and of module local systems.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{component, reduced_differential, tensor_one, FreeResolution, ModuleLocalSystem};
use crate::dg::{GradedModule, HomSpace, TwistedModule};
use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Ring, Scalar};
use crate::simplicial::{cochain_algebra, SimplicialSet};

type Rows = Vec<Vec<Scalar>>;

fn matrix(ring: Ring, rows: &Rows, n: usize, m: usize, what: &str) -> Result<ExactMatrix> {
    let mat = if rows.is_empty() { ExactMatrix::zeros(ring, 0, m) } else { ExactMatrix::from_rows(ring, rows)? };
    if mat.rows() != n || mat.cols() != m {
        return Err(Error::Dimension(format!("{what} must be {n}x{m}, got {}x{}", mat.rows(), mat.cols())));
    }
    Ok(mat)
}

/// `x = d0 ⊗ 1 + Σ M_σ ⊗ σ*` on `V ⊗ C*(X)`, where `V` has the listed degrees.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TwistedModuleJson {
    pub degrees: Vec<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d0: Option<Rows>,
    #[serde(default)]
    pub terms: Vec<(String, Rows)>,
}

impl TwistedModuleJson {
    pub fn build(&self, base: &SimplicialSet, ring: Ring) -> Result<TwistedModule> {
        let n = self.degrees.len();
        let v = GradedModule::with_degrees(ring, &self.degrees);
        let alg = Arc::new(cochain_algebra(base, ring, base.dim())?);
        let e = HomSpace::new(v.clone(), v.clone(), alg.clone());
        let mut x = match &self.d0 {
            Some(rows) => tensor_one(&e, &matrix(ring, rows, n, n, "d0")?),
            None => e.zero(),
        };
        for (label, rows) in &self.terms {
            let k = alg.index_of(label).ok_or_else(|| Error::Invalid(format!("unknown simplex {label:?}")))?;
            let m = matrix(ring, rows, n, n, &format!("term {label}"))?;
            for q in 0..n {
                for p in 0..n {
                    let i = e.index(q, p, k);
                    x[i] = ring.add(&x[i], m.get(q, p));
                }
            }
        }
        e.expect_degree(&x, 1)?;
        TwistedModule::new(v, alg, x)
    }

    /// Reads `d0` off a reduced module; other modules are written with vertex terms.
    pub fn from_module(m: &TwistedModule) -> Self {
        let e = m.end_space();
        let d0 = reduced_differential(m);
        let rows = |mat: &ExactMatrix| mat.to_rows();
        let mut terms = Vec::new();
        for k in 0..m.alg.dim() {
            if d0.is_some() && m.alg.degree(k) == 0 {
                continue;
            }
            let c = component(&e, &m.x, k);
            if !c.is_zero() {
                terms.push((m.alg.label(k).to_string(), rows(&c)));
            }
        }
        TwistedModuleJson { degrees: m.v.degrees().to_vec(), d0: d0.filter(|d| !d.is_zero()).map(|d| rows(&d)), terms }
    }
}

/// A module `V` presented by `generators` and `relations` (each a vector in the generators),
/// with the action of every listed edge on the generators; other edges act by the identity.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ModuleSystemJson {
    pub generators: usize,
    #[serde(default)]
    pub relations: Rows,
    #[serde(default)]
    pub monodromy: Vec<(String, Rows)>,
}

impl ModuleSystemJson {
    pub fn build(&self, base: &SimplicialSet, ring: Ring) -> Result<ModuleLocalSystem> {
        let g = self.generators;
        let mut pres = ExactMatrix::zeros(ring, g, self.relations.len());
        for (c, rel) in self.relations.iter().enumerate() {
            if rel.len() != g {
                return Err(Error::Dimension(format!("relation {c} has {} entries, expected {g}", rel.len())));
            }
            for (r, s) in rel.iter().enumerate() {
                pres.set(r, c, ring.try_element(s)?);
            }
        }
        let mut mono = vec![ExactMatrix::identity(ring, g); base.count(1)];
        for (edge, rows) in &self.monodromy {
            let k = base
                .labels(1)
                .iter()
                .position(|l| l == edge)
                .ok_or_else(|| Error::Invalid(format!("unknown edge {edge:?}")))?;
            mono[k] = matrix(ring, rows, g, g, &format!("monodromy on {edge}"))?;
        }
        Ok(ModuleLocalSystem { base: base.clone(), resolution: FreeResolution::presentation(&pres)?, monodromy: mono })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::circle;

    #[test]
    fn module_roundtrip() {
        let j = TwistedModuleJson {
            degrees: vec![0, 1],
            d0: Some(vec![vec![Scalar::zero(), Scalar::zero()], vec![Scalar::from_int(2), Scalar::zero()]]),
            terms: vec![(
                "01".into(),
                vec![vec![Scalar::zero(), Scalar::zero()], vec![Scalar::zero(), Scalar::zero()]],
            )],
        };
        let m = j.build(&circle(3), Ring::Integers).unwrap();
        let back = TwistedModuleJson::from_module(&m);
        assert_eq!(back.d0, j.d0);
        assert!(back.terms.is_empty());
        let wrong = TwistedModuleJson { degrees: vec![0, 0], ..j };
        assert!(wrong.build(&circle(3), Ring::Integers).is_err());
    }

    #[test]
    fn module_system_with_relation() {
        let j = ModuleSystemJson {
            generators: 1,
            relations: vec![vec![Scalar::from_int(3)]],
            monodromy: vec![("12".into(), vec![vec![Scalar::from_int(-1)]])],
        };
        let s = j.build(&circle(3), Ring::Integers).unwrap();
        assert_eq!(s.resolution.w.degrees(), &[-1, 0]);
        assert!(ModuleSystemJson { monodromy: vec![("99".into(), vec![])], ..j }
            .build(&circle(3), Ring::Integers)
            .is_err());
    }
}
