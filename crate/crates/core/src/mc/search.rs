use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{twist_algebra, twist_module, twisted_matrix, verify_homotopy_gauge, HomotopyGaugeCertificate, McElement};
use crate::dg::{vec_ops, DgAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{kernel, solve_linear, CohomologyReport, ExactMatrix, Scalar};

/// Which invariant separated the two elements.
#[derive(Clone, Debug)]
pub struct Invariants {
    pub name: &'static str,
    pub left: CohomologyReport,
    pub right: CohomologyReport,
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    /// Verified certificate; `gauge` when `h = g⁻¹` and both homotopies vanish.
    Equivalent {
        cert: HomotopyGaugeCertificate,
        gauge: bool,
    },
    Distinguished(Invariants),
    Unknown(String),
}

impl SearchOutcome {
    pub fn kind(&self) -> &'static str {
        match self {
            SearchOutcome::Equivalent { .. } => "Equivalent",
            SearchOutcome::Distinguished(_) => "Distinguished",
            SearchOutcome::Unknown(_) => "Unknown",
        }
    }
}

fn embed(a: &DgAlgebra, idx: &[usize], coords: &[Scalar]) -> Vec<Scalar> {
    let mut v = a.zero();
    for (p, &i) in idx.iter().enumerate() {
        v[i] = coords[p].clone();
    }
    v
}

fn random_combination(a: &DgAlgebra, basis: &[Vec<Scalar>], bound: i64, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    let r = a.ring();
    let mut v = vec_ops::zeros(basis[0].len());
    for b in basis {
        let c = r.from_int(rng.gen_range(-bound..=bound));
        vec_ops::axpy(r, &mut v, &c, b);
    }
    v
}

/// Cohomology invariants of `A^[x]` and `A^x`; returns the first that differs.
fn compare_invariants(a: &std::sync::Arc<DgAlgebra>, x: &McElement, y: &McElement) -> Result<Option<Invariants>> {
    let lx = twist_module(a, x)?.cohomology()?;
    let ly = twist_module(a, y)?.cohomology()?;
    if !lx.same_groups(&ly) {
        return Ok(Some(Invariants { name: "module twist", left: lx, right: ly }));
    }
    let ax = crate::linalg::cohomology(&twist_algebra(a, x)?.complex())?;
    let ay = crate::linalg::cohomology(&twist_algebra(a, y)?.complex())?;
    if !ax.same_groups(&ay) {
        return Ok(Some(Invariants { name: "algebra twist", left: ax, right: ay }));
    }
    Ok(None)
}

/// Decide whether `x` and `y` are homotopy gauge equivalent, within `budget` samples.
///
/// Sampling is seeded; an `Equivalent` outcome always carries a verified certificate.
pub fn search_homotopy_gauge(
    a: &std::sync::Arc<DgAlgebra>,
    x: &McElement,
    y: &McElement,
    budget: usize,
    seed: u64,
) -> Result<SearchOutcome> {
    if a.truncation().is_some() {
        // cohomology of a truncated algebra is not an invariant
        return Ok(SearchOutcome::Unknown("truncated algebra: only certificate verification is available".into()));
    }
    if let Some(inv) = compare_invariants(a, x, y)? {
        return Ok(SearchOutcome::Distinguished(inv));
    }
    let r = a.ring();
    let (xv, yv) = (&x.value, &y.value);
    let deg0 = a.module().in_degree(0);
    let deg1 = a.module().in_degree(1);
    let degm1 = a.module().in_degree(-1);
    let closed = kernel(&twisted_matrix(a, xv, yv, &deg0, &deg1))?;
    if closed.is_empty() {
        return Ok(SearchOutcome::Unknown("no closed degree-0 maps from x to y".into()));
    }
    let closed: Vec<Vec<Scalar>> = closed.iter().map(|c| embed(a, &deg0, c)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let finish = |cert: HomotopyGaugeCertificate, gauge: bool| -> Result<SearchOutcome> {
        if verify_homotopy_gauge(a, xv, yv, &cert).is_ok() {
            Ok(SearchOutcome::Equivalent { cert, gauge })
        } else {
            Err(Error::Internal("search produced a certificate that does not verify".into()))
        }
    };

    // gauge: invertible closed g
    let mut bound = 1i64;
    let mut candidates: Vec<Vec<Scalar>> = closed.clone();
    for t in 0..budget {
        if t > 0 && t % 4 == 0 {
            bound = bound.saturating_mul(2);
        }
        candidates.push(random_combination(a, &closed, bound, &mut rng));
    }
    for g in &candidates {
        if let Some(h) = a.inverse(g)? {
            return finish(HomotopyGaugeCertificate { g: g.clone(), h, wx: a.zero(), wy: a.zero() }, true);
        }
    }

    // homotopy gauge: solve for (h, wx, wy) given g
    let back = twisted_matrix(a, yv, xv, &deg0, &deg1);
    let dx = twisted_matrix(a, xv, xv, &degm1, &deg0);
    let dy = twisted_matrix(a, yv, yv, &degm1, &deg0);
    let (n0, nm) = (deg0.len(), degm1.len());
    let one: Vec<Scalar> = deg0.iter().map(|&i| a.unit()[i].clone()).collect();
    for g in &candidates {
        let right = a.mult_matrix(g, false, &deg0, &deg0); // h ↦ h g
        let left = a.mult_matrix(g, true, &deg0, &deg0); // h ↦ g h
        let rows = deg1.len() + 2 * n0;
        let cols = n0 + 2 * nm;
        let mut m = ExactMatrix::zeros(r, rows, cols);
        m.set_block(0, 0, &back);
        m.set_block(deg1.len(), 0, &right);
        m.set_block(deg1.len(), n0, &dx.neg());
        m.set_block(deg1.len() + n0, 0, &left);
        m.set_block(deg1.len() + n0, n0 + nm, &dy.neg());
        let mut rhs = vec![Scalar::zero(); deg1.len()];
        rhs.extend(one.iter().cloned());
        rhs.extend(one.iter().cloned());
        if let Some(sol) = solve_linear(&m, &rhs)? {
            let p = &sol.particular;
            let cert = HomotopyGaugeCertificate {
                g: g.clone(),
                h: embed(a, &deg0, &p[..n0]),
                wx: embed(a, &degm1, &p[n0..n0 + nm]),
                wy: embed(a, &degm1, &p[n0 + nm..]),
            };
            return finish(cert, false);
        }
    }
    let note = if r.is_field() {
        // determinant of left multiplication has degree ≤ dim A⁰ in the sample coordinates
        let q = (2 * bound + 1) as f64;
        format!(
            "no certificate in {} samples; Schwartz-Zippel bound per sample {:.3e} if an invertible closed map exists",
            candidates.len(),
            (n0 as f64 / q).min(1.0)
        )
    } else {
        format!("no certificate in {} small integer samples", candidates.len())
    };
    Ok(SearchOutcome::Unknown(note))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::dg::endomorphism_dga;
    use crate::dg::GradedModule;
    use crate::linalg::Ring;
    use crate::mc::gauge_act;
    use crate::simplicial::{cochain_algebra, delta};

    fn end_delta2() -> Arc<DgAlgebra> {
        let c = cochain_algebra(&delta(2), Ring::Rationals, 2).unwrap();
        Arc::new(endomorphism_dga(&c, &GradedModule::uniform(Ring::Rationals, 2, 0)).unwrap())
    }

    #[test]
    fn gauge_orbit_is_found() {
        let a = end_delta2();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let deg0 = a.module().in_degree(0);
        let g = loop {
            let mut g = a.one();
            for &i in &deg0 {
                g[i] = g[i].add(&Scalar::from_int(rng.gen_range(-2..=2)));
            }
            if a.inverse(&g).unwrap().is_some() {
                break g;
            }
        };
        let x = McElement::zero(a.clone());
        let y = gauge_act(&a, &g, &x).unwrap();
        match search_homotopy_gauge(&a, &x, &y, 16, 1).unwrap() {
            SearchOutcome::Equivalent { cert, .. } => {
                assert!(verify_homotopy_gauge(&a, &x.value, &y.value, &cert).is_ok())
            }
            o => panic!("{o:?}"),
        }
    }
}
