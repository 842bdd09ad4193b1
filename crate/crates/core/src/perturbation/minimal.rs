use super::hodge::{hodge_data, HodgeData};
use super::{geometric_series, is_minimal, tensor_one, ReducedTwistedModule};
use crate::dg::{GradedModule, HomSpace, TwistedHom, TwistedModule};
use crate::error::{Error, Result};
use crate::linalg::{solve_linear, ExactMatrix, Scalar};

/// Minimal model `H ⊗ A` with a deformation retraction onto it.
#[derive(Clone, Debug)]
pub struct MinimalModel {
    pub module: TwistedModule,
    /// closed degree 0 map `H⊗A → V⊗A`
    pub include: Vec<Scalar>,
    /// closed degree 0 map `V⊗A → H⊗A`
    pub project: Vec<Scalar>,
    /// degree −1 endomorphism of `V⊗A` with `include∘project − 1 = D(homotopy)`
    pub homotopy: Vec<Scalar>,
    pub hodge: HodgeData,
    /// fibre of the input module
    pub source: GradedModule,
}

/// Which identities of a [`MinimalModel`] hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub mc: bool,
    pub minimal: bool,
    pub include_closed: bool,
    pub project_closed: bool,
    pub retraction: bool,
    pub homotopy: bool,
}

impl EquivalenceReport {
    pub fn is_ok(&self) -> bool {
        self.mc && self.minimal && self.include_closed && self.project_closed && self.retraction && self.homotopy
    }
}

fn require_nonnegative(m: &TwistedModule) -> Result<()> {
    match m.alg.module().degree_range() {
        Some((lo, _)) if lo < 0 => Err(Error::Invalid("base algebra has negative degrees".into())),
        _ => Ok(()),
    }
}

pub fn minimal_model(m: &ReducedTwistedModule) -> Result<MinimalModel> {
    let h = hodge_data(m.v(), &m.d0)?;
    minimal_model_with(m, h)
}

/// Transfer along the given Hodge data: differential `t d′(1 + s d′)⁻¹ t` on `H ⊗ A`.
pub fn minimal_model_with(m: &ReducedTwistedModule, hodge: HodgeData) -> Result<MinimalModel> {
    require_nonnegative(&m.module)?;
    if !hodge.violations(&m.d0).is_empty() {
        return Err(Error::Invalid(format!("Hodge data: {}", hodge.violations(&m.d0).join(", "))));
    }
    let alg = m.module.alg.clone();
    let v = m.v().clone();
    let h = hodge.harmonic.clone();
    let e = m.module.end_space();
    let hv = HomSpace::new(h.clone(), v.clone(), alg.clone());
    let vh = HomSpace::new(v.clone(), h.clone(), alg.clone());
    let delta = m.perturbation();
    let s = tensor_one(&e, &hodge.s);
    let inc = tensor_one(&hv, &hodge.include);
    let proj = tensor_one(&vh, &hodge.project);
    let after = geometric_series(&e, &e.compose(&s, &e, &delta))?; // (1 + sδ)⁻¹
    let before = geometric_series(&e, &e.compose(&delta, &e, &s))?; // (1 + δs)⁻¹
    let x_h = vh.compose(&vh.compose(&proj, &e, &e.compose(&delta, &e, &after)), &hv, &inc);
    let module =
        TwistedModule::new(h, alg, x_h).map_err(|err| Error::Internal(format!("transferred differential: {err}")))?;
    Ok(MinimalModel {
        module,
        include: e.compose(&after, &hv, &inc),
        project: vh.compose(&proj, &e, &before),
        homotopy: e.neg(&e.compose(&s, &e, &before)),
        hodge,
        source: v,
    })
}

impl MinimalModel {
    pub fn verify(&self, m: &ReducedTwistedModule) -> Result<EquivalenceReport> {
        let src = &m.module;
        let fwd = TwistedHom::new(&self.module, src)?;
        let bwd = TwistedHom::new(src, &self.module)?;
        let endo = TwistedHom::new(src, src)?;
        let e = &endo.space;
        let hh = self.module.end_space();
        let pi = bwd.space.compose(&self.project, &fwd.space, &self.include);
        let ip = fwd.space.compose(&self.include, &bwd.space, &self.project);
        Ok(EquivalenceReport {
            mc: self.module.is_mc(),
            minimal: is_minimal(&self.module),
            include_closed: fwd.is_closed(&self.include),
            project_closed: bwd.is_closed(&self.project),
            retraction: pi == hh.identity(),
            homotopy: endo.apply_d(&self.homotopy) == e.sub(&ip, &e.identity()),
        })
    }
}

/// Outcome of [`minimal_iso_check`].
#[derive(Clone, Debug)]
pub struct IsoCheck {
    pub invertible: bool,
    pub inverse: Option<Vec<Scalar>>,
}

/// Strict invertibility of a closed degree-0 map `f: M → N`.
///
/// `f = f₀ + f₊` with `f₀` over `A⁰`; `f` is invertible iff `f₀` is, and then
/// `f⁻¹ = Σ (−f₀⁻¹f₊)^i f₀⁻¹`.
pub fn minimal_iso_check(src: &TwistedModule, tgt: &TwistedModule, f: &[Scalar]) -> Result<IsoCheck> {
    require_nonnegative(src)?;
    let hom = TwistedHom::new(src, tgt)?;
    let fwd = &hom.space;
    fwd.expect_degree(f, 0)?;
    if !hom.is_closed(f) {
        return Err(Error::Invalid("map is not closed".into()));
    }
    let no = IsoCheck { invertible: false, inverse: None };
    if sorted(src.v.degrees()) != sorted(tgt.v.degrees()) {
        return Ok(no);
    }
    let alg = &src.alg;
    let deg0 = alg.module().in_degree(0);
    let bwd = HomSpace::new(tgt.v.clone(), src.v.clone(), alg.clone());
    let ev = src.end_space();
    let ew = tgt.end_space();
    let f0: Vec<Scalar> = f
        .iter()
        .enumerate()
        .map(|(i, c)| if deg0.contains(&fwd.split(i).2) { c.clone() } else { Scalar::zero() })
        .collect();
    // solve g₀ f₀ = 1 over A⁰
    let unknowns: Vec<usize> =
        (0..bwd.dim()).filter(|&i| deg0.contains(&bwd.split(i).2) && bwd.degree(i) == 0).collect();
    let rows: Vec<usize> = (0..ev.dim()).filter(|&i| deg0.contains(&ev.split(i).2)).collect();
    let ring = src.ring();
    let mut mat = ExactMatrix::zeros(ring, rows.len(), unknowns.len());
    for (c, &u) in unknowns.iter().enumerate() {
        let mut b = bwd.zero();
        b[u] = Scalar::one();
        let gf = bwd.compose(&b, fwd, &f0);
        for (r, &i) in rows.iter().enumerate() {
            mat.set(r, c, gf[i].clone());
        }
    }
    let id = ev.identity();
    let rhs: Vec<Scalar> = rows.iter().map(|&i| id[i].clone()).collect();
    let Some(sol) = solve_linear(&mat, &rhs)? else {
        return Ok(no);
    };
    let mut g0 = bwd.zero();
    for (c, &u) in unknowns.iter().enumerate() {
        g0[u] = sol.particular[c].clone();
    }
    if fwd.compose(&f0, &bwd, &g0) != ew.identity() {
        return Ok(no);
    }
    let fplus = fwd.sub(f, &f0);
    let nil = bwd.compose(&g0, fwd, &fplus);
    let series = geometric_series(&ev, &nil)?;
    let inverse = ev.compose(&series, &bwd, &g0);
    if bwd.compose(&inverse, fwd, f) != id || fwd.compose(f, &bwd, &inverse) != ew.identity() {
        return Err(Error::Internal("series inverse does not invert".into()));
    }
    Ok(IsoCheck { invertible: true, inverse: Some(inverse) })
}

fn sorted(d: &[i32]) -> Vec<i32> {
    let mut v = d.to_vec();
    v.sort_unstable();
    v
}

impl MinimalModel {
    /// `project₂ ∘ include₁`, a closed map between the minimal models of two runs on one input.
    pub fn comparison(&self, other: &MinimalModel) -> Vec<Scalar> {
        let alg = self.module.alg.clone();
        let inner = HomSpace::new(self.module.v.clone(), self.source.clone(), alg.clone());
        let outer = HomSpace::new(other.source.clone(), other.module.v.clone(), alg);
        outer.compose(&other.project, &inner, &self.include)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::interval::build_interval_algebra;
    use crate::linalg::Ring;
    use crate::perturbation::hodge_data_in_basis;
    use crate::random::{random_degree_preserving, random_reduced_module};
    use crate::simplicial::{circle, cochain_algebra, cochain_offsets, delta};

    #[test]
    fn random_modules_transfer() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let k2 = build_interval_algebra(2, Ring::Rationals).unwrap().sset;
        for (b, base) in [circle(3), delta(2), k2].iter().enumerate() {
            for ring in [Ring::Rationals, Ring::prime_field(5).unwrap()] {
                for _ in 0..4 {
                    let m = random_reduced_module(base, ring, 6, (-3, 3), &mut rng).unwrap();
                    let mm = minimal_model(&m).unwrap();
                    assert!(mm.verify(&m).unwrap().is_ok(), "base {b}");
                    assert!(mm.module.cohomology().unwrap().same_groups(&m.module.cohomology().unwrap()));
                    let g = random_degree_preserving(m.v(), &mut rng);
                    let other = minimal_model_with(&m, hodge_data_in_basis(m.v(), &m.d0, &g).unwrap()).unwrap();
                    let f = mm.comparison(&other);
                    let iso = minimal_iso_check(&mm.module, &other.module, &f).unwrap();
                    assert!(iso.invertible);
                }
            }
        }
    }

    #[test]
    fn contractible_fibre_gives_zero() {
        let r = Ring::Rationals;
        let a = Arc::new(cochain_algebra(&delta(1), r, 1).unwrap());
        let v = GradedModule::with_degrees(r, &[0, 1]);
        let e = HomSpace::new(v.clone(), v.clone(), a.clone());
        let d0 = ExactMatrix::from_i64(r, &[vec![0, 0], vec![1, 0]]);
        let m = ReducedTwistedModule::new(TwistedModule::new(v, a, tensor_one(&e, &d0)).unwrap()).unwrap();
        let mm = minimal_model(&m).unwrap();
        assert_eq!(mm.module.v.len(), 0);
        assert!(mm.verify(&m).unwrap().is_ok());
    }

    #[test]
    fn minimal_input_is_fixed() {
        let r = Ring::Rationals;
        let base = circle(3);
        let a = Arc::new(cochain_algebra(&base, r, 1).unwrap());
        let v = GradedModule::with_degrees(r, &[0]);
        let e = HomSpace::new(v.clone(), v.clone(), a.clone());
        let mut x = e.zero();
        x[e.index(0, 0, cochain_offsets(&base, 1)[1])] = Scalar::from_int(2);
        let m = ReducedTwistedModule::new(TwistedModule::new(v, a, x.clone()).unwrap()).unwrap();
        let mm = minimal_model(&m).unwrap();
        assert_eq!(mm.module.x, x);
        assert_eq!(mm.include, e.identity());
        assert_eq!(mm.project, e.identity());
        let id = minimal_iso_check(&mm.module, &mm.module, &e.identity()).unwrap();
        assert_eq!(id.inverse, Some(e.identity()));
        let zero = minimal_iso_check(&mm.module, &mm.module, &e.zero()).unwrap();
        assert!(!zero.invertible);
    }

    #[test]
    fn rank_two_on_circle() {
        // d⁰ of rank 1 with a d¹ mixing the two degree-0 vectors
        let r = Ring::Rationals;
        let base = circle(3);
        let a = Arc::new(cochain_algebra(&base, r, 1).unwrap());
        let v = GradedModule::with_degrees(r, &[0, 0, 1]);
        let e = HomSpace::new(v.clone(), v.clone(), a.clone());
        let d0 = ExactMatrix::from_i64(r, &[vec![0, 0, 0], vec![0, 0, 0], vec![1, 0, 0]]);
        let mut x = tensor_one(&e, &d0);
        let edge = cochain_offsets(&base, 1)[1];
        // monodromy 1 + E₁₀ on one edge commutes with d⁰
        x[e.index(1, 0, edge)] = Scalar::one();
        let m = ReducedTwistedModule::new(TwistedModule::new(v, a, x).unwrap()).unwrap();
        let mm = minimal_model(&m).unwrap();
        assert_eq!(mm.module.v.len(), 1);
        assert!(mm.verify(&m).unwrap().is_ok());
        assert!(mm.module.cohomology().unwrap().same_groups(&m.module.cohomology().unwrap()));
    }
}
