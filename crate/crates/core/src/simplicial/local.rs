use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::cochains::{cochain_algebra, cochain_offsets};
use super::sset::{Simplex, SimplicialSet};
use crate::dg::{DgAlgebra, GradedModule, HomSpace, TwistedHom, TwistedModule};
use crate::error::{Error, Result};
use crate::linalg::{inverse, CohomologyReport, ExactMatrix, Ring, Scalar};

/// Representation of the fundamental groupoid: an invertible matrix per nondegenerate edge,
/// transporting the fibre at vertex 1 to the fibre at vertex 0.
#[derive(Clone, Debug)]
pub struct LocalSystem {
    pub base: SimplicialSet,
    pub ring: Ring,
    pub rank: usize,
    pub monodromy: Vec<ExactMatrix>,
}

impl LocalSystem {
    /// Checks shapes, invertibility and the cocycle condition on every 2-simplex.
    pub fn new(base: SimplicialSet, ring: Ring, rank: usize, monodromy: Vec<ExactMatrix>) -> Result<Self> {
        if monodromy.len() != base.count(1) {
            return Err(Error::Dimension(format!(
                "{} edges but {} monodromy matrices",
                base.count(1),
                monodromy.len()
            )));
        }
        for (k, m) in monodromy.iter().enumerate() {
            if m.rows() != rank || m.cols() != rank || m.ring() != ring {
                return Err(Error::Dimension(format!(
                    "monodromy on edge {} is not a {rank}x{rank} matrix over {ring}",
                    base.label(1, k)
                )));
            }
            if inverse(m)?.is_none() {
                return Err(Error::NotInvertible(format!("monodromy on edge {}", base.label(1, k))));
            }
        }
        let ls = LocalSystem { base, ring, rank, monodromy };
        if let Some(w) = ls.cocycle_violation() {
            return Err(Error::Invalid(format!("cocycle condition fails on 2-simplex {w}")));
        }
        Ok(ls)
    }

    pub fn trivial(base: SimplicialSet, ring: Ring, rank: usize) -> Self {
        let monodromy = vec![ExactMatrix::identity(ring, rank); base.count(1)];
        LocalSystem { base, ring, rank, monodromy }
    }

    /// Transport along a possibly degenerate edge.
    pub fn transport(&self, e: &Simplex) -> ExactMatrix {
        if e.is_nondegenerate() {
            self.monodromy[e.root].clone()
        } else {
            ExactMatrix::identity(self.ring, self.rank)
        }
    }

    /// First 2-simplex where `F(τ01) F(τ12) ≠ F(τ02)`.
    pub fn cocycle_violation(&self) -> Option<String> {
        for k in 0..self.base.count(2) {
            let s = Simplex::nondegenerate(2, k);
            let f01 = self.transport(&self.base.face(&s, 2));
            let f12 = self.transport(&self.base.face(&s, 0));
            let f02 = self.transport(&self.base.face(&s, 1));
            if f01.mul(&f12).expect("square") != f02 {
                return Some(self.base.label(2, k).to_string());
            }
        }
        None
    }

    /// Pullback along a simplicial map given on nondegenerate edges.
    pub fn pullback(&self, map: &SimplicialMap, src: &SimplicialSet) -> Result<LocalSystem> {
        let monodromy = (0..src.count(1)).map(|k| self.transport(&map.image(1, k))).collect();
        LocalSystem::new(src.clone(), self.ring, self.rank, monodromy)
    }

    pub fn from_json(base: SimplicialSet, j: &LocalSystemJson, ring: Ring) -> Result<Self> {
        let mut monodromy = vec![ExactMatrix::identity(ring, j.rank); base.count(1)];
        for (edge, rows) in &j.monodromy {
            let k = base
                .labels(1)
                .iter()
                .position(|l| l == edge)
                .ok_or_else(|| Error::Invalid(format!("unknown edge {edge:?}")))?;
            let rows: Vec<Vec<Scalar>> = rows
                .iter()
                .map(|r| r.iter().map(|c| ring.try_element(c)).collect::<Result<_>>())
                .collect::<Result<_>>()?;
            monodromy[k] = ExactMatrix::from_rows(ring, &rows)?;
        }
        LocalSystem::new(base, ring, j.rank, monodromy)
    }

    fn fibre(&self) -> GradedModule {
        GradedModule::uniform(self.ring, self.rank, 0)
    }
}

/// `{ complex, rank, ring, monodromy: [[edge, matrix]...] }`; unlisted edges carry the identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalSystemJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<String>,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<Ring>,
    pub monodromy: Vec<(String, Vec<Vec<Scalar>>)>,
}

/// Simplicial map between ordered complexes determined by a vertex map.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    // images[n][k]
    images: Vec<Vec<Simplex>>,
}

impl SimplicialMap {
    /// Requires the vertex map to be order preserving on every simplex with image a simplex.
    pub fn from_vertex_map(src: &SimplicialSet, tgt: &SimplicialSet, vmap: &[usize]) -> Result<Self> {
        if vmap.len() != src.count(0) {
            return Err(Error::Dimension("vertex map has the wrong length".into()));
        }
        let mut by_vertices: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        for n in 0..=tgt.dim() {
            for k in 0..tgt.count(n) {
                by_vertices.insert(tgt.vertices(n, k).to_vec(), (n, k));
            }
        }
        let mut images = Vec::new();
        for n in 0..=src.dim() {
            let mut im = Vec::new();
            for k in 0..src.count(n) {
                let vs: Vec<usize> = src.vertices(n, k).iter().map(|&v| vmap[v]).collect();
                if vs.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::Invalid(format!("vertex map reverses the order on {}", src.label(n, k))));
                }
                let mut root = vs.clone();
                root.dedup();
                let mut eta = Vec::with_capacity(vs.len());
                let mut j = 0;
                for (t, v) in vs.iter().enumerate() {
                    if t > 0 && vs[t - 1] != *v {
                        j += 1;
                    }
                    eta.push(j);
                }
                let &(rd, rk) = by_vertices
                    .get(&root)
                    .ok_or_else(|| Error::Invalid(format!("image of {} is not a simplex", src.label(n, k))))?;
                im.push(Simplex { root_dim: rd, root: rk, eta });
            }
            images.push(im);
        }
        Ok(SimplicialMap { images })
    }

    pub fn image(&self, n: usize, k: usize) -> Simplex {
        self.images[n][k].clone()
    }
}

/// The twisted cochain data of a local system: `C*(X)`, the fibre `V` and `Ψ(F) = Σ (F(σ) − 1) ⊗ σ*`.
pub fn rep_to_mc(ls: &LocalSystem) -> Result<TwistedModule> {
    let alg = Arc::new(cochain_algebra(&ls.base, ls.ring, ls.base.dim())?);
    rep_to_mc_over(ls, alg)
}

/// [`rep_to_mc`] with a precomputed cochain algebra of the base.
pub fn rep_to_mc_over(ls: &LocalSystem, alg: Arc<DgAlgebra>) -> Result<TwistedModule> {
    let v = ls.fibre();
    let hs = HomSpace::new(v.clone(), v.clone(), alg.clone());
    let off = cochain_offsets(&ls.base, ls.base.dim());
    let mut x = hs.zero();
    let one = ExactMatrix::identity(ls.ring, ls.rank);
    for (k, m) in ls.monodromy.iter().enumerate() {
        let psi = m.sub(&one)?;
        for q in 0..ls.rank {
            for p in 0..ls.rank {
                let c = psi.get(q, p);
                if !c.is_zero() {
                    x[hs.index(q, p, off[1] + k)] = c.clone();
                }
            }
        }
    }
    let m = TwistedModule::new(v, alg, x).map_err(|e| Error::Internal(format!("Ψ produced a non-MC element: {e}")))?;
    Ok(m)
}

/// `Φ(f)(σ) = 1 + f(σ)` for an MC element supported on edges.
pub fn mc_to_rep(base: &SimplicialSet, m: &TwistedModule) -> Result<LocalSystem> {
    if !m.is_mc() {
        return Err(Error::NotMc("input of Φ".into()));
    }
    let hs = m.end_space();
    let off = cochain_offsets(base, base.dim());
    let r = m.ring();
    let edges = off[1]..off.get(2).copied().unwrap_or(off[1]);
    for i in 0..hs.dim() {
        let (_, _, k) = hs.split(i);
        if !m.x[i].is_zero() && !edges.contains(&k) {
            return Err(Error::Invalid("MC element is not concentrated on edges".into()));
        }
    }
    if m.v.degrees().iter().any(|&d| d != 0) {
        return Err(Error::Invalid("fibre must sit in degree 0".into()));
    }
    let n = m.v.len();
    let mut monodromy = Vec::with_capacity(base.count(1));
    for k in 0..base.count(1) {
        let mut f = ExactMatrix::identity(r, n);
        for q in 0..n {
            for p in 0..n {
                let c = &m.x[hs.index(q, p, off[1] + k)];
                if !c.is_zero() {
                    f.add_at(q, p, c);
                }
            }
        }
        if inverse(&f)?.is_none() {
            return Err(Error::NotInvertible(format!("1 + f({}) is not invertible", base.label(1, k))));
        }
        monodromy.push(f);
    }
    LocalSystem::new(base.clone(), r, n, monodromy)
}

/// `V ⊗ C*(X)` with `D = 1⊗d + Ψ(F)`.
pub fn twisted_cochains(ls: &LocalSystem) -> Result<TwistedModule> {
    rep_to_mc(ls)
}

pub fn local_system_cohomology(ls: &LocalSystem) -> Result<CohomologyReport> {
    twisted_cochains(ls)?.cohomology()
}

/// `Hom(V, W) ⊗ C*(X)` with `D f = df + y f − (−1)^{|f|} f x`, for local systems `x` on `V` and `y` on `W`.
pub fn two_sided_twisted(x: &LocalSystem, y: &LocalSystem) -> Result<TwistedHom> {
    let mx = rep_to_mc(x)?;
    let my = rep_to_mc_over(y, mx.alg.clone())?;
    TwistedHom::new(&mx, &my)
}
