use std::collections::HashMap;

use super::cochains::{cochain_algebra, cochain_offsets};
use super::sset::{Simplex, SimplicialSet};
use crate::dg::{tensor_dga, AlgebraMap, DgAlgebra};
use crate::error::Result;
use crate::linalg::Ring;

/// Nondegenerate simplex of `X × Y`: roots in each factor and a lattice path of distinct points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductCell {
    pub left: (usize, usize),
    pub right: (usize, usize),
    pub path: Vec<(usize, usize)>,
}

/// `X × Y` truncated at dimension `cap`, with its cells.
#[derive(Clone, Debug)]
pub struct Product {
    pub set: SimplicialSet,
    pub cells: Vec<Vec<ProductCell>>,
}

fn paths(p: usize, q: usize, n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut cur = vec![(0, 0)];
    fn rec(p: usize, q: usize, left: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let (a, b) = *cur.last().unwrap();
        if left == 0 {
            if a == p && b == q {
                out.push(cur.clone());
            }
            return;
        }
        for (da, db) in [(1, 0), (0, 1), (1, 1)] {
            if a + da <= p && b + db <= q {
                cur.push((a + da, b + db));
                rec(p, q, left - 1, cur, out);
                cur.pop();
            }
        }
    }
    rec(p, q, n, &mut cur, &mut out);
    out
}

fn step_word(path: &[(usize, usize)]) -> String {
    path.windows(2)
        .map(|w| match (w[1].0 - w[0].0, w[1].1 - w[0].1) {
            (1, 0) => 'x',
            (0, 1) => 'y',
            _ => 'b',
        })
        .collect()
}

/// Product simplicial set up to dimension `cap`.
pub fn product(x: &SimplicialSet, y: &SimplicialSet, cap: usize) -> Result<Product> {
    let top = cap.min(x.dim() + y.dim());
    let mut cells: Vec<Vec<ProductCell>> = Vec::new();
    let mut index: HashMap<ProductCell, usize> = HashMap::new();
    for n in 0..=top {
        let mut cs = Vec::new();
        for p in 0..=n.min(x.dim()) {
            for q in 0..=n.min(y.dim()) {
                if p + q < n {
                    continue;
                }
                for path in paths(p, q, n) {
                    for kx in 0..x.count(p) {
                        for ky in 0..y.count(q) {
                            cs.push(ProductCell { left: (p, kx), right: (q, ky), path: path.clone() });
                        }
                    }
                }
            }
        }
        for (k, c) in cs.iter().enumerate() {
            index.insert(c.clone(), k);
        }
        cells.push(cs);
    }
    let mut labels = Vec::new();
    let mut faces = Vec::new();
    for (n, cs) in cells.iter().enumerate() {
        labels.push(
            cs.iter()
                .map(|c| {
                    format!("{}×{}[{}]", x.label(c.left.0, c.left.1), y.label(c.right.0, c.right.1), step_word(&c.path))
                })
                .collect(),
        );
        let mut fs = Vec::new();
        for c in cs {
            if n == 0 {
                fs.push(Vec::new());
                continue;
            }
            let sx = Simplex { root_dim: c.left.0, root: c.left.1, eta: c.path.iter().map(|p| p.0).collect() };
            let sy = Simplex { root_dim: c.right.0, root: c.right.1, eta: c.path.iter().map(|p| p.1).collect() };
            let mut f = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let a = x.face(&sx, i);
                let b = y.face(&sy, i);
                let mut path = Vec::new();
                let mut eta = Vec::new();
                for t in 0..a.eta.len() {
                    let pt = (a.eta[t], b.eta[t]);
                    if path.last() != Some(&pt) {
                        path.push(pt);
                    }
                    eta.push(path.len() - 1);
                }
                let cell = ProductCell { left: (a.root_dim, a.root), right: (b.root_dim, b.root), path };
                let m = cell.path.len() - 1;
                let idx = index[&cell];
                f.push(Simplex { root_dim: m, root: idx, eta });
            }
            fs.push(f);
        }
        faces.push(fs);
    }
    Ok(Product { set: SimplicialSet::new(labels, faces)?, cells })
}

/// Sign of the shuffle given by the step word: `(-1)^{#(y-step before x-step)}`.
fn shuffle_sign(path: &[(usize, usize)]) -> Option<bool> {
    let w = step_word(path);
    if w.contains('b') {
        return None;
    }
    let mut ys = 0usize;
    let mut inv = 0usize;
    for ch in w.chars() {
        if ch == 'y' {
            ys += 1;
        } else {
            inv += ys;
        }
    }
    Some(inv % 2 == 1)
}

/// The dual of the shuffle map `C*(X × Y) → C*(X) ⊗ C*(Y)` up to dimension `cap`,
/// together with both algebras.
pub fn ez_algebra_map(
    x: &SimplicialSet,
    y: &SimplicialSet,
    ring: Ring,
    cap: usize,
) -> Result<(DgAlgebra, DgAlgebra, AlgebraMap)> {
    let prod = product(x, y, cap)?;
    let src = cochain_algebra(&prod.set, ring, cap)?;
    let cx = cochain_algebra(x, ring, cap)?;
    let cy = cochain_algebra(y, ring, cap)?;
    let tgt = tensor_dga(&cx, &cy)?;
    let ox = cochain_offsets(x, cap);
    let oy = cochain_offsets(y, cap);
    let mut images = Vec::with_capacity(src.dim());
    for (n, cs) in prod.cells.iter().enumerate() {
        for c in cs {
            let mut v = tgt.zero();
            if c.left.0 + c.right.0 == n {
                if let Some(neg) = shuffle_sign(&c.path) {
                    let i = (ox[c.left.0] + c.left.1) * cy.dim() + oy[c.right.0] + c.right.1;
                    v[i] = ring.sign(if neg { 1 } else { 0 });
                }
            }
            images.push(v);
        }
    }
    let map = AlgebraMap::new(&src, &tgt, images)?;
    Ok((src, tgt, map))
}

/// Cochain basis index of a product cell.
pub fn product_cell_index(prod: &Product, n: usize, k: usize) -> usize {
    prod.cells[..n].iter().map(|c| c.len()).sum::<usize>() + k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::check_dga;
    use crate::simplicial::nerve::{nerve, FiniteCategory};
    use crate::simplicial::sset::delta;

    #[test]
    fn square_has_two_triangles() {
        let p = product(&delta(1), &delta(1), 2).unwrap();
        assert_eq!(p.set.f_vector(), vec![4, 5, 2]);
        assert_eq!(p.set.euler_characteristic(), 1);
    }

    #[test]
    fn product_with_point() {
        let p = product(&delta(2), &SimplicialSet::point(), 2).unwrap();
        assert_eq!(p.set.f_vector(), delta(2).f_vector());
    }

    #[test]
    fn ez_is_an_algebra_map() {
        let k1 = nerve(&FiniteCategory::interval_groupoid(), 1).unwrap();
        let (src, tgt, map) = ez_algebra_map(&delta(1), &k1, Ring::Integers, 2).unwrap();
        assert!(check_dga(&src).is_ok());
        let rep = map.check(&src, &tgt);
        assert!(rep.is_ok(), "{rep:?}");
    }
}
