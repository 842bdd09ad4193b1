use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A possibly degenerate simplex `s_η(x)`: nondegenerate `x = (root_dim, root)` pulled back
/// along the monotone surjection `η: [n] → [root_dim]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub root_dim: usize,
    pub root: usize,
    pub eta: Vec<usize>,
}

impl Simplex {
    pub fn nondegenerate(dim: usize, root: usize) -> Self {
        Simplex { root_dim: dim, root, eta: (0..=dim).collect() }
    }

    pub fn dim(&self) -> usize {
        self.eta.len() - 1
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.eta.len() == self.root_dim + 1
    }
}

/// Finite simplicial set stored by its nondegenerate simplices and their faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialSet {
    labels: Vec<Vec<String>>,
    // faces[n][k][i] = d_i of the k-th nondegenerate n-simplex (empty for n = 0)
    faces: Vec<Vec<Vec<Simplex>>>,
    vertices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialSet {
    /// Validates face dimensions and the simplicial identities `d_i d_j = d_{j-1} d_i` for `i < j`.
    pub fn new(labels: Vec<Vec<String>>, faces: Vec<Vec<Vec<Simplex>>>) -> Result<Self> {
        if labels.len() != faces.len() {
            return Err(Error::Dimension("labels and faces disagree on the dimension".into()));
        }
        for (n, fs) in faces.iter().enumerate() {
            if fs.len() != labels[n].len() {
                return Err(Error::Dimension(format!(
                    "dimension {n}: {} labels, {} face lists",
                    labels[n].len(),
                    fs.len()
                )));
            }
            for (k, f) in fs.iter().enumerate() {
                let expected = if n == 0 { 0 } else { n + 1 };
                if f.len() != expected {
                    return Err(Error::Invalid(format!("simplex {} has {} faces", labels[n][k], f.len())));
                }
                for s in f {
                    if s.dim() + 1 != n
                        || s.root_dim >= n
                        || s.root >= labels[s.root_dim].len()
                        || !is_surjection(&s.eta, s.root_dim)
                    {
                        return Err(Error::Invalid(format!("malformed face of {}", labels[n][k])));
                    }
                }
            }
        }
        let mut set = SimplicialSet { labels, faces, vertices: Vec::new() };
        for n in 2..set.faces.len() {
            for k in 0..set.labels[n].len() {
                let s = Simplex::nondegenerate(n, k);
                for j in 1..=n {
                    for i in 0..j {
                        let a = set.face(&set.face(&s, j), i);
                        let b = set.face(&set.face(&s, i), j - 1);
                        if a != b {
                            return Err(Error::Invalid(format!(
                                "simplicial identity d_{i} d_{j} = d_{} d_{i} fails on {}",
                                j - 1,
                                set.labels[n][k]
                            )));
                        }
                    }
                }
            }
        }
        let mut vertices = Vec::with_capacity(set.faces.len());
        for n in 0..set.faces.len() {
            let mut vs = Vec::with_capacity(set.labels[n].len());
            for k in 0..set.labels[n].len() {
                let s = Simplex::nondegenerate(n, k);
                vs.push((0..=n).map(|j| set.vertex_of(&s, j)).collect());
            }
            vertices.push(vs);
        }
        set.vertices = vertices;
        Ok(set)
    }

    pub fn dim(&self) -> usize {
        self.labels.len().saturating_sub(1)
    }

    pub fn count(&self, n: usize) -> usize {
        self.labels.get(n).map_or(0, |l| l.len())
    }

    /// Numbers of nondegenerate simplices per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.labels.iter().enumerate().map(|(n, l)| if n % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }

    pub fn label(&self, n: usize, k: usize) -> &str {
        &self.labels[n][k]
    }

    pub fn labels(&self, n: usize) -> &[String] {
        &self.labels[n]
    }

    pub fn find(&self, label: &str) -> Option<(usize, usize)> {
        self.labels.iter().enumerate().find_map(|(n, l)| l.iter().position(|x| x == label).map(|k| (n, k)))
    }

    /// Vertex indices of a nondegenerate simplex.
    pub fn vertices(&self, n: usize, k: usize) -> &[usize] {
        &self.vertices[n][k]
    }

    pub fn nondegenerate_face(&self, n: usize, k: usize, i: usize) -> &Simplex {
        &self.faces[n][k][i]
    }

    /// `d_i` of an arbitrary simplex, normalized.
    pub fn face(&self, s: &Simplex, i: usize) -> Simplex {
        let n = s.dim();
        assert!(n >= 1 && i <= n, "face index out of range");
        let mut eta: Vec<usize> = s.eta.clone();
        let v = eta.remove(i);
        if eta.contains(&v) {
            return Simplex { root_dim: s.root_dim, root: s.root, eta };
        }
        // η∘δ_i = δ_v ∘ η'
        let reduced: Vec<usize> = eta.iter().map(|&e| if e > v { e - 1 } else { e }).collect();
        let f = &self.faces[s.root_dim][s.root][v];
        Simplex { root_dim: f.root_dim, root: f.root, eta: reduced.iter().map(|&e| f.eta[e]).collect() }
    }

    /// Vertex `j` as an index into the 0-simplices.
    pub fn vertex_of(&self, s: &Simplex, j: usize) -> usize {
        let mut cur = Simplex::nondegenerate(s.root_dim, s.root);
        let target = s.eta[j];
        let top = s.root_dim;
        // drop vertices above the target, then below it
        for i in (target + 1..=top).rev() {
            cur = self.face(&cur, i);
        }
        for _ in 0..target {
            cur = self.face(&cur, 0);
        }
        cur.root
    }

    /// Front `p`-face `d_{p+1} ⋯ d_n σ`.
    pub fn front(&self, s: &Simplex, p: usize) -> Simplex {
        let mut cur = s.clone();
        while cur.dim() > p {
            let d = cur.dim();
            cur = self.face(&cur, d);
        }
        cur
    }

    /// Back `q`-face `d_0^{n-q} σ`.
    pub fn back(&self, s: &Simplex, q: usize) -> Simplex {
        let mut cur = s.clone();
        while cur.dim() > q {
            cur = self.face(&cur, 0);
        }
        cur
    }

    /// The edge between vertices `a < b` of a simplex (possibly degenerate).
    pub fn edge(&self, s: &Simplex, a: usize, b: usize) -> Simplex {
        let mut cur = s.clone();
        let n = s.dim();
        for i in (b + 1..=n).rev() {
            cur = self.face(&cur, i);
        }
        for i in (a + 1..b).rev() {
            cur = self.face(&cur, i);
        }
        for _ in 0..a {
            cur = self.face(&cur, 0);
        }
        cur
    }

    /// Skeleton up to dimension `n`.
    pub fn skeleton(&self, n: usize) -> SimplicialSet {
        let m = (n + 1).min(self.labels.len());
        SimplicialSet {
            labels: self.labels[..m].to_vec(),
            faces: self.faces[..m].to_vec(),
            vertices: self.vertices[..m].to_vec(),
        }
    }

    pub fn point() -> Self {
        SimplicialSet::new(vec![vec!["*".into()]], vec![vec![vec![]]]).expect("valid")
    }

    /// Ordered simplicial complex closed under faces; each simplex is an ascending vertex list.
    pub fn from_ordered_complex(vertices: &[String], simplices: &[Vec<usize>]) -> Result<Self> {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for v in 0..vertices.len() {
            all.insert(vec![v]);
        }
        for s in simplices {
            if s.is_empty() {
                return Err(Error::Invalid("empty simplex".into()));
            }
            if s.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::Invalid(format!("simplex {s:?} uses an unknown vertex")));
            }
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invalid(format!("simplex {s:?} is not strictly ascending")));
            }
            let n = s.len();
            for mask in 1u64..(1u64 << n) {
                all.insert((0..n).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect());
            }
        }
        let top = all.iter().map(|s| s.len()).max().unwrap_or(0);
        let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top];
        for s in all {
            by_dim[s.len() - 1].push(s);
        }
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        for ss in &by_dim {
            for (k, s) in ss.iter().enumerate() {
                index.insert(s.clone(), k);
            }
        }
        let sep = if vertices.iter().all(|v| v.chars().count() == 1) { "" } else { "," };
        let mut labels = Vec::new();
        let mut faces = Vec::new();
        for (n, ss) in by_dim.iter().enumerate() {
            labels.push(
                ss.iter().map(|s| s.iter().map(|&v| vertices[v].as_str()).collect::<Vec<_>>().join(sep)).collect(),
            );
            faces.push(
                ss.iter()
                    .map(|s| {
                        if n == 0 {
                            return Vec::new();
                        }
                        (0..=n)
                            .map(|i| {
                                let mut f = s.clone();
                                f.remove(i);
                                Simplex::nondegenerate(n - 1, index[&f])
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
        SimplicialSet::new(labels, faces)
    }

    pub fn from_json(j: &ComplexJson) -> Result<Self> {
        let mut simplices = Vec::new();
        for s in &j.simplices {
            let mut idx = Vec::with_capacity(s.len());
            for l in s {
                idx.push(
                    j.vertices
                        .iter()
                        .position(|v| v == l)
                        .ok_or_else(|| Error::Invalid(format!("unknown vertex {l:?}")))?,
                );
            }
            simplices.push(idx);
        }
        let mut seen = BTreeSet::new();
        for v in &j.vertices {
            if !seen.insert(v) {
                return Err(Error::Invalid(format!("duplicate vertex {v:?}")));
            }
        }
        Self::from_ordered_complex(&j.vertices, &simplices)
    }
}

fn is_surjection(eta: &[usize], top: usize) -> bool {
    !eta.is_empty()
        && eta[0] == 0
        && *eta.last().unwrap() == top
        && eta.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
}

/// `{ vertices: [labels], simplices: [[v...]...] }`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexJson {
    pub vertices: Vec<String>,
    pub simplices: Vec<Vec<String>>,
}

impl ComplexJson {
    pub fn new(vertices: &[&str], simplices: &[&[&str]]) -> Self {
        ComplexJson {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            simplices: simplices.iter().map(|s| s.iter().map(|v| v.to_string()).collect()).collect(),
        }
    }
}

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Standard simplex `Δⁿ`.
pub fn delta(n: usize) -> SimplicialSet {
    SimplicialSet::from_ordered_complex(&numbered(n + 1), &[(0..=n).collect()]).expect("valid")
}

/// Boundary `∂Δⁿ`.
pub fn boundary_delta(n: usize) -> SimplicialSet {
    let faces: Vec<Vec<usize>> = (0..=n).map(|i| (0..=n).filter(|&j| j != i).collect()).collect();
    SimplicialSet::from_ordered_complex(&numbered(n + 1), &faces).expect("valid")
}

/// Circle with `m ≥ 3` vertices and edges `{i, i+1}`, `{0, m-1}`.
pub fn circle(m: usize) -> SimplicialSet {
    SimplicialSet::from_ordered_complex(&numbered(m), &circle_edges(m)).expect("valid")
}

pub fn circle_edges(m: usize) -> Vec<Vec<usize>> {
    let mut e: Vec<Vec<usize>> = (0..m - 1).map(|i| vec![i, i + 1]).collect();
    e.push(vec![0, m - 1]);
    e
}

/// Seven-vertex torus.
pub fn torus7() -> SimplicialSet {
    SimplicialSet::from_ordered_complex(&numbered(7), &torus7_triangles()).expect("valid")
}

pub fn torus7_triangles() -> Vec<Vec<usize>> {
    let mut t = Vec::new();
    for i in 0..7 {
        for (a, b) in [(1, 3), (2, 3)] {
            let mut s = vec![i, (i + a) % 7, (i + b) % 7];
            s.sort();
            t.push(s);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(delta(2).f_vector(), vec![3, 3, 1]);
        assert_eq!(circle(3).f_vector(), vec![3, 3]);
        let t = torus7();
        assert_eq!(t.f_vector(), vec![7, 21, 14]);
        assert_eq!(t.euler_characteristic(), 0);
        assert_eq!(boundary_delta(3).f_vector(), vec![4, 6, 4]);
    }

    #[test]
    fn rejects_unordered() {
        let v = numbered(3);
        assert!(SimplicialSet::from_ordered_complex(&v, &[vec![1, 0]]).is_err());
        assert!(SimplicialSet::from_ordered_complex(&v, &[vec![1, 1]]).is_err());
        assert!(SimplicialSet::from_ordered_complex(&v, &[vec![0, 5]]).is_err());
    }

    #[test]
    fn faces_and_vertices() {
        let d = delta(3);
        let s = Simplex::nondegenerate(3, 0);
        assert_eq!(d.vertices(3, 0), &[0, 1, 2, 3]);
        let f = d.front(&s, 1);
        assert_eq!(d.label(1, f.root), "01");
        let b = d.back(&s, 2);
        assert_eq!(d.label(2, b.root), "123");
        let e = d.edge(&s, 1, 3);
        assert_eq!(d.label(1, e.root), "13");
        // degenerate face computation
        let deg = Simplex { root_dim: 1, root: 0, eta: vec![0, 0, 1] };
        assert_eq!(d.face(&deg, 0), Simplex::nondegenerate(1, 0));
        assert_eq!(d.face(&deg, 2).eta, vec![0, 0]);
    }
}
