use std::collections::HashMap;

use super::sset::{Simplex, SimplicialSet};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    pub src: usize,
    pub tgt: usize,
}

/// Finite category: objects, non-identity arrows and a composition table.
///
/// `compose[(f, g)]` is `g∘f` (first `f`, then `g`) as `Some(arrow)` or `None` for an identity.
#[derive(Clone, Debug)]
pub struct FiniteCategory {
    pub objects: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub compose: HashMap<(usize, usize), Option<usize>>,
}

impl FiniteCategory {
    /// One object, no arrows.
    pub fn trivial() -> Self {
        FiniteCategory { objects: vec!["*".into()], arrows: vec![], compose: HashMap::new() }
    }

    /// `e → f` with a single arrow `s`.
    pub fn arrow() -> Self {
        FiniteCategory {
            objects: vec!["e".into(), "f".into()],
            arrows: vec![Arrow { label: "s".into(), src: 0, tgt: 1 }],
            compose: HashMap::new(),
        }
    }

    /// Two objects `e, f` and mutually inverse arrows `s: e → f`, `t: f → e`.
    pub fn interval_groupoid() -> Self {
        let mut compose = HashMap::new();
        compose.insert((0, 1), None);
        compose.insert((1, 0), None);
        FiniteCategory {
            objects: vec!["e".into(), "f".into()],
            arrows: vec![Arrow { label: "s".into(), src: 0, tgt: 1 }, Arrow { label: "t".into(), src: 1, tgt: 0 }],
            compose,
        }
    }
}

// a string of arrows (None = identity) starting at an object
#[derive(Clone)]
struct Chain {
    start: usize,
    arrows: Vec<Option<usize>>,
}

/// Nerve truncated at dimension `cap`: `n`-simplices are composable strings of `n` arrows,
/// strings containing identities being degeneracies of shorter ones.
pub fn nerve(cat: &FiniteCategory, cap: usize) -> Result<SimplicialSet> {
    let single = cat.objects.iter().chain(cat.arrows.iter().map(|a| &a.label)).all(|l| l.chars().count() == 1);
    let sep = if single { "" } else { "|" };
    let mut strings: Vec<Vec<Vec<usize>>> = vec![(0..cat.objects.len()).map(|_| Vec::new()).collect()];
    let mut starts: Vec<Vec<usize>> = vec![(0..cat.objects.len()).collect()];
    for n in 1..=cap {
        let mut next = Vec::new();
        let mut st = Vec::new();
        for (k, s) in strings[n - 1].iter().enumerate() {
            let end = if n == 1 { starts[0][k] } else { cat.arrows[*s.last().unwrap()].tgt };
            for (a, arr) in cat.arrows.iter().enumerate() {
                if arr.src == end {
                    let mut t = s.clone();
                    t.push(a);
                    next.push(t);
                    st.push(if n == 1 { end } else { starts[n - 1][k] });
                }
            }
        }
        if next.is_empty() {
            break;
        }
        strings.push(next);
        starts.push(st);
    }
    let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::new();
    for (n, ss) in strings.iter().enumerate() {
        let mut m = HashMap::new();
        if n > 0 {
            for (k, s) in ss.iter().enumerate() {
                m.insert(s.clone(), k);
            }
        }
        index.push(m);
    }
    let normalize = |c: &Chain| -> Result<Simplex> {
        let root: Vec<usize> = c.arrows.iter().filter_map(|a| *a).collect();
        let mut eta = vec![0];
        for a in &c.arrows {
            let last = *eta.last().unwrap();
            eta.push(if a.is_some() { last + 1 } else { last });
        }
        let r = root.len();
        let idx = if r == 0 {
            c.start
        } else {
            *index
                .get(r)
                .and_then(|m| m.get(&root))
                .ok_or_else(|| Error::Invalid("face of a simplex beyond the dimension cap".into()))?
        };
        Ok(Simplex { root_dim: r, root: idx, eta })
    };
    let mut labels = Vec::new();
    let mut faces = Vec::new();
    for (n, ss) in strings.iter().enumerate() {
        if n == 0 {
            labels.push(cat.objects.clone());
            faces.push(vec![Vec::new(); cat.objects.len()]);
            continue;
        }
        let mut ls = Vec::new();
        let mut fs = Vec::new();
        for (k, s) in ss.iter().enumerate() {
            ls.push(s.iter().map(|&a| cat.arrows[a].label.as_str()).collect::<Vec<_>>().join(sep));
            let mut f = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let chain = if i == 0 {
                    Chain { start: cat.arrows[s[0]].tgt, arrows: s[1..].iter().map(|&a| Some(a)).collect() }
                } else if i == n {
                    Chain { start: starts[n][k], arrows: s[..n - 1].iter().map(|&a| Some(a)).collect() }
                } else {
                    let c = cat.compose.get(&(s[i - 1], s[i])).ok_or_else(|| {
                        Error::Invalid(format!(
                            "composition of {} and {} is not defined",
                            cat.arrows[s[i - 1]].label,
                            cat.arrows[s[i]].label
                        ))
                    })?;
                    let mut arrows: Vec<Option<usize>> = s[..i - 1].iter().map(|&a| Some(a)).collect();
                    arrows.push(*c);
                    arrows.extend(s[i + 1..].iter().map(|&a| Some(a)));
                    Chain { start: starts[n][k], arrows }
                };
                f.push(normalize(&chain)?);
            }
            fs.push(f);
        }
        labels.push(ls);
        faces.push(fs);
    }
    SimplicialSet::new(labels, faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_groupoid_has_two_cells_per_dimension() {
        let k = nerve(&FiniteCategory::interval_groupoid(), 4).unwrap();
        assert_eq!(k.f_vector(), vec![2, 2, 2, 2, 2]);
        assert_eq!(k.labels(2), &["st".to_string(), "ts".to_string()]);
        // d_1(st) is the identity at e, a degenerate 1-simplex
        let f = k.nondegenerate_face(2, 0, 1);
        assert_eq!((f.root_dim, f.root, f.eta.clone()), (0, 0, vec![0, 0]));
    }

    #[test]
    fn small_categories() {
        assert_eq!(nerve(&FiniteCategory::arrow(), 4).unwrap().f_vector(), vec![2, 1]);
        assert_eq!(nerve(&FiniteCategory::trivial(), 4).unwrap().f_vector(), vec![1]);
    }
}
