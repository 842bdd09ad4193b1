//! Interval algebras `K_n*`, homotopies of MC elements through them, and the
//! resolution category `𝒦_∞`.

mod kinfty;

use std::sync::Arc;

use crate::dg::{tensor_dga, vec_ops, AlgebraMap, DgAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Ring, Scalar};
use crate::mc::{is_mc, verify_homotopy_gauge, HomotopyGaugeCertificate, McElement};
use crate::simplicial::{cochain_algebra, nerve, FiniteCategory, SimplicialSet};

pub use kinfty::{
    functor_report, functor_to_homotopy, homotopy_to_functor, k_infty_category, FunctorData, FunctorReport, Generator,
    GeneratorKind, KInftyCategoryTrunc, Word,
};

/// Default truncation level.
pub const N_MAX: usize = 8;

/// Normalized cochains on `K_n`; basis elements are the vertices `e, f` and alternating paths.
#[derive(Clone, Debug)]
pub struct IntervalAlgebra {
    pub n: usize,
    pub sset: SimplicialSet,
    pub dga: Arc<DgAlgebra>,
    pub ev0: AlgebraMap,
    pub ev1: AlgebraMap,
    /// `(start vertex, length)` of each basis element
    pub paths: Vec<(usize, usize)>,
}

/// `K_n*` from the nerve of the arrow category (`n = 0`) or of the two-object groupoid.
pub fn build_interval_algebra(n: usize, ring: Ring) -> Result<IntervalAlgebra> {
    if n > 16 {
        return Err(Error::Invalid(format!("interval level {n} exceeds 16")));
    }
    let sset =
        if n == 0 { nerve(&FiniteCategory::arrow(), 1)? } else { nerve(&FiniteCategory::interval_groupoid(), n)? };
    let dga = cochain_algebra(&sset, ring, n.max(1))?;
    let paths: Vec<(usize, usize)> = (0..dga.dim())
        .map(|i| {
            let l = dga.label(i);
            let v = usize::from(l.starts_with('f') || l.starts_with('t'));
            let len = if l == "e" || l == "f" { 0 } else { l.chars().count() };
            (v, len)
        })
        .collect();
    let ground = DgAlgebra::ground(ring);
    let ev = |v: usize| -> Result<AlgebraMap> {
        let images = paths
            .iter()
            .map(|&(s, len)| vec![if len == 0 && s == v { Scalar::one() } else { Scalar::zero() }])
            .collect();
        AlgebraMap::new(&dga, &ground, images)
    };
    let (ev0, ev1) = (ev(0)?, ev(1)?);
    Ok(IntervalAlgebra { n, sset, dga: Arc::new(dga), ev0, ev1, paths })
}

impl IntervalAlgebra {
    pub fn index(&self, start: usize, len: usize) -> Option<usize> {
        self.paths.iter().position(|&p| p == (start, len))
    }

    pub fn ranks(&self) -> Vec<usize> {
        let top = self.sset.dim();
        (0..=top).map(|k| self.dga.module().in_degree(k as i32).len()).collect()
    }
}

/// Restriction `K_big* → K_small*` along the inclusion of simplicial sets.
pub fn restriction(big: &IntervalAlgebra, small: &IntervalAlgebra) -> Result<AlgebraMap> {
    let images = (0..big.dga.dim())
        .map(|i| match small.dga.index_of(big.dga.label(i)) {
            Some(j) => small.dga.basis(j),
            None => small.dga.zero(),
        })
        .collect();
    AlgebraMap::new(&big.dga, &small.dga, images)
}

/// One printed relation together with the derived value it is compared against.
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub printed: String,
    pub derived: String,
    pub holds: bool,
}

/// Printed presentation of the interval algebra, read in the opposite algebra:
/// a printed product `ab` is compared with the derived product `b·a`.
/// Differentials are compared on basis labels.
pub fn presentation_check(k: &IntervalAlgebra) -> Result<Vec<RelationCheck>> {
    let a = &k.dga;
    let el = |l: &str| a.element(&[(l, 1)]);
    let mut out = Vec::new();
    let products: [(&str, &str, &str); 14] = [
        ("e", "e", "e"),
        ("f", "f", "f"),
        ("e", "f", "0"),
        ("f", "e", "0"),
        ("f", "s", "s"),
        ("s", "e", "s"),
        ("s", "f", "0"),
        ("e", "s", "0"),
        ("t", "f", "t"),
        ("e", "t", "t"),
        ("f", "t", "0"),
        ("t", "e", "0"),
        ("t", "t", "0"),
        ("s", "s", "0"),
    ];
    for (p, q, r) in products {
        if a.index_of(p).is_none() || a.index_of(q).is_none() {
            continue;
        }
        let got = a.mul(&el(q)?, &el(p)?);
        let want = if r == "0" { a.zero() } else { el(r)? };
        out.push(RelationCheck {
            printed: format!("{p}{q} = {r}"),
            derived: format!("{q}·{p} = {}", a.format(&got)),
            holds: got == want,
        });
    }
    let diffs: [(&str, &[(&str, i64)]); 4] = [
        ("e", &[("t", 1), ("s", -1)]),
        ("f", &[("s", 1), ("t", -1)]),
        ("s", &[("ts", 1), ("st", 1)]),
        ("t", &[("st", 1), ("ts", 1)]),
    ];
    for (g, img) in diffs {
        if a.index_of(g).is_none() {
            continue;
        }
        let present: Vec<(&str, i64)> = img.iter().copied().filter(|(l, _)| a.index_of(l).is_some()).collect();
        let got = a.d(&el(g)?);
        let want = a.element(&present)?;
        let printed = img
            .iter()
            .map(|(l, c)| if *c < 0 { format!("-{l}") } else { l.to_string() })
            .collect::<Vec<_>>()
            .join(" + ");
        out.push(RelationCheck {
            printed: format!("d({g}) = {printed}"),
            derived: format!("d({g}) = {}", a.format(&got)),
            holds: got == want,
        });
    }
    Ok(out)
}

/// `A ⊗ K_n*` with coefficient extraction.
#[derive(Clone, Debug)]
pub struct HomotopyAlgebra {
    pub base: Arc<DgAlgebra>,
    pub interval: IntervalAlgebra,
    pub total: Arc<DgAlgebra>,
}

impl HomotopyAlgebra {
    pub fn new(base: Arc<DgAlgebra>, n: usize) -> Result<Self> {
        let interval = build_interval_algebra(n, base.ring())?;
        let total = Arc::new(tensor_dga(&base, &interval.dga)?);
        Ok(HomotopyAlgebra { base, interval, total })
    }

    /// Coefficient of `X` at the interval basis element `j`.
    pub fn coefficient(&self, x: &[Scalar], j: usize) -> Vec<Scalar> {
        let nk = self.interval.dga.dim();
        (0..self.base.dim()).map(|i| x[i * nk + j].clone()).collect()
    }

    /// `Σ c_j ⊗ b_j`.
    pub fn assemble(&self, coeffs: &[(usize, Vec<Scalar>)]) -> Vec<Scalar> {
        let nk = self.interval.dga.dim();
        let mut out = self.total.zero();
        for (j, c) in coeffs {
            for (i, v) in c.iter().enumerate() {
                if !v.is_zero() {
                    out[i * nk + j] = self.total.ring().add(&out[i * nk + j], v);
                }
            }
        }
        out
    }

    pub fn path_coefficient(&self, x: &[Scalar], start: usize, len: usize) -> Vec<Scalar> {
        match self.interval.index(start, len) {
            Some(j) => self.coefficient(x, j),
            None => self.base.zero(),
        }
    }

    /// `(id ⊗ ev0)(X)` and `(id ⊗ ev1)(X)`.
    pub fn endpoints(&self, x: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        (self.path_coefficient(x, 0, 0), self.path_coefficient(x, 1, 0))
    }

    /// `a ⊗ 1`.
    pub fn constant(&self, a: &[Scalar]) -> Vec<Scalar> {
        let e = self.interval.index(0, 0).expect("vertex e");
        let f = self.interval.index(1, 0).expect("vertex f");
        self.assemble(&[(e, a.to_vec()), (f, a.to_vec())])
    }
}

/// Endpoints and certificate of a homotopy through `K_2*`:
/// `g = 1 + X_t`, `h = 1 + X_s`, `wx = -X_st`, `wy = -X_ts`.
pub fn certificate_from_k2_homotopy(
    h: &HomotopyAlgebra,
    x: &McElement,
) -> Result<(Vec<Scalar>, Vec<Scalar>, HomotopyGaugeCertificate)> {
    if h.interval.n != 2 {
        return Err(Error::Invalid("a K_2 homotopy is required".into()));
    }
    let check = is_mc(&h.total, &x.value)?;
    if !check.mc {
        return Err(Error::NotMc(h.total.format(&check.residual)));
    }
    let a = &h.base;
    let (x0, x1) = h.endpoints(&x.value);
    let cert = HomotopyGaugeCertificate {
        g: a.add(&a.one(), &h.path_coefficient(&x.value, 1, 1)),
        h: a.add(&a.one(), &h.path_coefficient(&x.value, 0, 1)),
        wx: a.neg(&h.path_coefficient(&x.value, 0, 2)),
        wy: a.neg(&h.path_coefficient(&x.value, 1, 2)),
    };
    let rep = verify_homotopy_gauge(a, &x0, &x1, &cert);
    if !rep.is_ok() {
        return Err(Error::Internal(format!("extracted certificate fails condition {:?}", rep.first_failure())));
    }
    Ok((x0, x1, cert))
}

/// Inverse of [`certificate_from_k2_homotopy`].
pub fn k2_homotopy_from_certificate(
    h: &HomotopyAlgebra,
    x0: &[Scalar],
    x1: &[Scalar],
    cert: &HomotopyGaugeCertificate,
) -> Result<McElement> {
    if h.interval.n != 2 {
        return Err(Error::Invalid("a K_2 homotopy is required".into()));
    }
    let a = &h.base;
    let rep = verify_homotopy_gauge(a, x0, x1, cert);
    if !rep.is_ok() {
        return Err(Error::Invalid(format!("certificate fails condition {:?}", rep.first_failure())));
    }
    let k = &h.interval;
    let idx = |v, n| k.index(v, n).expect("basis of K_2");
    let v = h.assemble(&[
        (idx(0, 0), x0.to_vec()),
        (idx(1, 0), x1.to_vec()),
        (idx(1, 1), a.sub(&cert.g, &a.one())),
        (idx(0, 1), a.sub(&cert.h, &a.one())),
        (idx(0, 2), a.neg(&cert.wx)),
        (idx(1, 2), a.neg(&cert.wy)),
    ]);
    let check = is_mc(&h.total, &v)?;
    if !check.mc {
        return Err(Error::Internal(format!("assembled homotopy is not MC: {}", h.total.format(&check.residual))));
    }
    Ok(McElement::unchecked(h.total.clone(), v))
}

/// True when every coefficient of `x` outside the listed interval basis elements vanishes.
pub fn supported_on(h: &HomotopyAlgebra, x: &[Scalar], allowed: &[usize]) -> bool {
    (0..h.interval.dga.dim()).filter(|j| !allowed.contains(j)).all(|j| vec_ops::is_zero(&h.coefficient(x, j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::check_dga;
    use crate::fixtures::{homotopy_gauge_algebra, kx_algebra};
    use crate::linalg::cohomology;

    #[test]
    fn ranks_and_spheres() {
        let k0 = build_interval_algebra(0, Ring::Integers).unwrap();
        assert_eq!(k0.ranks(), vec![2, 1]);
        for n in 1..=6 {
            let k = build_interval_algebra(n, Ring::Integers).unwrap();
            assert_eq!(k.ranks(), vec![2; n + 1]);
            assert!(check_dga(&k.dga).is_ok());
            let h = cohomology(&k.dga.complex()).unwrap();
            let mut want = vec![0; n + 1];
            want[0] = 1;
            want[n] = 1;
            assert_eq!(h.ranks(), want, "n = {n}");
            assert!(h.groups.iter().all(|g| g.torsion.is_empty()));
        }
    }

    #[test]
    fn evaluations_and_restrictions() {
        let ground = DgAlgebra::ground(Ring::Integers);
        for n in 0..5 {
            let k = build_interval_algebra(n, Ring::Integers).unwrap();
            assert!(k.ev0.check(&k.dga, &ground).is_ok());
            assert!(k.ev1.check(&k.dga, &ground).is_ok());
            let big = build_interval_algebra(n + 1, Ring::Integers).unwrap();
            let r = restriction(&big, &k).unwrap();
            assert!(r.check(&big.dga, &k.dga).is_ok(), "n = {n}");
        }
        let k0 = build_interval_algebra(0, Ring::Integers).unwrap();
        let k1 = build_interval_algebra(1, Ring::Integers).unwrap();
        let r = restriction(&k1, &k0).unwrap();
        assert!(vec_ops::is_zero(&r.apply(&k0.dga, &k1.dga.element(&[("t", 1)]).unwrap())));
    }

    #[test]
    fn printed_presentation_holds_in_opposite_algebra() {
        let k = build_interval_algebra(3, Ring::Integers).unwrap();
        for c in presentation_check(&k).unwrap() {
            assert!(c.holds, "{c:?}");
        }
    }

    #[test]
    fn k2_dictionary_on_example() {
        let a = Arc::new(homotopy_gauge_algebra(Ring::Integers, 4, false));
        let e = |l: &str| a.element(&[(l, 1)]).unwrap();
        let cert = HomotopyGaugeCertificate { g: e("g"), h: e("h"), wx: e("t"), wy: e("s") };
        let h = HomotopyAlgebra::new(a.clone(), 2).unwrap();
        let x = k2_homotopy_from_certificate(&h, &e("x"), &e("y"), &cert).unwrap();
        let (x0, x1, back) = certificate_from_k2_homotopy(&h, &x).unwrap();
        assert_eq!((x0, x1), (e("x"), e("y")));
        assert_eq!(back, cert);
    }

    #[test]
    fn constant_homotopy() {
        let a = Arc::new(kx_algebra(Ring::Integers, 6));
        let h = HomotopyAlgebra::new(a.clone(), 2).unwrap();
        let x = a.element(&[("x", 1)]).unwrap();
        let c = McElement::new(h.total.clone(), h.constant(&x)).unwrap();
        let (x0, x1, cert) = certificate_from_k2_homotopy(&h, &c).unwrap();
        assert_eq!((x0, x1.clone()), (x.clone(), x));
        assert_eq!(cert, HomotopyGaugeCertificate::trivial(&a));
    }
}
