//! Built-in example algebras, complexes and local systems.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dg::{AlgebraJson, DgAlgebra, GradedModule, Truncation};
use crate::error::{Error, Result};
use crate::interval::build_interval_algebra;
use crate::linalg::{cohomology, CohomologyReport, ExactMatrix, Ring, Scalar};
use crate::mc::{twist_algebra, twist_module, CertificateJson, McElement};
use crate::perturbation::{ModuleSystemJson, TwistedModuleJson};
use crate::simplicial::{
    circle, sset::circle_edges, sset::torus7_triangles, ComplexJson, LocalSystem, LocalSystemJson,
};

/// `k[x]` with `|x| = 1`, `d(x) = -x²`, truncated above `x^n`.
pub fn kx_algebra(ring: Ring, n: u32) -> DgAlgebra {
    let basis: Vec<(String, i32)> = (0..=n)
        .map(|k| {
            let l = match k {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            (l, k as i32)
        })
        .collect();
    let module = GradedModule::new(ring, basis).expect("distinct");
    let mut unit = vec![Scalar::zero(); n as usize + 1];
    unit[0] = Scalar::one();
    let mut diff = Vec::new();
    let mut mult = Vec::new();
    for i in 0..=n as usize {
        if i % 2 == 1 && i < n as usize {
            diff.push((i, i + 1, Scalar::from_int(-1)));
        }
        for j in 0..=n as usize - i {
            mult.push((i, j, i + j, Scalar::one()));
        }
    }
    DgAlgebra::new(module, unit, diff, mult)
        .and_then(|a| a.with_truncation(Truncation { weights: (0..=n).collect(), bound: n }))
        .expect("valid")
}

const GENERATORS: [(char, i32); 6] = [('x', 1), ('y', 1), ('g', 0), ('h', 0), ('s', -1), ('t', -1)];

type Poly = Vec<(String, i64)>;

fn generator_differential(c: char, flipped: bool) -> Poly {
    let p = |v: &[(&str, i64)]| v.iter().map(|(w, c)| (w.to_string(), *c)).collect::<Poly>();
    match c {
        'x' => p(&[("xx", -1)]),
        'y' => p(&[("yy", -1)]),
        'g' => p(&[("gx", 1), ("yg", -1)]),
        'h' => p(&[("hy", 1), ("xh", -1)]),
        's' => p(&[("gh", 1), ("", -1), ("ys", if flipped { 1 } else { -1 }), ("sy", -1)]),
        't' => p(&[("hg", 1), ("", -1), ("xt", -1), ("tx", -1)]),
        _ => unreachable!("unknown generator"),
    }
}

/// Free algebra on `x, y` (degree 1), `g, h` (degree 0), `s, t` (degree -1) with
/// `d(s) = gh - 1 - ys - sy`, `d(t) = hg - 1 - xt - tx`, truncated at word length `max_len`.
///
/// With `flipped` the sign of `ys` in `d(s)` is reversed, so that `d²(s) ≠ 0`.
pub fn homotopy_gauge_algebra(ring: Ring, max_len: usize, flipped: bool) -> DgAlgebra {
    let mut words: Vec<String> = vec![String::new()];
    let mut layer: Vec<String> = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for (c, _) in GENERATORS {
                next.push(format!("{w}{c}"));
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    let deg = |w: &str| -> i32 { w.chars().map(|c| GENERATORS.iter().find(|g| g.0 == c).unwrap().1).sum() };
    let index: HashMap<String, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let label = |w: &str| {
        if w.is_empty() {
            "1".to_string()
        } else {
            w.to_string()
        }
    };
    let basis: Vec<(String, i32)> = words.iter().map(|w| (label(w), deg(w))).collect();
    let module = GradedModule::new(ring, basis).expect("distinct");
    let mut unit = vec![Scalar::zero(); words.len()];
    unit[0] = Scalar::one();
    let mut mult = Vec::new();
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            if a.len() + b.len() <= max_len {
                mult.push((i, j, index[&format!("{a}{b}")], Scalar::one()));
            }
        }
    }
    let mut diff = Vec::new();
    for (i, w) in words.iter().enumerate() {
        let chars: Vec<char> = w.chars().collect();
        let mut sign_deg = 0i32;
        for (p, &c) in chars.iter().enumerate() {
            let pre: String = chars[..p].iter().collect();
            let post: String = chars[p + 1..].iter().collect();
            let s = if sign_deg.rem_euclid(2) == 1 { -1 } else { 1 };
            for (mid, coef) in generator_differential(c, flipped) {
                let nw = format!("{pre}{mid}{post}");
                if nw.len() <= max_len {
                    diff.push((i, index[&nw], Scalar::from_int(s * coef)));
                }
            }
            sign_deg += deg(&c.to_string());
        }
    }
    let weights = words.iter().map(|w| w.len() as u32).collect();
    DgAlgebra::new(module, unit, diff, mult)
        .and_then(|a| a.with_truncation(Truncation { weights, bound: max_len as u32 }))
        .expect("valid")
}

/// `ℚ[z, dz]` with `|z| = 0`, truncated at polynomial weight `n` (`z^i` has weight `i`, `z^i dz` weight `i+1`).
pub fn polynomial_de_rham(ring: Ring, n: u32) -> DgAlgebra {
    let zl = |i: u32| match i {
        0 => "1".to_string(),
        1 => "z".to_string(),
        _ => format!("z^{i}"),
    };
    let dl = |i: u32| match i {
        0 => "dz".to_string(),
        1 => "z dz".to_string(),
        _ => format!("z^{i} dz"),
    };
    let mut basis = Vec::new();
    let mut weights = Vec::new();
    for i in 0..=n {
        basis.push((zl(i), 0));
        weights.push(i);
    }
    let off = n as usize + 1;
    for i in 0..n {
        basis.push((dl(i), 1));
        weights.push(i + 1);
    }
    let module = GradedModule::new(ring, basis).expect("distinct");
    let mut unit = vec![Scalar::zero(); module.len()];
    unit[0] = Scalar::one();
    let mut diff = Vec::new();
    for i in 1..=n {
        diff.push((i as usize, off + i as usize - 1, Scalar::from_int(i as i64)));
    }
    let mut mult = Vec::new();
    for i in 0..=n {
        for j in 0..=n - i {
            mult.push((i as usize, j as usize, (i + j) as usize, Scalar::one()));
            if i + j < n {
                mult.push((i as usize, off + j as usize, off + (i + j) as usize, Scalar::one()));
                mult.push((off + j as usize, i as usize, off + (i + j) as usize, Scalar::one()));
            }
        }
    }
    DgAlgebra::new(module, unit, diff, mult)
        .and_then(|a| a.with_truncation(Truncation { weights, bound: n }))
        .expect("valid")
}

/// Rank-1 local system on the `m`-vertex circle with monodromy `-1` on the last edge in label order.
pub fn sign_local_system(m: usize, ring: Ring) -> Result<LocalSystem> {
    let base = circle(m);
    let mut mono = vec![ExactMatrix::identity(ring, 1); base.count(1)];
    let k = base.count(1) - 1;
    mono[k] = ExactMatrix::from_rows(ring, &[vec![ring.from_int(-1)]])?;
    LocalSystem::new(base, ring, 1, mono)
}

/// Rank-1 system on the `m`-vertex circle with monodromy `c` on the last edge in label order.
pub fn scalar_local_system(m: usize, ring: Ring, c: i64) -> Result<LocalSystem> {
    let base = circle(m);
    let mut mono = vec![ExactMatrix::identity(ring, 1); base.count(1)];
    let k = base.count(1) - 1;
    mono[k] = ExactMatrix::from_rows(ring, &[vec![ring.from_int(c)]])?;
    LocalSystem::new(base, ring, 1, mono)
}

/// An algebra together with one element, e.g. a Maurer-Cartan candidate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElementFixture {
    pub algebra: AlgebraJson,
    pub x: Vec<(String, Scalar)>,
}

/// Two elements and a homotopy gauge certificate between them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateFixture {
    pub algebra: AlgebraJson,
    pub x: Vec<(String, Scalar)>,
    pub y: Vec<(String, Scalar)>,
    pub certificate: CertificateJson,
}

/// An algebra with two elements.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairFixture {
    pub algebra: AlgebraJson,
    pub x: Vec<(String, Scalar)>,
    pub y: Vec<(String, Scalar)>,
}

/// `K₀*` over the integers with `x = 0` and `y = s`.
pub fn k0_pair_fixture() -> Result<PairFixture> {
    let k0 = build_interval_algebra(0, Ring::Integers)?;
    Ok(PairFixture { algebra: k0.dga.to_json(), x: Vec::new(), y: vec![("s".into(), Scalar::one())] })
}

/// `ℤ/n` on the 3-vertex circle, acting by `-1` on the last edge.
pub fn cyclic_module_system(n: i64) -> ModuleSystemJson {
    ModuleSystemJson {
        generators: 1,
        relations: vec![vec![Scalar::from_int(n)]],
        monodromy: vec![("12".into(), vec![vec![Scalar::from_int(-1)]])],
    }
}

/// `V = ℤ ⊕ ℤ[-1]` on the 3-vertex circle, `-2` on the last edge in the degree-0 part.
pub fn two_stage_module() -> TwistedModuleJson {
    let z = |rows: &[[i64; 2]]| rows.iter().map(|r| r.iter().map(|&c| Scalar::from_int(c)).collect()).collect();
    TwistedModuleJson { degrees: vec![0, 1], d0: None, terms: vec![("12".into(), z(&[[-2, 0], [0, 0]]))] }
}

/// Degrees `0, 0, 1`, `d0: v0 ↦ v2` and `e₁₀` on the first edge of the 3-vertex circle.
pub fn rank_two_module() -> TwistedModuleJson {
    let z = |rows: &[[i64; 3]]| rows.iter().map(|r| r.iter().map(|&c| Scalar::from_int(c)).collect()).collect();
    TwistedModuleJson {
        degrees: vec![0, 0, 1],
        d0: Some(z(&[[0, 0, 0], [0, 0, 0], [1, 0, 0]])),
        terms: vec![("01".into(), z(&[[0, 0, 0], [1, 0, 0], [0, 0, 0]]))],
    }
}

/// `k[x]` truncated above `x⁶` with its MC element `x`.
pub fn kx_fixture() -> ElementFixture {
    let a = kx_algebra(Ring::Integers, 6);
    ElementFixture { algebra: a.to_json(), x: vec![("x".into(), Scalar::one())] }
}

/// The free algebra on `x, y, g, h, s, t` at word length 4 with the certificate `(g, h, t, s)`.
pub fn homotopy_gauge_fixture() -> CertificateFixture {
    let a = homotopy_gauge_algebra(Ring::Integers, 4, false);
    let one = |l: &str| vec![(l.to_string(), Scalar::one())];
    CertificateFixture {
        algebra: a.to_json(),
        x: one("x"),
        y: one("y"),
        certificate: CertificateJson { g: one("g"), h: one("h"), wx: one("t"), wy: one("s") },
    }
}

fn complex_json(n: usize, simplices: &[Vec<usize>]) -> ComplexJson {
    ComplexJson {
        vertices: (0..n).map(|i| i.to_string()).collect(),
        simplices: simplices.iter().map(|s| s.iter().map(|v| v.to_string()).collect()).collect(),
    }
}

pub fn circle_json(m: usize) -> ComplexJson {
    complex_json(m, &circle_edges(m))
}

pub fn torus7_json() -> ComplexJson {
    complex_json(7, &torus7_triangles())
}

pub fn delta_json(n: usize) -> ComplexJson {
    complex_json(n + 1, &[(0..=n).collect()])
}

pub fn boundary_delta_json(n: usize) -> ComplexJson {
    let faces: Vec<Vec<usize>> = (0..=n).map(|i| (0..=n).filter(|&j| j != i).collect()).collect();
    complex_json(n + 1, &faces)
}

/// Rank-1 system on the `m`-vertex circle, `c` on the last edge.
pub fn scalar_local_system_json(m: usize, c: i64) -> LocalSystemJson {
    let base = circle(m);
    let edge = base.label(1, base.count(1) - 1).to_string();
    let monodromy = if c == 1 { Vec::new() } else { vec![(edge, vec![vec![Scalar::from_int(c)]])] };
    LocalSystemJson { complex: Some(format!("circle{m}.json")), rank: 1, ring: None, monodromy }
}

/// Cohomology of the twisted `K₀*` under one side and twisting convention.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TwistConvention {
    pub product: String,
    pub twist: String,
    pub ranks: Vec<usize>,
    pub torsion: Vec<Vec<String>>,
}

impl TwistConvention {
    fn new(product: &str, twist: &str, h: &CohomologyReport) -> Self {
        let mut groups = Vec::new();
        for k in 0..2 {
            groups.push(h.degree(k));
        }
        TwistConvention {
            product: product.into(),
            twist: twist.into(),
            ranks: groups.iter().map(|g| g.rank).collect(),
            torsion: groups.iter().map(|g| g.torsion.iter().map(|t| t.to_string()).collect()).collect(),
        }
    }

    pub fn key(&self) -> String {
        format!("{}, {}", self.twist, self.product)
    }
}

/// Convention under which the twist of `K₀*` by `s` is computed everywhere else.
pub const PINNED_K0_CONVENTION: &str = "algebra twist, quiver product";

/// `K₀* = C*(Δ¹)`, the quiver `e --s--> f` with `d = ad(s)`, and its opposite,
/// each twisted by `s` as a module over itself and as an algebra.
pub fn k0_twist_conventions(ring: Ring) -> Result<Vec<TwistConvention>> {
    let k0 = build_interval_algebra(0, ring)?;
    let mut out = Vec::new();
    for (name, alg) in [("quiver product", k0.dga.as_ref().clone()), ("opposite product", k0.dga.opposite()?)] {
        let alg = Arc::new(alg);
        let s = McElement::new(alg.clone(), alg.element(&[("s", 1)])?)?;
        out.push(TwistConvention::new(name, "module twist", &twist_module(&alg, &s)?.cohomology()?));
        out.push(TwistConvention::new(name, "algebra twist", &cohomology(&twist_algebra(&alg, &s)?.complex())?));
    }
    Ok(out)
}

/// Recorded outcome of the convention enumeration over the integers.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConventionRecord {
    pub algebra: String,
    pub x: String,
    pub ring: Ring,
    pub pinned: String,
    pub conventions: Vec<TwistConvention>,
}

pub fn k0_convention_record() -> Result<ConventionRecord> {
    Ok(ConventionRecord {
        algebra: "K0".into(),
        x: "s".into(),
        ring: Ring::Integers,
        pinned: PINNED_K0_CONVENTION.into(),
        conventions: k0_twist_conventions(Ring::Integers)?,
    })
}

/// The convention record shipped with the crate.
pub const K0_CONVENTION_FILE: &str = include_str!("../fixtures/k0-convention.json");

/// Write the built-in fixtures to `dir` and return the file names, in order.
pub fn emit_fixtures(dir: &Path) -> Result<Vec<String>> {
    std::fs::create_dir_all(dir)?;
    let mut files: Vec<(String, serde_json::Value)> = vec![
        ("kx-fixture.json".into(), serde_json::to_value(kx_fixture())?),
        ("homotopy-gauge.json".into(), serde_json::to_value(homotopy_gauge_fixture())?),
        ("de-rham8.json".into(), serde_json::to_value(polynomial_de_rham(Ring::Rationals, 8).to_json())?),
    ];
    for n in 0..=6 {
        files.push((
            format!("k{n}.json"),
            serde_json::to_value(build_interval_algebra(n, Ring::Integers)?.dga.to_json())?,
        ));
    }
    for m in [3, 4, 5] {
        files.push((format!("circle{m}.json"), serde_json::to_value(circle_json(m))?));
    }
    files.push(("torus7.json".into(), serde_json::to_value(torus7_json())?));
    files.push(("delta3.json".into(), serde_json::to_value(delta_json(3))?));
    files.push(("boundary-delta3.json".into(), serde_json::to_value(boundary_delta_json(3))?));
    for m in [3, 4] {
        files.push((format!("sign{m}.json"), serde_json::to_value(scalar_local_system_json(m, -1))?));
        files.push((format!("trivial{m}.json"), serde_json::to_value(scalar_local_system_json(m, 1))?));
    }
    files.push(("k0-convention.json".into(), serde_json::to_value(k0_convention_record()?)?));
    files.push(("k0-pair.json".into(), serde_json::to_value(k0_pair_fixture()?)?));
    files.push(("zmod2-circle3.json".into(), serde_json::to_value(cyclic_module_system(2))?));
    files.push(("zmod3-circle3.json".into(), serde_json::to_value(cyclic_module_system(3))?));
    files.push(("two-stage-circle3.json".into(), serde_json::to_value(two_stage_module())?));
    files.push(("rank-two-circle3.json".into(), serde_json::to_value(rank_two_module())?));
    let mut names = Vec::new();
    for (name, v) in files {
        let mut text = serde_json::to_string_pretty(&v)?;
        text.push('\n');
        std::fs::write(dir.join(&name), text).map_err(|e| Error::Invalid(format!("cannot write {name}: {e}")))?;
        names.push(name);
    }
    Ok(names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::{check_dga, Axiom};

    #[test]
    fn kx_is_a_truncated_dga() {
        let a = kx_algebra(Ring::Integers, 6);
        assert!(check_dga(&a).is_ok());
        let x = a.element(&[("x", 1)]).unwrap();
        assert_eq!(a.d(&x), a.neg(&a.mul(&x, &x)));
    }

    #[test]
    fn homotopy_gauge_algebra_checks() {
        let a = homotopy_gauge_algebra(Ring::Integers, 4, false);
        assert_eq!(a.dim(), 1 + 6 + 36 + 216 + 1296);
        let rep = check_dga(&a);
        assert!(rep.is_ok(), "{:?}", &rep.violations[..rep.violations.len().min(3)]);
        assert!(rep.not_checked > 0);
        let bad = homotopy_gauge_algebra(Ring::Integers, 4, true);
        let rep = check_dga(&bad);
        assert!(rep.has(Axiom::DSquared, &["s"]));
    }

    #[test]
    fn de_rham_checks() {
        let a = polynomial_de_rham(Ring::Rationals, 8);
        assert!(check_dga(&a).is_ok());
        let z3 = a.element(&[("z^3", 1)]).unwrap();
        assert_eq!(a.format(&a.d(&z3)), "3*z^2 dz");
    }

    #[test]
    fn k0_convention_is_pinned() {
        let record: ConventionRecord = serde_json::from_str(K0_CONVENTION_FILE).unwrap();
        assert_eq!(record, k0_convention_record().unwrap());
        let torsion2: Vec<&TwistConvention> =
            record.conventions.iter().filter(|c| c.torsion[1] == vec!["2".to_string()]).collect();
        assert_eq!(torsion2.len(), 1);
        assert_eq!(torsion2[0].key(), PINNED_K0_CONVENTION);
        let q = k0_twist_conventions(Ring::Rationals).unwrap();
        let pinned = q.iter().find(|c| c.key() == PINNED_K0_CONVENTION).unwrap();
        assert_eq!(pinned.ranks[1], 0);
    }

    #[test]
    fn emitted_fixtures_load() {
        let dir = std::env::temp_dir().join(format!("mctwist-fixtures-{}", std::process::id()));
        let names = emit_fixtures(&dir).unwrap();
        assert!(names.contains(&"sign3.json".to_string()));
        let read = |n: &str| std::fs::read_to_string(dir.join(n)).unwrap();
        let c: ComplexJson = serde_json::from_str(&read("circle3.json")).unwrap();
        let base = crate::simplicial::SimplicialSet::from_json(&c).unwrap();
        let ls: LocalSystemJson = serde_json::from_str(&read("sign3.json")).unwrap();
        let ls = LocalSystem::from_json(base, &ls, Ring::Integers).unwrap();
        let h = crate::simplicial::local_system_cohomology(&ls).unwrap();
        assert_eq!(h.degree(1).torsion.len(), 1);
        let kx: ElementFixture = serde_json::from_str(&read("kx-fixture.json")).unwrap();
        assert!(check_dga(&DgAlgebra::from_json(&kx.algebra).unwrap()).is_ok());
        assert_eq!(read("k0-convention.json"), K0_CONVENTION_FILE);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
