use std::collections::BTreeMap;
use std::fmt;

use super::{build_interval_algebra, HomotopyAlgebra};
use crate::dg::{vec_ops, DgAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Ring, Scalar};
use crate::mc::{is_mc, twisted_d, McElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorKind {
    X,
    Y,
}

/// Generator `x_m` or `y_m` of `𝒦_∞`, of cohomological degree `-m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub m: usize,
}

impl Generator {
    pub fn x(m: usize) -> Self {
        Generator { kind: GeneratorKind::X, m }
    }

    pub fn y(m: usize) -> Self {
        Generator { kind: GeneratorKind::Y, m }
    }

    pub fn degree(&self) -> i32 {
        -(self.m as i32)
    }

    /// Interval path `(start, length)` whose coefficient this generator records.
    pub fn path(&self) -> (usize, usize) {
        let n = self.m + 1;
        match self.kind {
            GeneratorKind::X => (n % 2, n),
            GeneratorKind::Y => ((n + 1) % 2, n),
        }
    }

    fn from_path(v: usize, n: usize) -> Self {
        if v == n % 2 {
            Generator::x(n - 1)
        } else {
            Generator::y(n - 1)
        }
    }

    /// Source object (0 for `O1`, 1 for `O2`).
    pub fn src(&self) -> usize {
        let (v, n) = self.path();
        (v + n) % 2
    }

    pub fn tgt(&self) -> usize {
        self.path().0
    }

    /// `ε_m = (-1)^{m(m+1)/2}`.
    fn sign(&self) -> i64 {
        if (self.m * (self.m + 1) / 2) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            GeneratorKind::X => 'x',
            GeneratorKind::Y => 'y',
        };
        write!(f, "{c}_{}", self.m)
    }
}

/// A composite `g_1 g_2 … g_k` (apply `g_k` first); empty for an identity.
pub type Word = Vec<Generator>;

type WordPoly = BTreeMap<Word, i64>;

fn format_poly(p: &[(i64, Word)]) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (c, w)) in p.iter().enumerate() {
        let body = if w.is_empty() { "1".to_string() } else { w.iter().map(|g| g.to_string()).collect::<String>() };
        let mag = c.abs();
        let term = if mag == 1 { body } else { format!("{mag}{body}") };
        if k == 0 {
            s.push_str(&if *c < 0 { format!("-{term}") } else { term });
        } else {
            s.push_str(&format!(" {} {term}", if *c < 0 { '-' } else { '+' }));
        }
    }
    s
}

// symbols of the MC expansion
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Sym {
    Obj(usize),
    DObj(usize),
    Gen(Generator),
    DGen(Generator),
}

type SymPoly = BTreeMap<Vec<Sym>, i64>;

fn add_term(p: &mut SymPoly, w: Vec<Sym>, c: i64) {
    if c == 0 {
        return;
    }
    let e = p.entry(w).or_insert(0);
    *e += c;
    if *e == 0 {
        let key: Vec<Sym> = p.iter().find(|(_, v)| **v == 0).map(|(k, _)| k.clone()).unwrap();
        p.remove(&key);
    }
}

fn mul_poly(a: &SymPoly, b: &SymPoly) -> SymPoly {
    let mut out = SymPoly::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut w = wa.clone();
            w.extend(wb.iter().copied());
            add_term(&mut out, w, ca * cb);
        }
    }
    out
}

/// Truncated `𝒦_∞`: generators up to `x_N, y_N` and their derived differentials.
#[derive(Clone, Debug)]
pub struct KInftyCategoryTrunc {
    pub n: usize,
    pub generators: Vec<Generator>,
    /// `d(g)` for each generator, as `(coefficient, word)`
    pub differential: Vec<Vec<(i64, Word)>>,
    /// generators on which `d²` vanishes after expansion
    pub d_squared_zero: Vec<bool>,
    /// comparison with the printed table
    pub ledger: Vec<String>,
}

impl KInftyCategoryTrunc {
    pub fn position(&self, g: Generator) -> Option<usize> {
        self.generators.iter().position(|h| *h == g)
    }

    pub fn d(&self, g: Generator) -> Option<&[(i64, Word)]> {
        self.position(g).map(|i| self.differential[i].as_slice())
    }

    pub fn format_d(&self, g: Generator) -> String {
        self.d(g).map(format_poly).unwrap_or_else(|| "?".into())
    }

    /// `d` extended to words as a derivation.
    pub fn d_word(&self, w: &Word) -> Result<Vec<(i64, Word)>> {
        let mut out = WordPoly::new();
        let mut deg = 0i32;
        for (i, g) in w.iter().enumerate() {
            let sign = if deg.rem_euclid(2) == 1 { -1 } else { 1 };
            let dg = self.d(*g).ok_or_else(|| Error::Invalid(format!("{g} beyond the truncation")))?;
            for (c, mid) in dg {
                let mut nw = w[..i].to_vec();
                nw.extend(mid.iter().copied());
                nw.extend(w[i + 1..].iter().copied());
                *out.entry(nw).or_insert(0) += sign * c;
            }
            deg += g.degree();
        }
        Ok(out.into_iter().filter(|(_, c)| *c != 0).map(|(w, c)| (c, w)).collect())
    }
}

/// Derive the generator differentials of `𝒦_∞` up to `x_N, y_N` from the MC equation in `A ⊗ K_{N+1}*`,
/// and check `d² = 0`.
pub fn k_infty_category(n: usize) -> Result<KInftyCategoryTrunc> {
    if n > super::N_MAX {
        return Err(Error::Invalid(format!("truncation {n} exceeds {}", super::N_MAX)));
    }
    let k = build_interval_algebra(n + 1, Ring::Integers)?;
    let a = &k.dga;
    let dim = a.dim();
    let coef_deg = |i: usize| 1 - k.paths[i].1 as i32;
    // coefficient of X at basis i, after substituting c = ε(F - δ)
    let coefficient = |i: usize| -> SymPoly {
        let (v, len) = k.paths[i];
        let mut p = SymPoly::new();
        if len == 0 {
            add_term(&mut p, vec![Sym::Obj(v)], 1);
        } else {
            let g = Generator::from_path(v, len);
            add_term(&mut p, vec![Sym::Gen(g)], g.sign());
            if len == 1 {
                add_term(&mut p, vec![], -g.sign());
            }
        }
        p
    };
    let d_coefficient = |i: usize| -> SymPoly {
        let (v, len) = k.paths[i];
        let mut p = SymPoly::new();
        if len == 0 {
            add_term(&mut p, vec![Sym::DObj(v)], 1);
        } else {
            let g = Generator::from_path(v, len);
            add_term(&mut p, vec![Sym::DGen(g)], g.sign());
        }
        p
    };
    let coeffs: Vec<SymPoly> = (0..dim).map(coefficient).collect();
    let to_i64 = |s: &Scalar| s.to_i64().expect("small structure constants");

    let mut generators = Vec::new();
    let mut differential = Vec::new();
    for kk in 0..dim {
        let (v, len) = k.paths[kk];
        if len == 0 {
            continue;
        }
        let g = Generator::from_path(v, len);
        let mut e = d_coefficient(kk);
        for i in 0..dim {
            for (t, c) in a.d_basis(i) {
                if *t == kk {
                    let s = if coef_deg(i).rem_euclid(2) == 1 { -1 } else { 1 };
                    for (w, cw) in &coeffs[i] {
                        add_term(&mut e, w.clone(), s * to_i64(c) * cw);
                    }
                }
            }
            for (j, prod) in a.products_from(i) {
                for (t, c) in prod {
                    if *t != kk {
                        continue;
                    }
                    let s = if (a.degree(i) * coef_deg(*j)).rem_euclid(2) == 1 { -1 } else { 1 };
                    for (w, cw) in mul_poly(&coeffs[i], &coeffs[*j]) {
                        add_term(&mut e, w, s * to_i64(c) * cw);
                    }
                }
            }
        }
        // remainder after removing D F(g) = dF(g) + x_tgt F(g) - (-1)^{|g|} F(g) x_src
        let mut r = SymPoly::new();
        for (w, c) in &e {
            add_term(&mut r, w.clone(), g.sign() * c);
        }
        add_term(&mut r, vec![Sym::DGen(g)], -1);
        add_term(&mut r, vec![Sym::Obj(g.tgt()), Sym::Gen(g)], -1);
        add_term(&mut r, vec![Sym::Gen(g), Sym::Obj(g.src())], if g.degree().rem_euclid(2) == 1 { -1 } else { 1 });
        let mut dg = Vec::new();
        for (w, c) in r {
            let word: Option<Word> = w.iter().map(|s| if let Sym::Gen(h) = s { Some(*h) } else { None }).collect();
            let word = word.ok_or_else(|| {
                Error::Internal(format!("MC expansion at {g} leaves a term outside the functor equation: {w:?}"))
            })?;
            dg.push((-c, word));
        }
        generators.push(g);
        differential.push(dg);
    }
    let mut order: Vec<usize> = (0..generators.len()).collect();
    order.sort_by_key(|&i| (generators[i].m, generators[i].kind));
    let generators: Vec<Generator> = order.iter().map(|&i| generators[i]).collect();
    let differential: Vec<Vec<(i64, Word)>> = order.iter().map(|&i| differential[i].clone()).collect();
    let mut cat = KInftyCategoryTrunc { n, generators, differential, d_squared_zero: Vec::new(), ledger: Vec::new() };
    for (i, g) in cat.generators.iter().enumerate() {
        for (_, w) in &cat.differential[i] {
            if !composable(w, g.src(), g.tgt()) {
                return Err(Error::Internal(format!("non-composable word in d({g})")));
            }
        }
    }
    let mut dd_ok = Vec::new();
    for (i, _) in cat.generators.iter().enumerate() {
        let mut total = WordPoly::new();
        for (c, w) in &cat.differential[i] {
            for (c2, w2) in cat.d_word(w)? {
                *total.entry(w2).or_insert(0) += c * c2;
            }
        }
        dd_ok.push(total.values().all(|c| *c == 0));
    }
    if let Some(i) = dd_ok.iter().position(|ok| !ok) {
        return Err(Error::Internal(format!("d² ≠ 0 on {}", cat.generators[i])));
    }
    cat.d_squared_zero = dd_ok;
    cat.ledger = printed_ledger(&cat);
    Ok(cat)
}

fn composable(w: &Word, src: usize, tgt: usize) -> bool {
    if w.is_empty() {
        return src == tgt;
    }
    let mut cur = src;
    for g in w.iter().rev() {
        if g.src() != cur {
            return false;
        }
        cur = g.tgt();
    }
    cur == tgt
}

// printed formula as (coefficient, [(kind, index)]) with indices possibly negative
type PrintedPoly = Vec<(i64, Vec<(GeneratorKind, i64)>)>;

fn printed_formula(g: Generator) -> PrintedPoly {
    use GeneratorKind::{X, Y};
    let m = g.m as i64;
    let mut p: PrintedPoly = Vec::new();
    match (g.kind, m) {
        (_, 0) => {}
        (X, 1) => p = vec![(1, vec![(Y, 0), (X, 0)]), (-1, vec![])],
        (Y, 1) => p = vec![(1, vec![(X, 0), (Y, 0)]), (-1, vec![])],
        (X, _) if m % 2 == 0 => {
            let n = m / 2;
            for i in 0..n {
                p.push((1, vec![(X, 2 * i), (X, 2 * (n - i) - 1)]));
                p.push((-1, vec![(Y, 2 * (n - i) - 1), (Y, 2 * i)]));
            }
        }
        (Y, _) if m % 2 == 0 => {
            let n = m / 2;
            for i in 0..n {
                p.push((1, vec![(Y, 2 * i), (Y, 2 * (n - i) - 1)]));
                p.push((-1, vec![(X, 2 * (n - i) - 1), (Y, 2 * i)]));
            }
        }
        (X, _) => {
            let n = (m - 1) / 2;
            for i in 0..=n {
                p.push((1, vec![(Y, 2 * i), (X, 2 * (n - i))]));
            }
            for i in 0..n {
                p.push((-1, vec![(X, 2 * i - 1), (X, 2 * (n - i) - 1)]));
            }
        }
        (Y, _) => {
            let n = (m - 1) / 2;
            for i in 0..=n {
                p.push((1, vec![(X, 2 * i), (Y, 2 * (n - i))]));
            }
            for i in 0..n {
                p.push((-1, vec![(Y, 2 * i + 1), (Y, 2 * (n - i) - 1)]));
            }
        }
    }
    p
}

fn format_printed(p: &PrintedPoly) -> String {
    let conv: Vec<(i64, Word)> = p
        .iter()
        .map(|(c, w)| (*c, w.iter().map(|(k, i)| Generator { kind: *k, m: (*i).max(0) as usize }).collect::<Word>()))
        .collect();
    let mut s = format_poly(&conv);
    for (_, w) in p {
        for (k, i) in w {
            if *i < 0 {
                let c = if *k == GeneratorKind::X { 'x' } else { 'y' };
                s.push_str(&format!(" [contains {c}_{i}]"));
            }
        }
    }
    s
}

fn printed_ledger(cat: &KInftyCategoryTrunc) -> Vec<String> {
    let mut out = vec![
        "printed d(x_2n) sums over an undeclared index m; read as n".to_string(),
        "printed typing x_n: O1 -> O2 for all n conflicts with d(x_1) = y_0x_0 - 1; derived: x_m, y_m with m odd are endomorphisms"
            .to_string(),
        "generators carry cohomological degree -m (printed |x_m| = m is homological)".to_string(),
    ];
    for (i, g) in cat.generators.iter().enumerate() {
        let printed = printed_formula(*g);
        let mut pm: WordPoly = WordPoly::new();
        let mut invalid = false;
        let mut noncomp = false;
        for (c, w) in &printed {
            if w.iter().any(|(_, i)| *i < 0) {
                invalid = true;
                continue;
            }
            let word: Word = w.iter().map(|(k, i)| Generator { kind: *k, m: *i as usize }).collect();
            if !composable(&word, g.src(), g.tgt()) {
                noncomp = true;
            }
            *pm.entry(word).or_insert(0) += c;
        }
        let derived: WordPoly = cat.differential[i].iter().map(|(c, w)| (w.clone(), *c)).collect();
        let pm: WordPoly = pm.into_iter().filter(|(_, c)| *c != 0).collect();
        let status = if pm == derived && !invalid {
            "agrees".to_string()
        } else {
            let mut notes = Vec::new();
            if invalid {
                notes.push("printed formula uses a negative index");
            }
            if noncomp {
                notes.push("printed formula has non-composable terms");
            }
            if pm != derived {
                notes.push("terms or signs differ");
            }
            notes.join("; ")
        };
        out.push(format!(
            "d({g}): printed {} | derived {} | {status}",
            format_printed(&printed),
            format_poly(&cat.differential[i])
        ));
    }
    out
}

/// Values `F(x_m)`, `F(y_m)` of a dg functor `𝒦_∞ → MC(A)` with `F(O1) = obj[0]`, `F(O2) = obj[1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorData {
    pub obj: [Vec<Scalar>; 2],
    pub x: Vec<Vec<Scalar>>,
    pub y: Vec<Vec<Scalar>>,
}

impl FunctorData {
    pub fn value(&self, g: Generator) -> Option<&Vec<Scalar>> {
        match g.kind {
            GeneratorKind::X => self.x.get(g.m),
            GeneratorKind::Y => self.y.get(g.m),
        }
    }

    /// Number of generator levels present.
    pub fn levels(&self) -> usize {
        self.x.len().min(self.y.len())
    }

    /// Identity functor data on a single MC element.
    pub fn identity(a: &DgAlgebra, x: &[Scalar], levels: usize) -> Self {
        let mut xs = vec![a.zero(); levels];
        let mut ys = vec![a.zero(); levels];
        if levels > 0 {
            xs[0] = a.one();
            ys[0] = a.one();
        }
        FunctorData { obj: [x.to_vec(), x.to_vec()], x: xs, y: ys }
    }
}

/// Residuals of `D F(g) = F(d g)`; empty when `F` is a dg functor on the generators present.
#[derive(Clone, Debug, Default)]
pub struct FunctorReport {
    pub failures: Vec<(Generator, String)>,
    pub checked: Vec<Generator>,
}

impl FunctorReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn eval_word(a: &DgAlgebra, data: &FunctorData, w: &Word) -> Option<Vec<Scalar>> {
    let mut acc = a.one();
    for g in w {
        acc = a.mul(&acc, data.value(*g)?);
    }
    Some(acc)
}

/// Check the dg functor equations on every generator whose differential only involves present values.
pub fn functor_report(a: &DgAlgebra, data: &FunctorData, cat: &KInftyCategoryTrunc) -> Result<FunctorReport> {
    let mut rep = FunctorReport::default();
    let r = a.ring();
    for (i, g) in cat.generators.iter().enumerate() {
        let Some(fg) = data.value(*g) else { continue };
        a.expect_degree(fg, g.degree())?;
        let lhs = twisted_d(a, &data.obj[g.src()], &data.obj[g.tgt()], fg);
        let mut rhs = a.zero();
        let mut present = true;
        for (c, w) in &cat.differential[i] {
            match eval_word(a, data, w) {
                Some(v) => vec_ops::axpy(r, &mut rhs, &r.from_int(*c), &v),
                None => present = false,
            }
        }
        if !present {
            continue;
        }
        rep.checked.push(*g);
        let diff = a.sub(&lhs, &rhs);
        if !vec_ops::is_zero(&diff) {
            rep.failures.push((*g, a.format(&diff)));
        }
    }
    Ok(rep)
}

/// `F(x_m) = ε_m X_{path(x_m)} + δ_{m0}` and likewise for `y_m`, for all paths of `K_N*`.
pub fn homotopy_to_functor(h: &HomotopyAlgebra, x: &McElement) -> Result<FunctorData> {
    let check = is_mc(&h.total, &x.value)?;
    if !check.mc {
        return Err(Error::NotMc(h.total.format(&check.residual)));
    }
    let a = &h.base;
    let levels = h.interval.n;
    let val = |g: Generator| {
        let (v, n) = g.path();
        let c = h.path_coefficient(&x.value, v, n);
        let mut out = a.scale(&a.ring().from_int(g.sign()), &c);
        if g.m == 0 {
            out = a.add(&out, &a.one());
        }
        out
    };
    let (o0, o1) = h.endpoints(&x.value);
    Ok(FunctorData {
        obj: [o0, o1],
        x: (0..levels).map(|m| val(Generator::x(m))).collect(),
        y: (0..levels).map(|m| val(Generator::y(m))).collect(),
    })
}

/// Inverse of [`homotopy_to_functor`]; also returns the MC residual in `A ⊗ K_N*`.
pub fn functor_to_homotopy(
    h: &HomotopyAlgebra,
    data: &FunctorData,
    cat: &KInftyCategoryTrunc,
) -> Result<(McElement, Vec<Scalar>)> {
    let a = &h.base;
    let levels = h.interval.n;
    if data.levels() < levels {
        return Err(Error::Invalid(format!("functor data has {} levels, {} needed", data.levels(), levels)));
    }
    for o in &data.obj {
        if !is_mc(a, o)?.mc {
            return Err(Error::NotMc("object is not an MC element".into()));
        }
    }
    let rep = functor_report(a, data, cat)?;
    if let Some((g, r)) = rep.failures.iter().find(|(g, _)| g.m < levels) {
        return Err(Error::Invalid(format!("functor equation fails at {g}: {r}")));
    }
    let mut coeffs = vec![
        (h.interval.index(0, 0).expect("vertex"), data.obj[0].clone()),
        (h.interval.index(1, 0).expect("vertex"), data.obj[1].clone()),
    ];
    for m in 0..levels {
        for g in [Generator::x(m), Generator::y(m)] {
            let (v, n) = g.path();
            let Some(j) = h.interval.index(v, n) else {
                continue;
            };
            let mut c = data.value(g).expect("levels checked").clone();
            if m == 0 {
                c = a.sub(&c, &a.one());
            }
            coeffs.push((j, a.scale(&a.ring().from_int(g.sign()), &c)));
        }
    }
    let v = h.assemble(&coeffs);
    let residual = is_mc(&h.total, &v)?.residual;
    Ok((McElement::unchecked(h.total.clone(), v), residual))
}
