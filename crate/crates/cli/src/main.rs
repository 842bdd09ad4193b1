use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use mctwist::dg::{check_dga, AlgebraJson, DgAlgebra};
use mctwist::fixtures::{emit_fixtures, CertificateFixture, ElementFixture, PairFixture};
use mctwist::holonomy::{order_estimate, pexp, solve_transport, Matrix, SampledMatrixPath, RESIDUAL_TOLERANCE};
use mctwist::interval::{
    build_interval_algebra, certificate_from_k2_homotopy, k2_homotopy_from_certificate, k_infty_category,
    HomotopyAlgebra,
};
use mctwist::linalg::{cohomology, CohomologyReport};
use mctwist::mc::{
    is_mc, search_homotopy_gauge, verify_homotopy_gauge, HomotopyGaugeCertificate, McElement, SearchOutcome,
};
use mctwist::perturbation::{
    lift_to_free_resolution, minimal_model, truncate_twisted, ModuleSystemJson, ReducedTwistedModule, TwistedModuleJson,
};
use mctwist::simplicial::{
    cochain_algebra, local_system_cohomology, ComplexJson, LocalSystem, LocalSystemJson, SimplicialSet,
};
use mctwist::{Error, Ring, Scalar};

#[derive(Parser, Debug)]
#[command(
    name = "mctwist",
    version,
    about = "Maurer-Cartan elements, twisted modules and local systems with exact arithmetic"
)]
struct Cli {
    /// Write the built-in fixtures to DIR and exit
    #[arg(long, value_name = "DIR")]
    emit_fixtures: Option<PathBuf>,
    /// Add the list of invariant checks to the report
    #[arg(long, global = true)]
    checks: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the dg algebra axioms on basis elements
    CheckDga {
        algebra: PathBuf,
        #[arg(long, value_parser = parse_ring)]
        ring: Option<Ring>,
    },
    /// Cohomology of an algebra's underlying complex or of a simplicial complex
    Cohomology {
        input: PathBuf,
        #[arg(long, value_parser = parse_ring)]
        ring: Option<Ring>,
    },
    /// Cohomology of a local system on a simplicial complex
    LocalSystem {
        complex: PathBuf,
        system: PathBuf,
        #[arg(long, value_parser = parse_ring)]
        ring: Option<Ring>,
    },
    /// Decide whether an element satisfies d(x) + x² = 0
    McCheck {
        input: PathBuf,
        #[arg(long, value_parser = parse_ring)]
        ring: Option<Ring>,
    },
    /// Search for a homotopy gauge equivalence between two MC elements
    GaugeSearch {
        input: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        budget: usize,
        #[arg(long, value_parser = parse_ring)]
        ring: Option<Ring>,
    },
    /// Turn a homotopy gauge certificate into a K₂ homotopy and back
    K2Dict {
        input: PathBuf,
        #[arg(long, value_parser = parse_ring)]
        ring: Option<Ring>,
    },
    /// Truncated presentation of the resolution category K∞
    Kinfty {
        #[arg(long)]
        n: usize,
    },
    /// Minimal model of a reduced twisted module over a field
    MinimalModel {
        complex: PathBuf,
        module: PathBuf,
        #[arg(long, value_parser = parse_ring, default_value = "Q")]
        ring: Ring,
    },
    /// Free resolution of a local system of finitely presented modules
    Resolve {
        complex: PathBuf,
        system: PathBuf,
        #[arg(long, value_parser = parse_ring, default_value = "Z")]
        ring: Ring,
    },
    /// Canonical truncation of a reduced twisted module
    Truncate {
        complex: PathBuf,
        module: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        i: i32,
        #[arg(long, value_parser = parse_ring, default_value = "Z")]
        ring: Ring,
    },
    /// Presentation of the interval algebra K_n*
    Kn {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_ring, default_value = "Z")]
        ring: Ring,
        /// Print a table instead of JSON
        #[arg(long)]
        table: bool,
    },
    /// Path-ordered exponential of a sampled matrix path read from CSV
    Holonomy {
        input: PathBuf,
        /// Endpoint of the integration interval [0, z]
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        #[arg(long, default_value_t = RESIDUAL_TOLERANCE)]
        tolerance: f64,
    },
}

fn parse_ring(s: &str) -> Result<Ring, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<Report, Failure>;

/// Result object plus the invariant checks that were run.
struct Report {
    body: Map<String, Value>,
    checks: Vec<(String, bool)>,
}

impl Report {
    fn new(body: Value) -> Self {
        let body = match body {
            Value::Object(m) => m,
            other => Map::from_iter([("result".to_string(), other)]),
        };
        Report { body, checks: Vec::new() }
    }

    fn check(mut self, name: &str, ok: bool) -> Self {
        self.checks.push((name.to_string(), ok));
        self
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Input(format!("{} does not match the schema: {e}", path.display())))
}

/// An algebra given directly or under the key `algebra`.
fn load_algebra(path: &Path, ring: Option<Ring>) -> Result<DgAlgebra, Failure> {
    let v: Value = read_json(path)?;
    let inner = match v.get("algebra") {
        Some(a) if a.is_object() => a.clone(),
        _ => v,
    };
    let j: AlgebraJson = serde_json::from_value(inner)
        .map_err(|e| Failure::Input(format!("{} is not an algebra: {e}", path.display())))?;
    with_ring(DgAlgebra::from_json(&j)?, ring)
}

fn with_ring(a: DgAlgebra, ring: Option<Ring>) -> Result<DgAlgebra, Failure> {
    match ring {
        Some(r) if r != a.ring() => Ok(a.change_ring(r)?),
        _ => Ok(a),
    }
}

fn load_complex(path: &Path) -> Result<SimplicialSet, Failure> {
    let j: ComplexJson = read_json(path)?;
    Ok(SimplicialSet::from_json(&j)?)
}

fn element(a: &DgAlgebra, terms: &[(String, Scalar)]) -> Result<Vec<Scalar>, Failure> {
    let mut t: Vec<(&str, Scalar)> = Vec::with_capacity(terms.len());
    for (l, c) in terms {
        t.push((l.as_str(), a.ring().try_element(c)?));
    }
    Ok(a.module().vector(&t)?)
}

fn groups(h: &CohomologyReport) -> Value {
    Value::Array(h.groups.iter().map(|g| g.to_json()).collect())
}

fn check_dga_cmd(path: &Path, ring: Option<Ring>) -> Outcome {
    let a = load_algebra(path, ring)?;
    let r = check_dga(&a);
    Ok(Report::new(json!({
        "ok": r.is_ok(),
        "ring": a.ring().to_string(),
        "checked": r.checked,
        "not_checked": r.not_checked,
        "violations": serde_json::to_value(&r.violations).map_err(|e| Failure::Internal(e.to_string()))?,
    })))
}

fn cohomology_cmd(path: &Path, ring: Option<Ring>) -> Outcome {
    let v: Value = read_json(path)?;
    let (h, checks) = if v.get("vertices").is_some() {
        let x = load_complex(path)?;
        let c = cochain_algebra(&x, ring.unwrap_or(Ring::Integers), x.dim())?;
        let ok = check_dga(&c).is_ok();
        (cohomology(&c.complex())?, vec![("cochain algebra axioms", ok)])
    } else {
        let a = load_algebra(path, ring)?;
        if a.truncation().is_some() {
            return Err(Failure::Input("cohomology of a truncated algebra is not defined; use check-dga".into()));
        }
        (cohomology(&a.complex())?, vec![])
    };
    let mut rep = Report::new(json!({ "start": h.start, "H": groups(&h) }));
    for (n, ok) in checks {
        rep = rep.check(n, ok);
    }
    Ok(rep)
}

fn local_system_cmd(complex: &Path, system: &Path, ring: Option<Ring>) -> Outcome {
    let base = load_complex(complex)?;
    let j: LocalSystemJson = read_json(system)?;
    let ring = ring.or(j.ring).unwrap_or(Ring::Integers);
    let ls = LocalSystem::from_json(base, &j, ring)?;
    let h = local_system_cohomology(&ls)?;
    Ok(Report::new(json!({ "H": groups(&h) })).check("cocycle condition", ls.cocycle_violation().is_none()))
}

fn mc_check_cmd(path: &Path, ring: Option<Ring>) -> Outcome {
    let j: ElementFixture = read_json(path)?;
    let a = with_ring(DgAlgebra::from_json(&j.algebra)?, ring)?;
    let x = element(&a, &j.x)?;
    let c = is_mc(&a, &x)?;
    let mut body = json!({ "mc": c.mc });
    if !c.mc {
        body["residual"] = json!(a.format(&c.residual));
    }
    Ok(Report::new(body))
}

fn gauge_search_cmd(path: &Path, seed: u64, budget: usize, ring: Option<Ring>) -> Outcome {
    let j: PairFixture = read_json(path)?;
    let a = Arc::new(with_ring(DgAlgebra::from_json(&j.algebra)?, ring)?);
    let x = McElement::new(a.clone(), element(&a, &j.x)?)?;
    let y = McElement::new(a.clone(), element(&a, &j.y)?)?;
    let out = search_homotopy_gauge(&a, &x, &y, budget, seed)?;
    let mut rep = Report::new(json!({ "outcome": out.kind() }));
    match out {
        SearchOutcome::Equivalent { cert, gauge } => {
            let ok = verify_homotopy_gauge(&a, &x.value, &y.value, &cert).is_ok();
            rep.body.insert("gauge".into(), json!(gauge));
            rep.body.insert(
                "certificate".into(),
                serde_json::to_value(cert.to_json(&a)).map_err(|e| Failure::Internal(e.to_string()))?,
            );
            rep = rep.check("certificate verifies", ok);
        }
        SearchOutcome::Distinguished(inv) => {
            rep.body.insert("invariant".into(), json!(inv.name));
            rep.body.insert("x".into(), json!({ "start": inv.left.start, "H": groups(&inv.left) }));
            rep.body.insert("y".into(), json!({ "start": inv.right.start, "H": groups(&inv.right) }));
        }
        SearchOutcome::Unknown(reason) => {
            rep.body.insert("reason".into(), json!(reason));
        }
    }
    Ok(rep)
}

fn k2_dict_cmd(path: &Path, ring: Option<Ring>) -> Outcome {
    let j: CertificateFixture = read_json(path)?;
    let a = Arc::new(with_ring(DgAlgebra::from_json(&j.algebra)?, ring)?);
    let x0 = element(&a, &j.x)?;
    let x1 = element(&a, &j.y)?;
    let cert = HomotopyGaugeCertificate::from_json(&a, &j.certificate)?;
    let verified = verify_homotopy_gauge(&a, &x0, &x1, &cert).is_ok();
    if !verified {
        return Err(Failure::Input("certificate fails the homotopy gauge conditions".into()));
    }
    let h = HomotopyAlgebra::new(a.clone(), 2)?;
    let big = k2_homotopy_from_certificate(&h, &x0, &x1, &cert)?;
    let mc = is_mc(&h.total, &big.value)?.mc;
    let (y0, y1, back) = certificate_from_k2_homotopy(&h, &big)?;
    let roundtrip = y0 == x0 && y1 == x1 && back == cert;
    Ok(Report::new(json!({
        "mc": mc,
        "roundtrip": roundtrip,
        "homotopy": h.total.module().terms(&big.value).into_iter().map(|(l, c)| json!([l, c.to_string()])).collect::<Vec<_>>(),
    }))
    .check("certificate verifies", verified)
    .check("homotopy is MC", mc)
    .check("certificate roundtrip", roundtrip))
}

fn kinfty_cmd(n: usize) -> Outcome {
    let cat = k_infty_category(n)?;
    let gens: Vec<Value> = cat
        .generators
        .iter()
        .map(|g| json!({ "name": g.to_string(), "degree": g.degree(), "src": g.src(), "tgt": g.tgt(), "d": cat.format_d(*g) }))
        .collect();
    let d2 = cat.d_squared_zero.iter().all(|b| *b);
    Ok(Report::new(json!({ "n": n, "generators": gens, "d_squared_zero": d2, "ledger": cat.ledger }))
        .check("d² = 0 on generators", d2))
}

fn reduced(complex: &Path, module: &Path, ring: Ring) -> Result<ReducedTwistedModule, Failure> {
    let base = load_complex(complex)?;
    let j: TwistedModuleJson = read_json(module)?;
    Ok(ReducedTwistedModule::new(j.build(&base, ring)?)?)
}

fn minimal_model_cmd(complex: &Path, module: &Path, ring: Ring) -> Outcome {
    let m = reduced(complex, module, ring)?;
    let mm = minimal_model(&m)?;
    let rep = mm.verify(&m)?;
    let h = m.module.cohomology()?;
    let same = h.same_groups(&mm.module.cohomology()?);
    if !rep.is_ok() || !same {
        return Err(Failure::Internal(format!("minimal model fails its checks: {rep:?}, cohomology equal: {same}")));
    }
    let out = serde_json::to_value(TwistedModuleJson::from_module(&mm.module))
        .map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(Report::new(json!({ "minimal": out, "start": h.start, "H": groups(&h) }))
        .check("mc", rep.mc)
        .check("minimal", rep.minimal)
        .check("inclusion closed", rep.include_closed)
        .check("projection closed", rep.project_closed)
        .check("retraction", rep.retraction)
        .check("homotopy", rep.homotopy)
        .check("cohomology preserved", same))
}

fn resolve_cmd(complex: &Path, system: &Path, ring: Ring) -> Outcome {
    let base = load_complex(complex)?;
    let j: ModuleSystemJson = read_json(system)?;
    let r = lift_to_free_resolution(&j.build(&base, ring)?)?;
    let mc = r.module.is_mc();
    if !mc {
        return Err(Failure::Internal("resolved differential does not square to zero".into()));
    }
    let h = r.module.cohomology()?;
    let stages = r.stages.iter().filter(|s| s.iter().any(|c| !c.is_zero())).count();
    Ok(Report::new(json!({ "nonzero_stages": stages, "d_squared_zero": mc, "start": h.start, "H": groups(&h) }))
        .check("D² = 0", mc))
}

fn truncate_cmd(complex: &Path, module: &Path, i: i32, ring: Ring) -> Outcome {
    let m = reduced(complex, module, ring)?;
    let t = truncate_twisted(&m, i)?;
    let closed = mctwist::dg::TwistedHom::new(&t.module, &m.module)?.is_closed(&t.map);
    if !closed {
        return Err(Failure::Internal("truncation map is not closed".into()));
    }
    let h = t.module.cohomology()?;
    let out = serde_json::to_value(TwistedModuleJson::from_module(&t.module))
        .map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(Report::new(json!({ "truncated": out, "start": h.start, "H": groups(&h) })).check("map closed", closed))
}

fn kn_cmd(n: usize, ring: Ring, table: bool) -> Result<(Report, Option<String>), Failure> {
    let k = build_interval_algebra(n, ring)?;
    let a = &k.dga;
    let ok = check_dga(a).is_ok();
    let h = cohomology(&a.complex())?;
    let l = |i: usize| a.label(i).to_string();
    let products: Vec<Value> = a.mult_entries().into_iter().map(|(i, j, r, c)| json!([l(i), l(j), l(r), c])).collect();
    let diff: Vec<Value> = a.diff_entries().into_iter().map(|(i, j, c)| json!([l(i), l(j), c])).collect();
    let rep = Report::new(json!({
        "n": n,
        "ring": ring.to_string(),
        "ranks": k.ranks(),
        "basis": a.module().basis_pairs(),
        "products": products,
        "differential": diff,
        "H": groups(&h),
    }))
    .check("dga axioms", ok);
    let text = table.then(|| {
        let mut s = format!("K_{n}* over {ring}: ranks {:?}\n", k.ranks());
        for deg in 0..k.ranks().len() as i32 {
            for i in a.module().in_degree(deg) {
                s.push_str(&format!("  deg {deg}  {:<10} d = {}\n", l(i), a.format(&a.d(&a.basis(i)))));
            }
        }
        for (i, j, r, c) in a.mult_entries() {
            s.push_str(&format!(
                "  {} * {} = {}{}\n",
                l(i),
                l(j),
                if c.is_one() { String::new() } else { format!("{c}*") },
                l(r)
            ));
        }
        s
    });
    Ok((rep, text))
}

fn parse_csv(path: &Path) -> Result<SampledMatrixPath, Failure> {
    let text = read(path)?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut samples = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Failure::Input(format!("line {}: {e}", line + 1)))?;
        let vals: Vec<f64> = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| Failure::Input(format!("line {}: {f:?}: {e}", line + 1))))
            .collect::<Result<_, _>>()?;
        let n = (vals.len() as f64).sqrt().round() as usize;
        if n * n != vals.len() || n == 0 {
            return Err(Failure::Input(format!("line {} has {} entries, not a square matrix", line + 1, vals.len())));
        }
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Failure::Input(format!("line {} has a non-finite entry", line + 1)));
        }
        samples.push(Matrix::from_row_slice(n, n, &vals));
    }
    Ok(SampledMatrixPath::new(samples)?)
}

fn holonomy_cmd(path: &Path, z: f64, tolerance: f64) -> Outcome {
    let y = parse_csv(path)?;
    let g = pexp(&y, z)?;
    let t = solve_transport(&y, &Matrix::identity(y.dim(), y.dim()), tolerance)?;
    let order = order_estimate(&y, z)?;
    let rows: Vec<Vec<f64>> = (0..g.matrix.nrows()).map(|i| g.matrix.row(i).iter().copied().collect()).collect();
    Ok(Report::new(json!({
        "result": rows,
        "residuals": { "transport": t.residual, "flagged": t.flagged },
        "order_estimate": order,
        "condition": g.condition,
    }))
    .check("transport residual within tolerance", !t.flagged))
}

fn run(cli: Cli) -> Result<Option<(Report, Option<String>)>, Failure> {
    if let Some(dir) = &cli.emit_fixtures {
        let names = emit_fixtures(dir)?;
        return Ok(Some((Report::new(json!({ "written": names, "dir": dir.display().to_string() })), None)));
    }
    let Some(cmd) = cli.command else {
        return Err(Failure::Input("a subcommand or --emit-fixtures is required".into()));
    };
    let rep = match cmd {
        Command::CheckDga { algebra, ring } => check_dga_cmd(&algebra, ring)?,
        Command::Cohomology { input, ring } => cohomology_cmd(&input, ring)?,
        Command::LocalSystem { complex, system, ring } => local_system_cmd(&complex, &system, ring)?,
        Command::McCheck { input, ring } => mc_check_cmd(&input, ring)?,
        Command::GaugeSearch { input, seed, budget, ring } => gauge_search_cmd(&input, seed, budget, ring)?,
        Command::K2Dict { input, ring } => k2_dict_cmd(&input, ring)?,
        Command::Kinfty { n } => kinfty_cmd(n)?,
        Command::MinimalModel { complex, module, ring } => minimal_model_cmd(&complex, &module, ring)?,
        Command::Resolve { complex, system, ring } => resolve_cmd(&complex, &system, ring)?,
        Command::Truncate { complex, module, i, ring } => truncate_cmd(&complex, &module, i, ring)?,
        Command::Kn { n, ring, table } => return kn_cmd(n, ring, table).map(Some),
        Command::Holonomy { input, z, tolerance } => holonomy_cmd(&input, z, tolerance)?,
    };
    Ok(Some((rep, None)))
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let with_checks = cli.checks;
    match run(cli) {
        Ok(Some((_, Some(table)))) => {
            emit(&table);
            ExitCode::SUCCESS
        }
        Ok(Some((mut rep, None))) => {
            if rep.checks.iter().any(|(_, ok)| !ok) {
                let failed: Vec<&str> = rep.checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect();
                eprintln!("internal invariant violated: {}", failed.join(", "));
                emit(&format!("{}\n", json!({ "error": "internal invariant violated", "failed": failed })));
                return ExitCode::from(2);
            }
            if with_checks {
                let checks: Map<String, Value> = rep.checks.iter().map(|(n, ok)| (n.clone(), json!(ok))).collect();
                rep.body.insert("checks".into(), Value::Object(checks));
            }
            emit(&format!("{}\n", Value::Object(rep.body)));
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("invalid input: {msg}");
            emit(&format!("{}\n", json!({ "error": msg })));
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            emit(&format!("{}\n", json!({ "error": msg })));
            ExitCode::from(2)
        }
    }
}
