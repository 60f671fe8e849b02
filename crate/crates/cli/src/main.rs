use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qcone::eigencone::{self, DivisorClass, FaceDatum};
use qcone::induction::FaceContext;
use qcone::linalg;
use qcone::notation;
use qcone::qschubert::{quantum_cohomology, DegreeVector, QuantumCohomology};
use qcone::rootsys::{parse_label, Parabolic, RootSystem};
use qcone::verlinde::{self, FusionQuery};

mod cone;
mod tables;

use cone::ConeDoc;

#[derive(Parser, Debug)]
#[command(name = "qcone", version, about = "Multiplicative eigenvalue cones and quantum Schubert calculus")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Group type, e.g. `D4`, or a bare letter together with `--rank`.
    #[arg(long = "type", global = true)]
    kind: Option<String>,
    #[arg(long, global = true)]
    rank: Option<usize>,
    /// Write JSON instead of text; with a path, write it to that file as well.
    #[arg(long, global = true, num_args = 0..=1, value_name = "PATH")]
    json: Option<Option<PathBuf>>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, env = "QCONE_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// All facet inequalities of the cone, one per line.
    Facets(PointsArgs),
    /// Extremal rays of the cone.
    Rays(RaysArgs),
    /// Classify a point against the cone.
    Member(WeightArgs),
    /// A Gromov-Witten invariant of G/P.
    Gw(GwArgs),
    /// Small quantum product of Schubert classes.
    Qmul(QmulArgs),
    /// Type I and induced rays of a regular face.
    Face(FaceArgs),
    /// Dimension of a space of conformal blocks.
    Blocks(BlocksArgs),
    /// Tables of the worked D4 and G2 faces.
    Tables,
}

#[derive(Args, Debug)]
struct PointsArgs {
    #[arg(long, default_value_t = 3)]
    points: usize,
}

#[derive(Args, Debug)]
struct RaysArgs {
    #[arg(long, default_value_t = 3)]
    points: usize,
    /// Read the inequalities from a facet JSON file instead of computing them.
    #[arg(long)]
    facets_file: Option<PathBuf>,
    /// Only rays lying on no regular facet.
    #[arg(long)]
    non_regular: bool,
}

#[derive(Args, Debug)]
struct WeightArgs {
    /// Weights in fundamental-weight coordinates, e.g. "[0,1,0,0];[0,1,0,0];[0,1,0,0]".
    #[arg(long)]
    weights: String,
    #[arg(long)]
    level: String,
}

#[derive(Args, Debug)]
struct ParabolicArgs {
    /// 1-based simple roots not in the Levi, e.g. `1` or `1,3`.
    #[arg(long)]
    parabolic: String,
    /// Weyl words separated by `|`, e.g. "s1 | s2 s1 | s4 s2 s1".
    #[arg(long)]
    classes: String,
}

#[derive(Args, Debug)]
struct GwArgs {
    #[command(flatten)]
    p: ParabolicArgs,
    #[arg(long)]
    degree: Option<String>,
    #[arg(long)]
    deformed: bool,
}

#[derive(Args, Debug)]
struct QmulArgs {
    #[command(flatten)]
    p: ParabolicArgs,
}

#[derive(Args, Debug)]
struct FaceArgs {
    #[command(flatten)]
    p: ParabolicArgs,
    #[arg(long)]
    degree: Option<String>,
    /// Full report: type I rays, induction scalars and induced rays.
    #[arg(long)]
    report: bool,
    /// Use the other coweight solving the induction constraints.
    #[arg(long)]
    dual: bool,
}

#[derive(Args, Debug)]
struct BlocksArgs {
    #[arg(long)]
    weights: String,
    #[arg(long)]
    level: i64,
    /// Also report the dimensions for the multiples 1..=N.
    #[arg(long, value_name = "N")]
    scan: Option<i64>,
}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(qcone::Error::Invalid(msg.into()))
}

struct Ctx {
    global: Global,
}

impl Ctx {
    fn root_system(&self) -> Result<Arc<RootSystem>> {
        let Some(kind) = &self.global.kind else {
            return Err(invalid("--type is required"));
        };
        let label = match self.global.rank {
            Some(r) if kind.chars().all(|c| c.is_ascii_alphabetic()) => format!("{kind}{r}"),
            Some(r) => {
                let (_, n) = parse_label(kind)?;
                if n != r {
                    return Err(invalid(format!("--rank {r} contradicts --type {kind}")));
                }
                kind.clone()
            }
            None => kind.clone(),
        };
        let (t, n) = parse_label(&label)?;
        Ok(Arc::new(RootSystem::new(t, n)?))
    }

    /// Emit the JSON document, or the text when no JSON was asked for.
    fn emit(&self, text: String, doc: serde_json::Value) -> Result<String> {
        match &self.global.json {
            None => Ok(text),
            Some(None) => Ok(serde_json::to_string_pretty(&doc)? + "\n"),
            Some(Some(path)) => {
                std::fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
                Ok(text)
            }
        }
    }
}

fn parse_qh(rs: &Arc<RootSystem>, p: &ParabolicArgs) -> Result<(Arc<QuantumCohomology>, Vec<u32>)> {
    let par = Parabolic::parse(rs.clone(), &p.parabolic)?;
    let qh = quantum_cohomology(rs, &par.s_p)?;
    let classes = qh.par.parse_classes(&p.classes)?;
    Ok((qh, classes))
}

fn parse_degree(qh: &QuantumCohomology, d: &Option<String>) -> Result<Vec<i64>> {
    let n = qh.par.s_p.len();
    Ok(match d {
        Some(t) => DegreeVector::parse(t, n)?.0,
        None => vec![0; n],
    })
}

fn parse_point(rs: &RootSystem, w: &WeightArgs) -> Result<DivisorClass> {
    let weights = notation::parse_weight_list(&w.weights, rs.rank)?;
    let level = notation::parse_rational(&w.level)?;
    Ok(DivisorClass { weights, level })
}

fn check_points(s: usize) -> Result<()> {
    if s < 3 {
        return Err(invalid("at least three points are needed"));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<String> {
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(invalid("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let ctx = Ctx { global: cli.global };
    match cli.command {
        Command::Facets(a) => facets(&ctx, a),
        Command::Rays(a) => rays(&ctx, a),
        Command::Member(a) => member(&ctx, a),
        Command::Gw(a) => gw(&ctx, a),
        Command::Qmul(a) => qmul(&ctx, a),
        Command::Face(a) => face(&ctx, a),
        Command::Blocks(a) => blocks(&ctx, a),
        Command::Tables => tables::run(&ctx),
    }
}

fn facets(ctx: &Ctx, a: PointsArgs) -> Result<String> {
    let rs = ctx.root_system()?;
    check_points(a.points)?;
    let doc = cone::load_or_build(&rs, a.points, ctx.global.cache_dir.as_deref(), false)?;
    let mut out = String::new();
    for f in &doc.facets {
        writeln!(out, "{}", f.describe())?;
    }
    let mut doc = doc;
    doc.rays = None;
    ctx.emit(out, serde_json::to_value(&doc)?)
}

fn rays(ctx: &Ctx, a: RaysArgs) -> Result<String> {
    let (rs, doc) = match &a.facets_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| invalid(format!("reading {}: {e}", path.display())))?;
            let mut doc: ConeDoc = serde_json::from_str(&text)
                .map_err(|e| invalid(format!("parsing {}: {e}", path.display())))?;
            let (t, n) = parse_label(&doc.group)?;
            let rs = Arc::new(RootSystem::new(t, n)?);
            if ctx.global.kind.is_some() && ctx.root_system()?.label() != rs.label() {
                return Err(invalid("--type does not match the facet file"));
            }
            doc.check(&rs)?;
            if doc.rays.is_none() {
                doc.rays = Some(doc.cone(&rs).compute_rays()?.to_vec());
            }
            (rs, doc)
        }
        None => {
            let rs = ctx.root_system()?;
            check_points(a.points)?;
            let doc = cone::load_or_build(&rs, a.points, ctx.global.cache_dir.as_deref(), true)?;
            (rs, doc)
        }
    };
    let s = doc.s;
    let all: Vec<DivisorClass> = doc
        .rays
        .as_ref()
        .expect("rays computed")
        .iter()
        .map(|v| DivisorClass::from_ray(v, s, rs.rank))
        .collect();
    let mut out = String::new();
    if a.non_regular {
        let rows = doc.regular_rows();
        let found = eigencone::classify_non_regular(&rs, &all, &rows);
        for r in &found {
            let note = if r.shape_ok { "" } else { "  shape check failed" };
            writeln!(out, "{}{note}", r.ray)?;
        }
        let list: Vec<_> = found
            .iter()
            .map(|r| json!({"ray": r.ray.primitive(), "text": r.ray.to_string(), "shape_ok": r.shape_ok}))
            .collect();
        return ctx.emit(
            out,
            json!({"schema": 1, "group": doc.group, "s": s, "non_regular": list}),
        );
    }
    for r in &all {
        writeln!(out, "{r}")?;
    }
    ctx.emit(out, serde_json::to_value(&doc)?)
}

fn member(ctx: &Ctx, a: WeightArgs) -> Result<String> {
    let rs = ctx.root_system()?;
    let x = parse_point(&rs, &a)?;
    check_points(x.s())?;
    let doc = cone::load_or_build(&rs, x.s(), ctx.global.cache_dir.as_deref(), false)?;
    let m = doc.cone(&rs).membership_vec(&x.to_vector());
    let status = match m.status {
        eigencone::MembershipStatus::Inside => "inside",
        eigencone::MembershipStatus::OnBoundary => "on boundary",
        eigencone::MembershipStatus::Outside => "outside",
    };
    let mut out = format!("{status}\n");
    for &k in &m.tight {
        writeln!(out, "  tight     {}", doc.facets[k].describe())?;
    }
    for &k in &m.violated {
        writeln!(out, "  violated  {}", doc.facets[k].describe())?;
    }
    let doc = json!({
        "schema": 1,
        "group": rs.label(),
        "s": x.s(),
        "point": x.to_string(),
        "status": status,
        "tight": m.tight,
        "violated": m.violated,
    });
    ctx.emit(out, doc)
}

fn gw(ctx: &Ctx, a: GwArgs) -> Result<String> {
    let rs = ctx.root_system()?;
    let (qh, classes) = parse_qh(&rs, &a.p)?;
    let d = parse_degree(&qh, &a.degree)?;
    if classes.len() < 3 {
        return Err(invalid("a Gromov-Witten invariant needs at least three classes"));
    }
    if d.iter().any(|&x| x < 0) {
        return Err(invalid("the degree must be effective"));
    }
    let v = if a.deformed {
        qh.deformed_invariant(&classes, &d)?
    } else {
        qh.gw_invariant(&classes, &d)?
    };
    let doc = json!({
        "schema": 1,
        "group": rs.label(),
        "parabolic": qh.par.label(),
        "classes": classes.iter().map(|&w| qh.par.format(w)).collect::<Vec<_>>(),
        "degree": d,
        "deformed": a.deformed,
        "value": v,
    });
    ctx.emit(format!("{v}\n"), doc)
}

fn qmul(ctx: &Ctx, a: QmulArgs) -> Result<String> {
    let rs = ctx.root_system()?;
    let (qh, classes) = parse_qh(&rs, &a.p)?;
    if classes.len() < 2 {
        return Err(invalid("give at least two classes"));
    }
    let mut acc = qh.class(classes[0]);
    for &w in &classes[1..] {
        acc = qh.multiply(&acc, &qh.class(w), None)?;
    }
    let terms: Vec<_> = acc
        .terms
        .iter()
        .map(|((w, d), c)| json!({"class": qh.par.format(*w), "degree": d.0, "coefficient": c}))
        .collect();
    let doc = json!({"schema": 1, "group": rs.label(), "parabolic": qh.par.label(), "terms": terms});
    ctx.emit(acc.render(&qh.par), doc)
}

fn face(ctx: &Ctx, a: FaceArgs) -> Result<String> {
    let rs = ctx.root_system()?;
    let (qh, classes) = parse_qh(&rs, &a.p)?;
    let d = parse_degree(&qh, &a.degree)?;
    let datum = FaceDatum::new(&qh, classes, d)?;
    let functionals = eigencone::facet_functionals(&datum);
    let rows: Vec<Vec<i64>> = functionals.iter().map(|f| cone::primitive_row(f)).collect();
    if !a.report {
        let mut out = format!("face {datum}\n");
        for r in &rows {
            writeln!(out, "  {r:?}")?;
        }
        let doc = json!({"schema": 1, "group": rs.label(), "face": datum.to_string(), "functionals": rows});
        return ctx.emit(out, doc);
    }
    let fc = FaceContext::new(datum, a.dual)?;
    let report = fc.report()?;
    let doc = json!({"schema": 1, "group": rs.label(), "functionals": rows, "report": report});
    ctx.emit(report.to_string(), doc)
}

fn blocks(ctx: &Ctx, a: BlocksArgs) -> Result<String> {
    let rs = ctx.root_system()?;
    let weights = notation::parse_weight_list(&a.weights, rs.rank)?;
    let weights: Vec<Vec<i64>> = weights
        .iter()
        .map(|w| {
            w.iter()
                .map(|c| linalg::to_i64(c).ok_or_else(|| invalid("weights must be integral")))
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<_>>()?;
    let q = FusionQuery::new(rs.clone(), weights, a.level)?;
    if let Some(n) = a.scan {
        if n < 1 {
            return Err(invalid("--scan needs a positive bound"));
        }
    }
    let dim = verlinde::fusion_dim(&q)?;
    let mut out = format!("{dim}\n");
    let mut scan = Vec::new();
    if let Some(n) = a.scan {
        scan = verlinde::scan(&q, n)?;
        for row in &scan {
            writeln!(out, "  x{}  {}", row.multiple, row.dim)?;
        }
    }
    let doc = json!({
        "schema": 1,
        "group": rs.label(),
        "weights": q.weights,
        "level": q.level,
        "dim": dim,
        "root_lattice": q.in_root_lattice(),
        "scan": scan,
    });
    ctx.emit(out, doc)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<qcone::Error>() {
        Some(q) if q.is_validation() => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
