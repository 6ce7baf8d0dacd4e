mod bench;
mod report;
mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use scanwatch::bounds::{catalog, upper_bound_c, upper_bound_general, Formula};
use scanwatch::corpus::{load_corpus, read_instance, PolygonFile, ORACLE_RES};
use scanwatch::niche::{gen_niche, static_niche, alternating_choices, AdversaryMode, GeneratedNiche, NicheParams};
use scanwatch::simulator::{new_world, CostModel, World};
use scanwatch::strategies::{offline_oracle, run_strategy, StrategyContext, StrategyError};
use scanwatch::Coord;

use report::{explore_report, ExploreReport, Num, RunInput};

/// Exploration of unknown rectilinear polygons with discrete scans.
#[derive(Parser)]
#[command(name = "scanwatch", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one strategy on one polygon file and print a JSON report.
    Explore(ExploreArgs),
    /// Run strategies over a corpus and write CSV.
    Bench(BenchArgs),
    /// Print the competitive-ratio bound and the case catalog.
    Bounds(BoundsArgs),
    /// Build a niche instance, or run a strategy against the adaptive one.
    GenNiche(NicheArgs),
    /// Draw an explore report as SVG.
    Render(RenderArgs),
    /// Offline optimum over grid-restricted scan points.
    Oracle(OracleArgs),
}

fn coord(s: &str) -> Result<Coord, String> {
    s.parse::<Coord>().map_err(|e| e.to_string())
}

#[derive(Args)]
struct ExploreArgs {
    polygon: PathBuf,
    #[arg(default_value = "scansearch")]
    strategy: String,
    /// Scan cost.
    #[arg(long, default_value = "1", value_parser = coord)]
    c: Coord,
    /// Minimum edge length assumed by the strategy (default: measured).
    #[arg(long, value_parser = coord)]
    a: Option<Coord>,
    /// Corridor width assumed by the strategy (default: measured).
    #[arg(long = "a-k", value_parser = coord)]
    a_k: Option<Coord>,
    /// Recorded in the report. The strategies are deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also compute the offline optimum at this grid resolution.
    #[arg(long)]
    oracle_res: Option<u32>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Corpus directory (or a single polygon file).
    corpus: PathBuf,
    /// Comma-separated strategy names.
    #[arg(default_value = "scansearch,reflex")]
    strategies: String,
    /// CSV output; stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "1", value_parser = coord)]
    c: Coord,
    #[arg(long, value_parser = coord)]
    a: Option<Coord>,
    #[arg(long = "a-k", value_parser = coord)]
    a_k: Option<Coord>,
    /// Oracle grid resolution; 0 skips the oracle.
    #[arg(long, default_value_t = ORACLE_RES)]
    oracle_res: u32,
    #[arg(long, env = "SCANWATCH_WORKERS")]
    workers: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_parser = coord)]
    a: Coord,
    #[arg(long = "a-k", value_parser = coord)]
    a_k: Option<Coord>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct NicheArgs {
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value = "1", value_parser = coord)]
    delta: Coord,
    #[arg(long, default_value = "1", value_parser = coord)]
    d: Coord,
    /// Growth constant of the longest side.
    #[arg(long, default_value = "1", value_parser = coord)]
    f: Coord,
    /// Run this strategy against the adaptive adversary instead of writing a polygon.
    #[arg(long)]
    adaptive: Option<String>,
    #[arg(long, default_value = "1", value_parser = coord)]
    c: Coord,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    report: PathBuf,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    polygon: PathBuf,
    #[arg(long, default_value = "1", value_parser = coord)]
    c: Coord,
    #[arg(long, default_value_t = ORACLE_RES)]
    res: u32,
}

/// Error with its exit code: 1 for strategy defects, 2 for bad input.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure { code: 2, err: e.into() }
}

fn defect<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure { code: 1, err: e.into() }
}

/// Bad names and contexts are the caller's fault; anything else a strategy
/// raises mid-run is a defect.
fn strategy_failure(e: StrategyError) -> Failure {
    match e {
        StrategyError::UnknownStrategy(_)
        | StrategyError::InvalidContext(_)
        | StrategyError::StartNotOnBoundary
        | StrategyError::NotStarShaped
        | StrategyError::TooLarge(_) => input(e),
        _ => defect(e),
    }
}

type Outcome = Result<(), Failure>;

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())).map_err(input),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(input)
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(defect)?;
    s.push('\n');
    Ok(s)
}

fn context(poly: &scanwatch::RectPolygon, a: Option<Coord>, a_k: Option<Coord>) -> Result<StrategyContext, Failure> {
    let m = StrategyContext::measured(poly);
    StrategyContext::new(a.unwrap_or(m.a), a_k.unwrap_or(m.a_k)).map_err(input)
}

/// `corpus/<name>/polygon.json` is named after its directory.
fn instance_name(path: &Path) -> String {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    match path.parent().and_then(|d| d.file_name()) {
        Some(dir) if stem == "polygon" => dir.to_string_lossy().into_owned(),
        _ => stem,
    }
}

fn explore(args: ExploreArgs) -> Outcome {
    let inst = read_instance(&args.polygon).map_err(input)?;
    let cm = CostModel::new(args.c.clone()).map_err(input)?;
    let ctx = context(&inst.polygon, args.a, args.a_k)?;
    let oracle = match args.oracle_res {
        Some(res) => Some(offline_oracle(&inst.polygon, &inst.start, &cm, res).map_err(strategy_failure)?),
        None => None,
    };
    let mut w = new_world(inst.polygon.clone(), inst.start.clone(), cm).map_err(input)?;
    let rep = run_strategy(&args.strategy, &mut w, &ctx).map_err(strategy_failure)?;
    let name = instance_name(&args.polygon);
    let input_desc = RunInput {
        instance: &name,
        polygon: &inst.polygon,
        start: &inst.start,
        seed: args.seed,
        c: &args.c,
        ctx: &ctx,
        oracle: oracle.as_ref(),
    };
    let report = explore_report(&input_desc, &rep, w.events());
    if let Some(p) = &args.svg {
        let s = svg::render(&report).map_err(defect)?;
        emit(Some(p), &s)?;
    }
    emit(args.json.as_deref(), &json(&report)?)?;
    if !rep.tour.terminated_ok {
        return Err(defect(anyhow!("tour did not cover the polygon")));
    }
    if rep.assertion_failures > 0 {
        return Err(defect(anyhow!("{} assertion failures", rep.assertion_failures)));
    }
    Ok(())
}

fn workers(arg: Option<usize>) -> usize {
    arg.filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn bench(args: BenchArgs) -> Outcome {
    let entries = load_corpus(&args.corpus).map_err(input)?;
    let strategies: Vec<String> =
        args.strategies.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
    if strategies.is_empty() {
        return Err(input(anyhow!("no strategies given")));
    }
    let cfg = bench::BenchConfig { strategies, c: args.c, a: args.a, a_k: args.a_k, oracle_res: args.oracle_res };
    let rows = bench::run(&entries, &cfg, workers(args.workers)).map_err(input)?;
    let mut buf = Vec::new();
    bench::write_csv(&mut buf, &rows).map_err(defect)?;
    emit(args.out.as_deref(), &String::from_utf8(buf).map_err(defect)?)?;
    let failed = rows.iter().filter(|r| r.failed).count();
    if failed > 0 {
        return Err(defect(anyhow!("{failed} of {} runs failed", rows.len())));
    }
    Ok(())
}

/// `ca·a + ck·a_k + c0 + Σ coef·log2((p·a + q)/den)`, zero terms dropped.
fn formula_text(f: &Formula) -> String {
    let mut parts = Vec::new();
    let num = |v: f64| format!("{v}");
    if f.ca != 0.0 {
        parts.push(format!("{}a", num(f.ca)));
    }
    if f.ck != 0.0 {
        parts.push(format!("{}a_k", num(f.ck)));
    }
    if f.c0 != 0.0 {
        parts.push(num(f.c0));
    }
    for t in &f.logs {
        let den = if t.over_ak { "a_k" } else { "a" };
        let inner = match (t.p != 0.0, t.q != 0.0) {
            (true, true) => format!("{}a+{}", num(t.p), num(t.q)),
            (true, false) => format!("{}a", num(t.p)),
            _ => num(t.q),
        };
        parts.push(format!("{}log2(({inner})/{den})", num(t.coef)));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[derive(Serialize)]
struct CatalogLine {
    group: String,
    row: usize,
    k_zero: String,
    k_pos: String,
    bold: Option<u8>,
    dominated_by: Option<u8>,
    k_zero_value: Option<f64>,
    k_pos_value: Option<f64>,
}

#[derive(Serialize)]
struct BoundsReport {
    a: Num,
    a_k: Num,
    bound: String,
    catalog: Vec<CatalogLine>,
}

fn bounds(args: BoundsArgs) -> Outcome {
    let a = args.a.to_f64();
    let a_k_c = args.a_k.clone().unwrap_or_else(|| args.a.clone());
    let a_k = a_k_c.to_f64();
    let value = match &args.a_k {
        None => upper_bound_c(a),
        Some(_) => upper_bound_general(a, a_k),
    }
    .map_err(input)?;
    let catalog: Vec<CatalogLine> = catalog()
        .iter()
        .map(|r| CatalogLine {
            group: format!("{:?}", r.group),
            row: r.row,
            k_zero: r.k_zero.as_ref().map(formula_text).unwrap_or_default(),
            k_pos: r.k_pos.as_ref().map(formula_text).unwrap_or_default(),
            bold: r.bold,
            dominated_by: r.dominated_by,
            k_zero_value: r.k_zero.as_ref().map(|f| f.eval(a, a_k)),
            k_pos_value: r.k_pos.as_ref().map(|f| f.eval(a, a_k)),
        })
        .collect();
    let bound = format!("{value:.4}");
    match args.format {
        Format::Json => {
            let rep = BoundsReport { a: (&args.a).into(), a_k: (&a_k_c).into(), bound, catalog };
            emit(None, &json(&rep)?)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for l in &catalog {
                w.serialize(l).map_err(defect)?;
            }
            let table = String::from_utf8(w.into_inner().map_err(defect)?).map_err(defect)?;
            emit(None, &format!("{bound}\n\n{table}"))
        }
    }
}

#[derive(Serialize)]
struct AdaptiveReport {
    params: NicheParams,
    strategy: String,
    t: Num,
    #[serde(rename = "S")]
    scans: usize,
    committed: Vec<scanwatch::niche::Side>,
    resolutions: Vec<scanwatch::niche::Resolution>,
    polygon: PolygonFile,
}

fn gen_niche_cmd(args: NicheArgs) -> Outcome {
    let mut np = NicheParams::new(args.delta, args.d, args.depth);
    np.f = args.f;
    let cm = CostModel::new(args.c).map_err(input)?;
    let Some(strategy) = args.adaptive else {
        let GeneratedNiche::Static(poly) = gen_niche(&np, cm).map_err(input)? else {
            unreachable!("static mode yields a polygon")
        };
        let file = PolygonFile { vertices: poly.vertices().to_vec(), start: np.start() };
        return emit(args.out.as_deref(), &json(&file)?);
    };
    np.mode = AdversaryMode::Adaptive;
    let GeneratedNiche::Adaptive(mut world) = gen_niche(&np, cm).map_err(input)? else {
        unreachable!("adaptive mode yields a world")
    };
    // the thirds have equal widths, so any commitment has the same measurements
    let shape = static_niche(&np, &alternating_choices(np.depth)).map_err(input)?;
    let ctx = StrategyContext::measured(&shape);
    let rep = run_strategy(&strategy, world.as_mut(), &ctx).map_err(strategy_failure)?;
    let poly = world.committed_polygon();
    let out = AdaptiveReport {
        params: world.params().clone(),
        strategy,
        t: (&rep.t).into(),
        scans: rep.scans,
        committed: world.committed().to_vec(),
        resolutions: world.resolutions().to_vec(),
        polygon: PolygonFile { vertices: poly.vertices().to_vec(), start: world.start().clone() },
    };
    emit(args.out.as_deref(), &json(&out)?)?;
    if !rep.tour.terminated_ok {
        return Err(defect(anyhow!("tour did not cover the niche")));
    }
    Ok(())
}

fn render(args: RenderArgs) -> Outcome {
    let text = fs::read_to_string(&args.report).with_context(|| format!("reading {}", args.report.display())).map_err(input)?;
    let rep: ExploreReport = serde_json::from_str(&text).context("parsing report").map_err(input)?;
    let s = svg::render(&rep).map_err(input)?;
    emit(args.out.as_deref(), &s)
}

#[derive(Serialize)]
struct OracleReport {
    status: scanwatch::strategies::OracleStatus,
    t: Num,
    lower: Num,
    #[serde(rename = "L")]
    length: Num,
    scans: Vec<report::Pair>,
    resolution: u32,
    history: Vec<(u32, Num)>,
}

fn oracle(args: OracleArgs) -> Outcome {
    let inst = read_instance(&args.polygon).map_err(input)?;
    let cm = CostModel::new(args.c).map_err(input)?;
    let o = offline_oracle(&inst.polygon, &inst.start, &cm, args.res).map_err(strategy_failure)?;
    let rep = OracleReport {
        status: o.status,
        t: (&o.t).into(),
        lower: (&o.lower).into(),
        length: (&o.length).into(),
        scans: o.scans.iter().map(report::pair).collect(),
        resolution: o.resolution,
        history: o.history.iter().map(|(r, t)| (*r, t.into())).collect(),
    };
    emit(None, &json(&rep)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Explore(a) => explore(a),
        Cmd::Bench(a) => bench(a),
        Cmd::Bounds(a) => bounds(a),
        Cmd::GenNiche(a) => gen_niche_cmd(a),
        Cmd::Render(a) => render(a),
        Cmd::Oracle(a) => oracle(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
