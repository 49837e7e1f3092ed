//! Command implementations behind the `curvekit` binary. Every command
//! returns its output as bytes so runs can be compared directly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use curvekit_core::classify::classify_universe;
use curvekit_core::fixtures::{
    data_dir, exhaustion_reports, generate_mapping_classes, load_triangulation, to_json, verify_mapping_class,
    verify_negative, Config, ExhaustionFixture, MappingClassSet, NegativeFixture, Report, Status, EXHAUSTION_FIXTURES,
    NEGATIVE_FIXTURES,
};
use curvekit_core::graphs::GraphSlice;
use curvekit_core::mapping_class::{MappingClass, MappingClassFile};
use curvekit_core::rigidity::SliceContext;
use curvekit_core::triangulation::TriangulationFile;
use curvekit_core::universe::CurveUniverse;
use curvekit_core::Triangulation;

/// Gap between the ambient bound and the largest classified weight when
/// no core bound is given.
pub const DEFAULT_CORE_MARGIN: u64 = 5;

#[derive(Debug, Parser)]
#[command(name = "curvekit", version, about = "Curves, curve-graph slices and pants decompositions")]
pub struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate curves up to a weight bound and write the universe cache.
    Enumerate(EnumerateArgs),
    /// Classify cached curves topologically and from pants adjacency graphs.
    Classify(ClassifyArgs),
    /// Export the disjointness graph of a universe.
    Export(ExportArgs),
    /// Run the rigidity harness on shipped or generated fixtures.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Shipped surface name, e.g. S0_5.
    #[arg(long, conflicts_with = "triangulation")]
    pub surface: Option<String>,
    /// Triangulation JSON file.
    #[arg(long)]
    pub triangulation: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub target: SurfaceArgs,
    #[arg(long)]
    pub bound: u64,
    /// Cache path (default: <data>/cache/<surface>_L<bound>.jsonl).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub target: SurfaceArgs,
    #[arg(long)]
    pub bound: u64,
    /// Only curves up to this weight are listed (default: bound - 5).
    #[arg(long)]
    pub core_bound: Option<u64>,
    /// Cache to read (default: the one `enumerate` writes).
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub target: SurfaceArgs,
    #[arg(long)]
    pub bound: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "dot")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub target: SurfaceArgs,
    /// Universe bound for mapping-class checks (default: from config).
    #[arg(long)]
    pub bound: Option<u64>,
    /// Fixture id (`S0_5/mc03`, `negative_swap`, `exhaustion_valid`) or a
    /// mapping-class JSON file. Repeatable.
    #[arg(long)]
    pub fixture: Vec<String>,
    /// Every shipped fixture, with designed failures counted as expected.
    #[arg(long)]
    pub all: bool,
    /// Check freshly generated mapping classes from this seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

/// Bad invocation or input: exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub struct Output {
    pub stdout: Vec<u8>,
    /// False when a verification check failed: exit code 1.
    pub success: bool,
}

pub fn run(cli: &Cli) -> anyhow::Result<Output> {
    let threads = match cli.jobs {
        Some(0) => return Err(usage("--jobs must be at least 1")),
        Some(n) => n,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    pool.install(|| match &cli.command {
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Export(a) => cmd_export(a),
        Command::Verify(a) => cmd_verify(a),
    })
}

fn surface_label(target: &SurfaceArgs) -> String {
    match (&target.surface, &target.triangulation) {
        (Some(name), _) => name.clone(),
        (None, Some(path)) => path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        (None, None) => String::new(),
    }
}

fn load_target(target: &SurfaceArgs) -> anyhow::Result<Triangulation> {
    match (&target.surface, &target.triangulation) {
        (Some(name), _) => {
            load_triangulation(&data_dir(), name).map_err(|e| usage(format!("unknown surface {name}: {e}")))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let file: TriangulationFile =
                serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            Triangulation::from_file(&file).map_err(|e| usage(e.to_string()))
        }
        (None, None) => Err(usage("give --surface or --triangulation")),
    }
}

fn check_bound(bound: u64) -> anyhow::Result<()> {
    if bound == 0 {
        return Err(usage("--bound must be at least 1"));
    }
    Ok(())
}

fn default_cache(target: &SurfaceArgs, bound: u64) -> PathBuf {
    data_dir().join("cache").join(format!("{}_L{bound}.jsonl", surface_label(target)))
}

fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
    }
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Sends output to `--out` if given, otherwise returns it for stdout.
fn emit(out: &Option<PathBuf>, bytes: Vec<u8>, success: bool) -> anyhow::Result<Output> {
    match out {
        Some(path) => {
            write_file(path, &bytes)?;
            Ok(Output { stdout: Vec::new(), success })
        }
        None => Ok(Output { stdout: bytes, success }),
    }
}

pub fn cmd_enumerate(a: &EnumerateArgs) -> anyhow::Result<Output> {
    check_bound(a.bound)?;
    let tri = load_target(&a.target)?;
    let u = CurveUniverse::enumerate(&tri, a.bound)?;
    let path = a.out.clone().unwrap_or_else(|| default_cache(&a.target, a.bound));
    let mut cache = Vec::new();
    u.write_cache(&mut cache)?;
    write_file(&path, &cache)?;
    let label = surface_label(&a.target);
    let line = match a.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Summary<'a> {
                surface: &'a str,
                bound: u64,
                count: usize,
                triangulation: String,
            }
            let s = Summary { surface: &label, bound: a.bound, count: u.len(), triangulation: tri.hash_hex() };
            serde_json::to_string(&s)? + "\n"
        }
        Format::Text => format!("{label} L={}: {} curves\n", a.bound, u.len()),
        Format::Dot => return Err(usage("enumerate writes a cache; use `export` for DOT")),
    };
    Ok(Output { stdout: line.into_bytes(), success: true })
}

pub fn cmd_classify(a: &ClassifyArgs) -> anyhow::Result<Output> {
    check_bound(a.bound)?;
    let tri = load_target(&a.target)?;
    let path = a.cache.clone().unwrap_or_else(|| default_cache(&a.target, a.bound));
    let file = std::fs::File::open(&path).map_err(|_| {
        usage(format!("no cache at {}; run `curvekit enumerate` with the same surface and bound first", path.display()))
    })?;
    let u = CurveUniverse::read_cache(&tri, std::io::BufReader::new(file)).map_err(|e| usage(e.to_string()))?;
    if u.bound() > a.bound {
        return Err(usage(format!("cache bound {} exceeds --bound {}", u.bound(), a.bound)));
    }
    let core = a.core_bound.unwrap_or(a.bound.saturating_sub(DEFAULT_CORE_MARGIN));
    let c = classify_universe(&u, core)?;
    let label = surface_label(&a.target);
    let bytes = match a.format {
        Format::Json => {
            #[derive(Serialize)]
            #[serde(rename_all = "camelCase")]
            struct Table<'a> {
                surface: &'a str,
                bound: u64,
                core_bound: u64,
                pants_decompositions: usize,
                curves: &'a [curvekit_core::classify::CurveClassification],
            }
            let t = Table {
                surface: &label,
                bound: a.bound,
                core_bound: core,
                pants_decompositions: c.family.decompositions.len(),
                curves: &c.curves,
            };
            to_json(&t).into_bytes()
        }
        Format::Text => {
            let mut s = format!(
                "# {label} L={} core={core} pants={}\n# id weight topological simplicial agrees weights\n",
                a.bound,
                c.family.decompositions.len()
            );
            for row in &c.curves {
                let weights: Vec<String> = u.curves()[row.id].weights().iter().map(u64::to_string).collect();
                let simplicial = row.simplicial.map_or("insufficientData".to_string(), |x| x.to_string());
                let _ = writeln!(
                    s,
                    "{} {} {} {} {} {}",
                    row.id,
                    row.weight,
                    row.topological,
                    simplicial,
                    row.agrees(),
                    weights.join(",")
                );
            }
            s.into_bytes()
        }
        Format::Dot => {
            let ids: Vec<usize> = c.curves.iter().map(|r| r.id).collect();
            let g = c.slice.induced(&ids);
            let mut s = String::from("graph classes {\n");
            for row in &c.curves {
                let _ = writeln!(s, "  {} [class=\"{}\"];", row.id, row.topological);
            }
            for (i, j) in g.edges() {
                let _ = writeln!(s, "  {} -- {};", ids[i], ids[j]);
            }
            s.push_str("}\n");
            s.into_bytes()
        }
    };
    emit(&a.out, bytes, true)
}

pub fn cmd_export(a: &ExportArgs) -> anyhow::Result<Output> {
    check_bound(a.bound)?;
    let tri = load_target(&a.target)?;
    let u = CurveUniverse::enumerate(&tri, a.bound)?;
    let slice = GraphSlice::build(&u)?;
    let name = format!("{}_L{}", surface_label(&a.target), a.bound);
    let bytes = match a.format {
        Format::Dot => slice.graph().to_dot(&name).into_bytes(),
        Format::Json => to_json(&slice.graph().to_adjacency()).into_bytes(),
        Format::Text => {
            let mut s = String::new();
            for (i, j) in slice.graph().edges() {
                let _ = writeln!(s, "{i} {j}");
            }
            s.into_bytes()
        }
    };
    emit(&a.out, bytes, true)
}

/// What a fixture is expected to do, and whether it did.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub fixture: String,
    pub expected: String,
    pub met: bool,
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub seed: Option<u64>,
    pub reports: Vec<Report>,
    pub outcomes: Vec<Outcome>,
}

/// Sources built once per (surface, bound).
struct Sources {
    dir: PathBuf,
    config: Config,
    built: BTreeMap<(String, u64), SliceContext>,
}

impl Sources {
    fn new() -> anyhow::Result<Self> {
        let dir = data_dir();
        let config = Config::load(&dir).map_err(|e| usage(format!("cannot load fixtures: {e}")))?;
        Ok(Self { dir, config, built: BTreeMap::new() })
    }

    fn bound_for(&self, surface: &str, bound: Option<u64>) -> anyhow::Result<u64> {
        match bound {
            Some(b) => Ok(b),
            None => Ok(self.config.surface(surface).map_err(|e| usage(e.to_string()))?.harness_bound),
        }
    }

    fn context(&mut self, surface: &str, tri: &Triangulation, bound: u64) -> anyhow::Result<&SliceContext> {
        let key = (surface.to_string(), bound);
        if !self.built.contains_key(&key) {
            let ctx = SliceContext::build(CurveUniverse::enumerate(tri, bound)?)?;
            self.built.insert(key.clone(), ctx);
        }
        Ok(&self.built[&key])
    }
}

fn all_passed(reports: &[Report]) -> bool {
    reports.iter().all(Report::passed)
}

fn failed_checks(reports: &[Report]) -> Vec<String> {
    reports.iter().filter(|r| !r.passed()).map(|r| r.check.clone()).collect()
}

enum Expect {
    Pass,
    Fail(String),
}

fn outcome(fixture: &str, reports: &[Report], expect: Expect, designed: bool) -> Outcome {
    match expect {
        Expect::Pass => Outcome { fixture: fixture.into(), expected: "pass".into(), met: all_passed(reports) },
        Expect::Fail(check) if designed => Outcome {
            fixture: fixture.into(),
            expected: format!("fail {check}"),
            met: failed_checks(reports) == vec![check],
        },
        // Run on its own, a negative fixture is just a map under test.
        Expect::Fail(_) => Outcome { fixture: fixture.into(), expected: "pass".into(), met: all_passed(reports) },
    }
}

fn run_fixture(
    sources: &mut Sources,
    args: &VerifyArgs,
    id: &str,
    designed: bool,
    out: &mut SuiteReport,
) -> anyhow::Result<()> {
    let dir = sources.dir.clone();
    let path = Path::new(id);
    if id.ends_with(".json") && path.exists() {
        let tri = load_target(&args.target)?;
        let label = surface_label(&args.target);
        let bound = match (args.bound, &args.target.surface) {
            (Some(b), _) => b,
            (None, Some(s)) => sources.bound_for(s, None)?,
            (None, None) => return Err(usage("--bound is required with --triangulation")),
        };
        let text = std::fs::read_to_string(path)?;
        let file: MappingClassFile = serde_json::from_str(&text).map_err(|e| usage(format!("{id}: {e}")))?;
        let mc = MappingClass::from_file(&file, tri.num_edges()).map_err(|e| usage(e.to_string()))?;
        let ctx = sources.context(&label, &tri, bound)?;
        let reports = verify_mapping_class(id, ctx, &mc)?;
        out.outcomes.push(outcome(id, &reports, Expect::Pass, designed));
        out.reports.extend(reports);
    } else if NEGATIVE_FIXTURES.contains(&id) {
        let f = NegativeFixture::load(&dir, id)?;
        let tri = load_triangulation(&dir, &f.surface)?;
        let reports = verify_negative(&f, &tri)?;
        out.outcomes.push(outcome(id, &reports, Expect::Fail(f.designated_check.name().into()), designed));
        out.reports.extend(reports);
    } else if EXHAUSTION_FIXTURES.contains(&id) {
        let f = ExhaustionFixture::load(&dir, id)?;
        let tri = load_triangulation(&dir, &f.surface)?;
        let reports = exhaustion_reports(&f, &tri)?;
        let expect = match f.violates {
            None => Expect::Pass,
            Some(c) => Expect::Fail(format!("condition{c}")),
        };
        out.outcomes.push(outcome(id, &reports, expect, designed));
        out.reports.extend(reports);
    } else if let Some((surface, name)) = id.split_once('/') {
        let tri = load_triangulation(&dir, surface).map_err(|e| usage(format!("unknown fixture {id}: {e}")))?;
        let set = MappingClassSet::load(&dir, surface).map_err(|e| usage(format!("unknown fixture {id}: {e}")))?;
        let mc = set.get(&tri, name).map_err(|e| usage(e.to_string()))?;
        let bound = sources.bound_for(surface, args.bound)?;
        let ctx = sources.context(surface, &tri, bound)?;
        let reports = verify_mapping_class(id, ctx, &mc)?;
        out.outcomes.push(outcome(id, &reports, Expect::Pass, designed));
        out.reports.extend(reports);
    } else {
        return Err(usage(format!("unknown fixture {id}")));
    }
    Ok(())
}

fn shipped_mapping_class_ids(sources: &Sources, surfaces: &[String]) -> anyhow::Result<Vec<String>> {
    let mut ids = Vec::new();
    for s in surfaces {
        let set = MappingClassSet::load(&sources.dir, s)?;
        ids.extend(set.mapping_classes.iter().map(|m| format!("{s}/{}", m.name)));
    }
    Ok(ids)
}

pub fn cmd_verify(a: &VerifyArgs) -> anyhow::Result<Output> {
    let mut sources = Sources::new()?;
    let mut suite = SuiteReport { seed: a.seed, reports: Vec::new(), outcomes: Vec::new() };
    let surfaces: Vec<String> = match &a.target.surface {
        Some(s) => vec![s.clone()],
        None => sources.config.surfaces.keys().cloned().collect(),
    };
    if a.all {
        if !a.fixture.is_empty() {
            return Err(usage("--all and --fixture are exclusive"));
        }
        let mut ids = shipped_mapping_class_ids(&sources, &surfaces)?;
        ids.extend(NEGATIVE_FIXTURES.iter().map(|s| s.to_string()));
        ids.extend(EXHAUSTION_FIXTURES.iter().map(|s| s.to_string()));
        for id in ids {
            run_fixture(&mut sources, a, &id, true, &mut suite)?;
        }
    }
    for id in &a.fixture {
        run_fixture(&mut sources, a, id, false, &mut suite)?;
    }
    if let Some(seed) = a.seed {
        for s in &surfaces {
            let tri = load_triangulation(&sources.dir, s).map_err(|e| usage(format!("unknown surface {s}: {e}")))?;
            let count = sources.config.surface(s).map(|c| c.mapping_classes).unwrap_or(20);
            let bound = sources.bound_for(s, a.bound)?;
            let classes = generate_mapping_classes(&tri, count, seed)?;
            let ctx = sources.context(s, &tri, bound)?;
            for (i, mc) in classes.iter().enumerate() {
                let id = format!("{s}/seed{seed}-mc{i:02}");
                let reports = verify_mapping_class(&id, ctx, mc)?;
                suite.outcomes.push(outcome(&id, &reports, Expect::Pass, false));
                suite.reports.extend(reports);
            }
        }
    }
    if !a.all && a.fixture.is_empty() && a.seed.is_none() {
        if a.target.surface.is_none() {
            bail!(usage("give --all, --fixture, --seed or --surface"));
        }
        for id in shipped_mapping_class_ids(&sources, &surfaces)? {
            run_fixture(&mut sources, a, &id, false, &mut suite)?;
        }
    }
    suite.reports.sort_by(|x, y| (&x.check, &x.fixture).cmp(&(&y.check, &y.fixture)));
    suite.outcomes.sort_by(|x, y| x.fixture.cmp(&y.fixture));
    let success = suite.outcomes.iter().all(|o| o.met);
    let bytes = match a.format {
        Format::Json => to_json(&suite).into_bytes(),
        Format::Text => {
            let mut s = String::new();
            if let Some(seed) = suite.seed {
                let _ = writeln!(s, "seed {seed}");
            }
            for r in &suite.reports {
                let status = match r.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Symbolic => "SYMBOLIC",
                };
                let _ = writeln!(s, "{status} {} {}", r.check, r.fixture);
                for d in &r.details {
                    let _ = writeln!(s, "    {d}");
                }
            }
            let met = suite.outcomes.iter().filter(|o| o.met).count();
            let _ = writeln!(s, "{met}/{} fixtures behaved as expected", suite.outcomes.len());
            for o in suite.outcomes.iter().filter(|o| !o.met) {
                let _ = writeln!(s, "UNEXPECTED {} (expected {})", o.fixture, o.expected);
            }
            s.into_bytes()
        }
        Format::Dot => return Err(usage("verify reports are json or text")),
    };
    emit(&a.out, bytes, success)
}
