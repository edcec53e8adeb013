//! Command-line workbench: sphere construction, random sampling, sphere
//! checking, the lower-bound pipeline, witness search, bounds, embedding
//! counts, censuses, and exponent sweeps.
//!
//! Exit codes: 0 success, 2 validation error, 3 budget or search
//! exhaustion. Every file-producing run writes a manifest next to its
//! primary output; re-running the recorded argv reproduces the outputs
//! byte for byte.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use sphere_turan::{
    boundary_cross_polytope, boundary_simplex, census_2lc, cycle, enumerate_2spheres, exponents,
    find_embedded_copies, flip_sequence, iterated_suspension_sphere, lower_bound_construct,
    sample_lm, suspension_witness, tree_of_simplices, turan_probability, two_lc_generate,
    verify_sphere, BuildTrace, Complex, Effort, LMParams, LcMode, PipelineParams, SphereCatalog,
    SphereStatus,
};

const ARTIFACT_VERSION: u32 = 1;
const BUDGET_ENV: &str = "SPHERE_TURAN_BUDGET";

#[derive(Parser)]
#[command(name = "sphere-turan", version, about = "Simplicial sphere workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a sphere-family complex and write it as JSON.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Sample the random complex Y_d(n, p).
    Sample(SampleArgs),
    /// Decide whether a complex is a sphere.
    Check(CheckArgs),
    /// Run the sample/alter/rainbow construction against a catalog.
    Pipeline(PipelineArgs),
    /// Search a host complex for an iterated-suspension sphere.
    Witness(WitnessArgs),
    /// Print the density exponent table for a dimension.
    Bounds(BoundsArgs),
    /// Count embedded copies of a pattern inside a host.
    EmbedCount(EmbedCountArgs),
    /// Exhaustive or sampled censuses.
    Census {
        #[command(subcommand)]
        kind: CensusKind,
    },
    /// Repeat the pipeline over a grid of n and fit the density exponent.
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum Family {
    /// Boundary of the (d+1)-simplex.
    SimplexBoundary {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Boundary of the (d+1)-cross-polytope.
    CrossPolytope {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The k-cycle.
    Cycle {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// A k-cycle suspended t times.
    Suspension {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Octahedral flips from a start complex (cross-polytope by default).
    FlipSeq {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        seed: u64,
        /// Start complex JSON; defaults to the cross-polytope boundary.
        #[arg(long)]
        start: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        trace: TraceArgs,
    },
    /// A tree of m d-simplices.
    Tree {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        trace: TraceArgs,
    },
    /// Random locally-constructible sphere search.
    #[command(name = "2lc")]
    TwoLc {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        max_attempts: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::TwoLc)]
        mode: ModeArg,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        trace: TraceArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lc,
    #[value(name = "2lc")]
    TwoLc,
}

impl From<ModeArg> for LcMode {
    fn from(m: ModeArg) -> LcMode {
        match m {
            ModeArg::Lc => LcMode::Lc,
            ModeArg::TwoLc => LcMode::TwoLc,
        }
    }
}

#[derive(Args)]
struct OutArgs {
    /// Output complex JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TraceArgs {
    /// Build trace JSON.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Density trace CSV (step, facets, vertices).
    #[arg(long)]
    density: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    d: usize,
    /// Facet probability; exclusive with --epsilon.
    #[arg(long, conflicts_with = "epsilon")]
    p: Option<f64>,
    /// Sets p = epsilon * n^{-(d+1)/(2^{d+1}-2)}.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    /// Complex JSON to check.
    #[arg(long = "in")]
    input: PathBuf,
    /// Shelling search budget; defaults to SPHERE_TURAN_BUDGET or 10^6.
    #[arg(long)]
    budget: Option<u64>,
    /// Write the verdict JSON here as well as stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    d: usize,
    /// Sampling constant; defaults to 0.3 / C for the catalog's growth
    /// constant C.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    catalog: PathBuf,
    #[arg(long)]
    seed: u64,
    /// Report JSON output.
    #[arg(long)]
    report: PathBuf,
    /// Final complex JSON output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cap on catalog entry facet counts; defaults to the catalog maximum.
    #[arg(long)]
    m_max: Option<u64>,
}

#[derive(Args)]
struct WitnessArgs {
    /// Host complex JSON.
    #[arg(long = "in")]
    input: PathBuf,
    /// Write the found sphere here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip the search when the host is below the promised density.
    #[arg(long)]
    density_check: bool,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    d: usize,
}

#[derive(Args)]
struct EmbedCountArgs {
    #[arg(long)]
    host: PathBuf,
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long, default_value_t = u64::MAX)]
    limit: u64,
}

#[derive(Subcommand)]
enum CensusKind {
    /// All isomorphism classes of 2-spheres up to a vertex count.
    S2 {
        #[arg(long)]
        max_n: u32,
        /// CSV output (key, count); stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write every census sphere as a catalog JSON.
        #[arg(long)]
        catalog_out: Option<PathBuf>,
    },
    /// Reachable-class count of the random locally-constructible search.
    #[command(name = "2lc")]
    TwoLc {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    d: usize,
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u32>,
    /// Pipeline repetitions per n.
    #[arg(long, default_value_t = 20)]
    reps: u64,
    /// Sampling constant; defaults to 0.3 / C.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    catalog: PathBuf,
    #[arg(long)]
    seed: u64,
    /// Per-run CSV rows (n, seed, sampled, altered, final).
    #[arg(long)]
    csv: PathBuf,
}

/// Validation failures exit 2, exhausted searches exit 3.
enum CliError {
    Validation(String),
    Budget(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Budget(m) => write!(f, "{m}"),
        }
    }
}

impl From<sphere_turan::Error> for CliError {
    fn from(e: sphere_turan::Error) -> CliError {
        CliError::Validation(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Validation(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError::Validation(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Validation(_) => ExitCode::from(2),
                CliError::Budget(_) => ExitCode::from(3),
            }
        }
    }
}

/// FNV-1a 64-bit digest, hex encoded; used to pin file contents in
/// manifests.
fn fnv1a64(bytes: &[u8]) -> String {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    format!("{h:016x}")
}

#[derive(Serialize)]
struct FileDigest {
    path: String,
    digest: String,
}

/// Collects output files in memory; everything is written only after the
/// whole command has succeeded, so failures leave no partial artifacts.
struct RunOutput {
    command: String,
    seed: Option<u64>,
    params: serde_json::Value,
    inputs: Vec<FileDigest>,
    files: Vec<(PathBuf, String)>,
}

impl RunOutput {
    fn new(command: &str, seed: Option<u64>, params: serde_json::Value) -> RunOutput {
        RunOutput {
            command: command.to_string(),
            seed,
            params,
            inputs: Vec::new(),
            files: Vec::new(),
        }
    }

    fn read_input(&mut self, path: &Path) -> CliResult<Vec<u8>> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        self.inputs.push(FileDigest {
            path: path.display().to_string(),
            digest: fnv1a64(&bytes),
        });
        Ok(bytes)
    }

    fn stage_json<T: Serialize>(&mut self, path: &Path, value: &T) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.files.push((path.to_path_buf(), text));
        Ok(())
    }

    fn stage_text(&mut self, path: &Path, text: String) {
        self.files.push((path.to_path_buf(), text));
    }

    /// Writes all staged files plus the manifest next to the first one.
    fn commit(self) -> CliResult<()> {
        for (path, text) in &self.files {
            std::fs::write(path, text)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        }
        if let Some((primary, _)) = self.files.first() {
            let manifest = json!({
                "artifact_version": ARTIFACT_VERSION,
                "command": self.command,
                "argv": std::env::args().collect::<Vec<_>>(),
                "seed": self.seed,
                "params": self.params,
                "inputs": self.inputs,
                "outputs": self.files.iter().map(|(p, t)| FileDigest {
                    path: p.display().to_string(),
                    digest: fnv1a64(t.as_bytes()),
                }).collect::<Vec<_>>(),
            });
            let mut text = serde_json::to_string_pretty(&manifest)?;
            text.push('\n');
            let manifest_path = manifest_path_for(primary);
            std::fs::write(&manifest_path, text)
                .map_err(|e| CliError::Validation(format!("{}: {e}", manifest_path.display())))?;
        }
        Ok(())
    }
}

fn manifest_path_for(primary: &Path) -> PathBuf {
    let mut name = primary.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    primary.with_file_name(name)
}

fn load_complex(out: &mut RunOutput, path: &Path) -> CliResult<Complex> {
    let bytes = out.read_input(path)?;
    Ok(serde_json::from_slice(&bytes)?)
}

fn load_catalog(out: &mut RunOutput, path: &Path) -> CliResult<SphereCatalog> {
    let bytes = out.read_input(path)?;
    let catalog: SphereCatalog = serde_json::from_slice(&bytes)?;
    catalog.revalidate()?;
    Ok(catalog)
}

fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.parse().ok()).unwrap_or(1_000_000)
}

fn density_csv(trace: &BuildTrace) -> String {
    let mut csv = String::from("step,facets,vertices\n");
    for (i, (fd, f0)) in trace.density.iter().enumerate() {
        csv.push_str(&format!("{},{},{}\n", i + 1, fd, f0));
    }
    csv
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Construct { family } => construct(family),
        Command::Sample(args) => sample(args),
        Command::Check(args) => check(args),
        Command::Pipeline(args) => pipeline(args),
        Command::Witness(args) => witness(args),
        Command::Bounds(args) => bounds(args),
        Command::EmbedCount(args) => embed_count(args),
        Command::Census { kind } => census(kind),
        Command::Sweep(args) => sweep(args),
    }
}

fn construct(family: Family) -> CliResult<()> {
    let (mut run, complex, trace, out, trace_args): (
        RunOutput,
        Complex,
        Option<BuildTrace>,
        PathBuf,
        Option<TraceArgs>,
    ) = match family {
        Family::SimplexBoundary { d, out } => {
            let r = RunOutput::new("construct simplex-boundary", None, json!({ "d": d }));
            (r, boundary_simplex(d)?, None, out.out, None)
        }
        Family::CrossPolytope { d, out } => {
            let r = RunOutput::new("construct cross-polytope", None, json!({ "d": d }));
            (r, boundary_cross_polytope(d)?, None, out.out, None)
        }
        Family::Cycle { k, out } => {
            let r = RunOutput::new("construct cycle", None, json!({ "k": k }));
            (r, cycle(k)?, None, out.out, None)
        }
        Family::Suspension { k, t, out } => {
            let r = RunOutput::new("construct suspension", None, json!({ "k": k, "t": t }));
            (r, iterated_suspension_sphere(k, t)?, None, out.out, None)
        }
        Family::FlipSeq { d, steps, seed, start, out, trace } => {
            let mut r = RunOutput::new(
                "construct flip-seq",
                Some(seed),
                json!({ "d": d, "steps": steps, "start": start.as_ref().map(|p| p.display().to_string()) }),
            );
            let x0 = match &start {
                Some(path) => load_complex(&mut r, path)?,
                None => boundary_cross_polytope(d)?,
            };
            if x0.dim() != d {
                return Err(CliError::Validation(format!(
                    "start complex has dimension {}, expected {d}",
                    x0.dim()
                )));
            }
            let (x, t) = flip_sequence(&x0, steps, seed)?;
            (r, x, Some(t), out.out, Some(trace))
        }
        Family::Tree { d, m, seed, out, trace } => {
            let r =
                RunOutput::new("construct tree", Some(seed), json!({ "d": d, "m": m }));
            let (x, t) = tree_of_simplices(d, m, seed)?;
            (r, x, Some(t), out.out, Some(trace))
        }
        Family::TwoLc { d, m, seed, max_attempts, mode, out, trace } => {
            let r = RunOutput::new(
                "construct 2lc",
                Some(seed),
                json!({ "d": d, "m": m, "max_attempts": max_attempts }),
            );
            match two_lc_generate(d, m, seed, max_attempts, mode.into())? {
                Some((x, t)) => (r, x, Some(t), out.out, Some(trace)),
                None => {
                    return Err(CliError::Budget(format!(
                        "no sphere closure found in {max_attempts} attempts"
                    )))
                }
            }
        }
    };
    run.stage_json(&out, &complex)?;
    if let (Some(trace), Some(args)) = (&trace, &trace_args) {
        if let Some(path) = &args.trace {
            run.stage_json(path, trace)?;
        }
        if let Some(path) = &args.density {
            run.stage_text(path, density_csv(trace));
        }
    }
    run.commit()?;
    println!(
        "wrote {} (d={}, facets={}, vertices={})",
        out.display(),
        complex.dim(),
        complex.facet_count(),
        complex.vertex_count()
    );
    Ok(())
}

fn sample(args: SampleArgs) -> CliResult<()> {
    let p = match (args.p, args.epsilon) {
        (Some(p), None) => p,
        (None, Some(eps)) => turan_probability(args.n, args.d, eps),
        (None, None) => {
            return Err(CliError::Validation("one of --p or --epsilon is required".into()))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let params = LMParams { n: args.n, d: args.d, p, seed: args.seed };
    let mut run = RunOutput::new(
        "sample",
        Some(args.seed),
        json!({ "n": args.n, "d": args.d, "p": p, "epsilon": args.epsilon }),
    );
    let complex = sample_lm(&params)?;
    run.stage_json(&args.out, &complex)?;
    run.commit()?;
    println!("wrote {} ({} facets at p={p:.6})", args.out.display(), complex.facet_count());
    Ok(())
}

fn check(args: CheckArgs) -> CliResult<()> {
    let budget = args.budget.unwrap_or_else(default_budget);
    let mut run = RunOutput::new(
        "check",
        None,
        json!({ "in": args.input.display().to_string(), "budget": budget }),
    );
    let complex = load_complex(&mut run, &args.input)?;
    let verdict = verify_sphere(&complex, Effort { shelling_budget: budget });
    let text = serde_json::to_string_pretty(&verdict)?;
    println!("{text}");
    if let Some(out) = &args.out {
        run.stage_json(out, &verdict)?;
        run.commit()?;
    }
    if verdict.status == SphereStatus::Unknown {
        return Err(CliError::Budget("verdict unknown within budget".into()));
    }
    Ok(())
}

fn pipeline(args: PipelineArgs) -> CliResult<()> {
    let mut run = RunOutput::new(
        "pipeline",
        Some(args.seed),
        json!({
            "n": args.n,
            "d": args.d,
            "epsilon": args.epsilon,
            "catalog": args.catalog.display().to_string(),
        }),
    );
    let catalog = load_catalog(&mut run, &args.catalog)?;
    let m_max = args.m_max.unwrap_or_else(|| catalog.max_facets());
    let params = PipelineParams {
        n: args.n,
        d: args.d,
        epsilon: args.epsilon.unwrap_or_else(|| catalog.default_epsilon()),
        seed: args.seed,
        m_max,
    };
    run.params["epsilon_effective"] = json!(params.epsilon);
    let (complex, report) = lower_bound_construct(&params, &catalog)?;
    run.stage_json(&args.report, &report)?;
    if let Some(out) = &args.out {
        run.stage_json(out, &complex)?;
    }
    run.commit()?;
    println!(
        "sampled {} -> altered {} -> rainbow {} facets (density statistic {:.4})",
        report.sampled_facets,
        report.altered_facets,
        report.rainbow_facets,
        report.density_statistic
    );
    Ok(())
}

fn witness(args: WitnessArgs) -> CliResult<()> {
    let mut run = RunOutput::new(
        "witness",
        None,
        json!({
            "in": args.input.display().to_string(),
            "density_check": args.density_check,
        }),
    );
    let host = load_complex(&mut run, &args.input)?;
    match suspension_witness(&host, args.density_check) {
        Some(sphere) => {
            let verdict = verify_sphere(&sphere, Effort::default());
            if let Some(out) = &args.out {
                run.stage_json(out, &sphere)?;
                run.commit()?;
            }
            println!(
                "found a {}-sphere with {} facets (verified: {:?})",
                sphere.dim(),
                sphere.facet_count(),
                verdict.status
            );
            Ok(())
        }
        None => Err(CliError::Budget("no embedded sphere found".into())),
    }
}

fn bounds(args: BoundsArgs) -> CliResult<()> {
    let table = exponents(args.d)?;
    println!("{}", serde_json::to_string_pretty(&table)?);
    Ok(())
}

fn embed_count(args: EmbedCountArgs) -> CliResult<()> {
    let mut run = RunOutput::new("embed-count", None, json!({}));
    let host = load_complex(&mut run, &args.host)?;
    let pattern = load_complex(&mut run, &args.pattern)?;
    let limit = usize::try_from(args.limit).unwrap_or(usize::MAX);
    let copies = find_embedded_copies(&host, &pattern, limit);
    let automorphisms = sphere_turan::census::automorphism_count(&pattern);
    let summary = json!({
        "copies": copies.len(),
        "automorphisms": automorphisms,
        "labeled_copies": copies.len() as u64 * automorphisms,
        "truncated": copies.len() as u64 == args.limit,
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn census(kind: CensusKind) -> CliResult<()> {
    match kind {
        CensusKind::S2 { max_n, out, catalog_out } => {
            let mut run = RunOutput::new("census s2", None, json!({ "max_n": max_n }));
            let records = enumerate_2spheres(max_n)?;
            let mut csv = String::from("key,count\n");
            for r in &records {
                csv.push_str(&format!("{},{}\n", r.key, r.count));
            }
            if let Some(catalog_path) = &catalog_out {
                let named: Vec<(String, Complex)> = records
                    .iter()
                    .flat_map(|r| {
                        r.representatives.iter().enumerate().map(move |(i, c)| {
                            (format!("s2-n{}-{}", r.key, i), c.clone())
                        })
                    })
                    .collect();
                let catalog = SphereCatalog::build(named, 1.0)?;
                run.stage_json(catalog_path, &catalog)?;
            }
            match &out {
                Some(path) => {
                    run.stage_text(path, csv);
                    run.commit()?;
                }
                None => {
                    print!("{csv}");
                    run.commit()?;
                }
            }
            Ok(())
        }
        CensusKind::TwoLc { d, m, budget, seed, out } => {
            let mut run = RunOutput::new(
                "census 2lc",
                Some(seed),
                json!({ "d": d, "m": m, "budget": budget }),
            );
            let record = census_2lc(d, m, budget, seed)?;
            let csv = format!(
                "key,count\n{},{}\n",
                record.key, record.count
            );
            eprintln!(
                "reachable-class lower bound: {} classes at m={} (exponential bound ok: {:?})",
                record.count, record.key, record.exponential_bound_ok
            );
            match &out {
                Some(path) => {
                    run.stage_text(path, csv);
                    run.commit()?;
                }
                None => print!("{csv}"),
            }
            Ok(())
        }
    }
}

fn sweep(args: SweepArgs) -> CliResult<()> {
    if args.n.is_empty() {
        return Err(CliError::Validation("at least one n is required".into()));
    }
    let mut run = RunOutput::new(
        "sweep",
        Some(args.seed),
        json!({
            "d": args.d,
            "n": args.n,
            "reps": args.reps,
            "epsilon": args.epsilon,
            "catalog": args.catalog.display().to_string(),
        }),
    );
    let catalog = load_catalog(&mut run, &args.catalog)?;
    let m_max = catalog.max_facets();
    let epsilon = args.epsilon.unwrap_or_else(|| catalog.default_epsilon());
    run.params["epsilon_effective"] = json!(epsilon);
    let ns: BTreeSet<u32> = args.n.iter().copied().collect();
    // Cells run in parallel; rows stay ordered by (n, seed).
    let cells: Vec<(u32, u64)> = ns
        .iter()
        .flat_map(|&n| (0..args.reps).map(move |rep| (n, args.seed.wrapping_add(rep))))
        .collect();
    let rows: Vec<(u32, u64, sphere_turan::PipelineReport)> = cells
        .par_iter()
        .map(|&(n, seed)| {
            let params = PipelineParams { n, d: args.d, epsilon, seed, m_max };
            lower_bound_construct(&params, &catalog).map(|(_, report)| (n, seed, report))
        })
        .collect::<Result<_, _>>()?;
    let mut csv = String::from("n,seed,sampled,altered,final\n");
    let mut means: Vec<(u32, f64)> = Vec::new();
    for &n in &ns {
        let finals: Vec<u64> = rows
            .iter()
            .filter(|&&(m, _, _)| m == n)
            .map(|(_, _, r)| r.rainbow_facets)
            .collect();
        means.push((n, finals.iter().sum::<u64>() as f64 / finals.len() as f64));
    }
    for (n, seed, report) in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            n, seed, report.sampled_facets, report.altered_facets, report.rainbow_facets
        ));
    }
    run.stage_text(&args.csv, csv);
    run.commit()?;

    let slope = if means.len() >= 2 {
        Some(log_log_slope(&means))
    } else {
        None
    };
    let theory = exponents(args.d)?;
    let summary = json!({
        "slope": slope,
        "slope_defined": slope.is_some(),
        "theory_lower_exponent": theory.lower_f64(),
        "per_n_mean_final_facets": means,
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

/// Least-squares slope of log(mean facets) against log(n).
fn log_log_slope(points: &[(u32, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, m)| m.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}
