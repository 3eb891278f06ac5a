//! `sidkit` command-line front end.

mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use report::{DistanceReport, Envelope, Input, VerifyDetail, SCHEMA_VERSION};
use sidkit::cpdag::{sid_cpdag_cpdag_with, sid_dag_cpdag_with, sid_dag_pdag_fallback_with};
use sidkit::graph::cpdag_of_dag;
use sidkit::graph::io::{parse_labeled, serialize_edge_list, LabeledGraph};
use sidkit::oracle::{count_effect_mismatches, sid_bruteforce, EFFECT_TOLERANCE};
use sidkit::sim::{
    draw_pair, random_dag_from, random_sem, rng_for, run_experiment, write_csv, ExperimentConfig,
    ExperimentKind, GenConfig, Regime,
};
use sidkit::{
    dne, serialize_graph, shd, sid, sid_cpdag_dag, sid_symmetric, BoundsConfig, Format, Graph,
    GraphKind, SidError,
};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sidkit",
    version,
    about = "Structural intervention distance between causal graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between a true graph and an estimate.
    Dist(DistArgs),
    /// Check the fast SID against a path-enumeration or Gaussian reference.
    Verify(VerifyArgs),
    /// Draw random DAGs (or their CPDAGs).
    Gen(GenArgs),
    /// Run a simulation experiment and write CSV.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    Sid,
    Shd,
    SidSym,
    Dne,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Dag,
    Pdag,
    Cpdag,
}

impl From<KindArg> for GraphKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Dag => GraphKind::Dag,
            KindArg::Pdag => GraphKind::Pdag,
            KindArg::Cpdag => GraphKind::Cpdag,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Auto,
    AdjMatrix,
    EdgeList,
}

#[derive(Args)]
struct GraphInputs {
    /// File holding the true graph.
    truth: PathBuf,
    /// File holding the estimated graph.
    estimate: PathBuf,
    #[arg(long, value_enum, default_value = "dag")]
    true_kind: KindArg,
    #[arg(long, value_enum, default_value = "dag")]
    est_kind: KindArg,
    #[arg(long, value_enum, default_value = "auto")]
    format: FormatArg,
}

#[derive(Args)]
struct DistArgs {
    #[command(flatten)]
    inputs: GraphInputs,
    #[arg(long, value_enum, default_value = "sid")]
    metric: Metric,
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    json: bool,
    /// Include the p × p verdict matrix in the JSON report.
    #[arg(long)]
    verdicts: bool,
    /// Fail instead of falling back to per-node bounds when the estimate is not a valid CPDAG.
    #[arg(long)]
    no_fallback: bool,
    /// Largest chain component whose extensions are enumerated.
    #[arg(long, default_value_t = 8)]
    extension_cap: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Oracle,
    Gaussian,
}

impl VerifyMode {
    fn name(self) -> &'static str {
        match self {
            VerifyMode::Oracle => "oracle",
            VerifyMode::Gaussian => "gaussian",
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// True DAG file; omit with --batch.
    truth: Option<PathBuf>,
    /// Estimated DAG file; omit with --batch.
    estimate: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "oracle")]
    mode: VerifyMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "auto")]
    format: FormatArg,
    /// Verify seeded random pairs instead of two files.
    #[arg(long)]
    batch: bool,
    #[arg(long, default_value_t = 5)]
    p: usize,
    #[arg(long, default_value = "dense")]
    regime: Regime,
    #[arg(long, default_value_t = 200)]
    pairs: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Dag,
    Cpdag,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    p: usize,
    #[arg(long, default_value = "sparse")]
    regime: Regime,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of graphs; more than one needs --out naming a directory.
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, value_enum, default_value = "dag")]
    kind: GenKind,
    #[arg(long, value_enum, default_value = "adj-matrix")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// sid-vs-shd, sid-vs-effects, scaling or cpdag-bounds.
    kind: ExperimentKind,
    /// Comma-separated node counts.
    #[arg(long, value_delimiter = ',', default_value = "5")]
    p: Vec<usize>,
    #[arg(long, default_value = "sparse")]
    regime: Regime,
    /// Pairs per node count.
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 7)]
    timing_runs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn from_sid(context: Option<&Path>, e: SidError) -> Self {
        let code = match e {
            SidError::Parse { .. }
            | SidError::Validation { .. }
            | SidError::Argument(_)
            | SidError::ExtensionCapExceeded { .. }
            | SidError::CandidateLimit { .. } => 2,
            SidError::DimensionMismatch { .. } | SidError::KindMismatch { .. } => 3,
            SidError::OracleCap(_) => 4,
            SidError::Numeric { .. } => 1,
        };
        match context {
            Some(path) => Failure::new(code, format!("{}: {e}", path.display())),
            None => Failure::new(code, e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn sid_err(e: SidError) -> Failure {
    Failure::from_sid(None, e)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| match cli.command {
        Command::Dist(a) => cmd_dist(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Experiment(a) => cmd_experiment(a),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// `SIDKIT_THREADS` sizes the worker pool; unset or 0 lets rayon decide.
fn configure_threads() -> CliResult<()> {
    let threads = match std::env::var("SIDKIT_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            Failure::new(
                2,
                format!("SIDKIT_THREADS must be a non-negative integer, got `{v}`"),
            )
        })?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::new(1, format!("cannot start worker pool: {e}")))
}

// ============================================================================
// Input
// ============================================================================

fn detect_format(text: &str) -> Format {
    let edge_like = text.lines().map(str::trim).any(|l| {
        l.contains("->") || l.contains("--") || l.starts_with("node ") || l.starts_with('#')
    });
    if edge_like {
        Format::EdgeList
    } else {
        Format::AdjMatrix
    }
}

fn read_graph(path: &Path, format: FormatArg, kind: GraphKind) -> CliResult<LabeledGraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(2, format!("{}: cannot read: {e}", path.display())))?;
    let format = match format {
        FormatArg::Auto => detect_format(&text),
        FormatArg::AdjMatrix => Format::AdjMatrix,
        FormatArg::EdgeList => Format::EdgeList,
    };
    parse_labeled(&text, format, kind).map_err(|e| Failure::from_sid(Some(path), e))
}

/// Renumbers `est` so each label gets the id it has in `truth`.
fn align_labels(truth: &LabeledGraph, est: LabeledGraph, est_path: &Path) -> CliResult<Graph> {
    if truth.labels == est.labels {
        return Ok(est.graph);
    }
    if truth.labels.len() != est.labels.len() {
        return Err(Failure::from_sid(
            Some(est_path),
            SidError::DimensionMismatch {
                left: truth.labels.len(),
                right: est.labels.len(),
            },
        ));
    }
    let perm = est
        .labels
        .iter()
        .map(|l| {
            truth.labels.iter().position(|t| t == l).ok_or_else(|| {
                Failure::new(
                    3,
                    format!(
                        "{}: node `{l}` does not occur in the true graph",
                        est_path.display()
                    ),
                )
            })
        })
        .collect::<CliResult<Vec<usize>>>()?;
    est.graph
        .permuted(&perm)
        .map_err(|e| Failure::from_sid(Some(est_path), e))
}

struct Loaded {
    truth: LabeledGraph,
    estimate: Graph,
    inputs: Vec<Input>,
}

fn load_pair(a: &GraphInputs) -> CliResult<Loaded> {
    let true_kind = GraphKind::from(a.true_kind);
    let est_kind = GraphKind::from(a.est_kind);
    let truth = read_graph(&a.truth, a.format, true_kind)?;
    // a claimed CPDAG is checked later so an invalid one can fall back
    let parse_kind = if est_kind == GraphKind::Cpdag {
        GraphKind::Pdag
    } else {
        est_kind
    };
    let est = read_graph(&a.estimate, a.format, parse_kind)?;
    let estimate = align_labels(&truth, est, &a.estimate)?;
    let inputs = vec![
        Input {
            path: a.truth.display().to_string(),
            kind: true_kind.to_string(),
        },
        Input {
            path: a.estimate.display().to_string(),
            kind: est_kind.to_string(),
        },
    ];
    Ok(Loaded {
        truth,
        estimate,
        inputs,
    })
}

// ============================================================================
// dist
// ============================================================================

fn cmd_dist(a: DistArgs) -> CliResult<()> {
    let loaded = load_pair(&a.inputs)?;
    let est_kind = GraphKind::from(a.inputs.est_kind);
    let cfg = BoundsConfig {
        extension_cap: a.extension_cap,
        fallback_on_invalid: !a.no_fallback,
        ..BoundsConfig::default()
    };
    let metrics: &[Metric] = match a.metric {
        Metric::All => &[Metric::Sid, Metric::Shd, Metric::Dne, Metric::SidSym],
        Metric::Sid => &[Metric::Sid],
        Metric::Shd => &[Metric::Shd],
        Metric::Dne => &[Metric::Dne],
        Metric::SidSym => &[Metric::SidSym],
    };
    let mut reports = Vec::new();
    for &m in metrics {
        let both_dags = loaded.truth.graph.kind() == GraphKind::Dag && est_kind == GraphKind::Dag;
        if m == Metric::SidSym && a.metric == Metric::All && !both_dags {
            continue;
        }
        let mut r = dist_metric(&loaded, est_kind, m, cfg, a.verdicts)?;
        if !a.json {
            r.verdicts = None;
        }
        reports.push(r);
    }
    emit(&reports, a.json)
}

fn dist_metric(
    l: &Loaded,
    est_kind: GraphKind,
    m: Metric,
    cfg: BoundsConfig,
    verdicts: bool,
) -> CliResult<DistanceReport> {
    let g = &l.truth.graph;
    let h = &l.estimate;
    let new = |name: &str| DistanceReport::new(name, l.inputs.clone(), l.truth.labels.clone());
    Ok(match m {
        Metric::Shd => new("shd").with_count(shd(g, h).map_err(sid_err)?),
        Metric::Dne => new("dne").with_count(dne(g, h).map_err(sid_err)?),
        Metric::SidSym => new("sid-sym").with_halves(sid_symmetric(g, h).map_err(sid_err)?.0),
        Metric::Sid => match (g.kind(), est_kind) {
            (GraphKind::Dag, GraphKind::Dag) => {
                let rep = sid(g, h).map_err(sid_err)?;
                let r = new("sid").with_count(rep.total);
                if verdicts {
                    r.with_verdicts(&rep)
                } else {
                    r
                }
            }
            (GraphKind::Dag, GraphKind::Cpdag) => {
                new("sid").with_bounds(&sid_dag_cpdag_with(g, h, cfg).map_err(sid_err)?)
            }
            (GraphKind::Dag, GraphKind::Pdag) => {
                new("sid").with_bounds(&sid_dag_pdag_fallback_with(g, h, cfg).map_err(sid_err)?)
            }
            (GraphKind::Cpdag, GraphKind::Dag) => {
                let rep = sid_cpdag_dag(g, h).map_err(sid_err)?;
                let r = new("sid").with_count(rep.total);
                if verdicts {
                    r.with_verdicts(&rep)
                } else {
                    r
                }
            }
            (GraphKind::Cpdag, _) => {
                new("sid").with_bounds(&sid_cpdag_cpdag_with(g, h, cfg).map_err(sid_err)?)
            }
            (GraphKind::Pdag, _) => {
                return Err(Failure::new(
                    3,
                    "the true graph must be a DAG or a CPDAG".to_string(),
                ));
            }
        },
        Metric::All => unreachable!("expanded by the caller"),
    })
}

fn emit(reports: &[DistanceReport], json: bool) -> CliResult<()> {
    for r in reports {
        for w in &r.warnings {
            eprintln!("warning: {w}");
        }
    }
    let text = if json {
        let env = Envelope {
            schema_version: SCHEMA_VERSION,
            reports,
        };
        let mut s =
            serde_json::to_string_pretty(&env).map_err(|e| Failure::new(1, e.to_string()))?;
        s.push('\n');
        s
    } else {
        reports.iter().map(|r| r.summary() + "\n").collect()
    };
    write_stdout(&text)
}

fn write_stdout(text: &str) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|()| out.flush())
        .map_err(|e| Failure::new(5, format!("cannot write to standard output: {e}")))
}

// ============================================================================
// verify
// ============================================================================

fn cmd_verify(a: VerifyArgs) -> CliResult<()> {
    let report = if a.batch {
        verify_batch(&a)?
    } else {
        let (Some(tp), Some(ep)) = (&a.truth, &a.estimate) else {
            return Err(Failure::new(2, "verify needs two graph files, or --batch"));
        };
        let truth = read_graph(tp, a.format, GraphKind::Dag)?;
        let est = read_graph(ep, a.format, GraphKind::Dag)?;
        let h = align_labels(&truth, est, ep)?;
        let g = &truth.graph;
        let fast = sid(g, &h).map_err(sid_err)?.total;
        let reference = match a.mode {
            VerifyMode::Oracle => sid_bruteforce(g, &h).map_err(sid_err)?,
            VerifyMode::Gaussian => {
                let sem = random_sem(g, a.seed).map_err(sid_err)?;
                count_effect_mismatches(&sem, g, &h, EFFECT_TOLERANCE).map_err(sid_err)?
            }
        };
        let inputs = vec![
            Input {
                path: tp.display().to_string(),
                kind: "DAG".into(),
            },
            Input {
                path: ep.display().to_string(),
                kind: "DAG".into(),
            },
        ];
        let mut r = DistanceReport::new("sid", inputs, truth.labels.clone()).with_count(fast);
        r.verify = Some(VerifyDetail {
            mode: a.mode.name().into(),
            seed: (a.mode == VerifyMode::Gaussian).then_some(a.seed),
            fast: Some(fast),
            reference: Some(reference),
            agree: Some(fast == reference),
            pairs: None,
            agreements: None,
        });
        r
    };
    emit(std::slice::from_ref(&report), a.json)
}

fn verify_batch(a: &VerifyArgs) -> CliResult<DistanceReport> {
    if a.truth.is_some() || a.estimate.is_some() {
        return Err(Failure::new(2, "--batch takes no graph files"));
    }
    let mut agreements = 0;
    for k in 0..a.pairs {
        let (g, h, sem) = draw_pair(a.seed, k, a.p, a.regime).map_err(sid_err)?;
        let fast = sid(&g, &h).map_err(sid_err)?.total;
        let reference = match a.mode {
            VerifyMode::Oracle => sid_bruteforce(&g, &h).map_err(sid_err)?,
            VerifyMode::Gaussian => {
                count_effect_mismatches(&sem, &g, &h, EFFECT_TOLERANCE).map_err(sid_err)?
            }
        };
        agreements += usize::from(fast == reference);
    }
    let mut r = DistanceReport::new("sid", Vec::new(), Vec::new()).with_count(agreements);
    r.verify = Some(VerifyDetail {
        mode: a.mode.name().into(),
        seed: Some(a.seed),
        fast: None,
        reference: None,
        agree: None,
        pairs: Some(a.pairs),
        agreements: Some(agreements),
    });
    Ok(r)
}

// ============================================================================
// gen and experiment
// ============================================================================

fn cmd_gen(a: GenArgs) -> CliResult<()> {
    let cfg = GenConfig {
        p: a.p,
        regime: a.regime,
        seed: a.seed,
    };
    cfg.validate().map_err(sid_err)?;
    if a.count == 0 {
        return Err(Failure::new(2, "--count must be at least 1"));
    }
    let format = match a.format {
        FormatArg::EdgeList => Format::EdgeList,
        _ => Format::AdjMatrix,
    };
    let labels: Vec<String> = (0..a.p).map(|v| v.to_string()).collect();
    let texts = (0..a.count)
        .map(|k| {
            let mut rng = rng_for(a.seed, k as u64);
            let g = random_dag_from(&mut rng, a.p, cfg.p_connect());
            let g = match a.kind {
                GenKind::Dag => g,
                GenKind::Cpdag => cpdag_of_dag(&g).map_err(sid_err)?,
            };
            Ok(match format {
                Format::EdgeList => serialize_edge_list(&g, &labels),
                Format::AdjMatrix => serialize_graph(&g, format),
            })
        })
        .collect::<CliResult<Vec<String>>>()?;

    match (&a.out, a.count) {
        (None, 1) => write_stdout(&texts[0]),
        (None, _) => Err(Failure::new(
            2,
            "--count above 1 needs --out naming a directory",
        )),
        (Some(path), 1) => write_atomic(path, &texts[0]),
        (Some(dir), _) => {
            let files: Vec<(PathBuf, &str)> = texts
                .iter()
                .enumerate()
                .map(|(k, t)| (dir.join(format!("graph_{k:04}.txt")), t.as_str()))
                .collect();
            let created = !dir.exists();
            std::fs::create_dir_all(dir).map_err(|e| {
                Failure::new(
                    5,
                    format!("{}: cannot create directory: {e}", dir.display()),
                )
            })?;
            let mut written = Vec::new();
            for (path, text) in &files {
                if let Err(f) = write_atomic(path, text) {
                    for w in &written {
                        let _ = std::fs::remove_file(w);
                    }
                    if created {
                        let _ = std::fs::remove_dir(dir);
                    }
                    return Err(f);
                }
                written.push(path.clone());
            }
            Ok(())
        }
    }
}

fn cmd_experiment(a: ExperimentArgs) -> CliResult<()> {
    let mut cfg = ExperimentConfig::new(a.kind, a.p, a.regime, a.pairs, a.seed);
    cfg.timing_runs = a.timing_runs;
    let rows = run_experiment(&cfg).map_err(sid_err)?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).map_err(|e| Failure::new(1, e.to_string()))?;
    let text = String::from_utf8(buf).map_err(|e| Failure::new(1, e.to_string()))?;
    match &a.out {
        Some(path) => write_atomic(path, &text),
        None => write_stdout(&text),
    }
}

/// Writes through a temporary file in the target directory, so a failure leaves
/// nothing behind.
fn write_atomic(path: &Path, text: &str) -> CliResult<()> {
    let unwritable =
        |e: std::io::Error| Failure::new(5, format!("{}: cannot write: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(unwritable)?;
    tmp.write_all(text.as_bytes()).map_err(unwritable)?;
    tmp.persist(path).map_err(|e| unwritable(e.error))?;
    Ok(())
}
