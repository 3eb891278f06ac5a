//! Random DAGs, random linear SEMs and the experiment harness.
//!
//! Every pair draws from its own ChaCha8 stream, selected by the pair id, of a
//! generator seeded with the experiment seed. Rows therefore do not depend on how
//! pairs are scheduled across threads.

use crate::bitmatrix::BitMatrix;
use crate::cpdag::sid_dag_cpdag;
use crate::distances::{shd, sid, sid_with, SidOptions};
use crate::error::{Result, SidError};
use crate::graph::{cpdag_of_dag, Graph, GraphKind};
use crate::oracle::{count_effect_mismatches, LinearSem, EFFECT_TOLERANCE};
use crate::par::{try_map_indices, Execution};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Regime {
    /// `p_connect = 1.5 / (p − 1)`, about `0.75 p` edges.
    Sparse,
    /// `p_connect = 0.3`.
    Dense,
    Custom(f64),
}

impl Regime {
    pub fn p_connect(self, p: usize) -> f64 {
        match self {
            Regime::Sparse => (1.5 / (p.saturating_sub(1).max(1)) as f64).min(1.0),
            Regime::Dense => 0.3,
            Regime::Custom(x) => x,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Sparse => f.write_str("sparse"),
            Regime::Dense => f.write_str("dense"),
            Regime::Custom(x) => write!(f, "custom:{x}"),
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = SidError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sparse" => Ok(Regime::Sparse),
            "dense" => Ok(Regime::Dense),
            other => {
                let x = other
                    .strip_prefix("custom:")
                    .unwrap_or(other)
                    .parse::<f64>()
                    .map_err(|_| SidError::Argument(format!("unknown regime `{other}`")))?;
                Ok(Regime::Custom(x))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    pub p: usize,
    pub regime: Regime,
    pub seed: u64,
}

impl GenConfig {
    pub fn p_connect(&self) -> f64 {
        self.regime.p_connect(self.p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(SidError::Argument(format!(
                "need at least 2 nodes, got {}",
                self.p
            )));
        }
        let q = self.p_connect();
        if !(q > 0.0 && q <= 1.0) {
            return Err(SidError::Argument(format!(
                "p_connect must lie in (0, 1], got {q}"
            )));
        }
        Ok(())
    }
}

/// Generator for substream `stream` of `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A random DAG: a uniform node permutation `π`, then each edge `π(a) → π(b)` with
/// `a < b` independently with probability `p_connect`.
pub fn random_dag(cfg: &GenConfig) -> Result<Graph> {
    cfg.validate()?;
    Ok(random_dag_from(
        &mut rng_for(cfg.seed, 0),
        cfg.p,
        cfg.p_connect(),
    ))
}

pub fn random_dag_from<R: Rng + ?Sized>(rng: &mut R, p: usize, p_connect: f64) -> Graph {
    let mut perm: Vec<usize> = (0..p).collect();
    perm.shuffle(rng);
    let mut adj = BitMatrix::zeros(p);
    for a in 0..p {
        for b in a + 1..p {
            if rng.gen_bool(p_connect) {
                adj.set(perm[a], perm[b], true);
            }
        }
    }
    Graph::new(adj, GraphKind::Dag).expect("order-respecting edges form a DAG")
}

/// Coefficients uniform on `[−1, −0.1] ∪ [0.1, 1]`, unit noise variances.
pub fn random_sem(g: &Graph, seed: u64) -> Result<LinearSem> {
    random_sem_from(&mut rng_for(seed, 0), g)
}

pub fn random_sem_from<R: Rng + ?Sized>(rng: &mut R, g: &Graph) -> Result<LinearSem> {
    let p = g.p();
    let mut b = DMatrix::zeros(p, p);
    for (k, j) in g.directed_edges() {
        let magnitude = rng.gen_range(0.1..=1.0);
        b[(j, k)] = if rng.gen_bool(0.5) {
            magnitude
        } else {
            -magnitude
        };
    }
    LinearSem::new(g.clone(), b, vec![1.0; p])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExperimentKind {
    SidVsShd,
    SidVsEffects,
    Scaling,
    /// SID bounds of the true DAG against the class of the estimate.
    CpdagBounds,
}

impl std::str::FromStr for ExperimentKind {
    type Err = SidError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sid-vs-shd" => Ok(ExperimentKind::SidVsShd),
            "sid-vs-effects" => Ok(ExperimentKind::SidVsEffects),
            "scaling" => Ok(ExperimentKind::Scaling),
            "cpdag-bounds" => Ok(ExperimentKind::CpdagBounds),
            other => Err(SidError::Argument(format!("unknown experiment `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub pair_id: usize,
    pub p: usize,
    pub regime: String,
    pub shd: Option<usize>,
    pub sid: Option<usize>,
    pub effect_mismatches: Option<usize>,
    pub sid_lower: Option<usize>,
    pub sid_upper: Option<usize>,
    pub wall_time_ns: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub ps: Vec<usize>,
    pub regime: Regime,
    /// Pairs per entry of `ps`.
    pub pairs: usize,
    pub seed: u64,
    /// Timed repetitions per pair; the median is reported.
    pub timing_runs: usize,
    pub execution: Execution,
}

impl ExperimentConfig {
    pub fn new(
        kind: ExperimentKind,
        ps: Vec<usize>,
        regime: Regime,
        pairs: usize,
        seed: u64,
    ) -> Self {
        ExperimentConfig {
            kind,
            ps,
            regime,
            pairs,
            seed,
            timing_runs: 7,
            execution: Execution::Parallel,
        }
    }
}

/// Pair `pair_id` of an experiment: `(g, h)` and a SEM over `g`, drawn in that order.
pub fn draw_pair(
    seed: u64,
    pair_id: usize,
    p: usize,
    regime: Regime,
) -> Result<(Graph, Graph, LinearSem)> {
    let cfg = GenConfig { p, regime, seed };
    cfg.validate()?;
    let mut rng = rng_for(seed, pair_id as u64);
    let g = random_dag_from(&mut rng, p, cfg.p_connect());
    let h = random_dag_from(&mut rng, p, cfg.p_connect());
    let sem = random_sem_from(&mut rng, &g)?;
    Ok((g, h, sem))
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    if cfg.ps.is_empty() {
        return Err(SidError::Argument("no node counts given".into()));
    }
    let jobs: Vec<usize> = cfg
        .ps
        .iter()
        .flat_map(|&p| std::iter::repeat_n(p, cfg.pairs))
        .collect();
    for &p in &cfg.ps {
        GenConfig {
            p,
            regime: cfg.regime,
            seed: cfg.seed,
        }
        .validate()?;
    }
    let exec = if cfg.kind == ExperimentKind::Scaling {
        Execution::Sequential
    } else {
        cfg.execution
    };
    try_map_indices(exec, jobs.len(), |pair_id| {
        run_pair(cfg, pair_id, jobs[pair_id])
    })
}

fn run_pair(cfg: &ExperimentConfig, pair_id: usize, p: usize) -> Result<ExperimentRow> {
    let (g, h, sem) = draw_pair(cfg.seed, pair_id, p, cfg.regime)?;
    let mut row = ExperimentRow {
        pair_id,
        p,
        regime: cfg.regime.to_string(),
        shd: Some(shd(&g, &h)?),
        sid: None,
        effect_mismatches: None,
        sid_lower: None,
        sid_upper: None,
        wall_time_ns: None,
    };
    match cfg.kind {
        ExperimentKind::SidVsShd => row.sid = Some(sid(&g, &h)?.total),
        ExperimentKind::SidVsEffects => {
            row.sid = Some(sid(&g, &h)?.total);
            row.effect_mismatches = Some(count_effect_mismatches(&sem, &g, &h, EFFECT_TOLERANCE)?);
        }
        ExperimentKind::CpdagBounds => {
            row.sid = Some(sid(&g, &h)?.total);
            let b = sid_dag_cpdag(&g, &cpdag_of_dag(&h)?)?;
            row.sid_lower = Some(b.lower);
            row.sid_upper = Some(b.upper);
        }
        ExperimentKind::Scaling => {
            let (total, ns) = time_sid(&g, &h, cfg.timing_runs.max(1))?;
            row.sid = Some(total);
            row.wall_time_ns = Some(ns);
        }
    }
    Ok(row)
}

/// Median wall time of one sequential `sid` call, in nanoseconds.
///
/// Each sample times a batch of calls long enough to swamp timer resolution.
pub fn time_sid(g: &Graph, h: &Graph, runs: usize) -> Result<(usize, u64)> {
    const MIN_BATCH: Duration = Duration::from_micros(200);
    let opts = SidOptions {
        execution: Execution::Sequential,
        ..SidOptions::default()
    };
    let total = sid_with(g, h, opts)?.total;
    let mut batch = 1u32;
    loop {
        let t = Instant::now();
        for _ in 0..batch {
            std::hint::black_box(sid_with(g, h, opts)?);
        }
        if t.elapsed() >= MIN_BATCH || batch >= 1 << 20 {
            break;
        }
        batch *= 2;
    }
    let mut samples: Vec<u64> = (0..runs)
        .map(|_| {
            let t = Instant::now();
            for _ in 0..batch {
                std::hint::black_box(sid_with(g, h, opts).map(|r| r.total).unwrap_or(0));
            }
            (t.elapsed().as_nanos() / u128::from(batch)) as u64
        })
        .collect();
    samples.sort_unstable();
    Ok((total, samples[samples.len() / 2]))
}

pub const CSV_HEADER: [&str; 9] = [
    "pair_id",
    "p",
    "regime",
    "shd",
    "sid",
    "effect_mismatches",
    "sid_lower",
    "sid_upper",
    "wall_time_ns",
];

/// Writes rows as CSV with a single header line; absent metrics are empty cells.
pub fn write_csv<W: std::io::Write>(rows: &[ExperimentRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let cell = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.pair_id.to_string(),
            r.p.to_string(),
            r.regime.clone(),
            cell(r.shd),
            cell(r.sid),
            cell(r.effect_mismatches),
            cell(r.sid_lower),
            cell(r.sid_upper),
            r.wall_time_ns.map(|v| v.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()
}
