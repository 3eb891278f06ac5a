//! Distances between two graphs on the same node set.

use crate::adjustment::TruthContext;
use crate::error::{Result, SidError};
use crate::graph::{Graph, GraphKind};
use crate::par::{map_indices, Execution};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Verdict for one ordered pair `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Correct,
    False,
    /// Diagonal entry.
    #[serde(rename = "self")]
    SelfPair,
    /// Not identifiable in the true equivalence class; not counted.
    Excluded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SidReport {
    pub p: usize,
    pub total: usize,
    /// Row-major `p × p`; entry `i * p + j` is the verdict for `do(X_i)` on `X_j`.
    pub verdicts: Vec<Verdict>,
    /// Order in which source nodes were scored.
    pub source_order: Vec<usize>,
}

impl SidReport {
    pub fn verdict(&self, i: usize, j: usize) -> Verdict {
        self.verdicts[i * self.p + j]
    }

    /// Number of ordered pairs per source node that were inferred falsely.
    pub fn row_counts(&self) -> Vec<usize> {
        self.verdicts
            .chunks(self.p.max(1))
            .map(|r| r.iter().filter(|&&v| v == Verdict::False).count())
            .collect()
    }

    pub(crate) fn from_rows(p: usize, rows: Vec<Vec<Verdict>>) -> Self {
        let verdicts: Vec<Verdict> = rows.into_iter().flatten().collect();
        let total = verdicts.iter().filter(|&&v| v == Verdict::False).count();
        SidReport {
            p,
            total,
            verdicts,
            source_order: (0..p).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SidOptions {
    /// Skip the search when the estimated parent set equals the true one.
    pub shortcuts: bool,
    pub execution: Execution,
}

impl Default for SidOptions {
    fn default() -> Self {
        SidOptions {
            shortcuts: true,
            execution: Execution::Parallel,
        }
    }
}

/// A non-negative number stored as twice its value, so halves are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfUnits(pub usize);

impl HalfUnits {
    pub fn twice(self) -> usize {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

impl fmt::Display for HalfUnits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}.5", self.0 / 2)
        }
    }
}

fn same_size(g: &Graph, h: &Graph) -> Result<()> {
    if g.p() != h.p() {
        return Err(SidError::DimensionMismatch {
            left: g.p(),
            right: h.p(),
        });
    }
    Ok(())
}

fn require_dag(g: &Graph) -> Result<()> {
    if g.kind() != GraphKind::Dag {
        return Err(SidError::KindMismatch {
            expected: "DAG",
            found: g.kind(),
        });
    }
    Ok(())
}

/// Structural Hamming distance: pairs `{i, j}` whose edge type differs.
pub fn shd(g: &Graph, h: &Graph) -> Result<usize> {
    same_size(g, h)?;
    let p = g.p();
    let mut n = 0;
    for i in 0..p {
        for j in i + 1..p {
            if g.edge_type(i, j) != h.edge_type(i, j) {
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Difference in the number of edges; an undirected edge counts once.
pub fn dne(g: &Graph, h: &Graph) -> Result<usize> {
    same_size(g, h)?;
    Ok(g.edge_count().abs_diff(h.edge_count()))
}

/// Structural intervention distance of the estimate `h` to the true DAG `g`.
pub fn sid(g: &Graph, h: &Graph) -> Result<SidReport> {
    sid_with(g, h, SidOptions::default())
}

pub fn sid_with(g: &Graph, h: &Graph, opts: SidOptions) -> Result<SidReport> {
    require_dag(g)?;
    require_dag(h)?;
    same_size(g, h)?;
    let ctx = TruthContext::new(g);
    let p = g.p();
    let rows = map_indices(opts.execution, p, |i| {
        let bad = ctx.false_targets(i, &h.parents(i), opts.shortcuts);
        verdict_row(p, i, |j| bad.contains(j))
    });
    Ok(SidReport::from_rows(p, rows))
}

pub(crate) fn verdict_row(p: usize, i: usize, is_false: impl Fn(usize) -> bool) -> Vec<Verdict> {
    (0..p)
        .map(|j| {
            if j == i {
                Verdict::SelfPair
            } else if is_false(j) {
                Verdict::False
            } else {
                Verdict::Correct
            }
        })
        .collect()
}

/// `(sid(g, h) + sid(h, g)) / 2`, exactly.
pub fn sid_symmetric(g: &Graph, h: &Graph) -> Result<HalfUnits> {
    Ok(HalfUnits(sid(g, h)?.total + sid(h, g)?.total))
}
