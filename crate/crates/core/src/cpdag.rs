//! SID when one or both graphs stand for a Markov equivalence class.
//!
//! An estimated CPDAG is scored by orienting each chain component on its own. Parent
//! sets of nodes in one component do not depend on how other components are
//! oriented, so the per-component minimum and maximum add up to bounds that are met
//! by actual members of the class.

use crate::adjustment::TruthContext;
use crate::bitmatrix::BitMatrix;
use crate::bitset::NodeSet;
use crate::distances::{verdict_row, SidReport, Verdict};
use crate::error::{Result, SidError};
use crate::graph::{
    canonical_extension, chain_components, enumerate_extensions_with_cap, Graph, GraphKind,
    DEFAULT_EXTENSION_CAP,
};
use crate::par::{map_indices, try_map_indices, Execution};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Whether both bounds are realised by members of the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundsKind {
    #[serde(rename = "attained bounds")]
    Attained,
    #[serde(rename = "per-node bounds")]
    PerNode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentBound {
    pub nodes: Vec<usize>,
    pub min_sum: usize,
    pub max_sum: usize,
    /// `None` when the component was scored node by node.
    pub extension_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SidBounds {
    pub lower: usize,
    pub upper: usize,
    /// Components with at least two nodes.
    pub per_component: Vec<ComponentBound>,
    /// Falsely inferred pairs from nodes whose parent set is fixed.
    pub fixed: usize,
    pub kind: BoundsKind,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundsConfig {
    /// Largest component whose extensions are enumerated.
    pub extension_cap: usize,
    /// Fall back to per-node bounds when the estimate is not a valid CPDAG.
    pub fallback_on_invalid: bool,
    /// Most undirected neighbours a node may have in the per-node fallback.
    pub candidate_limit: usize,
    pub execution: Execution,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig {
            extension_cap: DEFAULT_EXTENSION_CAP,
            fallback_on_invalid: true,
            candidate_limit: 20,
            execution: Execution::Parallel,
        }
    }
}

/// Entry `(i, j)` is set iff the effect of `do(X_i)` on `X_j` is the same for every
/// member of the class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentifiabilityMask {
    bits: BitMatrix,
}

impl IdentifiabilityMask {
    pub fn dim(&self) -> usize {
        self.bits.dim()
    }

    pub fn is_identifiable(&self, i: usize, j: usize) -> bool {
        self.bits.get(i, j)
    }

    pub fn row(&self, i: usize) -> NodeSet {
        self.bits.row(i)
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }
}

/// `(i, j)` is not identifiable iff a possibly directed path from `i` to `j` starts
/// with an undirected edge. Possibly directed means no edge on it points back
/// towards `i`.
pub fn identifiability_mask(c: &Graph) -> IdentifiabilityMask {
    let p = c.p();
    let mut bits = BitMatrix::zeros(p);
    for i in 0..p {
        let mut reached = NodeSet::empty(p);
        let mut stack: Vec<usize> = c.undirected_neighbors(i).iter().collect();
        for &v in &stack {
            reached.insert(v);
        }
        while let Some(v) = stack.pop() {
            for w in c.adjacency().row_ones(v) {
                if w != i && reached.insert(w) {
                    stack.push(w);
                }
            }
        }
        for j in 0..p {
            if j != i && !reached.contains(j) {
                bits.set(i, j, true);
            }
        }
    }
    IdentifiabilityMask { bits }
}

/// Bounds on `sid(g, x)` over the members `x` of the class of the estimate `c`.
pub fn sid_dag_cpdag(g: &Graph, c: &Graph) -> Result<SidBounds> {
    sid_dag_cpdag_with(g, c, BoundsConfig::default())
}

pub fn sid_dag_cpdag_with(g: &Graph, c: &Graph, cfg: BoundsConfig) -> Result<SidBounds> {
    require(g, GraphKind::Dag)?;
    same_size(g, c)?;
    let ctx = TruthContext::new(g);
    bounds(&ctx, None, c, cfg)
}

/// Per-node bounds: every node independently picks its directed parents plus any
/// subset of its undirected neighbours. The bounds need not be met by one DAG.
pub fn sid_dag_pdag_fallback(g: &Graph, pd: &Graph) -> Result<SidBounds> {
    sid_dag_pdag_fallback_with(g, pd, BoundsConfig::default())
}

pub fn sid_dag_pdag_fallback_with(g: &Graph, pd: &Graph, cfg: BoundsConfig) -> Result<SidBounds> {
    require(g, GraphKind::Dag)?;
    same_size(g, pd)?;
    let ctx = TruthContext::new(g);
    fallback(&ctx, None, pd, cfg, Vec::new())
}

/// SID with a CPDAG as the truth: only identifiable pairs are scored, against one
/// consistent extension of `c`.
pub fn sid_cpdag_dag(c: &Graph, h: &Graph) -> Result<SidReport> {
    sid_cpdag_dag_with(c, h, Execution::Parallel)
}

pub fn sid_cpdag_dag_with(c: &Graph, h: &Graph, execution: Execution) -> Result<SidReport> {
    require_class(c)?;
    require(h, GraphKind::Dag)?;
    same_size(c, h)?;
    let truth = canonical_extension(c)?;
    let mask = identifiability_mask(c);
    let ctx = TruthContext::new(&truth);
    let p = c.p();
    let rows = map_indices(execution, p, |i| {
        let bad = ctx.false_targets(i, &h.parents(i), true);
        let mut row = verdict_row(p, i, |j| bad.contains(j));
        for (j, v) in row.iter_mut().enumerate() {
            if j != i && !mask.is_identifiable(i, j) {
                *v = Verdict::Excluded;
            }
        }
        row
    });
    Ok(SidReport::from_rows(p, rows))
}

/// Bounds on `sid_cpdag_dag(c, x)` over the members `x` of the class of `d`.
pub fn sid_cpdag_cpdag(c: &Graph, d: &Graph) -> Result<SidBounds> {
    sid_cpdag_cpdag_with(c, d, BoundsConfig::default())
}

pub fn sid_cpdag_cpdag_with(c: &Graph, d: &Graph, cfg: BoundsConfig) -> Result<SidBounds> {
    require_class(c)?;
    same_size(c, d)?;
    let truth = canonical_extension(c)?;
    let mask = identifiability_mask(c);
    let ctx = TruthContext::new(&truth);
    bounds(&ctx, Some(&mask), d, cfg)
}

fn require(g: &Graph, kind: GraphKind) -> Result<()> {
    if g.kind() != kind {
        return Err(SidError::KindMismatch {
            expected: match kind {
                GraphKind::Dag => "DAG",
                GraphKind::Pdag => "PDAG",
                GraphKind::Cpdag => "CPDAG",
            },
            found: g.kind(),
        });
    }
    Ok(())
}

fn require_class(c: &Graph) -> Result<()> {
    if c.kind() == GraphKind::Pdag {
        return Err(SidError::KindMismatch {
            expected: "CPDAG",
            found: c.kind(),
        });
    }
    Ok(())
}

fn same_size(a: &Graph, b: &Graph) -> Result<()> {
    if a.p() != b.p() {
        return Err(SidError::DimensionMismatch {
            left: a.p(),
            right: b.p(),
        });
    }
    Ok(())
}

/// Falsely inferred targets of source `i` given estimated parents `pa`, restricted
/// to identifiable pairs when a mask is supplied.
fn score(ctx: &TruthContext, mask: Option<&IdentifiabilityMask>, i: usize, pa: &NodeSet) -> usize {
    let mut bad = ctx.false_targets(i, pa, true);
    if let Some(m) = mask {
        bad.intersect_with(&m.row(i));
    }
    bad.len()
}

fn bounds(
    ctx: &TruthContext,
    mask: Option<&IdentifiabilityMask>,
    est: &Graph,
    cfg: BoundsConfig,
) -> Result<SidBounds> {
    let est = match est.kind() {
        GraphKind::Cpdag | GraphKind::Dag => est.clone(),
        GraphKind::Pdag => match est.with_kind(GraphKind::Cpdag) {
            Ok(c) => c,
            Err(e) if cfg.fallback_on_invalid => {
                let warning = format!("estimate is not a valid CPDAG ({e}); using per-node bounds");
                return fallback(ctx, mask, est, cfg, vec![warning]);
            }
            Err(e) => return Err(e),
        },
    };

    let comps = chain_components(&est);
    let fixed_nodes: Vec<usize> = comps
        .iter()
        .filter(|c| c.len() == 1)
        .map(|c| c.to_vec()[0])
        .collect();
    let fixed: usize = map_indices(cfg.execution, fixed_nodes.len(), |k| {
        let i = fixed_nodes[k];
        score(ctx, mask, i, &est.parents(i))
    })
    .into_iter()
    .sum();

    let mut out = SidBounds {
        lower: fixed,
        upper: fixed,
        per_component: Vec::new(),
        fixed,
        kind: BoundsKind::Attained,
        warnings: Vec::new(),
    };
    for comp in comps.iter().filter(|c| c.len() > 1) {
        let cb = if comp.len() > cfg.extension_cap {
            out.kind = BoundsKind::PerNode;
            out.warnings.push(format!(
                "chain component of {} nodes exceeds the extension cap of {}; using per-node bounds",
                comp.len(),
                cfg.extension_cap
            ));
            per_node_component(ctx, mask, &est, comp, cfg)?
        } else {
            component_by_extensions(ctx, mask, &est, comp, cfg)?
        };
        out.lower += cb.min_sum;
        out.upper += cb.max_sum;
        out.per_component.push(cb);
    }
    Ok(out)
}

fn component_by_extensions(
    ctx: &TruthContext,
    mask: Option<&IdentifiabilityMask>,
    est: &Graph,
    comp: &NodeSet,
    cfg: BoundsConfig,
) -> Result<ComponentBound> {
    let extensions = enumerate_extensions_with_cap(est, comp, cfg.extension_cap)?;
    let nodes = comp.to_vec();
    // distinct (node, parent set) pairs are scored once
    let mut keys: Vec<(usize, NodeSet)> = Vec::new();
    let mut index: HashMap<(usize, NodeSet), usize> = HashMap::new();
    let mut slots: Vec<Vec<usize>> = Vec::with_capacity(extensions.len());
    for x in &extensions {
        let row = nodes
            .iter()
            .map(|&i| {
                let key = (i, x.parents(i));
                *index.entry(key.clone()).or_insert_with(|| {
                    keys.push(key);
                    keys.len() - 1
                })
            })
            .collect();
        slots.push(row);
    }
    let scores = map_indices(cfg.execution, keys.len(), |k| {
        score(ctx, mask, keys[k].0, &keys[k].1)
    });
    let sums: Vec<usize> = slots
        .iter()
        .map(|r| r.iter().map(|&k| scores[k]).sum())
        .collect();
    Ok(ComponentBound {
        nodes,
        min_sum: sums.iter().copied().min().unwrap_or(0),
        max_sum: sums.iter().copied().max().unwrap_or(0),
        extension_count: Some(extensions.len()),
    })
}

/// Min and max score of node `i` over its candidate parent sets.
fn node_range(
    ctx: &TruthContext,
    mask: Option<&IdentifiabilityMask>,
    pd: &Graph,
    i: usize,
    cfg: BoundsConfig,
) -> Result<(usize, usize)> {
    let base = pd.parents(i);
    let un = pd.undirected_neighbors(i).to_vec();
    if un.len() > cfg.candidate_limit {
        return Err(SidError::CandidateLimit {
            node: i,
            count: un.len(),
            limit: cfg.candidate_limit,
        });
    }
    let mut lo = usize::MAX;
    let mut hi = 0;
    for subset in 0u64..(1u64 << un.len()) {
        let mut pa = base.clone();
        for (b, &v) in un.iter().enumerate() {
            if subset >> b & 1 == 1 {
                pa.insert(v);
            }
        }
        let s = score(ctx, mask, i, &pa);
        lo = lo.min(s);
        hi = hi.max(s);
    }
    Ok((lo, hi))
}

fn per_node_component(
    ctx: &TruthContext,
    mask: Option<&IdentifiabilityMask>,
    pd: &Graph,
    comp: &NodeSet,
    cfg: BoundsConfig,
) -> Result<ComponentBound> {
    let nodes = comp.to_vec();
    let ranges = try_map_indices(cfg.execution, nodes.len(), |k| {
        node_range(ctx, mask, pd, nodes[k], cfg)
    })?;
    Ok(ComponentBound {
        min_sum: ranges.iter().map(|r| r.0).sum(),
        max_sum: ranges.iter().map(|r| r.1).sum(),
        nodes,
        extension_count: None,
    })
}

fn fallback(
    ctx: &TruthContext,
    mask: Option<&IdentifiabilityMask>,
    pd: &Graph,
    cfg: BoundsConfig,
    warnings: Vec<String>,
) -> Result<SidBounds> {
    let mut out = SidBounds {
        lower: 0,
        upper: 0,
        per_component: Vec::new(),
        fixed: 0,
        kind: BoundsKind::PerNode,
        warnings,
    };
    for comp in chain_components(pd) {
        if comp.len() == 1 {
            let i = comp.to_vec()[0];
            let s = score(ctx, mask, i, &pd.parents(i));
            out.fixed += s;
        } else {
            let cb = per_node_component(ctx, mask, pd, &comp, cfg)?;
            out.lower += cb.min_sum;
            out.upper += cb.max_sum;
            out.per_component.push(cb);
        }
    }
    out.lower += out.fixed;
    out.upper += out.fixed;
    Ok(out)
}
