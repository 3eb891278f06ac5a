//! Graph representation and the structural primitives the metrics are built on.
//!
//! A graph over nodes `0..p` is a dense adjacency bit-matrix where `adj[i][j] = 1`
//! means there is an edge from `i` to `j`. An undirected edge `i – j` is encoded as
//! the symmetric pair `adj[i][j] = adj[j][i] = 1`. The declared [`GraphKind`] is
//! validated on construction, so every `Graph` value satisfies its kind's invariants.

mod chordal;
mod dsep;
mod extension;
pub mod io;

pub use chordal::{chain_components, is_chordal, maximum_cardinality_order};
pub use dsep::d_separated;
pub use extension::{
    canonical_extension, cpdag_of_dag, enumerate_extensions, enumerate_extensions_with_cap,
    is_consistent_extension, DEFAULT_EXTENSION_CAP,
};

use crate::bitmatrix::BitMatrix;
use crate::bitset::NodeSet;
use crate::error::{Result, SidError};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Dag,
    Pdag,
    Cpdag,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphKind::Dag => "DAG",
            GraphKind::Pdag => "PDAG",
            GraphKind::Cpdag => "CPDAG",
        })
    }
}

impl std::str::FromStr for GraphKind {
    type Err = SidError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dag" => Ok(GraphKind::Dag),
            "pdag" => Ok(GraphKind::Pdag),
            "cpdag" => Ok(GraphKind::Cpdag),
            other => Err(SidError::Argument(format!("unknown graph kind `{other}`"))),
        }
    }
}

/// Type of the edge between an unordered pair `{i, j}`, seen from `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeType {
    None,
    /// `i → j`
    Forward,
    /// `i ← j`
    Backward,
    /// `i – j`
    Undirected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Parents,
    Children,
    /// Nodes reachable by a directed path, excluding the node itself.
    Descendants,
    /// Nodes with a directed path into the node, excluding the node itself.
    Ancestors,
    /// Everything that is neither a descendant nor the node itself.
    NonDescendants,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    p: usize,
    adj: BitMatrix,
    kind: GraphKind,
}

impl Graph {
    /// Wraps an adjacency matrix and validates it against `kind`.
    pub fn new(adj: BitMatrix, kind: GraphKind) -> Result<Self> {
        let g = Graph {
            p: adj.dim(),
            adj,
            kind,
        };
        g.validate()?;
        Ok(g)
    }

    /// The edgeless DAG on `p` nodes.
    pub fn empty(p: usize) -> Self {
        Graph {
            p,
            adj: BitMatrix::zeros(p),
            kind: GraphKind::Dag,
        }
    }

    pub fn from_edges(
        p: usize,
        directed: &[(usize, usize)],
        undirected: &[(usize, usize)],
        kind: GraphKind,
    ) -> Result<Self> {
        let mut adj = BitMatrix::zeros(p);
        for &(a, b) in directed.iter().chain(undirected) {
            if a >= p || b >= p {
                return Err(SidError::Argument(format!(
                    "edge ({a}, {b}) references a node outside 0..{p}"
                )));
            }
        }
        for &(a, b) in directed {
            adj.set(a, b, true);
        }
        for &(a, b) in undirected {
            adj.set(a, b, true);
            adj.set(b, a, true);
        }
        Graph::new(adj, kind)
    }

    /// A DAG from a directed edge list.
    pub fn dag(p: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Graph::from_edges(p, edges, &[], GraphKind::Dag)
    }

    /// Same adjacency, different declared kind (re-validated).
    pub fn with_kind(&self, kind: GraphKind) -> Result<Self> {
        Graph::new(self.adj.clone(), kind)
    }

    pub(crate) fn from_parts_unchecked(adj: BitMatrix, kind: GraphKind) -> Self {
        Graph {
            p: adj.dim(),
            adj,
            kind,
        }
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    #[inline]
    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj.get(i, j)
    }

    #[inline]
    pub fn is_directed_edge(&self, i: usize, j: usize) -> bool {
        self.adj.get(i, j) && !self.adj.get(j, i)
    }

    #[inline]
    pub fn is_undirected_edge(&self, i: usize, j: usize) -> bool {
        self.adj.get(i, j) && self.adj.get(j, i)
    }

    #[inline]
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj.get(i, j) || self.adj.get(j, i)
    }

    pub fn edge_type(&self, i: usize, j: usize) -> EdgeType {
        match (self.adj.get(i, j), self.adj.get(j, i)) {
            (false, false) => EdgeType::None,
            (true, false) => EdgeType::Forward,
            (false, true) => EdgeType::Backward,
            (true, true) => EdgeType::Undirected,
        }
    }

    /// Strictly directed parents.
    pub fn parents(&self, i: usize) -> NodeSet {
        let mut s = self.adj.column(i);
        s.difference_with(&self.adj.row(i));
        s
    }

    /// Strictly directed children.
    pub fn children(&self, i: usize) -> NodeSet {
        let mut s = self.adj.row(i);
        s.difference_with(&self.adj.column(i));
        s
    }

    pub fn undirected_neighbors(&self, i: usize) -> NodeSet {
        let mut s = self.adj.row(i);
        s.intersect_with(&self.adj.column(i));
        s
    }

    /// Adjacency restricted to strictly directed edges.
    pub fn directed_part(&self) -> BitMatrix {
        if self.kind == GraphKind::Dag {
            return self.adj.clone();
        }
        let t = self.adj.transpose();
        let mut m = self.adj.clone();
        for i in 0..self.p {
            let tr = t.row_words(i).to_vec();
            for (w, u) in m.row_words_mut(i).iter_mut().zip(tr) {
                *w &= !u;
            }
        }
        m
    }

    /// Symmetric adjacency of the skeleton.
    pub fn skeleton(&self) -> BitMatrix {
        self.adj.or(&self.adj.transpose())
    }

    /// Number of edges in the skeleton; an undirected edge counts once.
    pub fn edge_count(&self) -> usize {
        let mut n = 0;
        for i in 0..self.p {
            for j in self.adj.row_ones(i) {
                if i < j || !self.adj.get(j, i) {
                    n += 1;
                }
            }
        }
        n
    }

    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.p {
            for j in self.adj.row_ones(i) {
                if !self.adj.get(j, i) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Undirected edges as `(i, j)` with `i < j`.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.p {
            for j in self.adj.row_ones(i) {
                if i < j && self.adj.get(j, i) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Unshielded colliders `(a, b, c)` with `a < c`, `a → b ← c` and `a`, `c` non-adjacent.
    pub fn v_structures(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for b in 0..self.p {
            let pa = self.parents(b).to_vec();
            for (x, &a) in pa.iter().enumerate() {
                for &c in &pa[x + 1..] {
                    if !self.adjacent(a, c) {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }

    /// Reflexive closure of the directed part: entry `(i, j)` is set iff `i = j` or a
    /// directed path `i → … → j` exists. Computed by repeated boolean squaring.
    pub fn path_matrix(&self) -> BitMatrix {
        self.directed_part().reflexive_closure()
    }

    pub fn relatives(&self, i: usize, which: Relation) -> Result<NodeSet> {
        if i >= self.p {
            return Err(SidError::Argument(format!(
                "node {i} out of range 0..{}",
                self.p
            )));
        }
        match which {
            Relation::Parents => Ok(self.parents(i)),
            Relation::Children => Ok(self.children(i)),
            Relation::Descendants | Relation::Ancestors | Relation::NonDescendants => {
                if self.kind != GraphKind::Dag {
                    return Err(SidError::KindMismatch {
                        expected: "DAG",
                        found: self.kind,
                    });
                }
                let forward = which != Relation::Ancestors;
                let mut reach = self.reach_from(i, forward);
                reach.remove(i);
                if which == Relation::NonDescendants {
                    reach = reach.complement();
                    reach.remove(i);
                }
                Ok(reach)
            }
        }
    }

    /// Nodes reachable from `i` along directed edges (including `i`).
    fn reach_from(&self, i: usize, forward: bool) -> NodeSet {
        let mut seen = NodeSet::singleton(self.p, i);
        let mut stack = vec![i];
        while let Some(v) = stack.pop() {
            let next = if forward {
                self.children(v)
            } else {
                self.parents(v)
            };
            for w in next.iter() {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// `self ≤ other`: same node set and every edge of `self` is an edge of `other`.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.p == other.p
            && (0..self.p).all(|i| {
                self.adj
                    .row_words(i)
                    .iter()
                    .zip(other.adj.row_words(i))
                    .all(|(a, b)| a & !b == 0)
            })
    }

    /// Renames node `v` to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.p {
            return Err(SidError::DimensionMismatch {
                left: self.p,
                right: perm.len(),
            });
        }
        let mut adj = BitMatrix::zeros(self.p);
        for i in 0..self.p {
            for j in self.adj.row_ones(i) {
                adj.set(perm[i], perm[j], true);
            }
        }
        Graph::new(adj, self.kind)
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.p {
            if self.adj.get(i, i) {
                return Err(SidError::Validation {
                    kind: self.kind,
                    message: "self-loop".into(),
                    nodes: vec![i],
                });
            }
        }
        if self.kind == GraphKind::Dag {
            if let Some(&(a, b)) = self.undirected_edges().first() {
                return Err(SidError::Validation {
                    kind: self.kind,
                    message: "undirected edge in a DAG".into(),
                    nodes: vec![a, b],
                });
            }
        }
        let cyclic = directed_cycle_nodes(&self.directed_part());
        if !cyclic.is_empty() {
            return Err(SidError::Validation {
                kind: self.kind,
                message: "directed cycle".into(),
                nodes: cyclic,
            });
        }
        if self.kind == GraphKind::Cpdag {
            extension::validate_cpdag(self)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(p={}; ", self.kind, self.p)?;
        let mut first = true;
        for (a, b) in self.directed_edges() {
            if !first {
                f.write_str(", ")?;
            }
            write!(f, "{a}->{b}")?;
            first = false;
        }
        for (a, b) in self.undirected_edges() {
            if !first {
                f.write_str(", ")?;
            }
            write!(f, "{a}--{b}")?;
            first = false;
        }
        f.write_str(")")
    }
}

/// Nodes that lie on, or between, directed cycles; empty iff `m` is acyclic.
///
/// Peels sources and then sinks; whatever survives both passes sits on a cycle or
/// on a path joining two cycles.
pub(crate) fn directed_cycle_nodes(m: &BitMatrix) -> Vec<usize> {
    let p = m.dim();
    let t = m.transpose();
    let peel = |fwd: &BitMatrix, bwd: &BitMatrix, alive: &mut Vec<bool>| {
        let mut indeg: Vec<usize> = (0..p)
            .map(|v| bwd.row_ones(v).filter(|&u| alive[u]).count())
            .collect();
        let mut queue: Vec<usize> = (0..p).filter(|&v| alive[v] && indeg[v] == 0).collect();
        while let Some(v) = queue.pop() {
            alive[v] = false;
            for w in fwd.row_ones(v) {
                if alive[w] {
                    indeg[w] -= 1;
                    if indeg[w] == 0 {
                        queue.push(w);
                    }
                }
            }
        }
    };
    let mut alive = vec![true; p];
    peel(m, &t, &mut alive);
    if alive.iter().all(|a| !a) {
        return Vec::new();
    }
    peel(&t, m, &mut alive);
    (0..p).filter(|&v| alive[v]).collect()
}
