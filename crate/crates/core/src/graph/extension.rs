//! Markov equivalence: completed PDAGs, consistent extensions, local orientation.

use super::chordal::{chain_components, is_chordal, maximum_cardinality_order};
use super::{directed_cycle_nodes, Graph, GraphKind};
use crate::bitmatrix::BitMatrix;
use crate::bitset::NodeSet;
use crate::error::{Result, SidError};

/// Largest chain component whose extensions are enumerated explicitly.
pub const DEFAULT_EXTENSION_CAP: usize = 8;

/// The completed PDAG of the equivalence class of `dag`.
///
/// Starts from the pattern (skeleton plus v-structures) and closes it under
/// Meek's rules R1-R3.
pub fn cpdag_of_dag(dag: &Graph) -> Result<Graph> {
    if dag.kind() != GraphKind::Dag {
        return Err(SidError::KindMismatch {
            expected: "DAG",
            found: dag.kind(),
        });
    }
    Ok(Graph::from_parts_unchecked(
        complete_pattern(dag),
        GraphKind::Cpdag,
    ))
}

fn complete_pattern(dag: &Graph) -> BitMatrix {
    let p = dag.p();
    let mut m = dag.skeleton();
    for (a, b, c) in dag.v_structures() {
        m.set(b, a, false);
        m.set(b, c, false);
    }
    let adjacent = |m: &BitMatrix, x: usize, y: usize| m.get(x, y) || m.get(y, x);
    let directed = |m: &BitMatrix, x: usize, y: usize| m.get(x, y) && !m.get(y, x);
    let undirected = |m: &BitMatrix, x: usize, y: usize| m.get(x, y) && m.get(y, x);
    loop {
        let mut changed = false;
        for x in 0..p {
            for y in 0..p {
                if x == y || !undirected(&m, x, y) {
                    continue;
                }
                // R1: a -> x - y, a and y non-adjacent
                let r1 = (0..p).any(|a| a != y && directed(&m, a, x) && !adjacent(&m, a, y));
                // R2: x -> a -> y
                let r2 = || (0..p).any(|a| directed(&m, x, a) && directed(&m, a, y));
                // R3: x - u, x - w, u -> y <- w, u and w non-adjacent
                let r3 = || {
                    let us: Vec<usize> = (0..p)
                        .filter(|&u| u != y && undirected(&m, x, u) && directed(&m, u, y))
                        .collect();
                    us.iter()
                        .enumerate()
                        .any(|(k, &u)| us[k + 1..].iter().any(|&w| !adjacent(&m, u, w)))
                };
                if r1 || r2() || r3() {
                    m.set(y, x, false);
                    changed = true;
                }
            }
        }
        if !changed {
            return m;
        }
    }
}

/// One consistent extension of a CPDAG: every chain component is oriented along
/// its maximum-cardinality search order.
pub fn canonical_extension(c: &Graph) -> Result<Graph> {
    if c.kind() == GraphKind::Dag {
        return Ok(c.clone());
    }
    let adj = orient_by_mcs(c);
    Graph::new(adj, GraphKind::Dag)
}

fn orient_by_mcs(c: &Graph) -> BitMatrix {
    let mut adj = c.adjacency().clone();
    for comp in chain_components(c) {
        if comp.len() < 2 {
            continue;
        }
        let order = maximum_cardinality_order(c, &comp);
        let mut rank = vec![0usize; c.p()];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        for &v in &order {
            for w in c.undirected_neighbors(v).iter() {
                if rank[w] < rank[v] {
                    adj.set(v, w, false);
                }
            }
        }
    }
    adj
}

pub(super) fn validate_cpdag(c: &Graph) -> Result<()> {
    for comp in chain_components(c) {
        if comp.len() > 2 && !is_chordal(c, &comp) {
            return Err(SidError::Validation {
                kind: GraphKind::Cpdag,
                message: "chain component is not chordal".into(),
                nodes: comp.to_vec(),
            });
        }
    }
    let ext = orient_by_mcs(c);
    let cyclic = directed_cycle_nodes(&ext);
    if !cyclic.is_empty() {
        return Err(SidError::Validation {
            kind: GraphKind::Cpdag,
            message: "no acyclic orientation of the chain components".into(),
            nodes: cyclic,
        });
    }
    let completed = complete_pattern(&Graph::from_parts_unchecked(ext, GraphKind::Dag));
    if &completed != c.adjacency() {
        let nodes = (0..c.p())
            .filter(|&v| completed.row(v) != c.adjacency().row(v))
            .collect();
        return Err(SidError::Validation {
            kind: GraphKind::Cpdag,
            message: "graph is not the completed PDAG of its equivalence class".into(),
            nodes,
        });
    }
    Ok(())
}

/// All orientations of `component`'s undirected edges in `g` that are acyclic and
/// create no new v-structure. Edges outside the component are left as they are.
pub fn enumerate_extensions(g: &Graph, component: &NodeSet) -> Result<Vec<Graph>> {
    enumerate_extensions_with_cap(g, component, DEFAULT_EXTENSION_CAP)
}

pub fn enumerate_extensions_with_cap(
    g: &Graph,
    component: &NodeSet,
    cap: usize,
) -> Result<Vec<Graph>> {
    if component.len() > cap {
        return Err(SidError::ExtensionCapExceeded {
            size: component.len(),
            cap,
        });
    }
    if !is_chordal(g, component) {
        return Err(SidError::Validation {
            kind: g.kind(),
            message: "chain component is not chordal".into(),
            nodes: component.to_vec(),
        });
    }
    let order = maximum_cardinality_order(g, component);
    let mut edges = Vec::new();
    for (r, &v) in order.iter().enumerate() {
        for &u in &order[..r] {
            if g.is_undirected_edge(u, v) {
                edges.push((u, v));
            }
        }
    }
    let mut adj = g.adjacency().clone();
    for &(u, v) in &edges {
        adj.set(u, v, false);
        adj.set(v, u, false);
    }
    let mut search = Search {
        g,
        edges: &edges,
        adj,
        out: Vec::new(),
    };
    search.run(0);
    Ok(search.out)
}

struct Search<'a> {
    g: &'a Graph,
    edges: &'a [(usize, usize)],
    adj: BitMatrix,
    out: Vec<Graph>,
}

impl Search<'_> {
    fn run(&mut self, k: usize) {
        if k == self.edges.len() {
            self.out
                .push(Graph::from_parts_unchecked(self.adj.clone(), self.g.kind()));
            return;
        }
        let (u, v) = self.edges[k];
        for (from, to) in [(u, v), (v, u)] {
            if self.admissible(from, to) {
                self.adj.set(from, to, true);
                self.run(k + 1);
                self.adj.set(from, to, false);
            }
        }
    }

    /// Whether adding `from -> to` keeps the directed part acyclic and creates no
    /// v-structure at `to`.
    fn admissible(&self, from: usize, to: usize) -> bool {
        for w in 0..self.g.p() {
            if w != from && self.adj.get(w, to) && !self.adj.get(to, w) && !self.g.adjacent(w, from)
            {
                return false;
            }
        }
        // a cycle would need a directed path to -> ... -> from
        let mut seen = NodeSet::singleton(self.g.p(), to);
        let mut stack = vec![to];
        while let Some(x) = stack.pop() {
            for y in self.adj.row_ones(x) {
                if self.adj.get(y, x) {
                    continue;
                }
                if y == from {
                    return false;
                }
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        true
    }
}

/// Whether the DAG `g` is a member of the equivalence class represented by `c`.
pub fn is_consistent_extension(c: &Graph, g: &Graph) -> bool {
    if c.p() != g.p() || g.kind() != GraphKind::Dag {
        return false;
    }
    if c.skeleton() != g.skeleton() {
        return false;
    }
    if c.directed_edges().iter().any(|&(a, b)| !g.has_edge(a, b)) {
        return false;
    }
    let mut vc = c.v_structures();
    let mut vg = g.v_structures();
    vc.sort_unstable();
    vg.sort_unstable();
    vc == vg
}
