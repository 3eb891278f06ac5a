#![allow(dead_code)]

use sidkit::{BitMatrix, Graph, GraphKind, NodeSet};

/// Every DAG on `p` labelled nodes.
pub fn all_dags(p: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..p)
        .flat_map(|a| (a + 1..p).map(move |b| (a, b)))
        .collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut adj = BitMatrix::zeros(p);
        for &(a, b) in &pairs {
            match code % 3 {
                1 => adj.set(a, b, true),
                2 => adj.set(b, a, true),
                _ => {}
            }
            code /= 3;
        }
        if let Ok(g) = Graph::new(adj, GraphKind::Dag) {
            out.push(g);
        }
    }
    out
}

/// All subsets of `nodes` as node sets over `0..p`.
pub fn subsets(p: usize, nodes: &[usize]) -> Vec<NodeSet> {
    (0u32..(1 << nodes.len()))
        .map(|m| {
            NodeSet::from_nodes(
                p,
                (0..nodes.len())
                    .filter(|b| m >> b & 1 == 1)
                    .map(|b| nodes[b]),
            )
        })
        .collect()
}

pub fn example_g() -> Graph {
    Graph::dag(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap()
}

pub fn example_h1() -> Graph {
    Graph::dag(
        5,
        &[
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (1, 2),
            (1, 3),
            (1, 4),
            (2, 3),
        ],
    )
    .unwrap()
}

pub fn example_h2() -> Graph {
    Graph::dag(5, &[(1, 0), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap()
}

pub mod confounded {
    use sidkit::Graph;

    pub const Q: usize = 0;
    pub const P: usize = 1;
    pub const X: usize = 2;
    pub const A: usize = 3;
    pub const B: usize = 4;
    pub const W: usize = 5;
    pub const Y: usize = 6;

    pub fn graph() -> Graph {
        Graph::dag(7, &[(Q, X), (P, X), (P, Y), (X, A), (X, B), (B, W), (B, Y)]).unwrap()
    }
}

/// X1 -> X2 with both pointing into Y_1..Y_{p-2}; `reversed` flips X1 -> X2.
pub fn fanout(p: usize, reversed: bool) -> Graph {
    let mut edges = vec![if reversed { (1, 0) } else { (0, 1) }];
    for y in 2..p {
        edges.push((0, y));
        edges.push((1, y));
    }
    Graph::dag(p, &edges).unwrap()
}

pub fn chain(p: usize) -> Graph {
    let edges: Vec<_> = (0..p - 1).map(|v| (v, v + 1)).collect();
    Graph::dag(p, &edges).unwrap()
}

/// Reflexive descendants by depth-first search.
pub fn reach(g: &Graph, s: usize) -> NodeSet {
    let mut seen = NodeSet::singleton(g.p(), s);
    let mut stack = vec![s];
    while let Some(v) = stack.pop() {
        for w in 0..g.p() {
            if g.is_directed_edge(v, w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}
