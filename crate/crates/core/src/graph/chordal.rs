use super::Graph;
use crate::bitset::NodeSet;

/// Maximal node sets connected by undirected edges, ordered by their smallest member.
///
/// Nodes without an incident undirected edge form singleton components.
pub fn chain_components(g: &Graph) -> Vec<NodeSet> {
    let p = g.p();
    let mut seen = NodeSet::empty(p);
    let mut out = Vec::new();
    for start in 0..p {
        if seen.contains(start) {
            continue;
        }
        let mut comp = NodeSet::singleton(p, start);
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in g.undirected_neighbors(v).iter() {
                if seen.insert(w) {
                    comp.insert(w);
                    stack.push(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Maximum-cardinality search over the undirected edges inside `component`.
///
/// Returns the visit order. Ties are broken by the smallest node id, so the order
/// is deterministic.
pub fn maximum_cardinality_order(g: &Graph, component: &NodeSet) -> Vec<usize> {
    let nodes = component.to_vec();
    let mut weight = vec![0usize; g.p()];
    let mut visited = NodeSet::empty(g.p());
    let mut order = Vec::with_capacity(nodes.len());
    for _ in 0..nodes.len() {
        let v = nodes
            .iter()
            .copied()
            .filter(|&v| !visited.contains(v))
            .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
            .expect("unvisited node remains");
        visited.insert(v);
        order.push(v);
        let mut nb = g.undirected_neighbors(v);
        nb.intersect_with(component);
        for w in nb.iter() {
            if !visited.contains(w) {
                weight[w] += 1;
            }
        }
    }
    order
}

/// Whether the undirected subgraph induced on `component` is chordal.
///
/// The reverse of a maximum-cardinality search order is a perfect elimination
/// ordering iff the graph is chordal. For each vertex `v`, let `f` be its most
/// recently visited earlier neighbour; every other earlier neighbour of `v` must
/// be adjacent to `f`.
pub fn is_chordal(g: &Graph, component: &NodeSet) -> bool {
    let order = maximum_cardinality_order(g, component);
    let mut rank = vec![usize::MAX; g.p()];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    for &v in &order {
        let mut earlier: Vec<usize> = g
            .undirected_neighbors(v)
            .iter()
            .filter(|&w| component.contains(w) && rank[w] < rank[v])
            .collect();
        let Some(pos) = earlier
            .iter()
            .enumerate()
            .max_by_key(|(_, &w)| rank[w])
            .map(|(k, _)| k)
        else {
            continue;
        };
        let f = earlier.swap_remove(pos);
        let nf = g.undirected_neighbors(f);
        if earlier.iter().any(|&w| !nf.contains(w)) {
            return false;
        }
    }
    true
}
