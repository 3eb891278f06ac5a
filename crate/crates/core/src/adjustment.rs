//! Graphical test for valid adjustment sets.
//!
//! A set `Z` (with `i, j ∉ Z`) is a valid adjustment set for `X_j | do(X_i)` iff
//!
//! 1. no member of `Z` is a descendant (reflexively) of a node `W ≠ i` lying on a
//!    directed path from `i` to `j`, and
//! 2. `Z` blocks every path between `i` and `j` that is not directed from `i` to `j`.
//!
//! Part 1 reads straight off the reflexive path matrix. Part 2 is answered for all
//! targets `j` at once by a reachability search over `(node, arrival)` states.
//!
//! # Walks instead of paths
//!
//! The search follows walks, so it can report a node that is only connected to `i`
//! through a walk revisiting a vertex. Every node reported that way also violates
//! part 1, which is why the combined verdict of [`satisfies_star`] is exact even
//! though [`reachable_on_non_directed_path`] on its own is a superset of the nodes
//! joined to `i` by an open non-directed simple path.

use crate::bitmatrix::BitMatrix;
use crate::bitset::NodeSet;
use crate::error::{Result, SidError};
use crate::graph::{Graph, GraphKind};

/// How the search arrived at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arrival {
    /// Along an edge pointing into the node.
    Head,
    /// Along an edge leaving the node.
    Tail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReachState {
    pub node: usize,
    pub arrival: Arrival,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolatedPart {
    /// A member of `Z` descends from a node on a causal path.
    DescendantOfCausalNode,
    /// A non-directed path stays open given `Z`.
    UnblockedNonDirectedPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarVerdict {
    pub satisfied: bool,
    pub violated_part: Option<ViolatedPart>,
}

impl StarVerdict {
    const OK: StarVerdict = StarVerdict {
        satisfied: true,
        violated_part: None,
    };

    fn violated(part: ViolatedPart) -> Self {
        StarVerdict {
            satisfied: false,
            violated_part: Some(part),
        }
    }
}

/// Path matrix of `g` after deleting every edge that leaves a node of `z`.
pub fn blocked_path_matrix(g: &Graph, z: &NodeSet) -> BitMatrix {
    let mut m = g.directed_part();
    for v in z.iter() {
        m.clear_row(v);
    }
    m.reflexive_closure()
}

/// Nodes `j ≠ i` reachable from `i` along a walk that is not directed from `i` and
/// is open given `z` (colliders must be ancestors of `z`, other inner nodes must lie
/// outside `z`).
///
/// `closure` is `g.path_matrix()` and `closure_blocked` is
/// [`blocked_path_matrix`]`(g, z)`.
pub fn reachable_on_non_directed_path(
    g: &Graph,
    i: usize,
    z: &NodeSet,
    closure: &BitMatrix,
    closure_blocked: &BitMatrix,
) -> NodeSet {
    let opener = openers(closure, z);
    let run = closure_blocked.row(i);
    walk_from(g, i, z, &opener, &run)
}

/// Reflexive ancestors of `z`: nodes whose path-matrix row meets `z`.
fn openers(closure: &BitMatrix, z: &NodeSet) -> NodeSet {
    let p = closure.dim();
    let mut a = NodeSet::empty(p);
    for v in 0..p {
        if closure.row(v).intersects(z) {
            a.insert(v);
        }
    }
    a
}

/// Two-phase search.
///
/// Phase one is `run`: nodes reached from `i` by directed paths whose inner nodes
/// avoid `z`. A walk leaving `i` forward turns non-directed at its first collider,
/// which must be a run node in `opener`; from there it continues backwards into that
/// collider's other parents. Walks leaving `i` backwards start at the parents of `i`.
/// Phase two is an ordinary open-walk search in `g` with `i` deleted.
fn walk_from(g: &Graph, i: usize, z: &NodeSet, opener: &NodeSet, run: &NodeSet) -> NodeSet {
    let p = g.p();
    let mut stack: Vec<ReachState> = Vec::new();
    let tail = |node| ReachState {
        node,
        arrival: Arrival::Tail,
    };
    for a in g.parents(i).iter() {
        stack.push(tail(a));
    }
    for k in run.iter() {
        if k != i && opener.contains(k) {
            for m in g.parents(k).iter() {
                if m != i {
                    stack.push(tail(m));
                }
            }
        }
    }

    let mut seen = [NodeSet::empty(p), NodeSet::empty(p)];
    let mut reached = NodeSet::empty(p);
    while let Some(s) = stack.pop() {
        let slot = s.arrival as usize;
        if !seen[slot].insert(s.node) {
            continue;
        }
        let v = s.node;
        reached.insert(v);
        let pass = !z.contains(v);
        let up = match s.arrival {
            Arrival::Tail => pass,
            Arrival::Head => opener.contains(v),
        };
        if pass {
            for w in g.children(v).iter() {
                if w != i && !seen[Arrival::Head as usize].contains(w) {
                    stack.push(ReachState {
                        node: w,
                        arrival: Arrival::Head,
                    });
                }
            }
        }
        if up {
            for w in g.parents(v).iter() {
                if w != i && !seen[Arrival::Tail as usize].contains(w) {
                    stack.push(tail(w));
                }
            }
        }
    }
    reached.remove(i);
    reached
}

/// Condition (*) for the triple `(i, j, z)` in the DAG `g`.
pub fn satisfies_star(g: &Graph, i: usize, j: usize, z: &NodeSet) -> Result<StarVerdict> {
    check_triple(g, i, j, z)?;
    let ctx = TruthContext::new(g);
    if ctx.part1_failures(i, z).contains(j) {
        return Ok(StarVerdict::violated(ViolatedPart::DescendantOfCausalNode));
    }
    if ctx.non_directed_reach(i, z).contains(j) {
        return Ok(StarVerdict::violated(
            ViolatedPart::UnblockedNonDirectedPath,
        ));
    }
    Ok(StarVerdict::OK)
}

pub(crate) fn check_triple(g: &Graph, i: usize, j: usize, z: &NodeSet) -> Result<()> {
    if g.kind() != GraphKind::Dag {
        return Err(SidError::KindMismatch {
            expected: "DAG",
            found: g.kind(),
        });
    }
    let p = g.p();
    if i >= p || j >= p || z.universe() != p {
        return Err(SidError::Argument(format!(
            "nodes ({i}, {j}) or adjustment set outside a {p}-node graph"
        )));
    }
    if i == j {
        return Err(SidError::Argument(
            "intervention and target coincide".into(),
        ));
    }
    if z.contains(i) || z.contains(j) {
        return Err(SidError::Argument(
            "adjustment set must not contain the intervention or the target node".into(),
        ));
    }
    Ok(())
}

/// Precomputed structure of a true DAG, shared by every source node.
pub(crate) struct TruthContext<'a> {
    g: &'a Graph,
    closure: BitMatrix,
}

impl<'a> TruthContext<'a> {
    pub(crate) fn new(g: &'a Graph) -> Self {
        TruthContext {
            g,
            closure: g.path_matrix(),
        }
    }

    /// Targets `j` for which part 1 fails: descendants of children of `i` that
    /// have a member of `z` below them.
    pub(crate) fn part1_failures(&self, i: usize, z: &NodeSet) -> NodeSet {
        let mut out = NodeSet::empty(self.g.p());
        for c in self.g.children(i).iter() {
            let row = self.closure.row(c);
            if row.intersects(z) {
                out.union_with(&row);
            }
        }
        out
    }

    /// Row `i` of the blocked path matrix, by a directed search that does not
    /// leave nodes of `z`.
    fn blocked_run(&self, i: usize, z: &NodeSet) -> NodeSet {
        let mut run = NodeSet::singleton(self.g.p(), i);
        let mut stack = vec![i];
        while let Some(v) = stack.pop() {
            if v != i && z.contains(v) {
                continue;
            }
            for w in self.g.children(v).iter() {
                if run.insert(w) {
                    stack.push(w);
                }
            }
        }
        run
    }

    pub(crate) fn non_directed_reach(&self, i: usize, z: &NodeSet) -> NodeSet {
        let opener = openers(&self.closure, z);
        let run = self.blocked_run(i, z);
        walk_from(self.g, i, z, &opener, &run)
    }

    /// Targets `j ∉ z ∪ {i}` for which `z` violates condition (*).
    pub(crate) fn star_failures(&self, i: usize, z: &NodeSet) -> NodeSet {
        let mut bad = self.part1_failures(i, z);
        bad.union_with(&self.non_directed_reach(i, z));
        bad.difference_with(z);
        bad.remove(i);
        bad
    }

    /// Targets `j ≠ i` whose intervention distribution is inferred falsely when
    /// `pa` is used as the parent set of `i`.
    ///
    /// With `shortcuts`, a parent set equal to the true one skips the search.
    pub(crate) fn false_targets(&self, i: usize, pa: &NodeSet, shortcuts: bool) -> NodeSet {
        let mut out = self.closure.row(i);
        out.intersect_with(pa);
        out.remove(i);
        if shortcuts && *pa == self.g.parents(i) {
            return out;
        }
        out.union_with(&self.star_failures(i, pa));
        out
    }
}
