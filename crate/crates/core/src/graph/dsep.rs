use super::{Graph, GraphKind};
use crate::bitset::NodeSet;
use crate::error::{Result, SidError};

/// d-separation of `a` and `b` given `s` in a DAG.
///
/// Reachability over `(node, arrived-via-head)` states: a collider passes the ball
/// iff it is an ancestor of `s` (reflexively), a non-collider iff it is not in `s`.
pub fn d_separated(g: &Graph, a: &NodeSet, b: &NodeSet, s: &NodeSet) -> Result<bool> {
    if g.kind() != GraphKind::Dag {
        return Err(SidError::KindMismatch {
            expected: "DAG",
            found: g.kind(),
        });
    }
    let p = g.p();
    for set in [a, b, s] {
        if set.universe() != p {
            return Err(SidError::DimensionMismatch {
                left: p,
                right: set.universe(),
            });
        }
    }
    if a.intersects(b) || a.intersects(s) || b.intersects(s) {
        return Err(SidError::Argument(
            "node sets passed to d_separated must be pairwise disjoint".into(),
        ));
    }

    let pm = g.path_matrix();
    let mut opener = NodeSet::empty(p);
    for v in 0..p {
        if pm.row(v).intersects(s) {
            opener.insert(v);
        }
    }

    // visited[0] = reached via tail (came up from a child), visited[1] = via head
    let mut visited = [NodeSet::empty(p), NodeSet::empty(p)];
    let mut stack: Vec<(usize, bool)> = Vec::new();
    for x in a.iter() {
        for w in g.parents(x).iter() {
            stack.push((w, false));
        }
        for w in g.children(x).iter() {
            stack.push((w, true));
        }
    }
    while let Some((v, head)) = stack.pop() {
        if !visited[head as usize].insert(v) {
            continue;
        }
        if b.contains(v) {
            return Ok(false);
        }
        if a.contains(v) {
            continue;
        }
        let blocked = s.contains(v);
        if !blocked {
            for w in g.children(v).iter() {
                stack.push((w, true));
            }
            if !head {
                for w in g.parents(v).iter() {
                    stack.push((w, false));
                }
            }
        }
        if head && opener.contains(v) {
            for w in g.parents(v).iter() {
                stack.push((w, false));
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(p: usize, v: &[usize]) -> NodeSet {
        NodeSet::from_nodes(p, v.iter().copied())
    }

    #[test]
    fn collider_opens_on_conditioning() {
        let g = Graph::dag(3, &[(0, 2), (1, 2)]).unwrap();
        assert!(d_separated(&g, &set(3, &[0]), &set(3, &[1]), &set(3, &[])).unwrap());
        assert!(!d_separated(&g, &set(3, &[0]), &set(3, &[1]), &set(3, &[2])).unwrap());
    }

    #[test]
    fn descendant_of_collider_opens() {
        let g = Graph::dag(4, &[(0, 2), (1, 2), (2, 3)]).unwrap();
        assert!(!d_separated(&g, &set(4, &[0]), &set(4, &[1]), &set(4, &[3])).unwrap());
    }

    #[test]
    fn chain_blocked_by_middle() {
        let g = Graph::dag(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(d_separated(&g, &set(3, &[0]), &set(3, &[2]), &set(3, &[1])).unwrap());
        assert!(!d_separated(&g, &set(3, &[0]), &set(3, &[2]), &set(3, &[])).unwrap());
    }

    #[test]
    fn overlapping_sets_rejected() {
        let g = Graph::empty(3);
        assert!(d_separated(&g, &set(3, &[0]), &set(3, &[0]), &set(3, &[])).is_err());
    }
}
