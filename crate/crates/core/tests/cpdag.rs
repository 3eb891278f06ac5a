mod common;

use common::{all_dags, chain};
use sidkit::cpdag::{sid_cpdag_cpdag_with, sid_dag_cpdag_with};
use sidkit::graph::{
    chain_components, cpdag_of_dag, enumerate_extensions, is_chordal, is_consistent_extension,
};
use sidkit::sim::draw_pair;
use sidkit::sim::Regime;
use sidkit::{
    identifiability_mask, sid, sid_cpdag_cpdag, sid_cpdag_dag, sid_dag_cpdag, BitMatrix,
    BoundsConfig, BoundsKind, Graph, GraphKind, NodeSet, Verdict,
};
use std::collections::{BTreeMap, BTreeSet, HashSet};

type ClassKey = (Vec<bool>, BTreeSet<(usize, usize, usize)>);

/// Markov equivalence classes on `p` nodes keyed by skeleton and v-structures.
fn classes(p: usize) -> Vec<Vec<Graph>> {
    let mut map: BTreeMap<ClassKey, Vec<Graph>> = BTreeMap::new();
    for g in all_dags(p) {
        let sk = g.skeleton();
        let key: Vec<bool> = (0..p * p).map(|k| sk.get(k / p, k % p)).collect();
        let vs: BTreeSet<_> = g.v_structures().into_iter().collect();
        map.entry((key, vs)).or_default().push(g);
    }
    map.into_values().collect()
}

/// Union of a class: edges oriented the same way in every member stay directed.
fn class_union(members: &[Graph]) -> BitMatrix {
    let p = members[0].p();
    let mut m = BitMatrix::zeros(p);
    for g in members {
        for (a, b) in g.directed_edges() {
            m.set(a, b, true);
        }
    }
    m
}

fn config() -> BoundsConfig {
    BoundsConfig::default()
}

// ============================================================================
// Equivalence classes
// ============================================================================

#[test]
fn completed_pdag_matches_class_union() {
    for p in 2..=4 {
        let cls = classes(p);
        for members in &cls {
            let union = class_union(members);
            for g in members {
                let c = cpdag_of_dag(g).unwrap();
                assert_eq!(c.kind(), GraphKind::Cpdag);
                assert_eq!(c.adjacency(), &union, "{g:?}");
            }
        }
        if p == 3 {
            assert_eq!(cls.len(), 11);
        }
        if p == 4 {
            assert_eq!(cls.len(), 185);
        }
    }
}

#[test]
fn extensions_are_exactly_the_class() {
    for p in 2..=4 {
        let dags = all_dags(p);
        for members in classes(p) {
            let c = cpdag_of_dag(&members[0]).unwrap();
            let mut count = 1;
            for comp in chain_components(&c).iter().filter(|s| s.len() > 1) {
                count *= enumerate_extensions(&c, comp).unwrap().len();
            }
            assert_eq!(count, members.len(), "{c:?}");
            for x in &dags {
                assert_eq!(is_consistent_extension(&c, x), members.contains(x));
            }
        }
    }
}

/// Acyclic orientations of an undirected graph that add no v-structure.
fn count_orientations(p: usize, edges: &[(usize, usize)]) -> usize {
    let mut n = 0;
    for mask in 0u32..(1 << edges.len()) {
        let oriented: Vec<_> = edges
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| if mask >> k & 1 == 1 { (a, b) } else { (b, a) })
            .collect();
        if let Ok(g) = Graph::dag(p, &oriented) {
            if g.v_structures().is_empty() {
                n += 1;
            }
        }
    }
    n
}

#[test]
fn extension_counts_on_connected_chordal_graphs() {
    let p = 5;
    let pairs: Vec<(usize, usize)> = (0..p)
        .flat_map(|a| (a + 1..p).map(move |b| (a, b)))
        .collect();
    let mut chordal = 0;
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<_> = (0..pairs.len())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| pairs[k])
            .collect();
        let g = Graph::from_edges(p, &[], &edges, GraphKind::Pdag).unwrap();
        let comps = chain_components(&g);
        if comps.len() != 1 {
            continue;
        }
        let all = NodeSet::full(p);
        match enumerate_extensions(&g, &all) {
            Ok(xs) => {
                chordal += 1;
                assert_eq!(xs.len(), count_orientations(p, &edges), "{g:?}");
                let distinct: BTreeSet<Vec<(usize, usize)>> =
                    xs.iter().map(|x| x.directed_edges()).collect();
                assert_eq!(distinct.len(), xs.len());
            }
            Err(_) => {
                assert!(!is_chordal(&g, &all));
                assert_eq!(count_orientations(p, &edges), 0);
            }
        }
    }
    // connected chordal graphs on five labelled nodes
    assert_eq!(chordal, 541);
}

// ============================================================================
// Bounds
// ============================================================================

#[test]
fn chain_against_its_class() {
    for p in [3, 5, 10] {
        let g = chain(p);
        let c = cpdag_of_dag(&g).unwrap();
        let b = sid_dag_cpdag(&g, &c).unwrap();
        assert_eq!((b.lower, b.upper), (0, p * (p - 1)), "p={p}");
        let wide = BoundsConfig {
            extension_cap: 10,
            ..config()
        };
        let b = sid_dag_cpdag_with(&g, &c, wide).unwrap();
        assert_eq!(
            (b.lower, b.upper, b.kind),
            (0, p * (p - 1), BoundsKind::Attained)
        );
    }
}

struct Exhaustive {
    bracket: usize,
    pairs: usize,
    lower_matches: usize,
    upper_matches: usize,
}

fn exhaustive(p: usize) -> Exhaustive {
    let dags = all_dags(p);
    let cls = classes(p);
    let total = p * (p - 1);
    let mut out = Exhaustive {
        bracket: 0,
        pairs: 0,
        lower_matches: 0,
        upper_matches: 0,
    };
    for members in &cls {
        let c = cpdag_of_dag(&members[0]).unwrap();
        for g in &dags {
            let b = sid_dag_cpdag(g, &c).unwrap();
            assert_eq!(b.kind, BoundsKind::Attained);
            let reports: Vec<_> = members.iter().map(|x| sid(g, x).unwrap()).collect();
            let lo = reports.iter().map(|r| r.total).min().unwrap();
            let hi = reports.iter().map(|r| r.total).max().unwrap();
            out.pairs += 1;
            if (b.lower, b.upper) == (lo, hi) {
                out.bracket += 1;
            }
            let mut always_false = 0;
            let mut always_correct = 0;
            for i in 0..p {
                for j in (0..p).filter(|&j| j != i) {
                    let vs: HashSet<_> = reports.iter().map(|r| r.verdict(i, j)).collect();
                    if vs == HashSet::from([Verdict::False]) {
                        always_false += 1;
                    }
                    if vs == HashSet::from([Verdict::Correct]) {
                        always_correct += 1;
                    }
                }
            }
            assert!(b.lower >= always_false, "{g:?} {c:?}");
            assert!(total - b.upper >= always_correct, "{g:?} {c:?}");
            if b.lower == always_false {
                out.lower_matches += 1;
            }
            if total - b.upper == always_correct {
                out.upper_matches += 1;
            }
        }
    }
    out
}

#[test]
fn bounds_are_attained_by_extensions() {
    for p in 2..=4 {
        let e = exhaustive(p);
        assert_eq!(e.bracket, e.pairs, "p={p}");
    }
}

/// Pairs false in every member never outnumber the class minimum, and pairs correct
/// in every member never outnumber `p(p-1) - upper`.
#[test]
fn bounds_dominate_always_false_and_always_correct_counts() {
    for p in 2..=4 {
        let e = exhaustive(p);
        assert!(e.lower_matches <= e.pairs && e.upper_matches <= e.pairs);
    }
}

#[test]
#[ignore = "equality fails on 18 of 275 truth/class pairs at p = 3; see swapped_false_pairs"]
fn bounds_equal_always_false_and_always_correct_counts() {
    for p in 2..=4 {
        let e = exhaustive(p);
        assert_eq!(e.lower_matches, e.pairs, "p={p}: lower");
        assert_eq!(e.upper_matches, e.pairs, "p={p}: upper");
    }
}

/// Both members of the class score 3 but disagree on which of (0,1), (1,0) is false,
/// so the minimum exceeds the number of pairs false in every member.
#[test]
fn swapped_false_pairs() {
    let g = Graph::dag(3, &[(2, 0), (2, 1)]).unwrap();
    let c = Graph::from_edges(3, &[], &[(0, 1)], GraphKind::Cpdag).unwrap();
    let b = sid_dag_cpdag(&g, &c).unwrap();
    assert_eq!((b.lower, b.upper), (3, 3));
    let x = sid(&g, &Graph::dag(3, &[(0, 1)]).unwrap()).unwrap();
    let y = sid(&g, &Graph::dag(3, &[(1, 0)]).unwrap()).unwrap();
    assert_eq!(
        (x.verdict(0, 1), y.verdict(0, 1)),
        (Verdict::False, Verdict::Correct)
    );
    assert_eq!(
        (x.verdict(1, 0), y.verdict(1, 0)),
        (Verdict::Correct, Verdict::False)
    );
    let always_false = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            i != j && x.verdict(i, j) == Verdict::False && y.verdict(i, j) == Verdict::False
        })
        .count();
    assert_eq!(always_false, 2);
}

#[test]
fn fallback_brackets_the_class() {
    let cfg = BoundsConfig {
        extension_cap: 1,
        ..config()
    };
    for p in 3..=4 {
        let dags = all_dags(p);
        for members in classes(p) {
            let c = cpdag_of_dag(&members[0]).unwrap();
            for g in dags.iter().step_by(7) {
                let b = sid_dag_cpdag_with(g, &c, cfg).unwrap();
                let exact = sid_dag_cpdag(g, &c).unwrap();
                assert!(b.lower <= exact.lower && exact.upper <= b.upper);
                if chain_components(&c).iter().any(|s| s.len() > 1) {
                    assert_eq!(b.kind, BoundsKind::PerNode);
                    assert!(!b.warnings.is_empty());
                }
            }
        }
    }
}

// ============================================================================
// Identifiability
// ============================================================================

#[test]
fn identifiable_verdicts_do_not_depend_on_the_extension() {
    for p in 2..=4 {
        let dags = all_dags(p);
        for members in classes(p) {
            let c = cpdag_of_dag(&members[0]).unwrap();
            let mask = identifiability_mask(&c);
            for h in &dags {
                let reports: Vec<_> = members.iter().map(|x| sid(x, h).unwrap()).collect();
                let fast = sid_cpdag_dag(&c, h).unwrap();
                for i in 0..p {
                    for j in (0..p).filter(|&j| j != i) {
                        if !mask.is_identifiable(i, j) {
                            assert_eq!(fast.verdict(i, j), Verdict::Excluded);
                            continue;
                        }
                        let v = reports[0].verdict(i, j);
                        assert!(
                            reports.iter().all(|r| r.verdict(i, j) == v),
                            "{c:?} {h:?} ({i},{j})"
                        );
                        assert_eq!(fast.verdict(i, j), v);
                    }
                }
            }
        }
    }
}

/// Simple paths from `i` to `j` that start with an undirected edge and never use
/// an edge pointing back towards `i`.
fn possibly_directed_from_undirected(c: &Graph, i: usize, j: usize) -> bool {
    fn walk(c: &Graph, v: usize, j: usize, seen: &mut Vec<bool>) -> bool {
        if v == j {
            return true;
        }
        for w in 0..c.p() {
            if !seen[w] && c.adjacency().get(v, w) {
                seen[w] = true;
                if walk(c, w, j, seen) {
                    return true;
                }
                seen[w] = false;
            }
        }
        false
    }
    let mut seen = vec![false; c.p()];
    seen[i] = true;
    c.undirected_neighbors(i).iter().any(|n| {
        seen[n] = true;
        let hit = walk(c, n, j, &mut seen);
        seen[n] = false;
        hit
    })
}

#[test]
fn mask_matches_path_enumeration() {
    for p in 2..=5 {
        let cls = if p < 5 {
            classes(p)
        } else {
            all_dags(5)
                .into_iter()
                .step_by(11)
                .map(|g| vec![g])
                .collect()
        };
        for members in cls {
            let c = cpdag_of_dag(&members[0]).unwrap();
            let mask = identifiability_mask(&c);
            for i in 0..p {
                for j in (0..p).filter(|&j| j != i) {
                    assert_eq!(
                        mask.is_identifiable(i, j),
                        !possibly_directed_from_undirected(&c, i, j),
                        "{c:?} ({i},{j})"
                    );
                }
            }
        }
    }
}

#[test]
fn mask_examples() {
    let e = Graph::from_edges(2, &[], &[(0, 1)], GraphKind::Cpdag).unwrap();
    assert_eq!(identifiability_mask(&e).count(), 0);
    let c = Graph::from_edges(3, &[], &[(0, 1), (1, 2)], GraphKind::Cpdag).unwrap();
    assert_eq!(identifiability_mask(&c).count(), 0);
    let v = cpdag_of_dag(&Graph::dag(3, &[(0, 2), (1, 2)]).unwrap()).unwrap();
    assert_eq!(identifiability_mask(&v).count(), 6);
}

// ============================================================================
// Reductions
// ============================================================================

#[test]
fn class_of_the_estimate_scores_zero() {
    for h in all_dags(4) {
        let c = cpdag_of_dag(&h).unwrap();
        assert_eq!(sid_cpdag_dag(&c, &h).unwrap().total, 0, "{h:?}");
    }
}

#[test]
fn directed_class_reduces_to_dag_case() {
    let mut seen = 0;
    for k in 0..400 {
        let (g, h, _) = draw_pair(13, k, 6, Regime::Dense).unwrap();
        let c = cpdag_of_dag(&g).unwrap();
        if !c.undirected_edges().is_empty() {
            continue;
        }
        seen += 1;
        assert_eq!(
            sid_cpdag_dag(&c, &h).unwrap().total,
            sid(&g, &h).unwrap().total
        );
        let d = cpdag_of_dag(&h).unwrap();
        let b = sid_cpdag_cpdag(&c, &d).unwrap();
        let direct = sid_dag_cpdag(&g, &d).unwrap();
        assert_eq!((b.lower, b.upper), (direct.lower, direct.upper));
    }
    assert!(seen > 10, "{seen}");
}

#[test]
fn class_versus_class_is_attained() {
    let cls = classes(3);
    for a in &cls {
        let c = cpdag_of_dag(&a[0]).unwrap();
        for b in &cls {
            let d = cpdag_of_dag(&b[0]).unwrap();
            let bounds = sid_cpdag_cpdag(&c, &d).unwrap();
            let totals: Vec<usize> = b
                .iter()
                .map(|x| sid_cpdag_dag(&c, x).unwrap().total)
                .collect();
            assert_eq!(bounds.lower, *totals.iter().min().unwrap());
            assert_eq!(bounds.upper, *totals.iter().max().unwrap());
            if a == b {
                assert_eq!(bounds.lower, 0);
            }
        }
    }
    let g = chain(4);
    let seq = BoundsConfig {
        execution: sidkit::Execution::Sequential,
        ..config()
    };
    let c = cpdag_of_dag(&g).unwrap();
    assert_eq!(sid_cpdag_cpdag_with(&c, &c, seq).unwrap().upper, 0);
}
