mod common;

use common::{all_dags, chain, example_g, example_h1, example_h2, fanout};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sidkit::oracle::sid_bruteforce;
use sidkit::sim::{draw_pair, random_dag_from, Regime};
use sidkit::{
    dne, shd, sid, sid_symmetric, sid_with, BitMatrix, Execution, Graph, GraphKind, HalfUnits,
    SidOptions,
};

#[test]
fn dag_counts() {
    assert_eq!(all_dags(3).len(), 25);
    assert_eq!(all_dags(4).len(), 543);
}

// ============================================================================
// Example pair
// ============================================================================

#[test]
fn example_values() {
    let (g, h1, h2) = (example_g(), example_h1(), example_h2());
    assert_eq!(sid(&g, &h1).unwrap().total, 0);
    assert_eq!(sid(&g, &h2).unwrap().total, 8);
    assert_eq!(sid_bruteforce(&g, &h1).unwrap(), 0);
    assert_eq!(sid_bruteforce(&g, &h2).unwrap(), 8);
    assert_eq!((shd(&g, &h1).unwrap(), shd(&g, &h2).unwrap()), (1, 1));
    assert_eq!((dne(&g, &h1).unwrap(), dne(&g, &h2).unwrap()), (1, 0));
    let back = sid(&h2, &g).unwrap().total;
    assert_eq!(sid_symmetric(&g, &h2).unwrap(), HalfUnits(8 + back));
}

// ============================================================================
// Oracle equivalence
// ============================================================================

#[test]
fn exhaustive_three_node_pairs_match_oracle() {
    let dags = all_dags(3);
    for g in &dags {
        for h in &dags {
            assert_eq!(
                sid(g, h).unwrap().total,
                sid_bruteforce(g, h).unwrap(),
                "{g:?} {h:?}"
            );
        }
    }
}

#[test]
fn random_pairs_match_oracle() {
    let mut n = 0;
    for p in 4..=6 {
        for regime in [Regime::Sparse, Regime::Dense] {
            for k in 0..100 {
                let (g, h, _) = draw_pair(2024, k, p, regime).unwrap();
                assert_eq!(
                    sid(&g, &h).unwrap().total,
                    sid_bruteforce(&g, &h).unwrap(),
                    "{g:?} {h:?}"
                );
                n += 1;
            }
        }
    }
    assert!(n >= 500);
}

#[test]
fn shortcuts_are_neutral() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..400 {
        let p = rng.gen_range(2..9);
        let g = random_dag_from(&mut rng, p, 0.5);
        // half of the estimates share most parent sets with the truth
        let h = if rng.gen_bool(0.5) {
            perturb(&g, &mut rng)
        } else {
            random_dag_from(&mut rng, p, 0.5)
        };
        let with = sid_with(
            &g,
            &h,
            SidOptions {
                shortcuts: true,
                execution: Execution::Sequential,
            },
        )
        .unwrap();
        let without = sid_with(
            &g,
            &h,
            SidOptions {
                shortcuts: false,
                execution: Execution::Parallel,
            },
        )
        .unwrap();
        assert_eq!(with, without);
    }
}

fn perturb(g: &Graph, rng: &mut ChaCha8Rng) -> Graph {
    let p = g.p();
    loop {
        let a = rng.gen_range(0..p);
        let b = rng.gen_range(0..p);
        if a == b {
            continue;
        }
        let mut adj = g.adjacency().clone();
        let had = adj.get(a, b);
        adj.set(a, b, !had);
        if let Ok(h) = Graph::new(adj, GraphKind::Dag) {
            return h;
        }
    }
}

// ============================================================================
// Zero distance and the edge-count identity
// ============================================================================

#[test]
fn zero_sid_iff_subgraph_on_three_nodes() {
    let dags = all_dags(3);
    for g in &dags {
        for h in &dags {
            let s = sid(g, h).unwrap().total;
            assert_eq!(s == 0, g.is_subgraph_of(h), "{g:?} {h:?}");
            let d = dne(g, h).unwrap();
            assert_eq!(g == h, s == 0 && d == 0);
            assert!(s <= 6);
        }
    }
}

// ============================================================================
// Relation to SHD
// ============================================================================

#[test]
fn zero_shd_gives_zero_sid() {
    for k in 0..200 {
        let (g, _, _) = draw_pair(3, k, 7, Regime::Dense).unwrap();
        let h = g.clone();
        assert_eq!(shd(&g, &h).unwrap(), 0);
        assert_eq!(sid(&g, &h).unwrap().total, 0);
    }
}

#[test]
fn single_edit_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut n = 0;
    while n < 1500 {
        let p = rng.gen_range(3..10);
        let q = rng.gen_range(0.1..0.7);
        let g = random_dag_from(&mut rng, p, q);
        let h = perturb(&g, &mut rng);
        if shd(&g, &h).unwrap() != 1 {
            continue;
        }
        assert!(sid(&g, &h).unwrap().total <= 2 * (p - 1), "{g:?} {h:?}");
        n += 1;
    }
}

#[test]
fn single_edit_bound_is_sharp() {
    for p in [4, 5, 10, 17] {
        let (g, h) = (fanout(p, false), fanout(p, true));
        assert_eq!(shd(&g, &h).unwrap(), 1);
        assert_eq!(sid(&g, &h).unwrap().total, 2 * (p - 1), "p={p}");
    }
}

#[test]
fn empty_versus_complete() {
    for p in [2, 5, 9] {
        let mut adj = BitMatrix::zeros(p);
        for a in 0..p {
            for b in a + 1..p {
                adj.set(a, b, true);
            }
        }
        let full = Graph::new(adj, GraphKind::Dag).unwrap();
        let empty = Graph::empty(p);
        assert_eq!(sid(&empty, &full).unwrap().total, 0);
        assert_eq!(shd(&empty, &full).unwrap(), p * (p - 1) / 2);
        // every node but the source has an open back-door path to every other node
        assert_eq!(sid(&full, &empty).unwrap().total, (p - 1) * (p - 1));
        if p <= 5 {
            assert_eq!(sid_bruteforce(&full, &empty).unwrap(), (p - 1) * (p - 1));
        }
    }
}

#[test]
fn reversed_chain_is_maximal() {
    for p in [3, 8, 20] {
        let g = chain(p);
        let edges: Vec<_> = (0..p - 1).map(|v| (v + 1, v)).collect();
        let h = Graph::dag(p, &edges).unwrap();
        assert_eq!(sid(&g, &h).unwrap().total, p * (p - 1));
    }
}

#[test]
fn range_on_random_pairs() {
    for k in 0..300 {
        let (g, h, _) = draw_pair(77, k, 12, Regime::Dense).unwrap();
        let r = sid(&g, &h).unwrap();
        assert!(r.total <= 12 * 11);
        assert_eq!(r.total, r.row_counts().iter().sum::<usize>());
        assert_eq!(shd(&g, &h).unwrap(), shd(&h, &g).unwrap());
    }
}

#[test]
fn wide_graphs_cross_word_boundaries() {
    for k in 0..3 {
        let (g, h, _) = draw_pair(9, k, 90, Regime::Sparse).unwrap();
        let seq = sid_with(
            &g,
            &h,
            SidOptions {
                shortcuts: true,
                execution: Execution::Sequential,
            },
        )
        .unwrap();
        let par = sid_with(
            &g,
            &h,
            SidOptions {
                shortcuts: false,
                execution: Execution::Parallel,
            },
        )
        .unwrap();
        assert_eq!(seq, par);
        assert_eq!(sid(&g, &g).unwrap().total, 0);
    }
}
