//! Structural intervention distance (SID) between causal graphs.
//!
//! The SID counts ordered node pairs `(i, j)` for which an estimated graph `H`
//! predicts the intervention distribution of `X_j` under `do(X_i)` wrongly when the
//! true graph is `G`, using the parents of `i` in `H` as the adjustment set. Along with
//! it the crate provides the structural Hamming distance, the edge-count difference,
//! a symmetrized SID, bounds for Markov equivalence classes, slow reference oracles and
//! a seeded simulation harness.
//!
//! ```
//! use sidkit::{sid, shd, Graph};
//!
//! // X1 -> X2, both into Y1..Y3; the estimate reverses X1 -> X2.
//! let g = Graph::dag(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
//! let h = Graph::dag(5, &[(1, 0), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
//! assert_eq!(shd(&g, &h).unwrap(), 1);
//! assert_eq!(sid(&g, &h).unwrap().total, 8);
//! ```

pub mod adjustment;
pub mod bitmatrix;
pub mod bitset;
pub mod cpdag;
pub mod distances;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod par;
pub mod sim;

pub use adjustment::{reachable_on_non_directed_path, satisfies_star, StarVerdict, ViolatedPart};
pub use bitmatrix::BitMatrix;
pub use bitset::NodeSet;
pub use cpdag::{
    identifiability_mask, sid_cpdag_cpdag, sid_cpdag_dag, sid_dag_cpdag, sid_dag_pdag_fallback,
    BoundsConfig, BoundsKind, IdentifiabilityMask, SidBounds,
};
pub use distances::{
    dne, shd, sid, sid_symmetric, sid_with, HalfUnits, SidOptions, SidReport, Verdict,
};
pub use error::{Result, SidError};
pub use graph::io::{parse_graph, serialize_graph, Format};
pub use graph::{EdgeType, Graph, GraphKind, Relation};
pub use par::Execution;
