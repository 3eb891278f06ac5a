//! Slow reference implementations.
//!
//! The path-based checks enumerate every simple path explicitly and apply the
//! blocking rules literally. They share no code with the fast kernels apart from the
//! graph type. The linear-Gaussian part computes exact causal effects from a
//! structural equation model.

use crate::bitset::NodeSet;
use crate::error::{Result, SidError};
use crate::graph::{Graph, GraphKind};
use nalgebra::DMatrix;

/// Largest graph the path oracles accept.
pub const ORACLE_MAX_NODES: usize = 12;
/// Most simple paths the path oracles will enumerate in one call.
pub const ORACLE_MAX_PATHS: usize = 1_000_000;
/// Condition number above which an adjustment system counts as singular.
pub const MAX_CONDITION: f64 = 1e12;
/// Default tolerance when comparing causal effects.
pub const EFFECT_TOLERANCE: f64 = 1e-8;

fn check_cap(g: &Graph) -> Result<()> {
    if g.kind() != GraphKind::Dag {
        return Err(SidError::KindMismatch {
            expected: "DAG",
            found: g.kind(),
        });
    }
    if g.p() > ORACLE_MAX_NODES {
        return Err(SidError::OracleCap(format!(
            "{} nodes exceed the path-enumeration limit of {ORACLE_MAX_NODES}",
            g.p()
        )));
    }
    Ok(())
}

/// Strict descendants of every node, by depth-first search.
fn descendants(g: &Graph) -> Vec<NodeSet> {
    let p = g.p();
    (0..p)
        .map(|s| {
            let mut seen = NodeSet::empty(p);
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for w in 0..p {
                    if g.has_edge(v, w) && seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            seen
        })
        .collect()
}

/// Calls `visit` with every simple path that starts at `start` and has at least
/// one edge.
fn for_each_path(g: &Graph, start: usize, mut visit: impl FnMut(&[usize])) -> Result<()> {
    let p = g.p();
    let mut path = vec![start];
    let mut on_path = vec![false; p];
    on_path[start] = true;
    let mut count = 0usize;

    fn rec(
        g: &Graph,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        count: &mut usize,
        visit: &mut dyn FnMut(&[usize]),
    ) -> Result<()> {
        let v = *path.last().expect("path is never empty");
        for w in 0..g.p() {
            if on_path[w] || !g.adjacent(v, w) {
                continue;
            }
            *count += 1;
            if *count > ORACLE_MAX_PATHS {
                return Err(SidError::OracleCap(format!(
                    "more than {ORACLE_MAX_PATHS} simple paths"
                )));
            }
            path.push(w);
            on_path[w] = true;
            visit(path);
            rec(g, path, on_path, count, visit)?;
            on_path[w] = false;
            path.pop();
        }
        Ok(())
    }

    rec(g, &mut path, &mut on_path, &mut count, &mut visit)
}

fn is_directed_path(g: &Graph, path: &[usize]) -> bool {
    path.windows(2).all(|e| g.has_edge(e[0], e[1]))
}

/// Whether `s` blocks `path`, judged on its inner nodes.
fn blocked(g: &Graph, de: &[NodeSet], path: &[usize], s: &NodeSet) -> bool {
    (1..path.len() - 1).any(|k| {
        let (a, v, b) = (path[k - 1], path[k], path[k + 1]);
        let collider = g.has_edge(a, v) && g.has_edge(b, v);
        if collider {
            !s.contains(v) && !de[v].intersects(s)
        } else {
            s.contains(v)
        }
    })
}

/// Exact set of nodes `j ≠ i` joined to `i` by a simple path that is open given `z`
/// and is not directed from `i` to `j`.
pub fn non_directed_reach_bruteforce(g: &Graph, i: usize, z: &NodeSet) -> Result<NodeSet> {
    check_cap(g)?;
    let de = descendants(g);
    let mut out = NodeSet::empty(g.p());
    for_each_path(g, i, |path| {
        let j = *path.last().unwrap();
        if !out.contains(j) && !is_directed_path(g, path) && !blocked(g, &de, path, z) {
            out.insert(j);
        }
    })?;
    Ok(out)
}

/// Condition (*) by explicit path enumeration.
pub fn satisfies_star_bruteforce(g: &Graph, i: usize, j: usize, z: &NodeSet) -> Result<bool> {
    check_cap(g)?;
    if i == j || z.contains(i) || z.contains(j) {
        return Err(SidError::Argument(
            "need i != j and an adjustment set avoiding both".into(),
        ));
    }
    let de = descendants(g);
    let mut ok = true;
    for_each_path(g, i, |path| {
        if !ok || *path.last().unwrap() != j {
            return;
        }
        if is_directed_path(g, path) {
            // every W != i on a causal path, W itself included
            for &w in &path[1..] {
                if z.contains(w) || de[w].intersects(z) {
                    ok = false;
                }
            }
        } else if !blocked(g, &de, path, z) {
            ok = false;
        }
    })?;
    Ok(ok)
}

/// d-separation by checking every simple path between the two sets.
pub fn d_separated_bruteforce(g: &Graph, a: &NodeSet, b: &NodeSet, s: &NodeSet) -> Result<bool> {
    check_cap(g)?;
    let de = descendants(g);
    let mut separated = true;
    for x in a.iter() {
        for_each_path(g, x, |path| {
            if separated && b.contains(*path.last().unwrap()) && !blocked(g, &de, path, s) {
                separated = false;
            }
        })?;
    }
    Ok(separated)
}

/// SID by brute force: for each ordered pair apply the two-case rule with the
/// path-enumeration test for condition (*).
pub fn sid_bruteforce(g: &Graph, h: &Graph) -> Result<usize> {
    check_cap(g)?;
    check_cap(h)?;
    if g.p() != h.p() {
        return Err(SidError::DimensionMismatch {
            left: g.p(),
            right: h.p(),
        });
    }
    let de = descendants(g);
    let mut total = 0;
    for (i, de_i) in de.iter().enumerate() {
        let pa = h.parents(i);
        for j in 0..g.p() {
            if i == j {
                continue;
            }
            let wrong = if pa.contains(j) {
                de_i.contains(j)
            } else {
                !satisfies_star_bruteforce(g, i, j, &pa)?
            };
            total += wrong as usize;
        }
    }
    Ok(total)
}

/// Linear structural equation model `X = B X + N` over a DAG.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSem {
    graph: Graph,
    /// `b[(j, k)]` is the coefficient of `X_k` in the equation of `X_j`.
    b: DMatrix<f64>,
    noise_var: Vec<f64>,
}

impl LinearSem {
    pub fn new(graph: Graph, b: DMatrix<f64>, noise_var: Vec<f64>) -> Result<Self> {
        let p = graph.p();
        if graph.kind() != GraphKind::Dag {
            return Err(SidError::KindMismatch {
                expected: "DAG",
                found: graph.kind(),
            });
        }
        if b.nrows() != p || b.ncols() != p || noise_var.len() != p {
            return Err(SidError::DimensionMismatch {
                left: p,
                right: b.nrows().max(noise_var.len()),
            });
        }
        for j in 0..p {
            for k in 0..p {
                if (b[(j, k)] != 0.0) != graph.has_edge(k, j) {
                    return Err(SidError::Argument(format!(
                        "coefficient ({j}, {k}) does not match the edge set"
                    )));
                }
            }
        }
        if let Some(v) = noise_var.iter().position(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(SidError::Argument(format!(
                "noise variance of node {v} must be positive"
            )));
        }
        Ok(LinearSem {
            graph,
            b,
            noise_var,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn noise_var(&self) -> &[f64] {
        &self.noise_var
    }
}

/// `Σ = (I − B)⁻¹ D (I − B)⁻ᵀ`.
pub fn sem_covariance(sem: &LinearSem) -> Result<DMatrix<f64>> {
    let p = sem.graph.p();
    let a = DMatrix::<f64>::identity(p, p) - &sem.b;
    let inv = a
        .lu()
        .solve(&DMatrix::<f64>::identity(p, p))
        .ok_or_else(|| SidError::Numeric {
            message: "I - B is singular".into(),
            condition: f64::INFINITY,
        })?;
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&sem.noise_var));
    let sigma = &inv * d * inv.transpose();
    Ok((&sigma + sigma.transpose()) * 0.5)
}

/// First coefficient of the regression of `X_j` on `(X_i, Z)` under `sigma`.
pub fn causal_effect(sigma: &DMatrix<f64>, i: usize, j: usize, z: &NodeSet) -> Result<f64> {
    let p = sigma.nrows();
    if i == j || i >= p || j >= p || z.contains(i) || z.contains(j) {
        return Err(SidError::Argument(
            "causal_effect needs distinct i, j outside the adjustment set".into(),
        ));
    }
    let idx: Vec<usize> = std::iter::once(i).chain(z.iter()).collect();
    let n = idx.len();
    let s2 = DMatrix::from_fn(n, n, |r, c| sigma[(idx[r], idx[c])]);
    let s1 = nalgebra::DVector::from_fn(n, |r, _| sigma[(j, idx[r])]);

    let eig = nalgebra::SymmetricEigen::new(s2.clone()).eigenvalues;
    let hi = eig.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let lo = eig.iter().fold(f64::INFINITY, |m, &x| m.min(x));
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(SidError::Numeric {
            message: format!("covariance of ({i}, {z:?}) is near-singular"),
            condition,
        });
    }
    let chol = s2.cholesky().ok_or_else(|| SidError::Numeric {
        message: "covariance block is not positive definite".into(),
        condition,
    })?;
    Ok(chol.solve(&s1)[0])
}

/// Causal effects predicted by parent adjustment in `g`; entry `(i, j)` is zero
/// when `j` is a parent of `i`, and the diagonal is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectTable {
    pub p: usize,
    pub values: Vec<f64>,
}

impl EffectTable {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.p + j]
    }
}

pub fn effect_table(sigma: &DMatrix<f64>, g: &Graph) -> Result<EffectTable> {
    let p = g.p();
    if sigma.nrows() != p {
        return Err(SidError::DimensionMismatch {
            left: p,
            right: sigma.nrows(),
        });
    }
    let mut values = vec![0.0; p * p];
    for i in 0..p {
        let pa = g.parents(i);
        for j in 0..p {
            if j != i && !pa.contains(j) {
                values[i * p + j] = causal_effect(sigma, i, j, &pa)?;
            }
        }
    }
    Ok(EffectTable { p, values })
}

/// Ordered pairs whose effect under parent adjustment in `h` differs from the true
/// effect by more than `tol`.
pub fn count_effect_mismatches(sem: &LinearSem, g: &Graph, h: &Graph, tol: f64) -> Result<usize> {
    if sem.graph.adjacency() != g.adjacency() {
        return Err(SidError::Argument(
            "the SEM is not defined over the true graph".into(),
        ));
    }
    if h.kind() != GraphKind::Dag {
        return Err(SidError::KindMismatch {
            expected: "DAG",
            found: h.kind(),
        });
    }
    if g.p() != h.p() {
        return Err(SidError::DimensionMismatch {
            left: g.p(),
            right: h.p(),
        });
    }
    let sigma = sem_covariance(sem)?;
    let truth = effect_table(&sigma, g)?;
    let est = effect_table(&sigma, h)?;
    Ok(truth
        .values
        .iter()
        .zip(&est.values)
        .filter(|(a, b)| (*a - *b).abs() > tol)
        .count())
}
