//! Text formats.
//!
//! * adjacency matrix: `p` rows of `p` entries in `{0, 1}` separated by whitespace
//!   or commas, with an optional leading `p=<n>` line. Entry `(r, c)` is the edge `r → c`.
//! * edge list: one statement per line, `a -> b`, `a -- b` or `node a`. Labels are
//!   whitespace-free tokens and get ids in order of first appearance. Blank lines and
//!   lines starting with `#` are skipped.

use super::{Graph, GraphKind};
use crate::bitmatrix::BitMatrix;
use crate::error::{Result, SidError};
use std::collections::HashMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    AdjMatrix,
    EdgeList,
}

impl std::str::FromStr for Format {
    type Err = SidError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adj-matrix" | "matrix" => Ok(Format::AdjMatrix),
            "edge-list" | "edges" => Ok(Format::EdgeList),
            other => Err(SidError::Argument(format!(
                "unknown graph format `{other}`"
            ))),
        }
    }
}

/// A parsed graph together with the label of each node id.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<String>,
}

pub fn parse_graph(text: &str, format: Format, kind: GraphKind) -> Result<Graph> {
    parse_labeled(text, format, kind).map(|l| l.graph)
}

pub fn parse_labeled(text: &str, format: Format, kind: GraphKind) -> Result<LabeledGraph> {
    match format {
        Format::AdjMatrix => {
            let adj = parse_matrix(text)?;
            let labels = (0..adj.dim()).map(|v| v.to_string()).collect();
            Ok(LabeledGraph {
                graph: Graph::new(adj, kind)?,
                labels,
            })
        }
        Format::EdgeList => parse_edge_list(text, kind),
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> SidError {
    SidError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Splits on whitespace and commas, yielding 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut start = None;
    let mut out = Vec::new();
    for (k, ch) in line.char_indices() {
        let sep = ch.is_whitespace() || ch == ',';
        match (sep, start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..k]));
                start = None;
            }
            (false, None) => start = Some(k),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out.into_iter()
}

fn parse_matrix(text: &str) -> Result<BitMatrix> {
    let mut declared: Option<usize> = None;
    let mut rows: Vec<Vec<bool>> = Vec::new();
    let mut last_line = 0;
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        last_line = ln;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("p=") {
            if declared.is_some() || !rows.is_empty() {
                return Err(parse_err(
                    ln,
                    1,
                    "header `p=<n>` must come before the matrix",
                ));
            }
            let n = rest
                .trim()
                .parse::<usize>()
                .map_err(|_| parse_err(ln, 3, format!("invalid node count `{}`", rest.trim())))?;
            if n == 0 {
                return Err(parse_err(ln, 3, "node count must be positive"));
            }
            declared = Some(n);
            continue;
        }
        let mut row = Vec::new();
        for (col, tok) in tokens(line) {
            row.push(match tok {
                "0" => false,
                "1" => true,
                other => {
                    return Err(parse_err(
                        ln,
                        col,
                        format!("expected 0 or 1, found `{other}`"),
                    ))
                }
            });
        }
        let width = declared.or(rows.first().map(Vec::len)).unwrap_or(row.len());
        if row.len() != width {
            return Err(parse_err(
                ln,
                1,
                format!("row has {} entries, expected {width}", row.len()),
            ));
        }
        if rows.len() == width {
            return Err(parse_err(ln, 1, format!("more than {width} rows")));
        }
        rows.push(row);
    }
    let Some(width) = rows.first().map(Vec::len) else {
        return Err(parse_err(last_line.max(1), 1, "empty adjacency matrix"));
    };
    if rows.len() != width {
        return Err(parse_err(
            last_line + 1,
            1,
            format!("matrix has {} rows, expected {width}", rows.len()),
        ));
    }
    Ok(BitMatrix::from_rows(&rows))
}

fn parse_edge_list(text: &str, kind: GraphKind) -> Result<LabeledGraph> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut arcs: Vec<(usize, usize, bool)> = Vec::new();
    let mut id_of = |label: &str, labels: &mut Vec<String>| -> usize {
        *ids.entry(label.to_string()).or_insert_with(|| {
            labels.push(label.to_string());
            labels.len() - 1
        })
    };
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<(usize, &str)> = line
            .split_whitespace()
            .map(|t| (t.as_ptr() as usize - line.as_ptr() as usize + 1, t))
            .collect();
        match toks.as_slice() {
            [(_, "node"), (_, a)] => {
                id_of(a, &mut labels);
            }
            [(_, a), (col, op), (_, b)] => {
                let undirected = match *op {
                    "->" => false,
                    "--" => true,
                    other => {
                        return Err(parse_err(
                            ln,
                            *col,
                            format!("expected `->` or `--`, found `{other}`"),
                        ))
                    }
                };
                if a == b {
                    return Err(parse_err(ln, 1, format!("self-loop on `{a}`")));
                }
                let x = id_of(a, &mut labels);
                let y = id_of(b, &mut labels);
                arcs.push((x, y, undirected));
            }
            _ => {
                return Err(parse_err(
                    ln,
                    toks.first().map_or(1, |t| t.0),
                    "expected `a -> b`, `a -- b` or `node a`",
                ))
            }
        }
    }
    if labels.is_empty() {
        return Err(parse_err(1, 1, "edge list declares no nodes"));
    }
    let mut adj = BitMatrix::zeros(labels.len());
    for (x, y, undirected) in arcs {
        adj.set(x, y, true);
        if undirected {
            adj.set(y, x, true);
        }
    }
    Ok(LabeledGraph {
        graph: Graph::new(adj, kind)?,
        labels,
    })
}

/// Serializes in the given format. The edge list uses node ids as labels.
pub fn serialize_graph(g: &Graph, format: Format) -> String {
    match format {
        Format::AdjMatrix => {
            let p = g.p();
            let mut s = String::with_capacity(2 * p * p);
            for i in 0..p {
                for j in 0..p {
                    if j > 0 {
                        s.push(' ');
                    }
                    s.push(if g.has_edge(i, j) { '1' } else { '0' });
                }
                s.push('\n');
            }
            s
        }
        Format::EdgeList => {
            let labels: Vec<String> = (0..g.p()).map(|v| v.to_string()).collect();
            serialize_edge_list(g, &labels)
        }
    }
}

/// Edge list with explicit labels: every node is declared, then directed edges in
/// row-major order, then undirected edges.
pub fn serialize_edge_list(g: &Graph, labels: &[String]) -> String {
    assert_eq!(labels.len(), g.p(), "one label per node");
    let mut s = String::new();
    for l in labels {
        let _ = writeln!(s, "node {l}");
    }
    for (a, b) in g.directed_edges() {
        let _ = writeln!(s, "{} -> {}", labels[a], labels[b]);
    }
    for (a, b) in g.undirected_edges() {
        let _ = writeln!(s, "{} -- {}", labels[a], labels[b]);
    }
    s
}
