//! DIMACS-style edge lists and the canonical edge-set text format.
//!
//! On disk, graphs use `p edge <n> <m>` followed by `e <u> <v>` lines with
//! 1-based ids. Blank lines and lines starting with `c` are skipped.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{EdgeSet, Graph, GraphError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `p edge` header")]
    MissingHeader,
    #[error("header declares {declared} edges but {found} `e` lines were read")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_num(tok: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| syntax(line, format!("invalid {what} `{tok}`")))
}

/// Parses a DIMACS edge file into a 0-based graph.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        match toks.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(syntax(line, "duplicate `p` header"));
                }
                match toks.next() {
                    Some("edge") | Some("col") => {}
                    other => return Err(syntax(line, format!("unsupported problem `{}`", other.unwrap_or("")))),
                }
                let n = parse_num(toks.next(), line, "vertex count")?;
                let m = parse_num(toks.next(), line, "edge count")?;
                header = Some((n, m));
            }
            Some("e") => {
                let (n, _) = header.ok_or_else(|| syntax(line, "edge before `p` header"))?;
                let u = parse_num(toks.next(), line, "endpoint")?;
                let v = parse_num(toks.next(), line, "endpoint")?;
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(syntax(line, format!("endpoint out of range 1..={n} in `e {u} {v}`")));
                }
                edges.push((u - 1, v - 1));
            }
            Some(tok) => return Err(syntax(line, format!("unrecognized line type `{tok}`"))),
            None => unreachable!(),
        }
    }
    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    if edges.len() != m {
        return Err(ParseError::EdgeCountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    Ok(Graph::new(n, edges)?)
}

/// Writes a graph as DIMACS text, edges in lexicographic order.
pub fn write_graph(g: &Graph, comments: &[&str]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    let _ = writeln!(out, "p edge {} {}", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

/// Canonical edge-set text: one `u v` pair per line, `u < v`, 0-based, sorted.
pub fn write_edge_set(set: &EdgeSet) -> String {
    let mut out = String::new();
    for (u, v) in set {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_edge_set(text: &str) -> Result<EdgeSet, ParseError> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let u = parse_num(toks.next(), line, "vertex")?;
        let v = parse_num(toks.next(), line, "vertex")?;
        if toks.next().is_some() {
            return Err(syntax(line, "trailing tokens"));
        }
        pairs.push((u, v));
    }
    Ok(EdgeSet::from_pairs(pairs)?)
}
