//! Edge-list text format.
//!
//! ```text
//! # optional comment lines
//! N K
//! u v
//! ...
//! ```
//!
//! `K` is the common degree, or `-1` for irregular graphs. Edges are written
//! with `u < v`, sorted lexicographically, one per LF-terminated line.

use std::fmt::Write as _;

use super::{Graph, GraphError};

pub fn save_graph(g: &Graph) -> String {
    save_graph_with_comments(g, &[])
}

/// Writes `comments` as `# ` lines ahead of the body.
pub fn save_graph_with_comments(g: &Graph, comments: &[String]) -> String {
    let mut out = String::with_capacity(16 + 8 * g.edge_count());
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let k = g.is_regular().map_or(-1, |k| k as i64);
    let _ = writeln!(out, "{} {}", g.n(), k);
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

fn parse_pair<A: std::str::FromStr, B: std::str::FromStr>(
    line: &str,
    lineno: usize,
) -> Result<(A, B), GraphError> {
    let mut it = line.split_ascii_whitespace();
    let err = |message: &str| GraphError::Parse {
        line: lineno,
        message: message.to_string(),
    };
    let a = it.next().ok_or_else(|| err("expected two fields"))?;
    let b = it.next().ok_or_else(|| err("expected two fields"))?;
    if it.next().is_some() {
        return Err(err("trailing fields"));
    }
    let a = a.parse().map_err(|_| err(&format!("invalid integer '{a}'")))?;
    let b = b.parse().map_err(|_| err(&format!("invalid integer '{b}'")))?;
    Ok((a, b))
}

pub fn load_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(GraphError::Parse {
        line: 1,
        message: "missing 'N K' header".into(),
    })?;
    let (n, declared): (usize, i64) = parse_pair(header, hline)?;

    let mut edges = Vec::new();
    for (lineno, line) in lines {
        let (u, v): (usize, usize) = parse_pair(line, lineno)?;
        if u >= n || v >= n {
            return Err(GraphError::Parse {
                line: lineno,
                message: format!("vertex out of range for N={n}"),
            });
        }
        if u == v {
            return Err(GraphError::SelfLoop { vertex: u });
        }
        edges.push((u, v));
    }

    let g = Graph::from_edges_unchecked_connectivity(n, edges)?;
    match (declared, g.is_regular()) {
        (-1, _) => {}
        (k, Some(found)) if k >= 0 && k as usize == found => {}
        (k, found) => {
            return Err(GraphError::DegreeMismatch {
                declared: k,
                found: found.map_or("is irregular".into(), |f| format!("is {f}-regular")),
            })
        }
    }
    g.check_connected()?;
    Ok(g)
}
