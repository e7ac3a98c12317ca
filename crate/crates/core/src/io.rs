//! Text formats: edge lists and colorings.
//!
//! Edge list: optional `#` comment lines, then `n m`, then exactly `m` lines
//! `u v` with 0-based ids. Coloring: `# q=<q>` followed by one `u v c` line
//! per edge in edge-id order. Writers emit LF line endings, single spaces, no
//! trailing whitespace and a final newline.

use std::io::{self, BufRead, Write};

use crate::coloring::Color;
use crate::graph::{Graph, GraphError};

fn parse_fields<const K: usize>(line: &str, lineno: usize) -> Result<[u64; K], GraphError> {
    let mut out = [0u64; K];
    let mut fields = line.split(' ');
    for slot in out.iter_mut() {
        let tok = fields.next().ok_or_else(|| GraphError::Parse {
            line: lineno,
            message: format!("expected {K} fields, got {line:?}"),
        })?;
        *slot = tok.parse().map_err(|_| GraphError::Parse {
            line: lineno,
            message: format!("not a non-negative integer: {tok:?}"),
        })?;
    }
    if fields.next().is_some() {
        return Err(GraphError::Parse {
            line: lineno,
            message: format!("expected {K} fields, got {line:?}"),
        });
    }
    Ok(out)
}

fn io_err(e: io::Error) -> GraphError {
    GraphError::Parse {
        line: 0,
        message: e.to_string(),
    }
}

/// Reads an edge list. Errors carry the 1-based line number.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut lines_of_edges = Vec::new();
    let mut last_line = 0;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let line = line.map_err(io_err)?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.starts_with('#') {
            continue;
        }
        match header {
            None => {
                let [n, m] = parse_fields::<2>(line, lineno)?;
                header = Some((n as usize, m as usize));
                edges.reserve(m as usize);
            }
            Some((_, m)) => {
                if edges.len() == m {
                    if line.is_empty() {
                        continue;
                    }
                    return Err(GraphError::Parse {
                        line: lineno,
                        message: format!("more than the declared {m} edges"),
                    });
                }
                let [u, v] = parse_fields::<2>(line, lineno)?;
                edges.push((u, v));
                lines_of_edges.push(lineno);
            }
        }
    }
    let (n, m) = header.ok_or(GraphError::Parse {
        line: last_line,
        message: "missing \"n m\" header".into(),
    })?;
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: last_line,
            message: format!("declared {m} edges, found {}", edges.len()),
        });
    }
    Graph::new(n, &edges).map_err(|e| match e {
        GraphError::SelfLoop { index, .. }
        | GraphError::DuplicateEdge { index, .. }
        | GraphError::VertexOutOfRange { index, .. } => GraphError::Parse {
            line: lines_of_edges[index],
            message: e.to_string(),
        },
        other => other,
    })
}

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    writeln!(out, "{} {}", g.n(), g.m())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()
}

pub fn edge_list_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}

/// Writes `# q=<q>` and one `u v c` line per edge.
pub fn write_coloring<W: Write>(g: &Graph, q: u32, colors: &[Color], mut out: W) -> io::Result<()> {
    writeln!(out, "# q={q}")?;
    for ((u, v), c) in g.edges().zip(colors) {
        writeln!(out, "{u} {v} {c}")?;
    }
    out.flush()
}

pub fn coloring_string(g: &Graph, q: u32, colors: &[Color]) -> String {
    let mut buf = Vec::new();
    write_coloring(g, q, colors, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}

/// A coloring file resolved against a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringFile {
    pub q: u32,
    /// Per edge id; 0 where the file has no line for the edge.
    pub colors: Vec<Color>,
    /// Edges listed more than once.
    pub repeated: Vec<u32>,
}

/// Reads a coloring file. Lines may come in any order; each `u v` must be an
/// edge of `g`.
pub fn read_coloring<R: BufRead>(g: &Graph, reader: R) -> Result<ColoringFile, GraphError> {
    let mut q = None;
    let mut colors = vec![0; g.m()];
    let mut repeated = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(io_err)?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if let Some(rest) = line.strip_prefix("# q=") {
            let parsed = rest.trim().parse::<u32>().map_err(|_| GraphError::Parse {
                line: lineno,
                message: format!("bad color count {rest:?}"),
            })?;
            q = Some(parsed);
            continue;
        }
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        let [u, v, c] = parse_fields::<3>(line, lineno)?;
        if u >= g.n() as u64 || v >= g.n() as u64 || c > u32::MAX as u64 {
            return Err(GraphError::Parse {
                line: lineno,
                message: format!("({u}, {v}, {c}) out of range"),
            });
        }
        let e = g.find_edge(u as u32, v as u32).ok_or_else(|| GraphError::Parse {
            line: lineno,
            message: format!("({u}, {v}) is not an edge of the graph"),
        })?;
        if colors[e as usize] != 0 {
            repeated.push(e);
        }
        colors[e as usize] = c as Color;
    }
    let q = q.ok_or(GraphError::Parse {
        line: 1,
        message: "missing \"# q=<q>\" header".into(),
    })?;
    Ok(ColoringFile { q, colors, repeated })
}
