use std::io::{BufRead, Write};

use super::{Graph, GraphBuilder, GraphError};

/// Parses the edge-list format: a header `n m`, then `m` lines `u v` with
/// `0 ≤ u < v < n`. Blank lines are ignored.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
    let mut lines = reader.lines().enumerate().filter_map(|(i, l)| match l {
        Ok(s) if s.trim().is_empty() => None,
        other => Some((i + 1, other)),
    });
    let (line, header) = lines.next().ok_or(GraphError::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let [n, m] = parse_pair(line, &header?)?;
    let mut b = GraphBuilder::new(n);
    let mut found = 0;
    for (line, text) in lines {
        let [u, v] = parse_pair(line, &text?)?;
        if u > v && u < n {
            return Err(GraphError::Parse {
                line,
                message: format!("expected u < v, got {u} {v}"),
            });
        }
        b.add_edge(u, v)?;
        found += 1;
    }
    if found != m {
        return Err(GraphError::EdgeCountMismatch { declared: m, found });
    }
    Ok(b.build())
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2], GraphError> {
    let mut it = text.split_whitespace();
    let mut out = [0usize; 2];
    for slot in out.iter_mut() {
        let tok = it.next().ok_or_else(|| GraphError::Parse {
            line,
            message: "expected two integers".into(),
        })?;
        *slot = tok.parse().map_err(|_| GraphError::Parse {
            line,
            message: format!("not a non-negative integer: {tok:?}"),
        })?;
    }
    if it.next().is_some() {
        return Err(GraphError::Parse {
            line,
            message: "trailing tokens".into(),
        });
    }
    Ok(out)
}

pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> Result<(), GraphError> {
    writeln!(w, "{} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample_gnp;

    fn parse(s: &str) -> Result<Graph, GraphError> {
        read_edge_list(s.as_bytes())
    }

    #[test]
    fn round_trip() {
        let g = sample_gnp(60, 0.3, 2);
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(parse(std::str::from_utf8(&buf).unwrap()).unwrap(), g);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse("3 1\n0 0\n"), Err(GraphError::SelfLoop { vertex: 0 })));
        assert!(matches!(parse("3 2\n0 1\n0 1\n"), Err(GraphError::DuplicateEdge { .. })));
        assert!(matches!(parse("3 1\n0 3\n"), Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })));
        assert!(matches!(parse("3 2\n0 1\n"), Err(GraphError::EdgeCountMismatch { declared: 2, found: 1 })));
        assert!(matches!(parse("3 1\n2 1\n"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(parse("3 1\n0 x\n"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(parse(""), Err(GraphError::Parse { line: 1, .. })));
    }
}
