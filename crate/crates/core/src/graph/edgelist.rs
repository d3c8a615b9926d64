use std::fmt::Write as _;

use super::{Graph, GraphError};

/// Renders `u v` lines preceded by `# key: value` header comments. The vertex
/// count is always emitted so isolated trailing vertices survive a round trip.
pub fn write_edge_list(g: &Graph, header: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (k, v) in header {
        let _ = writeln!(out, "# {k}: {v}");
    }
    let _ = writeln!(out, "# vertices: {}", g.vertex_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parses the edge-list format. Without a `# vertices:` header the vertex
/// count is one more than the largest id seen.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(n) = comment.trim().strip_prefix("vertices:") {
                let n = n.trim().parse::<usize>().map_err(|e| GraphError::Parse {
                    line: lineno,
                    msg: e.to_string(),
                })?;
                declared = Some(n);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<_> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(GraphError::Parse {
                line: lineno,
                msg: format!("expected 2 fields, found {}", fields.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|e| GraphError::Parse {
                line: lineno,
                msg: format!("{s:?}: {e}"),
            })
        };
        edges.push((parse(fields[0])?, parse(fields[1])?));
    }
    let n = declared.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    Graph::from_edges(n, edges)
}
