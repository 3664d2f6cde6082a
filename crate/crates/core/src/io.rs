//! Text and JSON formats.
//!
//! Edge lists hold one `u v` pair per line. `#` starts a comment, blank lines
//! are ignored, and a line `v id id ...` declares vertices (used for isolated
//! vertices). Colorings are JSON objects `{"k": 3, "colors": {"0": 1, ...}}`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Coloring, Graph, Vertex};

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut g = Graph::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace().peekable();
        if tokens.peek() == Some(&"v") {
            tokens.next();
            for t in tokens {
                g.add_vertex(parse_id(t, line_no)?);
            }
            continue;
        }
        let ids = tokens
            .map(|t| parse_id(t, line_no))
            .collect::<Result<Vec<_>>>()?;
        let [u, v] = ids[..] else {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected two vertex ids, found {}", ids.len()),
            });
        };
        if u == v {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("self-loop at {u}"),
            });
        }
        g.add_vertex(u);
        g.add_vertex(v);
        g.insert_edge(u, v)?;
    }
    Ok(g)
}

fn parse_id(tok: &str, line: usize) -> Result<Vertex> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid vertex id {tok:?}"),
    })
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let isolated: Vec<String> = g
        .vertices()
        .filter(|&v| g.degree(v) == 0)
        .map(|v| v.to_string())
        .collect();
    if !isolated.is_empty() {
        let _ = writeln!(out, "v {}", isolated.join(" "));
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn coloring_to_json(c: &Coloring) -> Result<String> {
    Ok(serde_json::to_string_pretty(c)?)
}

pub fn coloring_from_json(text: &str) -> Result<Coloring> {
    Ok(serde_json::from_str(text)?)
}

/// DOT rendering of a graph, optionally filling vertices by color.
pub fn graph_to_dot(g: &Graph, coloring: Option<&Coloring>) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        match coloring.and_then(|c| c.get(v)) {
            Some(col) => {
                let _ = writeln!(out, "  {v} [label=\"{v}:{col}\"];");
            }
            None => {
                let _ = writeln!(out, "  {v};");
            }
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_isolated() {
        let g = parse_edge_list("# triangle\n0 1\n1 2 # trailing\n\n2 0\nv 7 8\n").unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.degree(7), 0);
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse_edge_list("0 1\n1 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("0 1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("3 3\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn coloring_json_shape() {
        let mut c = Coloring::new(2);
        c.set(0, 1);
        c.set(10, 2);
        let text = coloring_to_json(&c).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["k"], 2);
        assert_eq!(v["colors"]["10"], 2);
        assert_eq!(coloring_from_json(&text).unwrap(), c);
    }
}
