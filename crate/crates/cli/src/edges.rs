use std::path::Path;

use decomposable::graph::{is_chordal, Graph};

use crate::error::{CliError, Result};

/// Parses an edge list: one edge per line as two column names or indices
/// separated by a comma or whitespace. Blank lines and lines starting with
/// `#` are skipped. The result must be chordal.
pub fn parse_edge_list(text: &str, names: &[String]) -> Result<Graph> {
    let vertex = |token: &str, line: usize| -> Result<usize> {
        if let Some(i) = names.iter().position(|n| n == token) {
            return Ok(i);
        }
        match token.parse::<usize>() {
            Ok(i) if i < names.len() => Ok(i),
            _ => Err(CliError::EdgeList {
                line,
                message: format!("unknown vertex {token:?}"),
            }),
        }
    };
    let mut g = Graph::empty(names.len());
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        let [a, b] = tokens[..] else {
            return Err(CliError::EdgeList {
                line,
                message: "expected exactly two vertices".into(),
            });
        };
        let (a, b) = (vertex(a, line)?, vertex(b, line)?);
        if a == b {
            return Err(CliError::EdgeList {
                line,
                message: "self-loop".into(),
            });
        }
        g.add_edge(a, b);
    }
    if !is_chordal(&g) {
        return Err(CliError::Engine(decomposable::Error::NotChordal));
    }
    Ok(g)
}

pub fn read_edge_list(path: &Path, names: &[String]) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_edge_list(&text, names)
}
