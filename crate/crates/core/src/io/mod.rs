//! Gem file formats, the end-to-end pipeline, result caching and batches.
//!
//! Text format:
//!
//! ```text
//! # comments and blank lines are ignored
//! gem n=4 name=s4
//! attest boundary=#1(S1xS2)
//! 0 1 0
//! 0 1 1
//! ```
//!
//! The header comes first; `attest` lines precede the edge lines `u v c`.
//! The JSON form is `{"n":4,"name":"s4","attest":{"boundary":"#1(S1xS2)"},"edges":[[0,1,0],...]}`
//! with `name` and `attest` optional.

mod cache;
mod pipeline;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use cache::Cache;
pub use pipeline::{batch, run_cached, run_pipeline, BatchRow, ModeChoice, RunOptions, RunRecord, Timings, TOOL_VERSION};

use crate::error::ParseError;
use crate::graph::{Color, ColoredGraph, Vertex};
use crate::validation::Attestations;

/// A parsed gem file.
#[derive(Clone, Debug)]
pub struct GemFile {
    pub name: Option<String>,
    pub attestations: Attestations,
    pub graph: ColoredGraph,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGem {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    attest: BTreeMap<String, String>,
    edges: Vec<(Vertex, Vertex, Color)>,
}

/// Parse the text or JSON form (JSON when the first non-blank byte is `{`).
pub fn parse_gem(bytes: &[u8]) -> Result<GemFile, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| ParseError::Syntax { line: 0, message: e.to_string() })?;
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

fn parse_json(text: &str) -> Result<GemFile, ParseError> {
    let j: JsonGem = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    let mut attestations = Attestations::default();
    for (k, v) in &j.attest {
        attestations.insert(k, v).map_err(|e| ParseError::Json(e.to_string()))?;
    }
    let graph = ColoredGraph::build(j.n, &j.edges)?;
    Ok(GemFile { name: j.name, attestations, graph })
}

fn parse_text(text: &str) -> Result<GemFile, ParseError> {
    let syntax = |line: usize, message: String| ParseError::Syntax { line, message };
    let mut n = None;
    let mut name = None;
    let mut attestations = Attestations::default();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let words: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        if n.is_none() {
            if words[0] != "gem" {
                return Err(syntax(line, "expected header `gem n=<n>`".into()));
            }
            for w in &words[1..] {
                match w.split_once('=') {
                    Some(("n", v)) => {
                        n = Some(v.parse::<usize>().map_err(|_| syntax(line, format!("bad dimension `{v}`")))?)
                    }
                    Some(("name", v)) if !v.is_empty() => name = Some(v.to_string()),
                    _ => return Err(syntax(line, format!("unexpected header field `{w}`"))),
                }
            }
            if n.is_none() {
                return Err(syntax(line, "header lacks n=<n>".into()));
            }
            continue;
        }
        if words[0] == "attest" {
            if !edges.is_empty() {
                return Err(syntax(line, "attestations must precede the edges".into()));
            }
            if words.len() != 2 {
                return Err(syntax(line, "expected `attest key=value`".into()));
            }
            let (k, v) = words[1].split_once('=').ok_or_else(|| syntax(line, "expected key=value".into()))?;
            attestations.insert(k, v).map_err(|e| syntax(line, e.to_string()))?;
            continue;
        }
        if words.len() != 3 {
            return Err(syntax(line, "expected `u v c`".into()));
        }
        let mut num = [0usize; 3];
        for (slot, w) in num.iter_mut().zip(&words) {
            *slot = w.parse().map_err(|_| syntax(line, format!("`{w}` is not a number")))?;
        }
        edges.push((num[0], num[1], num[2]));
    }
    let n = n.ok_or_else(|| syntax(0, "missing header".into()))?;
    let graph = ColoredGraph::build(n, &edges)?;
    Ok(GemFile { name, attestations, graph })
}

// `#` opens a comment at the start of a line or after whitespace, so
// values such as `#2(S1xS2)` survive
fn strip_comment(line: &str) -> &str {
    let mut prev_space = true;
    for (i, ch) in line.char_indices() {
        if ch == '#' && prev_space {
            return &line[..i];
        }
        prev_space = ch.is_whitespace();
    }
    line
}

impl GemFile {
    pub fn new(graph: ColoredGraph) -> Self {
        GemFile { name: None, attestations: Attestations::default(), graph }
    }

    /// Canonical text: header, attestations in stable order, edges by id.
    pub fn to_text(&self) -> String {
        let mut out = format!("gem n={}", self.graph.n());
        if let Some(name) = &self.name {
            out.push_str(&format!(" name={name}"));
        }
        out.push('\n');
        for (k, v) in self.attestations.entries() {
            out.push_str(&format!("attest {k}={v}\n"));
        }
        for (u, v, c) in self.graph.edge_triples() {
            out.push_str(&format!("{u} {v} {c}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let j = JsonGem {
            n: self.graph.n(),
            name: self.name.clone(),
            attest: self.attestations.entries().into_iter().collect(),
            edges: self.graph.edge_triples(),
        };
        serde_json::to_string(&j).expect("gem serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const S4: &str = "gem n=4\n0 1 0\n0 1 1\n0 1 2\n0 1 3\n0 1 4\n";

    #[test]
    fn sphere_text() {
        let f = parse_gem(S4.as_bytes()).unwrap();
        assert_eq!(f.graph.order(), 2);
        assert_eq!(f.to_text(), S4);
    }

    #[test]
    fn duplicate_color_is_invalid() {
        let bad = "gem n=4\n0 1 0\n0 1 0\n0 1 2\n0 1 3\n0 1 4\n";
        assert!(matches!(parse_gem(bad.as_bytes()), Err(ParseError::Validation(_))));
    }

    #[test]
    fn located_errors() {
        let bad = "# c\ngem n=4\n0 1 x\n";
        assert!(matches!(parse_gem(bad.as_bytes()), Err(ParseError::Syntax { line: 3, .. })));
        assert!(matches!(parse_gem(b"0 1 2\n"), Err(ParseError::Syntax { line: 1, .. })));
        let late = "gem n=4\n0 1 0\nattest simply_connected=true\n";
        assert!(matches!(parse_gem(late.as_bytes()), Err(ParseError::Syntax { line: 3, .. })));
        let unknown = "gem n=4\nattest color=blue\n";
        assert!(matches!(parse_gem(unknown.as_bytes()), Err(ParseError::Syntax { line: 2, .. })));
    }

    #[test]
    fn json_round_trip() {
        let text = "gem n=4 name=demo\nattest boundary=#2(S1xS2) # note\n0 1 0 # edge\n0 1 1\n0 1 2\n0 1 3\n0 1 4\n";
        let f = parse_gem(text.as_bytes()).unwrap();
        assert_eq!(f.attestations.boundary, Some(2));
        let j = parse_gem(f.to_json().as_bytes()).unwrap();
        assert_eq!(j.graph, f.graph);
        assert_eq!(j.name.as_deref(), Some("demo"));
        assert_eq!(j.attestations, f.attestations);
        assert_eq!(j.to_text(), f.to_text());
    }
}
