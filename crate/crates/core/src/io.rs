//! Line-oriented text formats for hypergraphs (`.hg`) and elimination
//! forests (`.ef`). `#` starts a comment.

use std::fmt::Write;

use crate::elimination::EliminationForest;
use crate::error::{Error, Result};
use crate::forest::RootedForest;
use crate::hypergraph::Hypergraph;

fn strip(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Parses `V a b c` (optional) and `E e : a b` lines.
pub fn parse_hg(text: &str) -> Result<Hypergraph> {
    let mut vertices: Option<Vec<String>> = None;
    let mut edges = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = strip(raw);
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Format { line: n + 1, msg: msg.to_string() };
        let mut words = line.split_whitespace();
        match words.next() {
            Some("V") => {
                vertices.get_or_insert_with(Vec::new).extend(words.map(String::from));
            }
            Some("E") => {
                let rest = line[1..].trim_start();
                let (id, content) = rest.split_once(':').ok_or_else(|| err("expected `E <id> : <vertices>`"))?;
                let id = id.trim();
                if id.is_empty() || id.contains(char::is_whitespace) {
                    return Err(err("hyperedge id must be a single word"));
                }
                edges.push((id.to_string(), content.split_whitespace().map(String::from).collect()));
            }
            Some(w) => return Err(err(&format!("unknown record `{w}`"))),
            None => {}
        }
    }
    Hypergraph::new(vertices, edges)
}

pub fn write_hg(h: &Hypergraph) -> String {
    let mut out = String::new();
    if h.num_vertices() > 0 {
        writeln!(out, "V {}", h.vertex_ids().join(" ")).unwrap();
    }
    for (e, id) in h.edge_ids().iter().enumerate() {
        let content: Vec<&str> = h.content(e).iter().map(|&v| h.vertex_ids()[v].as_str()).collect();
        if content.is_empty() {
            writeln!(out, "E {id} :").unwrap();
        } else {
            writeln!(out, "E {id} : {}", content.join(" ")).unwrap();
        }
    }
    out
}

pub fn read_hg(path: &std::path::Path) -> Result<Hypergraph> {
    parse_hg(&std::fs::read_to_string(path)?)
}

/// Parses `N <node> parent=<node|-> edge=<edge>` lines. Parents may be
/// declared after their children.
pub fn parse_ef(text: &str) -> Result<EliminationForest> {
    let mut nodes = Vec::new();
    let mut gamma = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = strip(raw);
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Format { line: n + 1, msg };
        let mut words = line.split_whitespace();
        if words.next() != Some("N") {
            return Err(err("expected `N <node> parent=<node|-> edge=<edge>`".into()));
        }
        let id = words.next().ok_or_else(|| err("missing node id".into()))?;
        let (mut parent, mut edge) = (None, None);
        for w in words {
            match w.split_once('=') {
                Some(("parent", "-")) => parent = Some(None),
                Some(("parent", p)) => parent = Some(Some(p.to_string())),
                Some(("edge", e)) => edge = Some(e.to_string()),
                _ => return Err(err(format!("unexpected field `{w}`"))),
            }
        }
        let parent = parent.ok_or_else(|| err("missing parent=".into()))?;
        gamma.push(edge.ok_or_else(|| err("missing edge=".into()))?);
        nodes.push((id.to_string(), parent));
    }
    EliminationForest::new(RootedForest::new(&nodes)?, gamma)
}

pub fn write_ef(ef: &EliminationForest) -> String {
    let f = &ef.forest;
    let mut out = String::new();
    for n in 0..f.len() {
        let parent = f.parent(n).map_or("-", |p| f.id(p));
        writeln!(out, "N {} parent={} edge={}", f.id(n), parent, ef.gamma[n]).unwrap();
    }
    out
}

pub fn read_ef(path: &std::path::Path) -> Result<EliminationForest> {
    parse_ef(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn hg_round_trip() {
        for h in [families::example_g(), families::example_h(), Hypergraph::path(5).unwrap()] {
            assert_eq!(parse_hg(&write_hg(&h)).unwrap(), h);
        }
    }

    #[test]
    fn hg_inferred_vertices_and_empty_edges() {
        let h = parse_hg("# comment\nE e : x y\nE f :\n").unwrap();
        assert_eq!(h.num_vertices(), 2);
        assert!(h.content(1).is_empty());
    }

    #[test]
    fn hg_errors_carry_line() {
        assert!(matches!(parse_hg("E e x\n"), Err(Error::Format { line: 1, .. })));
        assert!(matches!(parse_hg("\nQ\n"), Err(Error::Format { line: 2, .. })));
    }

    #[test]
    fn ef_round_trip() {
        for ef in families::drawn_forests().values() {
            assert_eq!(&parse_ef(&write_ef(ef)).unwrap(), ef);
        }
        let ef = parse_ef("N b parent=a edge=f\nN a parent=- edge=e\n").unwrap();
        assert_eq!(ef.forest.parent(0), Some(1));
    }
}
