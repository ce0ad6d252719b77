//! CNC instances and their text format.
//!
//! ```text
//! c optional comment
//! p cnc <n> <m>
//! e <u> <v>        (m lines, 1 <= u < v <= n)
//! k <budget>
//! x <pairs>        (or: y <pairs removed>)
//! ```
//!
//! Vertex ids are 1-based on disk and 0-based in memory.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{CncError, Result};
use crate::graph::{Graph, PairCount};

/// The pair condition of an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// At most this many connected pairs may remain.
    X(PairCount),
    /// At least this many connected pairs must be removed.
    Y(PairCount),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub graph: Graph,
    pub k: usize,
    pub target: Target,
}

impl Instance {
    pub fn with_x(graph: Graph, k: usize, x: PairCount) -> Self {
        Instance { graph, k, target: Target::X(x) }
    }

    pub fn with_y(graph: Graph, k: usize, y: PairCount) -> Self {
        Instance { graph, k, target: Target::Y(y) }
    }

    /// Equivalent bound on remaining pairs. `None` means `y` exceeds the
    /// pairs present, so no cut can work.
    pub fn x_bound(&self) -> Option<PairCount> {
        match self.target {
            Target::X(x) => Some(x),
            Target::Y(y) => self.graph.connected_pairs().checked_sub(y),
        }
    }

    /// Equivalent number of pairs to remove.
    pub fn y_bound(&self) -> PairCount {
        match self.target {
            Target::X(x) => self.graph.connected_pairs().saturating_sub(x),
            Target::Y(y) => y,
        }
    }
}

/// A parsed file whose `k` and target lines may be absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDocument {
    pub graph: Graph,
    pub k: Option<usize>,
    pub target: Option<Target>,
    /// Line count, used to report missing lines.
    pub lines: usize,
}

fn number<T: std::str::FromStr>(token: Option<&str>, line: usize, what: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let token = token.ok_or_else(|| CncError::parse(line, format!("missing {what}")))?;
    token.parse::<T>().map_err(|e| CncError::parse(line, format!("bad {what} `{token}`: {e}")))
}

/// Parses the format without requiring `k`, `x` or `y`.
pub fn parse_document(text: &str) -> Result<GraphDocument> {
    let mut header: Option<(usize, usize)> = None;
    let mut graph = Graph::new(0);
    let mut edges_seen = 0usize;
    let mut k = None;
    let mut target = None;
    let mut lines = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        lines = line;
        let mut tokens = raw.split_whitespace();
        let Some(tag) = tokens.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(CncError::parse(line, "duplicate `p` line"));
                }
                if tokens.next() != Some("cnc") {
                    return Err(CncError::parse(line, "expected `p cnc <n> <m>`"));
                }
                let n: usize = number(tokens.next(), line, "vertex count")?;
                let m: usize = number(tokens.next(), line, "edge count")?;
                header = Some((n, m));
                graph = Graph::new(n);
            }
            "e" => {
                let (n, _) = header.ok_or_else(|| CncError::parse(line, "edge before `p` line"))?;
                let u: usize = number(tokens.next(), line, "endpoint")?;
                let v: usize = number(tokens.next(), line, "endpoint")?;
                if u == v {
                    return Err(CncError::parse(line, format!("self-loop on vertex {u}")));
                }
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(CncError::parse(line, format!("endpoint out of range 1..={n}")));
                }
                if u > v {
                    return Err(CncError::parse(line, "endpoints must be listed as `e u v` with u < v"));
                }
                if !graph.add_edge(u - 1, v - 1)? {
                    return Err(CncError::parse(line, format!("duplicate edge {u} {v}")));
                }
                edges_seen += 1;
            }
            "k" => {
                if k.is_some() {
                    return Err(CncError::parse(line, "duplicate `k` line"));
                }
                k = Some(number(tokens.next(), line, "budget")?);
            }
            "x" | "y" => {
                if target.is_some() {
                    return Err(CncError::parse(line, "only one of `x` and `y` may be given"));
                }
                let value: PairCount = number(tokens.next(), line, "pair bound")?;
                target = Some(if tag == "x" { Target::X(value) } else { Target::Y(value) });
            }
            other => return Err(CncError::parse(line, format!("unknown line type `{other}`"))),
        }
        if let Some(extra) = tokens.next() {
            return Err(CncError::parse(line, format!("unexpected token `{extra}`")));
        }
    }

    let (_, m) = header.ok_or_else(|| CncError::parse(lines, "missing `p cnc <n> <m>` line"))?;
    if edges_seen != m {
        return Err(CncError::parse(lines, format!("header declares {m} edges, found {edges_seen}")));
    }
    Ok(GraphDocument { graph, k, target, lines })
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc = parse_document(text)?;
    let k = doc.k.ok_or_else(|| CncError::parse(doc.lines, "missing `k` line"))?;
    let target = doc.target.ok_or_else(|| CncError::parse(doc.lines, "missing `x` or `y` line"))?;
    Ok(Instance { graph: doc.graph, k, target })
}

/// Canonical form: header, edges in lexicographic order, `k`, target.
pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = serialize_graph(&instance.graph);
    writeln!(out, "k {}", instance.k).unwrap();
    match instance.target {
        Target::X(x) => writeln!(out, "x {x}").unwrap(),
        Target::Y(y) => writeln!(out, "y {y}").unwrap(),
    }
    out
}

/// Header and edge lines only.
pub fn serialize_graph(graph: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p cnc {} {}", graph.vertex_count(), graph.edge_count()).unwrap();
    for (u, v) in graph.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "p cnc 3 3\ne 1 2\ne 1 3\ne 2 3\nk 1\nx 2\n";

    #[test]
    fn parses_the_triangle() {
        let inst = parse_instance(TRIANGLE).unwrap();
        assert_eq!(inst.graph, Graph::complete(3));
        assert_eq!(inst.k, 1);
        assert_eq!(inst.target, Target::X(2));

        let y = parse_instance(&TRIANGLE.replace("x 2", "y 4")).unwrap();
        assert_eq!(y.target, Target::Y(4));
        assert_eq!(y.x_bound(), Some(2));
        assert_eq!(inst.y_bound(), 4);
    }

    #[test]
    fn canonical_serialization() {
        let inst = parse_instance("c hello\np cnc 3 3\ne 2 3\ne 1 3\ne 1 2\nk 1\nx 2\n").unwrap();
        assert_eq!(serialize_instance(&inst), TRIANGLE);
        assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
    }

    fn error_line(text: &str) -> usize {
        match parse_instance(text) {
            Err(CncError::Parse { line, .. }) => line,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn reports_errors_with_lines() {
        assert_eq!(error_line("p cnc 2 1\ne 1 1\nk 0\nx 0\n"), 2);
        assert_eq!(error_line("p cnc 2 1\ne 1 3\nk 0\nx 0\n"), 2);
        assert_eq!(error_line("p cnc 3 2\ne 1 2\ne 1 2\nk 0\nx 0\n"), 3);
        assert_eq!(error_line("p cnc 2 1\ne 1 2\nk 0\nx 0\ny 1\n"), 5);
        assert_eq!(error_line("p cnc 2 1\ne 1 2\nk 0\n"), 3);
        assert_eq!(error_line("p cnc 2 2\ne 1 2\nk 0\nx 1\n"), 4);
        assert_eq!(error_line("e 1 2\n"), 1);
        assert_eq!(error_line("p cnc 2 1\ne 1 2\nk -1\nx 0\n"), 3);
        assert_eq!(error_line("p cnc 2 1\ne 2 1\nk 0\nx 0\n"), 2);
        assert_eq!(error_line("p cnc 2 0\nq\n"), 2);
    }

    #[test]
    fn impossible_y_has_no_x_bound() {
        let inst = Instance::with_y(Graph::path(2), 1, 3);
        assert_eq!(inst.x_bound(), None);
    }
}
