//! Clique to CNC parameterized by `k`, plus its split and bipartite variants.
//!
//! Every edge of the source becomes `n` parallel paths of length two through
//! fresh dummy vertices, and every non-edge becomes a direct edge. Deleting
//! an `ell`-clique then isolates `C(ell, 2) * n` dummies at once.

use super::{CliqueInstance, ReductionOutput, Role};
use crate::graph::{Graph, Vertex};
use crate::instance::Instance;

/// `k(k-1) + 2k(N-k) + D(D-1) + 2D(N-k-D)` with `D = C(k, 2) * n`.
pub fn clique_reduction_y(k: usize, source_vertices: usize, total_vertices: usize) -> i128 {
    let k = k as i128;
    let n = source_vertices as i128;
    let big = total_vertices as i128;
    let d = k * (k - 1) / 2 * n;
    k * (k - 1) + 2 * k * (big - k) + d * (d - 1) + 2 * d * (big - k - d)
}

struct Builder {
    graph: Graph,
    roles: Vec<Role>,
}

impl Builder {
    fn vertex(&mut self, role: Role) -> Vertex {
        self.roles.push(role);
        self.graph.add_vertex()
    }

    fn edge(&mut self, u: Vertex, v: Vertex) {
        self.graph.add_edge(u, v).expect("builder vertices exist");
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Variant {
    Plain,
    Split,
    Bipartite,
}

fn build(source: &CliqueInstance, variant: Variant) -> ReductionOutput {
    let g = &source.graph;
    let n = g.vertex_count();
    let mut b = Builder { graph: Graph::new(n), roles: vec![Role::Original; n] };
    for (u, v) in g.edges() {
        for _ in 0..n {
            let d = b.vertex(Role::Dummy);
            b.edge(u, d);
            b.edge(v, d);
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            let adjacent = g.has_edge(u, v);
            match variant {
                Variant::Plain if !adjacent => b.edge(u, v),
                Variant::Split => b.edge(u, v),
                Variant::Bipartite if !adjacent => {
                    let s = b.vertex(Role::Dummy);
                    b.edge(u, s);
                    b.edge(v, s);
                }
                _ => {}
            }
        }
    }
    let k = source.ell;
    let raw = clique_reduction_y(k, n, b.graph.vertex_count());
    let y = u64::try_from(raw.max(0)).unwrap_or(u64::MAX);
    let mut warnings = Vec::new();
    if raw < 0 {
        warnings.push(format!("formula gives y = {raw}; clamped to 0"));
    }
    ReductionOutput {
        instance: Instance::with_y(b.graph, k, y),
        roles: b.roles,
        raw_target: raw,
        boundaries: vec![0],
        warnings,
    }
}

/// Originals keep ids `0..n`; dummies follow in edge order.
pub fn reduce_clique_to_cnc(source: &CliqueInstance) -> ReductionOutput {
    build(source, Variant::Plain)
}

/// Same dummies, but the originals form a clique.
pub fn reduce_clique_split(source: &CliqueInstance) -> ReductionOutput {
    build(source, Variant::Split)
}

/// Same dummies, with each direct original-original edge subdivided.
pub fn reduce_clique_bipartite(source: &CliqueInstance) -> ReductionOutput {
    build(source, Variant::Bipartite)
}
