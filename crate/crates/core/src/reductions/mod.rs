//! Instance generators built from hardness reductions.
//!
//! Each generator returns the CNC instance together with a role for every
//! vertex, so tests can check structural claims about the construction.

mod clique;
mod compose;
mod mcc;

pub use clique::{clique_reduction_y, reduce_clique_bipartite, reduce_clique_split, reduce_clique_to_cnc};
pub use compose::cross_compose;
pub use mcc::{
    build_mcc_instance, component_census, expected_census, forward_solution_cut, mcc_bound_decomposition,
    mcc_parameters, Connector, ConnectorPair, EdgeGadget, DEFAULT_VERTEX_CAP, GadgetSizes, MccLayout, MccParameters, Order,
    ValidationGadget, VertexGadget,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{CncError, Result};
use crate::graph::{Graph, Vertex};
use crate::instance::Instance;

/// A Clique or Multicolored Clique source instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueInstance {
    pub graph: Graph,
    pub ell: usize,
    /// Colors in `1..=ell`, one per vertex.
    pub coloring: Option<Vec<usize>>,
}

impl CliqueInstance {
    pub fn new(graph: Graph, ell: usize) -> Self {
        CliqueInstance { graph, ell, coloring: None }
    }

    /// Requires every color in `1..=ell` to be used and no other.
    pub fn colored(graph: Graph, ell: usize, coloring: Vec<usize>) -> Result<Self> {
        if coloring.len() != graph.vertex_count() {
            return Err(CncError::invalid(format!(
                "coloring has {} entries for {} vertices",
                coloring.len(),
                graph.vertex_count()
            )));
        }
        let mut used = vec![false; ell + 1];
        for &c in &coloring {
            if c == 0 || c > ell {
                return Err(CncError::invalid(format!("color {c} outside 1..={ell}")));
            }
            used[c] = true;
        }
        if let Some(missing) = (1..=ell).find(|&c| !used[c]) {
            return Err(CncError::invalid(format!("color {missing} is never used")));
        }
        Ok(CliqueInstance { graph, ell, coloring: Some(coloring) })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Original,
    Dummy,
    Core,
    Guard,
    Validation,
    SelectionClique,
    EdgeVertex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionOutput {
    pub instance: Instance,
    /// `roles[v]` for every vertex of the output graph.
    pub roles: Vec<Role>,
    /// The target as the formula gives it, before clamping at zero.
    pub raw_target: i128,
    /// First vertex of each composed sub-instance.
    pub boundaries: Vec<Vertex>,
    pub warnings: Vec<String>,
}

impl ReductionOutput {
    pub fn vertex_count(&self) -> usize {
        self.instance.graph.vertex_count()
    }

    pub fn role_counts(&self) -> BTreeMap<Role, usize> {
        let mut counts = BTreeMap::new();
        for &r in &self.roles {
            *counts.entry(r).or_insert(0) += 1;
        }
        counts
    }

    pub fn vertices_with(&self, role: Role) -> Vec<Vertex> {
        self.roles.iter().enumerate().filter(|(_, &r)| r == role).map(|(v, _)| v).collect()
    }
}

/// Whether `g` contains `ell` pairwise adjacent vertices.
pub fn has_clique(g: &Graph, ell: usize) -> bool {
    fn grow(g: &Graph, chosen: &mut Vec<Vertex>, candidates: &[Vertex], need: usize) -> bool {
        if need == 0 {
            return true;
        }
        if candidates.len() < need {
            return false;
        }
        for (i, &v) in candidates.iter().enumerate() {
            let next: Vec<Vertex> = candidates[i + 1..].iter().copied().filter(|&w| g.has_edge(v, w)).collect();
            chosen.push(v);
            if grow(g, chosen, &next, need - 1) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let all: Vec<Vertex> = g.vertices().collect();
    grow(g, &mut Vec::new(), &all, ell)
}

/// Split test on the degree sequence.
pub fn is_split(g: &Graph) -> bool {
    let mut degrees: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    let m = degrees.iter().enumerate().filter(|&(i, &d)| d >= i).map(|(i, _)| i + 1).max().unwrap_or(0);
    let head: usize = degrees[..m].iter().sum();
    let tail: usize = degrees[m..].iter().sum();
    head == m * m.saturating_sub(1) + tail
}

/// Two-coloring by BFS, if one exists.
pub fn bipartition(g: &Graph) -> Option<Vec<bool>> {
    let n = g.vertex_count();
    let mut side: Vec<Option<bool>> = vec![None; n];
    for start in g.vertices() {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(false);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let s = side[u].expect("queued vertices are colored");
            for &w in g.neighbors(u) {
                match side[w] {
                    None => {
                        side[w] = Some(!s);
                        queue.push_back(w);
                    }
                    Some(t) if t == s => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(side.into_iter().map(|s| s.expect("all colored")).collect())
}

/// Smallest `d` such that every subgraph has a vertex of degree at most `d`,
/// with the peeling order that witnesses it.
pub fn degeneracy(g: &Graph) -> (usize, Vec<Vertex>) {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut worst = 0;
    for _ in 0..n {
        let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| (degree[v], v)).expect("a vertex remains");
        worst = worst.max(degree[v]);
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                degree[w] -= 1;
            }
        }
    }
    (worst, order)
}
