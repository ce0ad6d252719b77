//! High-degree kernel for the combined parameter `k + x`.
//!
//! A vertex with more than `k' + sqrt(x)` neighbours belongs to every cut of
//! size `k'` that leaves at most `x` pairs: keeping it would leave it in a
//! component with more than `sqrt(x) + 1` vertices. The rule is applied to
//! the smallest qualifying id first and degrees are re-evaluated after every
//! removal. Isolated vertices are dropped at the end.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, PairCount, Vertex};

/// Result of a successful kernelization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelTrace {
    /// Original ids forced into the cut, in removal order.
    pub forced_vertices: Vec<Vertex>,
    /// Original ids discarded as isolated after the high-degree phase.
    pub discarded_isolated: Vec<Vertex>,
    pub k_in: usize,
    pub k_out: usize,
    pub x: PairCount,
    pub kernel_graph: Graph,
    /// `kernel_ids[v]` is the original id of kernel vertex `v`.
    pub kernel_ids: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelOutcome {
    Kernel(KernelTrace),
    /// The budget ran out while a high-degree vertex remained.
    TrivialNo { forced_vertices: Vec<Vertex> },
}

impl KernelOutcome {
    pub fn kernel(&self) -> Option<&KernelTrace> {
        match self {
            KernelOutcome::Kernel(trace) => Some(trace),
            KernelOutcome::TrivialNo { .. } => None,
        }
    }
}

/// `degree > budget + sqrt(x)`, decided in integers.
pub fn exceeds_threshold(degree: usize, budget: usize, x: PairCount) -> bool {
    if degree <= budget {
        return false;
    }
    let excess = (degree - budget) as u128;
    excess * excess > x as u128
}

/// `vertices <= k(k + sqrt(x)) + x + k`, decided in integers.
pub fn within_size_bound(vertices: usize, k: usize, x: PairCount) -> bool {
    let slack = vertices as i128 - x as i128 - k as i128 - (k as i128) * (k as i128);
    if slack <= 0 {
        return true;
    }
    slack * slack <= (k as i128) * (k as i128) * x as i128
}

pub fn kernelize_kx(g: &Graph, k: usize, x: PairCount) -> KernelOutcome {
    let n = g.vertex_count();
    let mut removed = vec![false; n];
    let mut degree: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut budget = k;
    let mut forced = Vec::new();

    while let Some(v) = g.vertices().find(|&v| !removed[v] && exceeds_threshold(degree[v], budget, x)) {
        if budget == 0 {
            return KernelOutcome::TrivialNo { forced_vertices: forced };
        }
        removed[v] = true;
        forced.push(v);
        budget -= 1;
        for &w in g.neighbors(v) {
            if !removed[w] {
                degree[w] -= 1;
            }
        }
    }

    let (keep, discarded_isolated): (Vec<Vertex>, Vec<Vertex>) =
        g.vertices().filter(|&v| !removed[v]).partition(|&v| degree[v] > 0);
    let sub = g.induced_subgraph(&keep).expect("ids are in range");
    KernelOutcome::Kernel(KernelTrace {
        forced_vertices: forced,
        discarded_isolated,
        k_in: k,
        k_out: budget,
        x,
        kernel_graph: sub.graph,
        kernel_ids: sub.original,
    })
}
