//! Bounded search tree for the parameter `k + x`.
//!
//! A cut leaving at most `x` pairs also leaves at most `x` edges, so the
//! solver first enumerates every inclusion-minimal vertex set `C'` with
//! `|C'| <= k` whose removal leaves at most `x` edges, branching on the
//! lexicographically smallest surviving edge `{u, v}` into "delete u",
//! "delete v" and "keep the edge". Each minimal set is then extended by
//! brute force over the at most `2x` non-isolated vertices it leaves behind.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::graph::{Cut, Graph, PairCount, PairCounter, Vertex};
use crate::oracle::for_each_subset;

/// Inclusion-minimal `C'` such that `G - C'` has at most `x` edges.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MinimalEdgeCover {
    pub vertices: Vec<Vertex>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchStats {
    pub nodes_visited: u64,
    pub minimal_solutions_found: u64,
    pub extensions_tested: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchOutcome {
    pub decision: bool,
    pub cut: Option<Cut>,
    pub stats: BranchStats,
}

/// `3^(x + k)`, saturating.
pub fn search_tree_envelope(k: usize, x: u64) -> u128 {
    let exp = (k as u64).saturating_add(x);
    if exp >= 80 {
        return u128::MAX;
    }
    3u128.pow(exp as u32)
}

struct Search {
    edges: Vec<(Vertex, Vertex)>,
    incident: Vec<Vec<usize>>,
    deleted: Vec<bool>,
    dropped: Vec<bool>,
    chosen: Vec<Vertex>,
    found: Vec<Vec<Vertex>>,
    nodes: u64,
}

impl Search {
    fn new(graph: &Graph) -> Self {
        let edges: Vec<(Vertex, Vertex)> = graph.edges().collect();
        let mut incident = vec![Vec::new(); graph.vertex_count()];
        for (i, &(u, v)) in edges.iter().enumerate() {
            incident[u].push(i);
            incident[v].push(i);
        }
        Search {
            deleted: vec![false; graph.vertex_count()],
            dropped: vec![false; edges.len()],
            edges,
            incident,
            chosen: Vec::new(),
            found: Vec::new(),
            nodes: 0,
        }
    }

    fn alive(&self, e: usize) -> bool {
        let (u, v) = self.edges[e];
        !self.dropped[e] && !self.deleted[u] && !self.deleted[v]
    }

    fn alive_incident(&self, v: Vertex) -> usize {
        self.incident[v].iter().filter(|&&e| self.alive(e)).count()
    }

    /// `first` is a lower bound on the index of the first surviving edge.
    fn branch(&mut self, first: usize, alive: usize, k: usize, x: usize) {
        self.nodes += 1;
        if alive <= x {
            // The remaining edges may all stay; anything deeper is a superset.
            let mut set = self.chosen.clone();
            set.sort_unstable();
            self.found.push(set);
            return;
        }
        if k == 0 && x == 0 {
            return;
        }
        let pivot = (first..self.edges.len()).find(|&e| self.alive(e)).expect("alive > x >= 0");
        let (u, v) = self.edges[pivot];
        if k > 0 {
            for w in [u, v] {
                let lost = self.alive_incident(w);
                self.deleted[w] = true;
                self.chosen.push(w);
                self.branch(pivot + 1, alive - lost, k - 1, x);
                self.chosen.pop();
                self.deleted[w] = false;
            }
        }
        if x > 0 {
            self.dropped[pivot] = true;
            self.branch(pivot + 1, alive - 1, k, x - 1);
            self.dropped[pivot] = false;
        }
    }
}

/// Keeps only sets with no proper subset in the family; output is sorted.
fn minimal_antichain(mut sets: Vec<Vec<Vertex>>) -> Vec<Vec<Vertex>> {
    sets.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut kept: Vec<Vec<Vertex>> = Vec::new();
    for set in sets {
        let dominated = kept.iter().any(|small| small.iter().all(|v| set.binary_search(v).is_ok()));
        if !dominated {
            kept.push(set);
        }
    }
    kept.sort_unstable();
    kept
}

/// Every inclusion-minimal `C'` with `|C'| <= k` leaving at most `x` edges.
pub fn enumerate_minimal_covers(g: &Graph, k: usize, x: u64) -> (Vec<MinimalEdgeCover>, BranchStats) {
    let allowance = x.min(g.edge_count() as u64) as usize;
    let mut search = Search::new(g);
    let alive = search.edges.len();
    search.branch(0, alive, k, allowance);
    let covers: Vec<MinimalEdgeCover> =
        minimal_antichain(search.found).into_iter().map(|vertices| MinimalEdgeCover { vertices }).collect();
    let stats = BranchStats {
        nodes_visited: search.nodes,
        minimal_solutions_found: covers.len() as u64,
        extensions_tested: 0,
    };
    (covers, stats)
}

/// Tries to grow `cover` into a cut of size at most `k` leaving at most `x`
/// pairs. Candidate additions are tried by increasing size, then
/// lexicographically; the first success is returned.
pub fn extend_minimal_cover(
    g: &Graph,
    cover: &MinimalEdgeCover,
    k: usize,
    x: PairCount,
    stats: &mut BranchStats,
) -> Option<Cut> {
    if cover.vertices.len() > k {
        return None;
    }
    let spare = k - cover.vertices.len();
    let rest = g.remove_vertices(&cover.vertices).expect("cover ids come from g");
    let (core, _) = rest.graph.remove_isolated();
    let residual = &core.graph;
    let to_original = |local: &[Vertex]| -> Vec<Vertex> {
        let mut all = cover.vertices.clone();
        all.extend(local.iter().map(|&v| rest.to_original(core.to_original(v))));
        all.sort_unstable();
        all
    };

    if spare >= residual.vertex_count() {
        stats.extensions_tested += 1;
        let everything: Vec<Vertex> = residual.vertices().collect();
        return Some(Cut { vertices: to_original(&everything), residual_pairs: 0 });
    }

    let mut counter = PairCounter::new(residual.vertex_count());
    let mut deleted = vec![false; residual.vertex_count()];
    let mut result = None;
    for size in 0..=spare {
        let flow = for_each_subset(residual.vertex_count(), size, |extra| {
            stats.extensions_tested += 1;
            extra.iter().for_each(|&v| deleted[v] = true);
            let pairs = counter.residual_pairs(residual, &deleted);
            extra.iter().for_each(|&v| deleted[v] = false);
            if pairs <= x {
                result = Some(Cut { vertices: to_original(extra), residual_pairs: pairs });
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if flow.is_break() {
            break;
        }
    }
    result
}

/// Decides `(G, k, x)` by enumerating minimal edge covers and extending them.
pub fn solve_branch_kx(g: &Graph, k: usize, x: PairCount) -> BranchOutcome {
    let (covers, mut stats) = enumerate_minimal_covers(g, k, x);
    let cut = covers.iter().find_map(|cover| extend_minimal_cover(g, cover, k, x, &mut stats));
    debug_assert!(cut.as_ref().is_none_or(|c| c.vertices.len() <= k
        && g.residual_pairs(&c.vertices).ok() == Some(c.residual_pairs)));
    BranchOutcome { decision: cut.is_some(), cut, stats }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cover_sets(g: &Graph, k: usize, x: u64) -> Vec<Vec<Vertex>> {
        enumerate_minimal_covers(g, k, x).0.into_iter().map(|c| c.vertices).collect()
    }

    #[test]
    fn single_edge_covers() {
        let e = Graph::path(2);
        assert_eq!(cover_sets(&e, 1, 0), vec![vec![0], vec![1]]);
        assert_eq!(cover_sets(&e, 1, 1), vec![Vec::<Vertex>::new()]);
    }

    #[test]
    fn triangle_covers() {
        assert_eq!(cover_sets(&Graph::complete(3), 1, 1), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn antichain_filter() {
        let sets = vec![vec![1, 2], vec![1], vec![2, 3], vec![1], vec![0, 3]];
        assert_eq!(minimal_antichain(sets), vec![vec![0, 3], vec![1], vec![2, 3]]);
    }

    #[test]
    fn extension_examples() {
        let k3 = Graph::complete(3);
        let c0 = MinimalEdgeCover { vertices: vec![0] };
        let mut stats = BranchStats::default();
        let cut = extend_minimal_cover(&k3, &c0, 1, 2, &mut stats).unwrap();
        assert_eq!(cut, Cut { vertices: vec![0], residual_pairs: 2 });
        assert!(extend_minimal_cover(&k3, &c0, 1, 1, &mut stats).is_none());

        let p5 = Graph::path(5);
        let bd = MinimalEdgeCover { vertices: vec![1, 3] };
        let cut = extend_minimal_cover(&p5, &bd, 2, 0, &mut stats).unwrap();
        assert_eq!(cut.vertices, vec![1, 3]);
        assert!(crate::graph::verify_solution(&p5, &cut.vertices, 2, 0).unwrap().feasible);
    }

    #[test]
    fn solver_examples() {
        let star = solve_branch_kx(&Graph::star(3), 1, 0);
        assert!(star.decision);
        assert_eq!(star.cut.unwrap().vertices, vec![0]);

        let p5 = solve_branch_kx(&Graph::path(5), 1, 4);
        assert!(p5.decision);
        assert_eq!(p5.cut.unwrap().vertices, vec![2]);

        assert!(!solve_branch_kx(&Graph::path(5), 1, 3).decision);
    }

    #[test]
    fn envelope_values() {
        assert_eq!(search_tree_envelope(0, 0), 1);
        assert_eq!(search_tree_envelope(2, 3), 243);
        assert_eq!(search_tree_envelope(5, u64::MAX), u128::MAX);
    }

    #[test]
    fn large_x_needs_no_branching() {
        let out = solve_branch_kx(&Graph::complete(5), 0, 1_000_000);
        assert!(out.decision);
        assert_eq!(out.stats.nodes_visited, 1);
    }
}
