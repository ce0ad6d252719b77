//! Solver for the parameter `y`, the number of pairs that must be removed.
//!
//! Pairs never cross components, so the best cut is a budget allocation
//! across components. Each component small enough to matter is solved
//! exhaustively for every exact deletion count `k'`, and a knapsack-style
//! recurrence combines the per-component optima.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{Cut, Graph, PairCount, Vertex};
use crate::oracle::Oracle;

/// Per-component optima for exact deletion counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalTable {
    /// Member vertices of each component (original ids, ascending).
    pub components: Vec<Vec<Vertex>>,
    /// `values[i][k']`: most pairs removable from component `i` with exactly
    /// `k'` deletions, for `k' <= min(k, |G_i|)`.
    pub values: Vec<Vec<PairCount>>,
    /// `witnesses[i][k']`: a deletion set attaining `values[i][k']`.
    pub witnesses: Vec<Vec<Vec<Vertex>>>,
    /// Subsets the brute force examined, per component.
    pub subsets_examined: Vec<u64>,
}

impl RemovalTable {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }
}

/// Best totals for exact deletion counts over a prefix of the components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllocationTable {
    /// `best[k']` over all components, `None` when `k'` deletions are
    /// impossible.
    pub best: Vec<Option<PairCount>>,
    /// `choice[i][k']`: deletions given to component `i` in the optimum for
    /// the first `i + 1` components and `k'` deletions in total.
    pub choice: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shortcut {
    NothingRequired,
    LargeComponent,
    Greedy,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DpYStats {
    pub components: usize,
    pub largest_component: usize,
    pub subsets_examined: u64,
    /// Largest per-component subset count, comparable with `2^y`.
    pub max_component_subsets: u64,
    pub shortcut: Option<Shortcut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DpYOutcome {
    pub decision: bool,
    pub cut: Option<Cut>,
    pub pairs_removed: PairCount,
    pub stats: DpYStats,
}

/// Cheap answers that avoid the table construction. Returns the decision
/// together with a certificate when one fires.
pub fn shortcut_checks(g: &Graph, k: usize, y: PairCount) -> Option<(Shortcut, Vec<Vertex>)> {
    if y == 0 {
        return Some((Shortcut::NothingRequired, Vec::new()));
    }
    if k == 0 {
        return None;
    }
    let labels = g.connected_components();
    if let Some(big) = labels.sizes.iter().position(|&s| s as u64 > y) {
        // Deleting one vertex of a component of size s removes 2(s - 1) >= s > y pairs.
        let v = labels.label.iter().position(|&c| c == big).expect("component is nonempty");
        return Some((Shortcut::LargeComponent, vec![v]));
    }
    if 2 * k as u64 >= y {
        let mut deleted = vec![false; g.vertex_count()];
        let mut chosen = Vec::new();
        for v in g.vertices() {
            if chosen.len() == k {
                break;
            }
            if g.neighbors(v).iter().any(|&w| !deleted[w]) {
                deleted[v] = true;
                chosen.push(v);
            }
        }
        if g.pairs_removed(&chosen).expect("ids come from g") >= y {
            return Some((Shortcut::Greedy, chosen));
        }
    }
    None
}

/// Exhaustive per-component tables for exact deletion counts `0..=k`.
pub fn build_removal_table(g: &Graph, k: usize, oracle: &Oracle) -> Result<RemovalTable> {
    let components = g.connected_components().members();
    let mut values = Vec::with_capacity(components.len());
    let mut witnesses = Vec::with_capacity(components.len());
    let mut subsets_examined = Vec::with_capacity(components.len());
    for members in &components {
        let sub = g.induced_subgraph(members)?;
        let top = k.min(members.len());
        let mut row = Vec::with_capacity(top + 1);
        let mut row_witness = Vec::with_capacity(top + 1);
        let mut examined = 0;
        for exact in 0..=top {
            let best = oracle.max_removed_exact(&sub.graph, exact)?;
            examined += best.explored;
            row.push(best.removed);
            row_witness.push(sub.map_to_original(&best.witness));
        }
        values.push(row);
        witnesses.push(row_witness);
        subsets_examined.push(examined);
    }
    Ok(RemovalTable { components, values, witnesses, subsets_examined })
}

/// Rolling-row budget allocation over the table rows.
pub fn allocate(table: &RemovalTable, k: usize) -> AllocationTable {
    let mut best: Vec<Option<PairCount>> = vec![None; k + 1];
    best[0] = Some(0);
    let mut choice = Vec::with_capacity(table.values.len());
    for row in &table.values {
        let mut next: Vec<Option<PairCount>> = vec![None; k + 1];
        let mut pick = vec![0usize; k + 1];
        for total in 0..=k {
            for (here, &gain) in row.iter().enumerate().take(total + 1) {
                if let Some(before) = best[total - here] {
                    let candidate = before + gain;
                    if next[total].is_none_or(|cur| candidate > cur) {
                        next[total] = Some(candidate);
                        pick[total] = here;
                    }
                }
            }
        }
        best = next;
        choice.push(pick);
    }
    AllocationTable { best, choice }
}

/// Decides whether at most `k` deletions can remove at least `y` pairs.
pub fn solve_y(g: &Graph, k: usize, y: PairCount, oracle: &Oracle) -> Result<DpYOutcome> {
    let labels = g.connected_components();
    let mut stats = DpYStats {
        components: labels.count(),
        largest_component: labels.sizes.iter().copied().max().unwrap_or(0),
        ..DpYStats::default()
    };

    if let Some((kind, vertices)) = shortcut_checks(g, k, y) {
        stats.shortcut = Some(kind);
        let cut = Cut::measure(g, vertices)?;
        let removed = g.connected_pairs() - cut.residual_pairs;
        return Ok(DpYOutcome { decision: true, cut: Some(cut), pairs_removed: removed, stats });
    }

    let table = build_removal_table(g, k, oracle)?;
    stats.subsets_examined = table.subsets_examined.iter().sum();
    stats.max_component_subsets = table.subsets_examined.iter().copied().max().unwrap_or(0);
    let alloc = allocate(&table, k);

    let (budget, removed) = alloc
        .best
        .iter()
        .enumerate()
        .filter_map(|(used, v)| v.map(|v| (used, v)))
        .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)))
        .expect("zero deletions are always possible");

    if removed < y {
        return Ok(DpYOutcome { decision: false, cut: None, pairs_removed: removed, stats });
    }

    let mut vertices = Vec::new();
    let mut left = budget;
    for i in (0..table.component_count()).rev() {
        let here = alloc.choice[i][left];
        vertices.extend_from_slice(&table.witnesses[i][here]);
        left -= here;
    }
    let cut = Cut::measure(g, vertices)?;
    debug_assert_eq!(g.connected_pairs() - cut.residual_pairs, removed);
    Ok(DpYOutcome { decision: true, cut: Some(cut), pairs_removed: removed, stats })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> Graph {
        Graph::complete(3).disjoint_union(&Graph::complete(3))
    }

    #[test]
    fn shortcut_examples() {
        assert_eq!(shortcut_checks(&Graph::complete(3), 0, 0).map(|s| s.0), Some(Shortcut::NothingRequired));
        assert_eq!(shortcut_checks(&Graph::path(6), 1, 5).map(|s| s.0), Some(Shortcut::LargeComponent));
        let two_edges = Graph::path(2).disjoint_union(&Graph::path(2));
        assert_eq!(shortcut_checks(&two_edges, 3, 100), None);
        assert!(!solve_y(&two_edges, 3, 100, &Oracle::default()).unwrap().decision);
    }

    #[test]
    fn greedy_shortcut_needs_real_progress() {
        // 2k >= y but only one edge: the greedy removes 2 pairs, not 4.
        let g = Graph::path(2).disjoint_union(&Graph::new(3));
        assert_eq!(shortcut_checks(&g, 2, 4), None);
        // three disjoint edges, k = 2, y = 4: greedy deletes 0 and 2.
        let g = Graph::path(2).disjoint_union(&Graph::path(2)).disjoint_union(&Graph::path(2));
        let (kind, cut) = shortcut_checks(&g, 2, 4).unwrap();
        assert_eq!(kind, Shortcut::Greedy);
        assert_eq!(cut, vec![0, 2]);
    }

    #[test]
    fn removal_table_examples() {
        let table = build_removal_table(&two_triangles(), 2, &Oracle::default()).unwrap();
        assert_eq!(table.values, vec![vec![0, 4, 6], vec![0, 4, 6]]);

        let table = build_removal_table(&Graph::path(2), 1, &Oracle::default()).unwrap();
        assert_eq!(table.values, vec![vec![0, 2]]);

        let table = build_removal_table(&Graph::new(1), 1, &Oracle::default()).unwrap();
        assert_eq!(table.values, vec![vec![0, 0]]);
    }

    #[test]
    fn solve_examples() {
        let oracle = Oracle::default();
        let yes = solve_y(&two_triangles(), 2, 8, &oracle).unwrap();
        assert!(yes.decision);
        let cut = yes.cut.unwrap();
        assert_eq!(cut.vertices.len(), 2);
        assert!(cut.vertices.iter().any(|&v| v < 3) && cut.vertices.iter().any(|&v| v >= 3));
        assert_eq!(yes.pairs_removed, 8);

        let no = solve_y(&two_triangles(), 2, 9, &oracle).unwrap();
        assert!(!no.decision);
        assert_eq!(no.pairs_removed, 8);

        let g = Graph::cycle(5);
        let all = solve_y(&g, 5, g.connected_pairs(), &oracle).unwrap();
        assert!(all.decision);
    }

    #[test]
    fn component_order_does_not_matter() {
        let a = Graph::complete(3).disjoint_union(&Graph::path(4)).disjoint_union(&Graph::star(3));
        let b = Graph::star(3).disjoint_union(&Graph::complete(3)).disjoint_union(&Graph::path(4));
        let oracle = Oracle::default();
        for k in 0..5 {
            let ta = allocate(&build_removal_table(&a, k, &oracle).unwrap(), k);
            let tb = allocate(&build_removal_table(&b, k, &oracle).unwrap(), k);
            assert_eq!(ta.best, tb.best);
        }
    }
}
