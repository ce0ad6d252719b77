//! Undirected simple graphs and ordered connected-pair accounting.
//!
//! Every pair count in this crate is over *ordered* pairs: a connected
//! component with `s` vertices contributes `s * (s - 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{CncError, Result};

/// Dense vertex identifier in `0..vertex_count`.
pub type Vertex = usize;

/// Number of ordered connected pairs.
pub type PairCount = u64;

/// Ordered pairs inside one connected component of `size` vertices.
#[inline]
pub fn pairs_of(size: usize) -> PairCount {
    let s = size as PairCount;
    s * s.saturating_sub(1)
}

/// An undirected simple graph over the vertices `0..n`.
///
/// Adjacency lists are kept sorted, which makes `edges()` lexicographic and
/// equality structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph { adjacency: vec![Vec::new(); n], edge_count: 0 }
    }

    /// Builds a graph from an edge list. Repeated edges collapse into one.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Inserts `{u, v}`; returns `false` when the edge was already present.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(CncError::SelfLoop(u));
        }
        match self.adjacency[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adjacency[u].insert(pos, v);
                let back = self.adjacency[v].binary_search(&u).unwrap_err();
                self.adjacency[v].insert(back, u);
                self.edge_count += 1;
                Ok(true)
            }
        }
    }

    /// Appends a fresh isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> Vertex {
        self.adjacency.push(Vec::new());
        self.adjacency.len() - 1
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("valid ids");
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("valid ids")
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0).expect("valid ids");
        }
        g
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("valid ids")
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.adjacency.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.adjacency.len() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.adjacency.len() {
            Ok(())
        } else {
            Err(CncError::UnknownVertex { vertex: v, vertex_count: self.adjacency.len() })
        }
    }

    /// Vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let offset = self.vertex_count();
        let mut adjacency = self.adjacency.clone();
        adjacency.extend(other.adjacency.iter().map(|nbrs| nbrs.iter().map(|&v| v + offset).collect()));
        Graph { adjacency, edge_count: self.edge_count + other.edge_count }
    }

    pub fn connected_components(&self) -> ComponentLabeling {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut sizes = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            let mut size = 0;
            label[start] = id;
            stack.push(start);
            while let Some(u) = stack.pop() {
                size += 1;
                for &w in &self.adjacency[u] {
                    if label[w] == usize::MAX {
                        label[w] = id;
                        stack.push(w);
                    }
                }
            }
            sizes.push(size);
        }
        ComponentLabeling { label, sizes }
    }

    pub fn connected_pairs(&self) -> PairCount {
        self.connected_components().sizes.iter().map(|&s| pairs_of(s)).sum()
    }

    /// The graph induced on `keep`, in the given order (duplicates ignored).
    pub fn induced_subgraph(&self, keep: &[Vertex]) -> Result<Subgraph> {
        let mut position = vec![usize::MAX; self.vertex_count()];
        let mut original = Vec::with_capacity(keep.len());
        for &v in keep {
            self.check_vertex(v)?;
            if position[v] == usize::MAX {
                position[v] = original.len();
                original.push(v);
            }
        }
        let mut graph = Graph::new(original.len());
        for (new_u, &u) in original.iter().enumerate() {
            for &w in &self.adjacency[u] {
                let new_w = position[w];
                if new_w != usize::MAX && new_w > new_u {
                    graph.add_edge(new_u, new_w).expect("ids are in range");
                }
            }
        }
        Ok(Subgraph { graph, original })
    }

    /// `G - C`. Survivors keep their relative order; the returned remap
    /// table translates new ids back to ids of `self`.
    pub fn remove_vertices(&self, cut: &[Vertex]) -> Result<Subgraph> {
        let deleted = self.deletion_mask(cut)?;
        let keep: Vec<Vertex> = self.vertices().filter(|&v| !deleted[v]).collect();
        self.induced_subgraph(&keep)
    }

    /// `pairs(G) - pairs(G - C)`, which includes pairs with a deleted endpoint.
    pub fn pairs_removed(&self, cut: &[Vertex]) -> Result<PairCount> {
        let deleted = self.deletion_mask(cut)?;
        let after = PairCounter::new(self.vertex_count()).residual_pairs(self, &deleted);
        Ok(self.connected_pairs() - after)
    }

    /// Pairs left in `G - C` without materializing the subgraph.
    pub fn residual_pairs(&self, cut: &[Vertex]) -> Result<PairCount> {
        let deleted = self.deletion_mask(cut)?;
        Ok(PairCounter::new(self.vertex_count()).residual_pairs(self, &deleted))
    }

    /// Drops degree-0 vertices; returns the subgraph and the dropped ids.
    pub fn remove_isolated(&self) -> (Subgraph, Vec<Vertex>) {
        let (keep, removed): (Vec<Vertex>, Vec<Vertex>) =
            self.vertices().partition(|&v| self.degree(v) > 0);
        (self.induced_subgraph(&keep).expect("ids are in range"), removed)
    }

    pub(crate) fn deletion_mask(&self, cut: &[Vertex]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.vertex_count()];
        for &v in cut {
            self.check_vertex(v)?;
            mask[v] = true;
        }
        Ok(mask)
    }
}

/// An induced subgraph plus the map from its ids to the parent's ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    pub original: Vec<Vertex>,
}

impl Subgraph {
    pub fn to_original(&self, v: Vertex) -> Vertex {
        self.original[v]
    }

    pub fn map_to_original(&self, vertices: &[Vertex]) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = vertices.iter().map(|&v| self.original[v]).collect();
        out.sort_unstable();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLabeling {
    /// Component id of each vertex.
    pub label: Vec<usize>,
    /// Vertex count of each component.
    pub sizes: Vec<usize>,
}

impl ComponentLabeling {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Members of each component, ascending.
    pub fn members(&self) -> Vec<Vec<Vertex>> {
        let mut out = vec![Vec::new(); self.sizes.len()];
        for (v, &c) in self.label.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

/// A vertex set together with the pair count it leaves behind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub vertices: Vec<Vertex>,
    pub residual_pairs: PairCount,
}

impl Cut {
    /// Sorts and deduplicates `vertices`, then measures `G - C`.
    pub fn measure(g: &Graph, mut vertices: Vec<Vertex>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        let residual_pairs = g.residual_pairs(&vertices)?;
        Ok(Cut { vertices, residual_pairs })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Outcome of a certificate check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub feasible: bool,
    pub cut_size: usize,
    pub budget: usize,
    pub residual_pairs: PairCount,
    pub pair_bound: PairCount,
}

/// True iff `|C| <= k` and `G - C` has at most `x` ordered connected pairs.
pub fn verify_solution(g: &Graph, cut: &[Vertex], k: usize, x: PairCount) -> Result<Verification> {
    let measured = Cut::measure(g, cut.to_vec())?;
    Ok(Verification {
        feasible: measured.len() <= k && measured.residual_pairs <= x,
        cut_size: measured.len(),
        budget: k,
        residual_pairs: measured.residual_pairs,
        pair_bound: x,
    })
}

/// Reusable scratch space for counting pairs in `G - C` many times over.
#[derive(Debug, Clone)]
pub struct PairCounter {
    seen: Vec<u32>,
    stamp: u32,
    stack: Vec<Vertex>,
}

impl PairCounter {
    pub fn new(n: usize) -> Self {
        PairCounter { seen: vec![0; n], stamp: 0, stack: Vec::new() }
    }

    fn next_stamp(&mut self, n: usize) -> u32 {
        if self.seen.len() < n {
            self.seen.resize(n, 0);
        }
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.stamp = 1;
        }
        self.stamp
    }

    /// Pairs in `G` restricted to vertices with `deleted[v] == false`.
    pub fn residual_pairs(&mut self, g: &Graph, deleted: &[bool]) -> PairCount {
        let stamp = self.next_stamp(g.vertex_count());
        let mut total = 0;
        for start in g.vertices() {
            if deleted[start] || self.seen[start] == stamp {
                continue;
            }
            self.seen[start] = stamp;
            self.stack.push(start);
            let mut size = 0;
            while let Some(u) = self.stack.pop() {
                size += 1;
                for &w in g.neighbors(u) {
                    if !deleted[w] && self.seen[w] != stamp {
                        self.seen[w] = stamp;
                        self.stack.push(w);
                    }
                }
            }
            total += pairs_of(size);
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> Graph {
        Graph::complete(3).disjoint_union(&Graph::complete(3))
    }

    #[test]
    fn components_of_small_graphs() {
        let empty = Graph::new(3).connected_components();
        assert_eq!(empty.sizes, vec![1, 1, 1]);

        let k3 = Graph::complete(3).connected_components();
        assert_eq!(k3.sizes, vec![3]);

        let two_edges = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap().connected_components();
        assert_eq!(two_edges.sizes, vec![2, 2]);
        assert_eq!(two_edges.label, vec![0, 0, 1, 1]);
    }

    #[test]
    fn connected_pair_counts() {
        assert_eq!(Graph::new(5).connected_pairs(), 0);
        assert_eq!(Graph::complete(3).connected_pairs(), 6);
        assert_eq!(Graph::path(4).connected_pairs(), 12);
    }

    #[test]
    fn vertex_removal_keeps_identities() {
        let sub = Graph::complete(3).remove_vertices(&[0]).unwrap();
        assert_eq!(sub.graph.edge_count(), 1);
        assert_eq!(sub.graph.connected_pairs(), 2);
        assert_eq!(sub.original, vec![1, 2]);

        let p4 = Graph::path(4);
        let sub = p4.remove_vertices(&[1]).unwrap();
        assert_eq!(sub.original, vec![0, 2, 3]);
        assert_eq!(sub.graph.connected_components().sizes, vec![1, 2]);
        assert_eq!(sub.graph.connected_pairs(), 2);

        let same = p4.remove_vertices(&[]).unwrap();
        assert_eq!(same.graph, p4);

        assert!(matches!(p4.remove_vertices(&[4]), Err(CncError::UnknownVertex { vertex: 4, .. })));
    }

    #[test]
    fn removed_pairs() {
        assert_eq!(Graph::path(4).pairs_removed(&[1]).unwrap(), 10);
        assert_eq!(Graph::complete(3).pairs_removed(&[0, 1, 2]).unwrap(), 6);
        assert_eq!(two_triangles().pairs_removed(&[0]).unwrap(), 4);
    }

    #[test]
    fn isolated_vertices() {
        let (sub, removed) = Graph::new(4).remove_isolated();
        assert_eq!(sub.graph.vertex_count(), 0);
        assert_eq!(removed, vec![0, 1, 2, 3]);

        let (sub, removed) = Graph::complete(3).remove_isolated();
        assert_eq!(sub.graph, Graph::complete(3));
        assert!(removed.is_empty());

        let padded = Graph::complete(3).disjoint_union(&Graph::new(2));
        let (sub, removed) = padded.remove_isolated();
        assert_eq!(sub.graph, Graph::complete(3));
        assert_eq!(removed, vec![3, 4]);
    }

    #[test]
    fn certificate_checks() {
        let k3 = Graph::complete(3);
        assert!(verify_solution(&k3, &[0], 1, 2).unwrap().feasible);
        let report = verify_solution(&k3, &[0], 1, 1).unwrap();
        assert!(!report.feasible);
        assert_eq!(report.residual_pairs, 2);
        assert!(!verify_solution(&Graph::complete(4), &[0], 1, 2).unwrap().feasible);
        assert!(verify_solution(&k3, &[7], 1, 2).is_err());
    }

    #[test]
    fn graph_rejects_bad_edges() {
        let mut g = Graph::new(2);
        assert_eq!(g.add_edge(0, 0), Err(CncError::SelfLoop(0)));
        assert!(g.add_edge(0, 2).is_err());
        assert!(g.add_edge(0, 1).unwrap());
        assert!(!g.add_edge(1, 0).unwrap());
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn edges_are_lexicographic() {
        let g = Graph::from_edges(4, [(3, 1), (0, 2), (1, 0)]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 3)]);
    }
}
