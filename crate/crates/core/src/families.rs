//! Graph families for tests and benchmarks.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, Vertex};

/// Deterministic generator used throughout the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi `G(n, p)`.
pub fn random_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    g
}

/// Random recursive tree: vertex `i` hangs below a uniform earlier vertex.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    let mut g = Graph::new(n);
    for v in 1..n {
        let parent = rng.gen_range(0..v);
        g.add_edge(parent, v).expect("in range");
    }
    g
}

fn edge_bit(n: usize, u: Vertex, v: Vertex) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    // row-major index into the strict upper triangle
    1u64 << (a * (2 * n - a - 1) / 2 + (b - a - 1))
}

/// Stable vertex colors from iterated neighbourhood refinement.
fn refine(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut color: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = g
            .vertices()
            .map(|v| {
                let mut around: Vec<usize> = g.neighbors(v).iter().map(|&w| color[w]).collect();
                around.sort_unstable();
                (color[v], around)
            })
            .collect();
        let mut distinct = signatures.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = signatures.iter().map(|s| distinct.binary_search(s).expect("present")).collect();
        let before = color.iter().collect::<HashSet<_>>().len();
        color = next;
        if distinct.len() == before || n == 0 {
            return color;
        }
    }
}

/// Canonical adjacency bitmask; equal iff the graphs are isomorphic.
/// Supports up to 11 vertices.
pub fn canonical_code(g: &Graph) -> u64 {
    let n = g.vertex_count();
    assert!(n <= 11, "canonical codes are limited to 11 vertices");
    let color = refine(g);
    let mut cells: Vec<Vec<Vertex>> = Vec::new();
    let mut order: Vec<Vertex> = g.vertices().collect();
    order.sort_by_key(|&v| color[v]);
    for v in order {
        match cells.last_mut() {
            Some(cell) if color[cell[0]] == color[v] => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }

    // position[v] in the relabeled graph; explore every order inside cells
    let mut best = u64::MAX;
    let mut position = vec![0usize; n];
    let mut layout: Vec<Vertex> = Vec::with_capacity(n);
    fn permute(
        g: &Graph,
        cells: &[Vec<Vertex>],
        cell: usize,
        used: &mut Vec<bool>,
        layout: &mut Vec<Vertex>,
        position: &mut [usize],
        best: &mut u64,
    ) {
        let n = g.vertex_count();
        if cell == cells.len() {
            for (i, &v) in layout.iter().enumerate() {
                position[v] = i;
            }
            let code = g.edges().fold(0u64, |acc, (u, v)| acc | edge_bit(n, position[u], position[v]));
            *best = (*best).min(code);
            return;
        }
        let members = &cells[cell];
        let placed = layout.len() - cells[..cell].iter().map(Vec::len).sum::<usize>();
        if placed == members.len() {
            permute(g, cells, cell + 1, used, layout, position, best);
            return;
        }
        for &v in members {
            if !used[v] {
                used[v] = true;
                layout.push(v);
                permute(g, cells, cell, used, layout, position, best);
                layout.pop();
                used[v] = false;
            }
        }
    }
    let mut used = vec![false; n];
    permute(g, &cells, 0, &mut used, &mut layout, &mut position, &mut best);
    if best == u64::MAX {
        0
    } else {
        best
    }
}

/// One representative of every isomorphism class on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let mut current = vec![Graph::new(0)];
    for size in 1..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for base in &current {
            for mask in 0u32..(1 << (size - 1)) {
                let mut g = Graph::new(size);
                for (u, v) in base.edges() {
                    g.add_edge(u, v).expect("in range");
                }
                for w in 0..size - 1 {
                    if mask >> w & 1 == 1 {
                        g.add_edge(w, size - 1).expect("in range");
                    }
                }
                if seen.insert(canonical_code(&g)) {
                    next.push(g);
                }
            }
        }
        current = next;
    }
    current
}
