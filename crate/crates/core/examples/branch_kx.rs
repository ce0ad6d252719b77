//! Bounded search over minimal edge-deletion covers, with its node counts.

use cnc::branching::{enumerate_minimal_covers, search_tree_envelope, solve_branch_kx};
use cnc::families::{random_graph, seeded_rng};

fn main() {
    let g = random_graph(14, 0.25, &mut seeded_rng(11));
    println!("G(14, 0.25): m = {}, pairs = {}", g.edge_count(), g.connected_pairs());

    let k = 3;
    for x in 0..=8 {
        let out = solve_branch_kx(&g, k, x);
        println!(
            "k = {k}, x = {x}: {} nodes (envelope {}), answer {}",
            out.stats.nodes_visited,
            search_tree_envelope(k, x),
            if out.decision { "YES" } else { "NO" }
        );
        if let Some(cut) = out.cut {
            println!("    cut {:?} leaves {} pairs", cut.vertices, cut.residual_pairs);
        }
    }

    let (covers, stats) = enumerate_minimal_covers(&g, 2, 4);
    println!("{} minimal covers with k = 2, x = 4 ({} nodes)", covers.len(), stats.nodes_visited);
}
