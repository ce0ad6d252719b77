//! Counting ordered connected pairs before and after deleting vertices.

use cnc::graph::verify_solution;
use cnc::Graph;

fn main() -> cnc::Result<()> {
    // two triangles joined by a bridge 2-3
    let g = Graph::from_edges(6, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)])?;
    println!("n = {}, m = {}, pairs = {}", g.vertex_count(), g.edge_count(), g.connected_pairs());

    for cut in [vec![], vec![2], vec![3], vec![2, 3]] {
        let labels = g.remove_vertices(&cut)?.graph.connected_components();
        println!(
            "delete {cut:?}: components {:?}, residual {}, removed {}",
            labels.sizes,
            g.residual_pairs(&cut)?,
            g.pairs_removed(&cut)?
        );
    }

    let check = verify_solution(&g, &[2], 1, 12)?;
    println!("{{2}} with k = 1, x = 12: feasible = {}", check.feasible);
    Ok(())
}
