//! Budget allocation across components when few pairs need removing.

use cnc::component_dp::solve_y;
use cnc::oracle::Oracle;
use cnc::Graph;

fn main() -> cnc::Result<()> {
    // components: K4, C5, P3 and an isolated vertex
    let g = Graph::complete(4).disjoint_union(&Graph::cycle(5)).disjoint_union(&Graph::path(3)).disjoint_union(&Graph::new(1));
    println!("pairs = {}", g.connected_pairs());

    for (k, y) in [(0, 0), (1, 3), (2, 16), (3, 24), (3, 27), (4, 30)] {
        let out = solve_y(&g, k, y, &Oracle::default())?;
        println!(
            "k = {k}, y = {y}: {} removed {} cut {:?} shortcut {:?} largest table {}",
            if out.decision { "YES" } else { "NO " },
            out.pairs_removed,
            out.cut.map(|c| c.vertices),
            out.stats.shortcut,
            out.stats.max_component_subsets
        );
    }
    Ok(())
}
