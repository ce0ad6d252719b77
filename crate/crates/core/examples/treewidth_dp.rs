//! Heuristic decompositions, nice form, and the dynamic program over them.

use cnc::decomposition::{heuristic_decomposition, make_nice, validate_nice, write_nice_td};
use cnc::families::{random_tree, seeded_rng};
use cnc::oracle::Oracle;
use cnc::treewidth_dp::solve_wx;
use cnc::Graph;

fn main() -> cnc::Result<()> {
    let grid = {
        let mut edges = Vec::new();
        for r in 0..3 {
            for c in 0..4 {
                let v = r * 4 + c;
                if c + 1 < 4 {
                    edges.push((v, v + 1));
                }
                if r + 1 < 3 {
                    edges.push((v, v + 4));
                }
            }
        }
        Graph::from_edges(12, edges)?
    };
    let td = heuristic_decomposition(&grid);
    let nice = make_nice(&td)?;
    validate_nice(&grid, &nice)?;
    println!("3x4 grid: width {}, {} bags, {} nice nodes", td.width(), td.bags.len(), nice.len());

    for (k, x) in [(1, 20), (3, 36), (4, 26), (5, 12)] {
        let out = solve_wx(&grid, &nice, k, x)?;
        println!(
            "k = {k}, x = {x}: {} (oracle {}) cut {:?}, {} entries, largest table {} (bound {})",
            if out.decision { "YES" } else { "NO " },
            Oracle::default().min_pairs(&grid, k)?.min_residual_pairs <= x,
            out.cut.map(|c| c.vertices),
            out.stats.total_entries,
            out.stats.max_table,
            out.stats.table_bound
        );
    }

    let tree = random_tree(9, &mut seeded_rng(2));
    let nice = make_nice(&heuristic_decomposition(&tree))?;
    print!("{}", write_nice_td(&nice, tree.vertex_count()));
    Ok(())
}
