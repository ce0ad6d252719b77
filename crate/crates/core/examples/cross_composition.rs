//! Several Clique instances composed into one CNC instance.

use cnc::instance::Target;
use cnc::oracle::Oracle;
use cnc::reductions::{cross_compose, has_clique, CliqueInstance};
use cnc::Graph;

fn main() -> cnc::Result<()> {
    let triangle_plus = Graph::from_edges(4, [(0, 1), (0, 2), (1, 2)])?;
    let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)])?;
    let parts = [path.clone(), triangle_plus, path];
    let sources: Vec<CliqueInstance> = parts.iter().map(|g| CliqueInstance::new(g.clone(), 3)).collect();

    let out = cross_compose(&sources, 3)?;
    println!("N = {}, k = {}, target {:?}, parts start at {:?}", out.vertex_count(), out.instance.k, out.instance.target, out.boundaries);
    for w in &out.warnings {
        println!("warning: {w}");
    }

    let Target::Y(y) = out.instance.target else { unreachable!() };
    let g = &out.instance.graph;
    let best = Oracle::default().min_pairs(g, out.instance.k)?;
    let removed = g.connected_pairs() - best.min_residual_pairs;
    println!("constituents with a triangle: {:?}", parts.iter().map(|p| has_clique(p, 3)).collect::<Vec<_>>());
    println!("best removal {removed} vs y = {y}: {}", if removed >= y { "YES" } else { "NO" });
    Ok(())
}
