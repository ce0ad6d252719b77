//! Clique instances turned into CNC instances, in all three variants.

use cnc::instance::Target;
use cnc::oracle::Oracle;
use cnc::reductions::{
    bipartition, degeneracy, has_clique, is_split, reduce_clique_bipartite, reduce_clique_split, reduce_clique_to_cnc,
    CliqueInstance, ReductionOutput,
};
use cnc::Graph;

fn answer(out: &ReductionOutput) -> cnc::Result<bool> {
    let g = &out.instance.graph;
    let Target::Y(y) = out.instance.target else { unreachable!() };
    let best = Oracle::default().min_pairs(g, out.instance.k)?;
    Ok(g.connected_pairs() - best.min_residual_pairs >= y)
}

fn main() -> cnc::Result<()> {
    let k3 = CliqueInstance::new(Graph::complete(3), 3);
    let out = reduce_clique_to_cnc(&k3);
    println!("K3, ell = 3: N = {}, k = {}, target {:?}, roles {:?}", out.vertex_count(), out.instance.k, out.instance.target, out.role_counts());
    println!("  oracle says {}", if answer(&out)? { "YES" } else { "NO" });

    let split = reduce_clique_split(&k3);
    println!("split variant is split: {}", is_split(&split.instance.graph));
    let bip = reduce_clique_bipartite(&k3);
    println!(
        "bipartite variant: bipartite {}, degeneracy {}",
        bipartition(&bip.instance.graph).is_some(),
        degeneracy(&bip.instance.graph).0
    );

    for (name, g, ell) in [("C5", Graph::cycle(5), 3), ("K4 minus an edge", Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])?, 3)] {
        let out = reduce_clique_to_cnc(&CliqueInstance::new(g.clone(), ell));
        println!("{name}, ell = {ell}: clique {}, reduced instance {}", has_clique(&g, ell), if answer(&out)? { "YES" } else { "NO" });
    }
    Ok(())
}
