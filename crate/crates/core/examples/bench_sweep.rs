//! Cross-engine benchmark over a graph family, plus a branch-kx scaling sweep.

use cnc::bench::{run_bench, to_csv, BenchSpec, Family};
use cnc::branching::solve_branch_kx;
use cnc::engine::{Algorithm, SelectionConfig};
use cnc::families::{random_graph, seeded_rng};

fn main() -> cnc::Result<()> {
    let spec = BenchSpec {
        family: Family::AllGraphs(5),
        engines: Algorithm::ENGINES.to_vec(),
        ks: vec![0, 1, 2],
        xs: vec![0, 2, 4, 6],
        repetitions: 1,
        workers: 0,
        config: SelectionConfig::default(),
    };
    let rows = run_bench(&spec)?;
    let csv = to_csv(&rows);
    println!("{} rows, engines agree on every instance", rows.len());
    for line in csv.lines().take(5) {
        println!("{line}");
    }

    let mut rng = seeded_rng(5);
    for i in 0..3 {
        let g = random_graph(16, 0.12, &mut rng);
        let nodes: Vec<u64> = (0..=8).map(|x| solve_branch_kx(&g, 3, x).stats.nodes_visited).collect();
        let ratio = nodes.windows(2).map(|w| w[1] as f64 / w[0].max(1) as f64).fold(0.0, f64::max);
        println!("graph {i}: nodes for x = 0..8 {nodes:?}, largest step ratio {ratio:.2}");
    }
    Ok(())
}
