//! Exhaustive search, the reference every other engine is tested against.

use cnc::oracle::{binomial, Oracle};
use cnc::CncError;
use cnc::Graph;

fn main() -> cnc::Result<()> {
    let g = Graph::cycle(8);
    let oracle = Oracle::default();
    for k in 0..=3 {
        let best = oracle.min_pairs(&g, k)?;
        println!(
            "C8, k = {k}: min residual {} via {:?} ({} subsets)",
            best.min_residual_pairs, best.best_cut.vertices, best.explored
        );
    }

    let exact = oracle.max_removed_exact(&g, 2)?;
    println!("exactly two deletions remove at most {} pairs: {:?}", exact.removed, exact.witness);

    let big = Graph::path(60);
    println!("C(60, 10) = {}", binomial(60, 10));
    match Oracle::with_cap(1_000_000).min_pairs(&big, 10) {
        Err(CncError::CapExceeded { required, cap }) => println!("refused: {required} subsets > cap {cap}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
