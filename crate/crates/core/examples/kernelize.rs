//! The high-degree rule for `k + x`: forced vertices and the reduced instance.

use cnc::instance::{serialize_instance, Instance};
use cnc::kernel::{kernelize_kx, within_size_bound, KernelOutcome};
use cnc::Graph;

fn main() -> cnc::Result<()> {
    // two stars whose centres must both go, plus a path left alone
    let mut edges = Vec::new();
    for leaf in 1..=6 {
        edges.push((0, leaf));
        edges.push((7, 7 + leaf));
    }
    edges.extend([(14, 15), (15, 16)]);
    let g = Graph::from_edges(17, edges)?;

    let (k, x) = (3, 2);
    match kernelize_kx(&g, k, x) {
        KernelOutcome::TrivialNo { forced_vertices } => println!("NO: forced {forced_vertices:?} exceed k"),
        KernelOutcome::Kernel(trace) => {
            println!("forced {:?}, k {} -> {}", trace.forced_vertices, trace.k_in, trace.k_out);
            println!("kept original ids {:?}", trace.kernel_ids);
            let n = trace.kernel_graph.vertex_count();
            println!("kernel size {n}, within bound: {}", within_size_bound(n, k, x));
            print!("{}", serialize_instance(&Instance::with_x(trace.kernel_graph, trace.k_out, x)));
        }
    }

    let outcome = kernelize_kx(&Graph::complete(6), 1, 0);
    println!("K6 with k = 1, x = 0: trivial NO = {}", outcome.kernel().is_none());
    Ok(())
}
