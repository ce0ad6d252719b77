//! Multicolored Clique gadgets at scaled sizes, the forward cut, and the
//! width bound.

use cnc::decomposition::validate_decomposition;
use cnc::reductions::{
    build_mcc_instance, component_census, expected_census, forward_solution_cut, mcc_bound_decomposition,
    mcc_parameters, CliqueInstance, GadgetSizes, DEFAULT_VERTEX_CAP,
};
use cnc::{CncError, Graph};

fn main() -> cnc::Result<()> {
    let full = mcc_parameters(2, 1, 2, &GadgetSizes::asymptotic(2, 2))?;
    println!("asymptotic sizes, n = 2: k = {}, width bound {}, {} vertices", full.k, full.treewidth_bound, full.total_vertices);

    let source = CliqueInstance::colored(Graph::path(3), 2, vec![1, 2, 1])?;
    match build_mcc_instance(&source, &GadgetSizes::asymptotic(3, 2), DEFAULT_VERTEX_CAP) {
        Err(CncError::CapExceeded { required, cap }) => println!("asymptotic sizes refused: {required} > {cap}"),
        other => println!("unexpected: {:?}", other.map(|o| o.0.vertex_count())),
    }

    let sizes = GadgetSizes { a: 2, b: 3, cv: 4, x: 5, y: 6, z: 7, l3: 4 };
    let (out, layout) = build_mcc_instance(&source, &sizes, DEFAULT_VERTEX_CAP)?;
    println!("scaled: N = {}, k = {}, target {:?}", out.vertex_count(), out.instance.k, out.instance.target);
    println!("roles {:?}", out.role_counts());

    let cut = forward_solution_cut(&out.instance.graph, &layout, &[0, 1])?;
    let rest = out.instance.graph.remove_vertices(&cut.vertices)?;
    println!("forward cut from {{0, 1}}: |C| = {}, residual {}", cut.vertices.len(), cut.residual_pairs);
    println!("census {:?}, expected {:?}", component_census(&rest.graph), expected_census(&layout));

    let td = mcc_bound_decomposition(&layout);
    validate_decomposition(&out.instance.graph, &td)?;
    println!("direct decomposition width {} <= bound {}", td.width(), layout.parameters.treewidth_bound);
    Ok(())
}
