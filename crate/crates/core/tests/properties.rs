mod common;

use proptest::prelude::*;

use cnc::decomposition::{heuristic_decomposition, make_nice, parse_td, validate_nice, write_nice_td};
use cnc::engine::{decide, Algorithm};
use cnc::families::canonical_code;
use cnc::graph::verify_solution;
use cnc::instance::{parse_instance, serialize_instance, Instance};
use cnc::kernel::{kernelize_kx, KernelOutcome};
use cnc::{Graph, Vertex};
use common::{set_of, Bits};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        let slots = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(any::<bool>(), slots).prop_map(move |bits| {
            let mut g = Graph::new(n);
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        g.add_edge(u, v).unwrap();
                    }
                    i += 1;
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engines_match_reference(g in graph(9), k in 0usize..4, x in 0u64..16) {
        let truth = Bits::new(&g).cnc(k, x);
        let inst = Instance::with_x(g, k, x);
        for engine in Algorithm::ENGINES {
            prop_assert_eq!(decide(&inst, engine).unwrap(), truth, "{}", engine);
        }
    }

    #[test]
    fn y_targets_match_reference(g in graph(9), k in 0usize..4, y in 0u64..40) {
        let bits = Bits::new(&g);
        let total = bits.pairs();
        let truth = y <= total && bits.cnc(k, total - y);
        let inst = Instance::with_y(g, k, y);
        for engine in Algorithm::ENGINES {
            prop_assert_eq!(decide(&inst, engine).unwrap(), truth, "{}", engine);
        }
    }

    #[test]
    fn pair_accounting(g in graph(12), picks in proptest::collection::vec(0usize..12, 0..5)) {
        let cut: Vec<Vertex> = picks.into_iter().filter(|&v| v < g.vertex_count()).collect();
        let bits = Bits::new(&g);
        let residual = g.residual_pairs(&cut).unwrap();
        prop_assert_eq!(residual, bits.pairs_without(set_of(&cut)));
        prop_assert_eq!(g.pairs_removed(&cut).unwrap() + residual, g.connected_pairs());
        let check = verify_solution(&g, &cut, cut.len(), residual).unwrap();
        prop_assert!(check.feasible);
    }

    #[test]
    fn kernel_preserves_answers(g in graph(10), k in 0usize..4, x in 0u64..12) {
        let truth = Bits::new(&g).cnc(k, x);
        match kernelize_kx(&g, k, x) {
            KernelOutcome::TrivialNo { .. } => prop_assert!(!truth),
            KernelOutcome::Kernel(trace) => {
                prop_assert_eq!(Bits::new(&trace.kernel_graph).cnc(trace.k_out, x), truth);
                prop_assert_eq!(trace.k_in - trace.k_out, trace.forced_vertices.len());
            }
        }
    }

    #[test]
    fn nice_decompositions_validate_and_round_trip(g in graph(14)) {
        let ntd = make_nice(&heuristic_decomposition(&g)).unwrap();
        prop_assert!(validate_nice(&g, &ntd).is_ok());
        let text = write_nice_td(&ntd, g.vertex_count());
        let back = parse_td(&text).unwrap();
        if ntd.is_empty() {
            prop_assert!(back.decomposition.bags.is_empty());
        } else {
            prop_assert_eq!(back.nice.as_ref(), Some(&ntd));
        }
    }

    #[test]
    fn instances_round_trip(g in graph(15), k in 0usize..20, x in 0u64..1000, as_y in any::<bool>()) {
        let inst = if as_y { Instance::with_y(g, k, x) } else { Instance::with_x(g, k, x) };
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(serialize_instance(&back), text);
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn canonical_codes_ignore_relabeling(g in graph(8), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let n = g.vertex_count();
        let mut perm: Vec<Vertex> = (0..n).collect();
        perm.shuffle(&mut cnc::families::seeded_rng(seed));
        let h = Graph::from_edges(n, g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap();
        prop_assert_eq!(canonical_code(&g), canonical_code(&h));
    }
}
