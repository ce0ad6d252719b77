mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use cnc::branching::solve_branch_kx;
use cnc::component_dp::{solve_y, Shortcut};
use cnc::decomposition::{
    decomposition_from_order, heuristic_decomposition, make_nice, validate_nice, NiceTreeDecomposition, NodeKind,
    TreeDecomposition,
};
use cnc::families::{all_graphs, random_graph, random_tree, seeded_rng};
use cnc::instance::{parse_instance, serialize_instance, Instance, Target};
use cnc::kernel::{kernelize_kx, KernelOutcome};
use cnc::oracle::Oracle;
use cnc::reductions::{
    build_mcc_instance, cross_compose, forward_solution_cut, reduce_clique_to_cnc, CliqueInstance, GadgetSizes,
    DEFAULT_VERTEX_CAP,
};
use cnc::treewidth_dp::solve_wx;
use cnc::{Cut, Graph, Vertex};
use common::{set_of, Bits};

#[derive(Default)]
struct Tally {
    checks: AtomicU64,
    failures: AtomicU64,
}

impl Tally {
    fn record(&self, ok: bool) {
        self.checks.fetch_add(1, Ordering::Relaxed);
        if !ok {
            self.failures.fetch_add(1, Ordering::Relaxed);
        }
    }

    fn checks(&self) -> u64 {
        self.checks.load(Ordering::Relaxed)
    }

    fn failures(&self) -> u64 {
        self.failures.load(Ordering::Relaxed)
    }
}

/// A certificate must respect the budget and the pair bound under the
/// reference counter.
fn certificate_ok(bits: &Bits, cut: &Option<Cut>, k: usize, x: u64) -> bool {
    match cut {
        Some(c) => c.vertices.len() <= k && bits.pairs_without(set_of(&c.vertices)) <= x,
        None => true,
    }
}

fn kernel_bound(k: usize, x: u64) -> f64 {
    let k = k as f64;
    k * (k + (x as f64).sqrt()) + x as f64 + k
}

/// Kernel checks shared by the first two suites.
fn check_kernel(g: &Graph, k: usize, x: u64, truth: bool, kernel: &Tally) {
    match kernelize_kx(g, k, x) {
        KernelOutcome::TrivialNo { .. } => kernel.record(!truth),
        KernelOutcome::Kernel(trace) => {
            let reduced = Bits::new(&trace.kernel_graph).cnc(trace.k_out, x);
            let small = trace.kernel_graph.vertex_count() as f64 <= kernel_bound(k, x) + 1e-9;
            kernel.record(reduced == truth && (!truth || small));
        }
    }
}

struct SuiteTallies {
    branch: Tally,
    dp_wx: Tally,
    dp_y: Tally,
    vertex_cover: Tally,
    kernel: Tally,
    envelope: Tally,
}

fn cross_validation(t: &SuiteTallies) -> (bool, String) {
    let start = Instant::now();
    let expected = [1usize, 1, 2, 4, 11, 34, 156, 1044];
    let mut graphs = Vec::new();
    let mut counts = Vec::new();
    for n in 0..=7 {
        let family = all_graphs(n);
        counts.push(family.len());
        graphs.extend(family);
    }
    let mut rng = seeded_rng(2024);
    for _ in 0..500 {
        let n = rng.gen_range(8..=12);
        let p = rng.gen_range(0.15..0.7);
        graphs.push(random_graph(n, p, &mut rng));
    }
    let oracle = Oracle::default();
    graphs.par_iter().for_each(|g| {
        let bits = Bits::new(g);
        let total = bits.pairs();
        let nice = make_nice(&heuristic_decomposition(g)).expect("heuristic decompositions are valid");
        for k in 0..=3 {
            let best = bits.min_pairs(k);
            for x in 0..=10u64 {
                let truth = best <= x;
                let branch = solve_branch_kx(g, k, x);
                t.branch.record(branch.decision == truth && certificate_ok(&bits, &branch.cut, k, x));
                t.envelope.record(u128::from(branch.stats.nodes_visited) <= 3u128.pow((x as u32) + k as u32));

                let wx = solve_wx(g, &nice, k, x).expect("valid decomposition");
                t.dp_wx.record(wx.decision == truth && certificate_ok(&bits, &wx.cut, k, x));

                let y = total.saturating_sub(x);
                let dy = solve_y(g, k, y, &oracle).expect("within cap");
                t.dp_y.record(dy.decision == truth && certificate_ok(&bits, &dy.cut, k, x));

                check_kernel(g, k, x, truth, &t.kernel);
            }
        }
    });
    let failures = t.branch.failures() + t.dp_wx.failures() + t.dp_y.failures();
    let elapsed = start.elapsed().as_secs_f64();
    let ok = failures == 0 && counts == expected && elapsed < 1800.0;
    (
        ok,
        format!(
            "{} graphs (classes per n: {counts:?}), {} decisions per engine; discrepancies branch-kx {}, dp-wx {}, dp-y {}; {elapsed:.1}s",
            graphs.len(),
            t.branch.checks(),
            t.branch.failures(),
            t.dp_wx.failures(),
            t.dp_y.failures()
        ),
    )
}

fn vertex_cover(t: &SuiteTallies) -> (bool, String) {
    let mut rng = seeded_rng(77);
    let graphs: Vec<Graph> = (0..200)
        .map(|_| {
            let n = rng.gen_range(1..=16);
            let p = rng.gen_range(0.1..0.6);
            random_graph(n, p, &mut rng)
        })
        .collect();
    graphs.par_iter().for_each(|g| {
        let bits = Bits::new(g);
        let mvc = bits.min_vertex_cover();
        let mut ks: Vec<usize> = vec![0, 1, 2, 3, mvc.saturating_sub(1), mvc, mvc + 1];
        ks.retain(|&k| k <= g.vertex_count());
        ks.sort_unstable();
        ks.dedup();
        for k in ks {
            let truth = mvc <= k;
            let branch = solve_branch_kx(g, k, 0);
            t.vertex_cover.record(branch.decision == truth && certificate_ok(&bits, &branch.cut, k, 0));
            t.envelope.record(u128::from(branch.stats.nodes_visited) <= 3u128.pow(k as u32));
            check_kernel(g, k, 0, truth, &t.kernel);
        }
    });
    (
        t.vertex_cover.failures() == 0,
        format!("200 graphs, {} runs at x = 0, {} discrepancies", t.vertex_cover.checks(), t.vertex_cover.failures()),
    )
}

fn clique_fidelity() -> (bool, String) {
    let worked = reduce_clique_to_cnc(&CliqueInstance::new(Graph::complete(3), 3));
    let worked_ok = worked.vertex_count() == 12 && worked.instance.k == 3 && worked.instance.target == Target::Y(132);

    let mut cases = Vec::new();
    for n in 1..=5 {
        for g in all_graphs(n) {
            for ell in 1..=n {
                cases.push((g.clone(), ell));
            }
        }
    }
    let mismatches: Vec<(usize, usize, usize, bool)> = cases
        .par_iter()
        .filter_map(|(g, ell)| {
            let out = reduce_clique_to_cnc(&CliqueInstance::new(g.clone(), *ell));
            let h = Bits::new(&out.instance.graph);
            let Target::Y(y) = out.instance.target else { unreachable!() };
            let yes = h.pairs() >= y && h.cnc(out.instance.k, h.pairs() - y);
            let clique = Bits::new(g).has_clique(*ell);
            (yes != clique).then_some((g.vertex_count(), g.edge_count(), *ell, yes))
        })
        .collect();
    let at_full = mismatches.iter().filter(|(n, _, ell, _)| n == ell).count();
    let false_yes = mismatches.iter().filter(|m| m.3).count();
    (
        worked_ok && mismatches.is_empty(),
        format!(
            "K3 example N = {}, k = {}, target {:?}; {} (graph, ell) pairs, {} discrepancies \
             ({} YES without a clique, {} with ell = n)",
            worked.vertex_count(),
            worked.instance.k,
            worked.instance.target,
            cases.len(),
            mismatches.len(),
            false_yes,
            at_full
        ),
    )
}

/// Component sizes of at least two, by plain BFS.
fn census(g: &Graph, removed: &[Vertex]) -> BTreeMap<usize, usize> {
    let n = g.vertex_count();
    let mut gone = vec![false; n];
    for &v in removed {
        gone[v] = true;
    }
    let mut out = BTreeMap::new();
    for s in 0..n {
        if gone[s] {
            continue;
        }
        gone[s] = true;
        let mut stack = vec![s];
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &w in g.neighbors(u) {
                if !gone[w] {
                    gone[w] = true;
                    stack.push(w);
                }
            }
        }
        if size >= 2 {
            *out.entry(size).or_insert(0) += 1;
        }
    }
    out
}

fn forward_accounting() -> (bool, String) {
    let sources = [
        (Graph::path(2), vec![1, 2]),
        (Graph::path(3), vec![1, 2, 1]),
        (Graph::from_edges(3, [(0, 1), (0, 2)]).unwrap(), vec![1, 2, 2]),
        (Graph::from_edges(3, [(0, 1)]).unwrap(), vec![1, 2, 1]),
    ];
    let ell = 2u64;
    let mut rng = seeded_rng(8);
    let mut checks = 0;
    let mut violations = 0;
    for (g, colors) in &sources {
        let src = CliqueInstance::colored(g.clone(), 2, colors.clone()).unwrap();
        let (n, m) = (g.vertex_count() as u64, g.edge_count() as u64);
        for _ in 0..50 {
            let a = rng.gen_range(1..=4);
            let sizes = GadgetSizes {
                a,
                b: rng.gen_range(1..=3),
                cv: rng.gen_range(1..=4),
                x: rng.gen_range(1..=5),
                y: rng.gen_range(1..=5),
                z: rng.gen_range(1..=5),
                l3: ell * a,
            };
            let (out, layout) = build_mcc_instance(&src, &sizes, DEFAULT_VERTEX_CAP).unwrap();
            let h = &out.instance.graph;
            let pairs = ell * (ell - 1) / 2;
            let k_expected =
                ell * sizes.a + pairs + sizes.b * (2 * (ell - 1) * (n - ell) + 4 * (m - pairs));
            let mut expected = BTreeMap::new();
            let mut add = |size: u64, count: u64| {
                if count > 0 && size >= 2 {
                    *expected.entry(size as usize).or_insert(0) += count as usize;
                }
            };
            add(sizes.y + sizes.a, n - ell);
            add(sizes.x + 1, m - pairs);
            add(sizes.cv + 2 * sizes.b + 2 * sizes.z + 2 * n + 1, 4 * pairs);
            let x_expected: u64 = expected.iter().map(|(&s, &c)| (s * (s - 1) * c) as u64).sum();
            let Target::X(x) = out.instance.target else { unreachable!() };

            for (u, v) in g.edges() {
                checks += 1;
                let cut = forward_solution_cut(h, &layout, &[u, v]).unwrap();
                let found = census(h, &cut.vertices);
                let residual: u64 = found.iter().map(|(&s, &c)| (s * (s - 1) * c) as u64).sum();
                let ok = cut.vertices.len() == out.instance.k
                    && out.instance.k as u64 == k_expected
                    && residual == x
                    && x == x_expected
                    && cut.residual_pairs == x
                    && found == expected;
                if !ok {
                    violations += 1;
                }
            }
        }
    }
    (violations == 0, format!("{checks} forward cuts over 4 sources x 50 size draws, {violations} violations"))
}

/// Independent check of the nice properties, rooted at `ntd.root`.
fn nice_ok(g: &Graph, ntd: &NiceTreeDecomposition) -> bool {
    let count = ntd.nodes.len();
    let Some(root) = ntd.root else { return g.vertex_count() == 0 };
    let mut parent = vec![usize::MAX; count];
    let mut seen = vec![false; count];
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(i) = stack.pop() {
        for &c in &ntd.nodes[i].children {
            if c >= count || seen[c] {
                return false;
            }
            seen[c] = true;
            parent[c] = i;
            stack.push(c);
        }
    }
    if seen.iter().any(|s| !s) {
        return false;
    }
    let contains = |i: usize, v: Vertex| ntd.nodes[i].bag.binary_search(&v).is_ok();
    for (i, node) in ntd.nodes.iter().enumerate() {
        if node.bag.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        let ok = match (node.kind, node.children.as_slice()) {
            (NodeKind::Leaf(v), []) => node.bag == [v],
            (NodeKind::Introduce(v), [c]) => {
                contains(i, v) && !contains(*c, v) && node.bag.iter().filter(|&&w| w != v).eq(ntd.nodes[*c].bag.iter())
            }
            (NodeKind::Forget(v), [c]) => {
                !contains(i, v) && contains(*c, v) && ntd.nodes[*c].bag.iter().filter(|&&w| w != v).eq(node.bag.iter())
            }
            (NodeKind::Join, [l, r]) => ntd.nodes[*l].bag == node.bag && ntd.nodes[*r].bag == node.bag,
            _ => false,
        };
        if !ok {
            return false;
        }
    }
    for v in g.vertices() {
        let holders: Vec<usize> = (0..count).filter(|&i| contains(i, v)).collect();
        let tops = holders.iter().filter(|&&i| i == root || !contains(parent[i], v)).count();
        if tops != 1 {
            return false;
        }
    }
    g.edges().all(|(u, v)| (0..count).any(|i| contains(i, u) && contains(i, v)))
}

fn padded(td: &TreeDecomposition, extra: Vertex) -> TreeDecomposition {
    let bags = td
        .bags
        .iter()
        .map(|b| {
            let mut b = b.clone();
            if let Err(pos) = b.binary_search(&extra) {
                b.insert(pos, extra);
            }
            b
        })
        .collect();
    TreeDecomposition { bags, edges: td.edges.clone() }
}

fn treewidth_machinery() -> (bool, String) {
    let mut rng = seeded_rng(31);
    let graphs: Vec<Graph> = (0..1000)
        .map(|_| {
            let n = rng.gen_range(1..=30);
            let p = rng.gen_range(0.02..0.4);
            random_graph(n, p, &mut rng)
        })
        .collect();
    let invalid = graphs
        .par_iter()
        .filter(|g| {
            let ntd = make_nice(&heuristic_decomposition(g)).expect("heuristic output is a tree");
            validate_nice(g, &ntd).is_err() || !nice_ok(g, &ntd)
        })
        .count();

    let mut forest_bad = 0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=30);
        let tree = random_tree(n, &mut rng);
        let mut edges: Vec<(Vertex, Vertex)> = tree.edges().collect();
        edges.shuffle(&mut rng);
        edges.truncate(rng.gen_range(1..=edges.len()));
        let forest = Graph::from_edges(n, edges).unwrap();
        assert!(Bits::new(&forest).is_forest());
        if heuristic_decomposition(&forest).width() != 1 {
            forest_bad += 1;
        }
    }

    let mut instances = Vec::new();
    for _ in 0..100 {
        let n = rng.gen_range(5..=11);
        let p = rng.gen_range(0.2..0.6);
        let g = random_graph(n, p, &mut rng);
        let mut order: Vec<Vertex> = g.vertices().collect();
        order.shuffle(&mut rng);
        let extra = rng.gen_range(0..n);
        instances.push((g, order, extra));
    }
    let wider = AtomicU64::new(0);
    let wrong = instances
        .par_iter()
        .map(|(g, order, extra)| {
            let best = heuristic_decomposition(g).width();
            let worse = padded(&decomposition_from_order(g, order), *extra);
            if worse.width() > best {
                wider.fetch_add(1, Ordering::Relaxed);
            }
            let ntd = make_nice(&worse).unwrap();
            let bits = Bits::new(g);
            let mut errors = 0;
            for k in 0..=2 {
                let best_pairs = bits.min_pairs(k);
                for x in [0u64, 2, 4, 6, 8] {
                    let out = solve_wx(g, &ntd, k, x).unwrap();
                    if out.decision != (best_pairs <= x) || !certificate_ok(&bits, &out.cut, k, x) {
                        errors += 1;
                    }
                }
            }
            errors
        })
        .sum::<usize>();
    (
        invalid == 0 && forest_bad == 0 && wrong == 0,
        format!(
            "1000 nice decompositions, {invalid} invalid; 200 forests, {forest_bad} with width != 1; \
             100 instances on padded random-order decompositions ({} strictly wider), {wrong} wrong decisions",
            wider.load(Ordering::Relaxed)
        ),
    )
}

fn dp_y_envelope() -> (bool, String) {
    let mut rng = seeded_rng(55);
    let graphs: Vec<Graph> = (0..300)
        .map(|_| {
            let n = rng.gen_range(4..=30);
            let p = rng.gen_range(0.02..0.25);
            random_graph(n, p, &mut rng)
        })
        .collect();
    let oracle = Oracle::default();
    let envelope = Tally::default();
    let shortcut = Tally::default();
    let decisions = Tally::default();
    graphs.par_iter().for_each(|g| {
        let bits = Bits::new(g);
        let total = bits.pairs();
        let largest = g.connected_components().sizes.iter().copied().max().unwrap_or(0) as u64;
        for k in 0..=3 {
            let best = bits.min_pairs(k);
            for y in [0u64, 1, 2, 3, 5, 8, 13, 22] {
                let out = solve_y(g, k, y, &oracle).unwrap();
                let truth = y <= total && best <= total - y;
                let x = total.saturating_sub(y);
                decisions.record(out.decision == truth && certificate_ok(&bits, &out.cut, k, x));
                if out.stats.shortcut.is_none() {
                    envelope.record(u128::from(out.stats.max_component_subsets) <= 1u128 << y);
                }
                if k >= 1 && y >= 1 && largest > y {
                    shortcut.record(out.stats.shortcut == Some(Shortcut::LargeComponent) && out.decision);
                }
            }
        }
    });
    (
        envelope.failures() == 0 && shortcut.failures() == 0 && decisions.failures() == 0,
        format!(
            "{} table runs, {} over 2^y; {} large-component cases, {} missed; {} decisions, {} wrong",
            envelope.checks(),
            envelope.failures(),
            shortcut.checks(),
            shortcut.failures(),
            decisions.checks(),
            decisions.failures()
        ),
    )
}

fn cross_composition() -> (bool, String) {
    let mut cases: Vec<(Vec<Graph>, usize)> = Vec::new();
    for (t, n, max_m) in [(2, 3, 3), (2, 4, 2), (2, 5, 2), (3, 3, 2), (3, 4, 1), (3, 5, 1)] {
        for m in 0..=max_m {
            let pool: Vec<Graph> = all_graphs(n).into_iter().filter(|g| g.edge_count() == m).collect();
            let mut picks = vec![0usize; t];
            loop {
                for ell in 1..=n {
                    cases.push((picks.iter().map(|&i| pool[i].clone()).collect(), ell));
                }
                // next non-decreasing index tuple
                let Some(pos) = (0..t).rev().find(|&i| picks[i] + 1 < pool.len()) else { break };
                let next = picks[pos] + 1;
                picks[pos..].iter_mut().for_each(|p| *p = next);
            }
        }
    }
    let results: Vec<(bool, bool, usize, usize)> = cases
        .par_iter()
        .map(|(parts, ell)| {
            let sources: Vec<CliqueInstance> = parts.iter().map(|g| CliqueInstance::new(g.clone(), *ell)).collect();
            let out = cross_compose(&sources, *ell).unwrap();
            assert!(out.vertex_count() <= 30);
            let h = Bits::new(&out.instance.graph);
            let Target::Y(y) = out.instance.target else { unreachable!() };
            let yes = h.pairs() >= y && h.cnc(out.instance.k, h.pairs() - y);
            let any = parts.iter().any(|g| Bits::new(g).has_clique(*ell));
            (yes, any, parts[0].vertex_count(), *ell)
        })
        .collect();
    let mismatches: Vec<_> = results.iter().filter(|(yes, any, _, _)| yes != any).collect();
    let at_full = mismatches.iter().filter(|(_, _, n, ell)| n == ell).count();
    let false_yes = mismatches.iter().filter(|m| m.0).count();
    let yes_cases = results.iter().filter(|r| r.1).count();
    (
        mismatches.is_empty(),
        format!(
            "{} compositions ({} with a YES constituent), {} discrepancies ({} YES with no YES constituent, {} with ell = n)",
            results.len(),
            yes_cases,
            mismatches.len(),
            false_yes,
            at_full
        ),
    )
}

fn round_trip() -> (bool, String) {
    let mut rng = seeded_rng(99);
    let mut failures = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(0..=40);
        let g = random_graph(n, rng.gen_range(0.0..0.5), &mut rng);
        let k = rng.gen_range(0..=n);
        let value = rng.gen_range(0..=2000);
        let inst = if rng.gen_bool(0.5) { Instance::with_x(g, k, value) } else { Instance::with_y(g, k, value) };
        let text = serialize_instance(&inst);
        let parsed = parse_instance(&text);

        // the same instance with comments and edges in random order
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let edge_count = inst.graph.edge_count();
        lines[1..=edge_count].shuffle(&mut rng);
        lines.insert(0, "c shuffled".into());
        let noisy = parse_instance(&(lines.join("\n") + "\n"));

        let ok = match (parsed, noisy) {
            (Ok(a), Ok(b)) => a == inst && b == inst && serialize_instance(&a) == text && serialize_instance(&b) == text,
            _ => false,
        };
        if !ok {
            failures += 1;
        }
    }
    (failures == 0, format!("1000 instances, {failures} mismatches"))
}

fn main() -> ExitCode {
    let tallies = SuiteTallies {
        branch: Tally::default(),
        dp_wx: Tally::default(),
        dp_y: Tally::default(),
        vertex_cover: Tally::default(),
        kernel: Tally::default(),
        envelope: Tally::default(),
    };
    let mut results = Vec::new();
    results.push(("oracle cross-validation", cross_validation(&tallies)));
    results.push(("vertex cover at x = 0", vertex_cover(&tallies)));
    results.push((
        "kernel size bound",
        (
            tallies.kernel.failures() == 0,
            format!("{} kernelizations, {} violations", tallies.kernel.checks(), tallies.kernel.failures()),
        ),
    ));
    results.push((
        "search tree envelope",
        (
            tallies.envelope.failures() == 0,
            format!("{} branch-kx runs, {} over 3^(x+k)", tallies.envelope.checks(), tallies.envelope.failures()),
        ),
    ));
    results.push(("clique reduction fidelity", clique_fidelity()));
    results.push(("gadget forward accounting", forward_accounting()));
    results.push(("treewidth machinery", treewidth_machinery()));
    results.push(("dp-y runtime envelope", dp_y_envelope()));
    results.push(("cross-composition", cross_composition()));
    results.push(("file format round trip", round_trip()));

    let mut all_pass = true;
    for (name, (ok, detail)) in &results {
        all_pass &= ok;
        println!("{} {name}: {detail}", if *ok { "PASS" } else { "FAIL" });
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
