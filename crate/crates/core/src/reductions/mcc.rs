//! Multicolored Clique to CNC with treewidth bounded in `ell`.
//!
//! Vertices and edges of the source become selection gadgets built from
//! connector gadgets (a core clique fully joined to a guard independent
//! set). For every ordered color pair two validation cliques tie the
//! connectors of vertex gadgets to those of edge gadgets, crossing low and
//! high orders.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{CliqueInstance, ReductionOutput, Role};
use crate::decomposition::TreeDecomposition;
use crate::error::{CncError, Result};
use crate::graph::{Cut, Graph, Vertex};
use crate::instance::Instance;

/// Default limit on materialized vertices.
pub const DEFAULT_VERTEX_CAP: u128 = 100_000;

/// Gadget dimensions; all must be positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetSizes {
    /// Selection clique size.
    pub a: u64,
    /// Core size.
    pub b: u64,
    /// Validation clique size.
    pub cv: u64,
    /// Dummies per edge gadget.
    pub x: u64,
    /// Dummies per vertex gadget.
    pub y: u64,
    /// Guard base size.
    pub z: u64,
    /// Budget share for selection cliques.
    pub l3: u64,
}

impl GadgetSizes {
    /// `A = ell^2, B = ell^4, Cv = ell^7, X = n^4, Y = n^9, Z = n^16, L3 = ell^3`,
    /// saturating at `u64::MAX`.
    pub fn asymptotic(n: usize, ell: usize) -> Self {
        let p = |base: usize, e: u32| (base as u64).checked_pow(e).unwrap_or(u64::MAX);
        GadgetSizes { a: p(ell, 2), b: p(ell, 4), cv: p(ell, 7), x: p(n, 4), y: p(n, 9), z: p(n, 16), l3: p(ell, 3) }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [("A", self.a), ("B", self.b), ("Cv", self.cv), ("X", self.x), ("Y", self.y), ("Z", self.z), ("L3", self.l3)];
        match fields.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(CncError::invalid(format!("gadget size {name} must be positive"))),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MccParameters {
    pub k: u128,
    pub x: u128,
    pub treewidth_bound: u128,
    pub vertex_gadget_size: u128,
    pub edge_gadget_size: u128,
    /// Size of each component holding a validation clique after the
    /// forward cut.
    pub validation_component_size: u128,
    pub total_vertices: u128,
}

fn choose2(v: u128) -> u128 {
    v * v.saturating_sub(1) / 2
}

pub fn mcc_parameters(n: usize, m: usize, ell: usize, sizes: &GadgetSizes) -> Result<MccParameters> {
    sizes.validate()?;
    let (n, m, ell) = (n as u128, m as u128, ell as u128);
    let (a, b, cv, x, y, z, l3) =
        (sizes.a as u128, sizes.b as u128, sizes.cv as u128, sizes.x as u128, sizes.y as u128, sizes.z as u128, sizes.l3 as u128);
    let pairs = choose2(ell);
    let overflow = || CncError::invalid("gadget arithmetic overflows 128 bits");
    let cores = (2 * ell.saturating_sub(1) * n + 4 * m)
        .checked_sub(8 * pairs)
        .ok_or_else(|| CncError::invalid("more color pairs than the source can supply"))?;
    let k = cores.checked_mul(b).and_then(|c| c.checked_add(l3)).and_then(|c| c.checked_add(pairs)).ok_or_else(overflow)?;
    let connector_pair = 2 * z + 2 * n + 1 + 2 * b;
    let huge = 2 * z + 2 * n + 1 + cv + 2 * b;
    let term = |count: u128, size: u128| -> Option<u128> { count.checked_mul(size)?.checked_mul(size.saturating_sub(1)) };
    let x_total = term(n.saturating_sub(ell), y + a)
        .and_then(|t| t.checked_add(term(m.saturating_sub(pairs), x + 1)?))
        .and_then(|t| t.checked_add(term(4 * pairs, huge)?))
        .ok_or_else(overflow)?;
    let vertex_gadget_size = ell.saturating_sub(1) * connector_pair + y + a;
    let edge_gadget_size = 2 * connector_pair + x + 1;
    Ok(MccParameters {
        k,
        x: x_total,
        treewidth_bound: 4 * pairs * cv + b + a,
        vertex_gadget_size,
        edge_gadget_size,
        validation_component_size: huge,
        total_vertices: 4 * pairs * cv + n * vertex_gadget_size + m * edge_gadget_size,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Order {
    Low,
    High,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connector {
    /// Source vertex the gadget corresponds to.
    pub source: Vertex,
    pub order: Order,
    pub core: Range<Vertex>,
    pub guard: Range<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectorPair {
    pub low: Connector,
    pub high: Connector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexGadget {
    pub source: Vertex,
    pub clique: Range<Vertex>,
    pub dummies: Range<Vertex>,
    /// One connector pair per other color, keyed by that color.
    pub connectors: Vec<(usize, ConnectorPair)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeGadget {
    pub endpoints: (Vertex, Vertex),
    pub vertex: Vertex,
    pub dummies: Range<Vertex>,
    /// Connector pairs for the first and second endpoint.
    pub connectors: [ConnectorPair; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationGadget {
    pub colors: (usize, usize),
    pub low: Range<Vertex>,
    pub high: Range<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MccLayout {
    pub ell: usize,
    pub colors: Vec<usize>,
    pub low: Vec<u64>,
    pub high: Vec<u64>,
    pub sizes: GadgetSizes,
    pub parameters: MccParameters,
    pub validation: Vec<ValidationGadget>,
    pub vertex_gadgets: Vec<VertexGadget>,
    pub edge_gadgets: Vec<EdgeGadget>,
}

impl MccLayout {
    /// Every connector in the construction.
    pub fn connectors(&self) -> impl Iterator<Item = &Connector> {
        let from_vertices = self.vertex_gadgets.iter().flat_map(|g| g.connectors.iter().flat_map(|(_, p)| [&p.low, &p.high]));
        let from_edges = self.edge_gadgets.iter().flat_map(|g| g.connectors.iter().flat_map(|p| [&p.low, &p.high]));
        from_vertices.chain(from_edges)
    }

    pub fn validation_vertices(&self) -> Vec<Vertex> {
        self.validation.iter().flat_map(|v| v.low.clone().chain(v.high.clone())).collect()
    }
}

struct Builder {
    graph: Graph,
    roles: Vec<Role>,
}

impl Builder {
    fn block(&mut self, size: u64, role: Role) -> Range<Vertex> {
        let start = self.graph.vertex_count();
        for _ in 0..size {
            self.roles.push(role);
            self.graph.add_vertex();
        }
        start..self.graph.vertex_count()
    }

    fn clique(&mut self, r: &Range<Vertex>) {
        for u in r.clone() {
            for v in u + 1..r.end {
                self.graph.add_edge(u, v).expect("in range");
            }
        }
    }

    fn join(&mut self, a: &Range<Vertex>, b: &Range<Vertex>) {
        for u in a.clone() {
            for v in b.clone() {
                self.graph.add_edge(u, v).expect("in range");
            }
        }
    }

    fn connector(&mut self, source: Vertex, order: Order, sizes: &GadgetSizes, id: u64) -> Connector {
        let core = self.block(sizes.b, Role::Core);
        let guard = self.block(sizes.z + id, Role::Guard);
        self.clique(&core);
        self.join(&core, &guard);
        Connector { source, order, core, guard }
    }

    fn connector_pair(&mut self, source: Vertex, sizes: &GadgetSizes, low: u64, high: u64) -> ConnectorPair {
        ConnectorPair {
            low: self.connector(source, Order::Low, sizes, low),
            high: self.connector(source, Order::High, sizes, high),
        }
    }
}

/// Materializes the construction. Refuses when the vertex count would
/// exceed `cap`.
pub fn build_mcc_instance(source: &CliqueInstance, sizes: &GadgetSizes, cap: u128) -> Result<(ReductionOutput, MccLayout)> {
    let colors = source.coloring.clone().ok_or_else(|| CncError::invalid("a coloring is required"))?;
    let g = &source.graph;
    let ell = source.ell;
    if let Some((u, v)) = g.edges().find(|&(u, v)| colors[u] == colors[v]) {
        return Err(CncError::invalid(format!("edge {{{u}, {v}}} joins two vertices of color {}", colors[u])));
    }
    let n = g.vertex_count();
    let params = mcc_parameters(n, g.edge_count(), ell, sizes)?;
    if params.total_vertices > cap {
        return Err(CncError::CapExceeded { required: params.total_vertices, cap });
    }
    let x = u64::try_from(params.x).map_err(|_| CncError::invalid("x does not fit in 64 bits"))?;
    let k = usize::try_from(params.k).map_err(|_| CncError::invalid("k does not fit in a usize"))?;

    let low: Vec<u64> = (0..n).map(|u| u as u64 + 1).collect();
    let high: Vec<u64> = low.iter().map(|l| 2 * n as u64 + 1 - l).collect();
    let mut b = Builder { graph: Graph::new(0), roles: Vec::new() };

    let mut validation = Vec::new();
    for i in 1..=ell {
        for j in (1..=ell).filter(|&j| j != i) {
            let vl = b.block(sizes.cv, Role::Validation);
            let vh = b.block(sizes.cv, Role::Validation);
            b.clique(&vl);
            b.clique(&vh);
            validation.push(ValidationGadget { colors: (i, j), low: vl, high: vh });
        }
    }
    let find_validation = |i: usize, j: usize| validation.iter().find(|v| v.colors == (i, j)).expect("pair exists").clone();

    let mut vertex_gadgets = Vec::with_capacity(n);
    for u in 0..n {
        let clique = b.block(sizes.a, Role::SelectionClique);
        let dummies = b.block(sizes.y, Role::Dummy);
        b.clique(&clique);
        b.join(&clique, &dummies);
        let mut connectors = Vec::new();
        for j in (1..=ell).filter(|&j| j != colors[u]) {
            let pair = b.connector_pair(u, sizes, low[u], high[u]);
            b.join(&clique, &pair.low.core);
            b.join(&clique, &pair.high.core);
            let v = find_validation(colors[u], j);
            b.join(&v.low, &pair.low.core);
            b.join(&v.high, &pair.high.core);
            connectors.push((j, pair));
        }
        vertex_gadgets.push(VertexGadget { source: u, clique, dummies, connectors });
    }

    let mut edge_gadgets = Vec::with_capacity(g.edge_count());
    for (u1, u2) in g.edges() {
        let vertex = b.block(1, Role::EdgeVertex).start;
        let dummies = b.block(sizes.x, Role::Dummy);
        b.join(&(vertex..vertex + 1), &dummies);
        let mut pairs = Vec::with_capacity(2);
        for (mine, other) in [(u1, u2), (u2, u1)] {
            let pair = b.connector_pair(mine, sizes, low[mine], high[mine]);
            b.join(&(vertex..vertex + 1), &pair.low.core);
            b.join(&(vertex..vertex + 1), &pair.high.core);
            let v = find_validation(colors[mine], colors[other]);
            b.join(&v.low, &pair.high.core);
            b.join(&v.high, &pair.low.core);
            pairs.push(pair);
        }
        let [first, second]: [ConnectorPair; 2] = pairs.try_into().expect("two endpoints");
        edge_gadgets.push(EdgeGadget { endpoints: (u1, u2), vertex, dummies, connectors: [first, second] });
    }

    debug_assert_eq!(b.graph.vertex_count() as u128, params.total_vertices);
    let layout = MccLayout { ell, colors, low, high, sizes: *sizes, parameters: params, validation, vertex_gadgets, edge_gadgets };
    let output = ReductionOutput {
        instance: Instance::with_x(b.graph, k, x),
        roles: b.roles,
        raw_target: x as i128,
        boundaries: vec![0],
        warnings: Vec::new(),
    };
    Ok((output, layout))
}

/// The cut induced by a multicolored clique `s`: its selection cliques,
/// its edge vertices, and every core outside `s`.
pub fn forward_solution_cut(h: &Graph, layout: &MccLayout, s: &[Vertex]) -> Result<Cut> {
    let mut chosen = s.to_vec();
    chosen.sort_unstable();
    chosen.dedup();
    if chosen.len() != layout.ell {
        return Err(CncError::invalid(format!("expected {} vertices, got {}", layout.ell, chosen.len())));
    }
    if let Some(&u) = chosen.iter().find(|&&u| u >= layout.colors.len()) {
        return Err(CncError::invalid(format!("vertex {u} is not in the source graph")));
    }
    let mut seen_colors: Vec<usize> = chosen.iter().map(|&u| layout.colors[u]).collect();
    seen_colors.sort_unstable();
    seen_colors.dedup();
    if seen_colors.len() != layout.ell {
        return Err(CncError::invalid("the vertices do not use every color once"));
    }
    let inside = |u: Vertex| chosen.binary_search(&u).is_ok();
    let inner_edges = layout.edge_gadgets.iter().filter(|e| inside(e.endpoints.0) && inside(e.endpoints.1)).count();
    if inner_edges != layout.ell * (layout.ell - 1) / 2 {
        return Err(CncError::invalid("the vertices do not form a clique"));
    }

    let mut cut = Vec::new();
    for gadget in &layout.vertex_gadgets {
        if inside(gadget.source) {
            cut.extend(gadget.clique.clone());
        } else {
            for (_, pair) in &gadget.connectors {
                cut.extend(pair.low.core.clone().chain(pair.high.core.clone()));
            }
        }
    }
    for gadget in &layout.edge_gadgets {
        if inside(gadget.endpoints.0) && inside(gadget.endpoints.1) {
            cut.push(gadget.vertex);
        } else {
            for pair in &gadget.connectors {
                cut.extend(pair.low.core.clone().chain(pair.high.core.clone()));
            }
        }
    }
    Cut::measure(h, cut)
}

/// Component size to multiplicity, for components of at least two vertices.
pub fn component_census(g: &Graph) -> BTreeMap<usize, usize> {
    let mut census = BTreeMap::new();
    for &s in g.connected_components().sizes.iter().filter(|&&s| s >= 2) {
        *census.entry(s).or_insert(0) += 1;
    }
    census
}

/// The census the forward cut must produce.
pub fn expected_census(layout: &MccLayout) -> BTreeMap<usize, usize> {
    let n = layout.vertex_gadgets.len();
    let m = layout.edge_gadgets.len();
    let pairs = layout.ell * (layout.ell - 1) / 2;
    let s = &layout.sizes;
    let mut census = BTreeMap::new();
    let mut add = |size: u128, count: usize| {
        if count > 0 {
            *census.entry(size as usize).or_insert(0) += count;
        }
    };
    add((s.y + s.a) as u128, n - layout.ell);
    add((s.x + 1) as u128, m - pairs);
    add(layout.parameters.validation_component_size, 4 * pairs);
    census
}

struct BagTree {
    shared: Vec<Vertex>,
    bags: Vec<Vec<Vertex>>,
    edges: Vec<(usize, usize)>,
}

impl BagTree {
    fn add(&mut self, extra: impl IntoIterator<Item = Vertex>, parent: usize) -> usize {
        let mut bag = self.shared.clone();
        bag.extend(extra);
        bag.sort_unstable();
        self.bags.push(bag);
        self.edges.push((parent, self.bags.len() - 1));
        self.bags.len() - 1
    }

    fn connector(&mut self, connector: &Connector, head: &[Vertex], parent: usize) {
        let core = self.add(head.iter().copied().chain(connector.core.clone()), parent);
        for g in connector.guard.clone() {
            self.add(connector.core.clone().chain([g]), core);
        }
    }
}

/// A decomposition following the width argument: every bag holds all
/// validation vertices, with one branch per selection gadget.
pub fn mcc_bound_decomposition(layout: &MccLayout) -> TreeDecomposition {
    let shared = layout.validation_vertices();
    let mut tree = BagTree { bags: vec![shared.clone()], shared, edges: Vec::new() };
    for gadget in &layout.vertex_gadgets {
        let head: Vec<Vertex> = gadget.clique.clone().collect();
        let top = tree.add(head.iter().copied(), 0);
        for d in gadget.dummies.clone() {
            tree.add(head.iter().copied().chain([d]), top);
        }
        for (_, pair) in &gadget.connectors {
            tree.connector(&pair.low, &head, top);
            tree.connector(&pair.high, &head, top);
        }
    }
    for gadget in &layout.edge_gadgets {
        let head = [gadget.vertex];
        let top = tree.add(head, 0);
        for d in gadget.dummies.clone() {
            tree.add([gadget.vertex, d], top);
        }
        for pair in &gadget.connectors {
            tree.connector(&pair.low, &head, top);
            tree.connector(&pair.high, &head, top);
        }
    }
    TreeDecomposition { bags: tree.bags, edges: tree.edges }
}
