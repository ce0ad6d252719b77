//! Tree decompositions: a min-fill heuristic, conversion to nice form,
//! validation, and the PACE `.td` text format.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{CncError, Result};
use crate::graph::{Graph, Vertex};

/// Bags over an unrooted tree given by `edges` between bag indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    /// Each bag is sorted ascending.
    pub bags: Vec<Vec<Vertex>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    Leaf(Vertex),
    Introduce(Vertex),
    Forget(Vertex),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceNode {
    pub bag: Vec<Vertex>,
    pub kind: NodeKind,
    pub children: Vec<usize>,
}

/// Rooted decomposition whose nodes are leaf, introduce, forget or join
/// nodes. The root bag is empty. A graph without vertices has no nodes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: Option<usize>,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node ids with every child before its parent.
    pub fn postorder(&self) -> Vec<usize> {
        let Some(root) = self.root else { return Vec::new() };
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                order.push(id);
            } else {
                stack.push((id, true));
                for &c in self.nodes[id].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(p, n)| n.children.iter().map(move |&c| (p, c)))
            .collect();
        TreeDecomposition { bags, edges }
    }
}

/// Which requirement a decomposition breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// The bag structure is not a single tree.
    TreeShape,
    /// Condition 1: the bags cover every vertex.
    VertexCoverage,
    /// Condition 2: every edge lies inside some bag.
    EdgeCoverage,
    /// Condition 3: bags containing a vertex form a connected subtree.
    Connectivity,
    /// Condition 4: node kinds match their bags.
    NodeKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Condition,
    pub node: Option<usize>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Some(node) => write!(f, "{:?} violated at node {}: {}", self.condition, node, self.detail),
            None => write!(f, "{:?} violated: {}", self.condition, self.detail),
        }
    }
}

impl From<Violation> for CncError {
    fn from(v: Violation) -> Self {
        CncError::Structural(v.to_string())
    }
}

fn violation(condition: Condition, node: Option<usize>, detail: impl Into<String>) -> Violation {
    Violation { condition, node, detail: detail.into() }
}

// ---------------------------------------------------------------------------
// heuristic construction

fn fill_in(adj: &[BTreeSet<Vertex>], v: Vertex) -> usize {
    let nbrs: Vec<Vertex> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Min-fill elimination ordering (ties: smaller degree, then smaller id).
pub fn elimination_order(g: &Graph) -> Vec<Vertex> {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<Vertex>> = g.vertices().map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut fill: Vec<usize> = (0..n).map(|v| fill_in(&adj, v)).collect();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !done[v])
            .min_by_key(|&v| (fill[v], adj[v].len(), v))
            .expect("a vertex remains");
        done[v] = true;
        order.push(v);
        let nbrs: Vec<Vertex> = adj[v].iter().copied().collect();
        for &a in &nbrs {
            adj[a].remove(&v);
        }
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        let mut touched: BTreeSet<Vertex> = nbrs.iter().copied().collect();
        for &a in &nbrs {
            touched.extend(adj[a].iter().copied());
        }
        for w in touched {
            if !done[w] {
                fill[w] = fill_in(&adj, w);
            }
        }
    }
    order
}

/// Decomposition built from an elimination ordering.
pub fn decomposition_from_order(g: &Graph, order: &[Vertex]) -> TreeDecomposition {
    let n = g.vertex_count();
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut adj: Vec<BTreeSet<Vertex>> = g.vertices().map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent_vertex = Vec::with_capacity(n);
    for &v in order {
        let later: Vec<Vertex> = adj[v].iter().copied().filter(|&w| position[w] > position[v]).collect();
        for (i, &a) in later.iter().enumerate() {
            for &b in &later[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        let mut bag = later.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        parent_vertex.push(later.iter().copied().min_by_key(|&w| position[w]));
    }
    // bag i belongs to order[i]; its parent is the bag of parent_vertex[i]
    let edges = parent_vertex
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.map(|w| (i, position[w])))
        .collect();
    let td = TreeDecomposition { bags, edges };
    stitch_components(compact(td))
}

/// Contracts every tree edge whose one bag contains the other.
fn compact(td: TreeDecomposition) -> TreeDecomposition {
    let count = td.bags.len();
    let mut alive = vec![true; count];
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); count];
    for &(a, b) in &td.edges {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let subset = |small: &[Vertex], big: &[Vertex]| small.iter().all(|v| big.binary_search(v).is_ok());
    loop {
        let mut merged = false;
        for a in 0..count {
            if !alive[a] {
                continue;
            }
            let absorber = adj[a].iter().copied().find(|&b| subset(&td.bags[a], &td.bags[b]));
            if let Some(b) = absorber {
                let moved: Vec<usize> = adj[a].iter().copied().filter(|&c| c != b).collect();
                for c in moved {
                    adj[c].remove(&a);
                    adj[c].insert(b);
                    adj[b].insert(c);
                }
                adj[b].remove(&a);
                adj[a].clear();
                alive[a] = false;
                merged = true;
            }
        }
        if !merged {
            break;
        }
    }
    let mut new_id = vec![usize::MAX; count];
    let mut bags = Vec::new();
    for a in 0..count {
        if alive[a] {
            new_id[a] = bags.len();
            bags.push(td.bags[a].clone());
        }
    }
    let mut edges = Vec::new();
    for a in 0..count {
        for &b in &adj[a] {
            if alive[a] && a < b {
                edges.push((new_id[a], new_id[b]));
            }
        }
    }
    TreeDecomposition { bags, edges }
}

/// Joins the trees of a forest under one extra empty bag.
fn stitch_components(mut td: TreeDecomposition) -> TreeDecomposition {
    let count = td.bags.len();
    let adj = td.neighbors();
    let mut seen = vec![false; count];
    let mut roots = Vec::new();
    for start in 0..count {
        if seen[start] {
            continue;
        }
        roots.push(start);
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
    }
    if roots.len() > 1 {
        let hub = td.bags.len();
        td.bags.push(Vec::new());
        td.edges.extend(roots.into_iter().map(|r| (hub, r)));
    }
    td
}

/// Min-fill heuristic decomposition; valid for every graph, not optimal.
pub fn heuristic_decomposition(g: &Graph) -> TreeDecomposition {
    decomposition_from_order(g, &elimination_order(g))
}

// ---------------------------------------------------------------------------
// validation

/// Checks tree shape and the running-intersection property.
fn check_shape(td: &TreeDecomposition) -> std::result::Result<(), Violation> {
    let count = td.bags.len();
    if count == 0 {
        return Ok(());
    }
    if td.edges.len() != count - 1 {
        return Err(violation(
            Condition::TreeShape,
            None,
            format!("{} bags need {} tree edges, found {}", count, count - 1, td.edges.len()),
        ));
    }
    if let Some(&(a, b)) = td.edges.iter().find(|&&(a, b)| a >= count || b >= count || a == b) {
        return Err(violation(Condition::TreeShape, Some(a.min(b)), format!("bad tree edge ({a}, {b})")));
    }
    let adj = td.neighbors();
    let mut seen = vec![false; count];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(a) = stack.pop() {
        for &b in &adj[a] {
            if !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    if let Some(lost) = seen.iter().position(|s| !s) {
        return Err(violation(Condition::TreeShape, Some(lost), "bag is not connected to the tree"));
    }
    check_running_intersection(td)
}

fn check_running_intersection(td: &TreeDecomposition) -> std::result::Result<(), Violation> {
    let max_vertex = td.bags.iter().flatten().copied().max().map_or(0, |v| v + 1);
    let mut bags_with = vec![0usize; max_vertex];
    let mut edges_with = vec![0usize; max_vertex];
    let mut first_bag = vec![usize::MAX; max_vertex];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            bags_with[v] += 1;
            first_bag[v] = first_bag[v].min(i);
        }
    }
    for &(a, b) in &td.edges {
        for &v in &td.bags[a] {
            if td.bags[b].binary_search(&v).is_ok() {
                edges_with[v] += 1;
            }
        }
    }
    for v in 0..max_vertex {
        if bags_with[v] > 0 && edges_with[v] + 1 != bags_with[v] {
            return Err(violation(
                Condition::Connectivity,
                Some(first_bag[v]),
                format!("bags containing vertex {v} are not connected"),
            ));
        }
    }
    Ok(())
}

fn check_coverage(g: &Graph, bags: &[Vec<Vertex>]) -> std::result::Result<(), Violation> {
    let n = g.vertex_count();
    let mut covered = vec![false; n];
    for (i, bag) in bags.iter().enumerate() {
        for (j, &v) in bag.iter().enumerate() {
            if v >= n {
                return Err(violation(Condition::VertexCoverage, Some(i), format!("unknown vertex {v}")));
            }
            if j > 0 && bag[j - 1] >= v {
                return Err(violation(Condition::VertexCoverage, Some(i), "bag is not sorted and duplicate-free"));
            }
            covered[v] = true;
        }
    }
    if let Some(v) = covered.iter().position(|c| !c) {
        return Err(violation(Condition::VertexCoverage, None, format!("vertex {v} is in no bag")));
    }
    let mut edge_seen: Vec<Vec<bool>> = g.vertices().map(|v| vec![false; g.degree(v)]).collect();
    for bag in bags {
        for &u in bag {
            for (slot, &w) in g.neighbors(u).iter().enumerate() {
                if u < w && bag.binary_search(&w).is_ok() {
                    edge_seen[u][slot] = true;
                }
            }
        }
    }
    for u in g.vertices() {
        for (slot, &w) in g.neighbors(u).iter().enumerate() {
            if u < w && !edge_seen[u][slot] {
                return Err(violation(Condition::EdgeCoverage, None, format!("edge {{{u}, {w}}} is in no bag")));
            }
        }
    }
    Ok(())
}

/// Conditions 1-3 for a plain decomposition.
pub fn validate_decomposition(g: &Graph, td: &TreeDecomposition) -> std::result::Result<(), Violation> {
    if td.bags.is_empty() && g.vertex_count() > 0 {
        return Err(violation(Condition::VertexCoverage, None, "no bags"));
    }
    check_coverage(g, &td.bags)?;
    check_shape(td)
}

/// Conditions 1-4 for a nice decomposition rooted at an empty bag.
pub fn validate_nice(g: &Graph, ntd: &NiceTreeDecomposition) -> std::result::Result<(), Violation> {
    let count = ntd.nodes.len();
    let Some(root) = ntd.root else {
        if count == 0 && g.vertex_count() == 0 {
            return Ok(());
        }
        return Err(violation(Condition::TreeShape, None, "missing root"));
    };
    if root >= count {
        return Err(violation(Condition::TreeShape, None, "root out of range"));
    }
    let mut parent_count = vec![0usize; count];
    for (id, node) in ntd.nodes.iter().enumerate() {
        for &c in &node.children {
            if c >= count || c == id {
                return Err(violation(Condition::TreeShape, Some(id), format!("bad child {c}")));
            }
            parent_count[c] += 1;
        }
    }
    if parent_count[root] != 0 {
        return Err(violation(Condition::TreeShape, Some(root), "root has a parent"));
    }
    if let Some(bad) = (0..count).find(|&id| id != root && parent_count[id] != 1) {
        return Err(violation(Condition::TreeShape, Some(bad), "node does not have exactly one parent"));
    }
    let reached = ntd.postorder().len();
    if reached != count {
        return Err(violation(Condition::TreeShape, None, "nodes unreachable from the root"));
    }
    if !ntd.nodes[root].bag.is_empty() {
        return Err(violation(Condition::NodeKind, Some(root), "root bag must be empty"));
    }

    let bags: Vec<Vec<Vertex>> = ntd.nodes.iter().map(|n| n.bag.clone()).collect();
    check_coverage(g, &bags)?;
    check_running_intersection(&ntd.to_tree_decomposition())?;

    for (id, node) in ntd.nodes.iter().enumerate() {
        let bag = &node.bag;
        let ok = match (node.kind, node.children.as_slice()) {
            (NodeKind::Leaf(v), []) => bag.as_slice() == [v],
            (NodeKind::Introduce(v), &[c]) => {
                let child = &ntd.nodes[c].bag;
                child.binary_search(&v).is_err() && with_vertex(child, v) == *bag
            }
            (NodeKind::Forget(v), &[c]) => {
                let child = &ntd.nodes[c].bag;
                child.binary_search(&v).is_ok() && without_vertex(child, v) == *bag
            }
            (NodeKind::Join, &[a, b]) => ntd.nodes[a].bag == *bag && ntd.nodes[b].bag == *bag,
            _ => false,
        };
        if !ok {
            return Err(violation(Condition::NodeKind, Some(id), format!("{:?} does not match its bag and children", node.kind)));
        }
    }
    Ok(())
}

fn with_vertex(bag: &[Vertex], v: Vertex) -> Vec<Vertex> {
    let mut out = bag.to_vec();
    let pos = out.binary_search(&v).unwrap_or_else(|p| p);
    out.insert(pos, v);
    out
}

fn without_vertex(bag: &[Vertex], v: Vertex) -> Vec<Vertex> {
    bag.iter().copied().filter(|&w| w != v).collect()
}

// ---------------------------------------------------------------------------
// nice form

struct NiceBuilder {
    nodes: Vec<NiceNode>,
}

impl NiceBuilder {
    fn push(&mut self, bag: Vec<Vertex>, kind: NodeKind, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { bag, kind, children });
        self.nodes.len() - 1
    }

    fn forget(&mut self, child: usize, v: Vertex) -> usize {
        let bag = without_vertex(&self.nodes[child].bag, v);
        self.push(bag, NodeKind::Forget(v), vec![child])
    }

    fn introduce(&mut self, child: usize, v: Vertex) -> usize {
        let bag = with_vertex(&self.nodes[child].bag, v);
        self.push(bag, NodeKind::Introduce(v), vec![child])
    }

    /// Forgets what `target` lacks, then introduces what it adds.
    fn transition(&mut self, mut id: usize, target: &[Vertex]) -> usize {
        let current = self.nodes[id].bag.clone();
        for &v in current.iter().filter(|v| target.binary_search(v).is_err()) {
            id = self.forget(id, v);
        }
        for &v in target.iter().filter(|v| current.binary_search(v).is_err()) {
            id = self.introduce(id, v);
        }
        id
    }

    fn leaf_chain(&mut self, bag: &[Vertex]) -> Option<usize> {
        let (&first, rest) = bag.split_first()?;
        let mut id = self.push(vec![first], NodeKind::Leaf(first), Vec::new());
        for &v in rest {
            id = self.introduce(id, v);
        }
        Some(id)
    }
}

/// Converts a decomposition into nice form with an empty root bag. The
/// width is preserved. The root is the first empty bag, or bag 0.
pub fn make_nice(td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    check_shape(td)?;
    if let Some((i, _)) = td.bags.iter().enumerate().find(|(_, b)| b.windows(2).any(|w| w[0] >= w[1])) {
        return Err(violation(Condition::VertexCoverage, Some(i), "bag is not sorted and duplicate-free").into());
    }
    if td.bags.is_empty() {
        return Ok(NiceTreeDecomposition::default());
    }
    let root = td.bags.iter().position(Vec::is_empty).unwrap_or(0);
    let adj = td.neighbors();

    // parents before children
    let mut order = Vec::with_capacity(td.bags.len());
    let mut parent = vec![usize::MAX; td.bags.len()];
    let mut queue = VecDeque::from([root]);
    parent[root] = root;
    while let Some(a) = queue.pop_front() {
        order.push(a);
        for &b in &adj[a] {
            if parent[b] == usize::MAX {
                parent[b] = a;
                queue.push_back(b);
            }
        }
    }

    let mut builder = NiceBuilder { nodes: Vec::new() };
    // top[a]: nice node whose bag equals td.bags[a], if the subtree is nonempty
    let mut top: Vec<Option<usize>> = vec![None; td.bags.len()];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); td.bags.len()];
    for &a in order.iter().skip(1) {
        children[parent[a]].push(a);
    }
    for &a in order.iter().rev() {
        let bag = &td.bags[a];
        let mut branches = Vec::new();
        for &c in &children[a] {
            if let Some(id) = top[c] {
                branches.push(builder.transition(id, bag));
            }
        }
        top[a] = match branches.split_first() {
            None => builder.leaf_chain(bag),
            Some((&first, rest)) => Some(rest.iter().fold(first, |acc, &next| {
                builder.push(bag.clone(), NodeKind::Join, vec![acc.min(next), acc.max(next)])
            })),
        };
    }

    let Some(mut id) = top[root] else {
        return Ok(NiceTreeDecomposition::default());
    };
    id = builder.transition(id, &[]);
    Ok(NiceTreeDecomposition { nodes: builder.nodes, root: Some(id) })
}

// ---------------------------------------------------------------------------
// PACE .td format

/// Writes `s td`, `b` and tree-edge lines. Ids on disk are 1-based.
pub fn write_td(td: &TreeDecomposition, vertex_count: usize) -> String {
    let mut out = String::new();
    let max_bag = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    writeln!(out, "s td {} {} {}", td.bags.len(), max_bag, vertex_count).unwrap();
    for (i, bag) in td.bags.iter().enumerate() {
        write!(out, "b {}", i + 1).unwrap();
        for &v in bag {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        writeln!(out, "{} {}", a + 1, b + 1).unwrap();
    }
    out
}

/// Like [`write_td`], plus `c root` and `c nice` annotation lines.
pub fn write_nice_td(ntd: &NiceTreeDecomposition, vertex_count: usize) -> String {
    let mut out = write_td(&ntd.to_tree_decomposition(), vertex_count);
    if let Some(root) = ntd.root {
        writeln!(out, "c root {}", root + 1).unwrap();
    }
    for (i, node) in ntd.nodes.iter().enumerate() {
        let kind = match node.kind {
            NodeKind::Leaf(v) => format!("leaf {}", v + 1),
            NodeKind::Introduce(v) => format!("introduce {}", v + 1),
            NodeKind::Forget(v) => format!("forget {}", v + 1),
            NodeKind::Join => "join".to_string(),
        };
        writeln!(out, "c nice {} {}", i + 1, kind).unwrap();
    }
    out
}

/// A parsed `.td` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TdFile {
    pub decomposition: TreeDecomposition,
    pub vertex_count: usize,
    /// Present when the file carries a root and a kind for every bag.
    pub nice: Option<NiceTreeDecomposition>,
}

fn parse_number(token: Option<&str>, line: usize, what: &str) -> Result<usize> {
    token
        .ok_or_else(|| CncError::parse(line, format!("missing {what}")))?
        .parse::<usize>()
        .map_err(|e| CncError::parse(line, format!("bad {what}: {e}")))
}

fn one_based(value: usize, limit: usize, line: usize, what: &str) -> Result<usize> {
    if value == 0 || value > limit {
        return Err(CncError::parse(line, format!("{what} {value} out of range 1..={limit}")));
    }
    Ok(value - 1)
}

pub fn parse_td(text: &str) -> Result<TdFile> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<Vertex>>> = Vec::new();
    let mut edges = Vec::new();
    let mut root = None;
    let mut kinds: Vec<Option<NodeKind>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tokens = raw.split_whitespace();
        let Some(first) = tokens.next() else { continue };
        match first {
            "c" => match tokens.next() {
                Some("root") => {
                    let (count, _, _) = header.ok_or_else(|| CncError::parse(line, "annotation before header"))?;
                    root = Some(one_based(parse_number(tokens.next(), line, "root")?, count, line, "bag")?);
                }
                Some("nice") => {
                    let (count, _, n) = header.ok_or_else(|| CncError::parse(line, "annotation before header"))?;
                    let id = one_based(parse_number(tokens.next(), line, "bag id")?, count, line, "bag")?;
                    let kind = match tokens.next() {
                        Some("leaf") => NodeKind::Leaf(one_based(parse_number(tokens.next(), line, "vertex")?, n, line, "vertex")?),
                        Some("introduce") => {
                            NodeKind::Introduce(one_based(parse_number(tokens.next(), line, "vertex")?, n, line, "vertex")?)
                        }
                        Some("forget") => NodeKind::Forget(one_based(parse_number(tokens.next(), line, "vertex")?, n, line, "vertex")?),
                        Some("join") => NodeKind::Join,
                        other => return Err(CncError::parse(line, format!("unknown node kind {other:?}"))),
                    };
                    kinds[id] = Some(kind);
                }
                _ => {}
            },
            "s" => {
                if header.is_some() {
                    return Err(CncError::parse(line, "duplicate header"));
                }
                if tokens.next() != Some("td") {
                    return Err(CncError::parse(line, "expected `s td <bags> <max bag> <vertices>`"));
                }
                let count = parse_number(tokens.next(), line, "bag count")?;
                let max_bag = parse_number(tokens.next(), line, "max bag size")?;
                let n = parse_number(tokens.next(), line, "vertex count")?;
                header = Some((count, max_bag, n));
                bags = vec![None; count];
                kinds = vec![None; count];
            }
            "b" => {
                let (count, max_bag, n) = header.ok_or_else(|| CncError::parse(line, "bag before header"))?;
                let id = one_based(parse_number(tokens.next(), line, "bag id")?, count, line, "bag")?;
                let mut bag = tokens
                    .map(|t| {
                        let v = t.parse::<usize>().map_err(|e| CncError::parse(line, format!("bad vertex: {e}")))?;
                        one_based(v, n, line, "vertex")
                    })
                    .collect::<Result<Vec<_>>>()?;
                bag.sort_unstable();
                bag.dedup();
                if bag.len() > max_bag {
                    return Err(CncError::parse(line, format!("bag of size {} exceeds declared {}", bag.len(), max_bag)));
                }
                if bags[id].replace(bag).is_some() {
                    return Err(CncError::parse(line, format!("bag {} defined twice", id + 1)));
                }
            }
            _ => {
                let (count, _, _) = header.ok_or_else(|| CncError::parse(line, "edge before header"))?;
                let a = first.parse::<usize>().map_err(|e| CncError::parse(line, format!("bad tree edge: {e}")))?;
                let a = one_based(a, count, line, "bag")?;
                let b = one_based(parse_number(tokens.next(), line, "tree edge endpoint")?, count, line, "bag")?;
                if tokens.next().is_some() {
                    return Err(CncError::parse(line, "trailing tokens"));
                }
                edges.push((a, b));
            }
        }
    }

    let (_, _, n) = header.ok_or_else(|| CncError::parse(0, "missing `s td` header"))?;
    let bags: Vec<Vec<Vertex>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| CncError::parse(0, format!("bag {} is never defined", i + 1))))
        .collect::<Result<_>>()?;
    let decomposition = TreeDecomposition { bags, edges };

    let nice = match root {
        Some(root) if kinds.iter().all(Option::is_some) => {
            let adj = decomposition.neighbors();
            let mut nodes: Vec<NiceNode> = decomposition
                .bags
                .iter()
                .zip(&kinds)
                .map(|(bag, kind)| NiceNode { bag: bag.clone(), kind: kind.expect("checked"), children: Vec::new() })
                .collect();
            let mut seen = vec![false; nodes.len()];
            let mut stack = vec![root];
            seen[root] = true;
            while let Some(a) = stack.pop() {
                let mut kids: Vec<usize> = adj[a].iter().copied().filter(|&b| !seen[b]).collect();
                kids.sort_unstable();
                for &b in &kids {
                    seen[b] = true;
                    stack.push(b);
                }
                nodes[a].children = kids;
            }
            Some(NiceTreeDecomposition { nodes, root: Some(root) })
        }
        _ => None,
    };
    Ok(TdFile { decomposition, vertex_count: n, nice })
}
