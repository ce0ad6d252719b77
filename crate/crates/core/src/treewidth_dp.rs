//! Dynamic programming over a nice tree decomposition, parameterized by
//! width plus `x`.
//!
//! A table entry describes a partial solution inside the subgraph below a
//! node: how many vertices it deletes, which bag vertices are deleted, how
//! the surviving bag vertices are grouped into components and how large
//! those components are. For each such shape only the smallest pair count
//! is kept, because every transition adds a pair increment that depends on
//! the shape alone.

use std::collections::{BTreeSet, HashMap};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::decomposition::{validate_nice, NiceTreeDecomposition, NodeKind};
use crate::error::{CncError, Result};
use crate::graph::{pairs_of, Cut, Graph, PairCount, Vertex};

/// Everything in a key except the pair count.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Shape {
    /// Vertices deleted in the subgraph below the node, exactly.
    pub deletions: usize,
    /// Deleted bag vertices, ascending.
    pub deleted: Vec<Vertex>,
    /// Surviving bag vertices grouped by component, ordered by smallest id.
    pub blocks: Vec<Vec<Vertex>>,
    /// Size of the component meeting each block.
    pub sizes: Vec<usize>,
}

/// A feasible key: the shape plus the pairs charged so far.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DpKey {
    pub deletions: usize,
    pub pairs: PairCount,
    pub deleted: Vec<Vertex>,
    pub blocks: Vec<Vec<Vertex>>,
    pub sizes: Vec<usize>,
}

impl DpKey {
    pub fn shape(&self) -> Shape {
        Shape {
            deletions: self.deletions,
            deleted: self.deleted.clone(),
            blocks: self.blocks.clone(),
            sizes: self.sizes.clone(),
        }
    }
}

/// Where an entry came from, as indices into the child tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    Leaf,
    Child(usize),
    Join(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub pairs: PairCount,
    pub origin: Origin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpTable {
    pub bag: Vec<Vertex>,
    entries: IndexMap<Shape, Entry>,
}

impl DpTable {
    fn new(bag: Vec<Vertex>) -> Self {
        DpTable { bag, entries: IndexMap::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, index: usize) -> (&Shape, &Entry) {
        self.entries.get_index(index).expect("entry index in range")
    }

    pub fn keys(&self) -> impl Iterator<Item = DpKey> + '_ {
        self.entries.iter().map(|(s, e)| DpKey {
            deletions: s.deletions,
            pairs: e.pairs,
            deleted: s.deleted.clone(),
            blocks: s.blocks.clone(),
            sizes: s.sizes.clone(),
        })
    }

    pub fn key_set(&self) -> BTreeSet<DpKey> {
        self.keys().collect()
    }

    /// Smallest pair count stored for `shape`.
    pub fn min_pairs(&self, shape: &Shape) -> Option<PairCount> {
        self.entries.get(shape).map(|e| e.pairs)
    }

    /// Whether the entry for `key` is 1: a partial solution with this shape
    /// exists leaving at most `key.pairs` pairs.
    pub fn contains(&self, key: &DpKey) -> bool {
        self.min_pairs(&key.shape()).is_some_and(|p| p <= key.pairs)
    }

    fn offer(&mut self, shape: Shape, pairs: PairCount, origin: Origin, k: usize, x: PairCount) {
        if shape.deletions > k || pairs > x {
            return;
        }
        debug_assert!(key_is_valid(&self.bag, &shape, pairs), "invalid key {shape:?} / {pairs}");
        match self.entries.get_mut(&shape) {
            Some(existing) if existing.pairs <= pairs => {}
            Some(existing) => *existing = Entry { pairs, origin },
            None => {
                self.entries.insert(shape, Entry { pairs, origin });
            }
        }
    }
}

/// Checks that the deleted set and blocks partition `bag` and that every
/// size is consistent with the pairs already charged.
pub fn key_is_valid(bag: &[Vertex], shape: &Shape, pairs: PairCount) -> bool {
    if shape.blocks.len() != shape.sizes.len() || shape.deleted.len() > shape.deletions {
        return false;
    }
    let mut seen: Vec<Vertex> = shape.deleted.clone();
    let mut previous_first = None;
    for (block, &size) in shape.blocks.iter().zip(&shape.sizes) {
        let Some(&first) = block.first() else { return false };
        if previous_first.is_some_and(|p| p >= first) || block.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        if size < block.len() || pairs_of(size) > pairs {
            return false;
        }
        previous_first = Some(first);
        seen.extend_from_slice(block);
    }
    seen.sort_unstable();
    seen == bag
}

fn canonical(mut blocks: Vec<(Vec<Vertex>, usize)>) -> (Vec<Vec<Vertex>>, Vec<usize>) {
    for (block, _) in &mut blocks {
        block.sort_unstable();
    }
    blocks.sort_unstable_by_key(|(b, _)| b[0]);
    blocks.into_iter().unzip()
}

fn insert_sorted(set: &[Vertex], v: Vertex) -> Vec<Vertex> {
    let mut out = set.to_vec();
    let at = out.binary_search(&v).unwrap_or_else(|p| p);
    out.insert(at, v);
    out
}

pub fn leaf_table(v: Vertex, k: usize, x: PairCount) -> DpTable {
    let mut table = DpTable::new(vec![v]);
    let kept = Shape { deletions: 0, deleted: Vec::new(), blocks: vec![vec![v]], sizes: vec![1] };
    table.offer(kept, 0, Origin::Leaf, k, x);
    let gone = Shape { deletions: 1, deleted: vec![v], blocks: Vec::new(), sizes: Vec::new() };
    table.offer(gone, 0, Origin::Leaf, k, x);
    table
}

/// `neighbors_in_bag` lists the neighbours of `v` inside the child bag;
/// every neighbour of `v` in the subgraph below must be among them.
pub fn introduce_table(
    child: &DpTable,
    v: Vertex,
    neighbors_in_bag: &[Vertex],
    k: usize,
    x: PairCount,
) -> Result<DpTable> {
    if child.bag.binary_search(&v).is_ok() {
        return Err(CncError::Structural(format!("vertex {v} is already in the child bag")));
    }
    if let Some(w) = neighbors_in_bag.iter().find(|w| child.bag.binary_search(w).is_err()) {
        return Err(CncError::Structural(format!("neighbour {w} of {v} is not in the child bag")));
    }
    let mut table = DpTable::new(insert_sorted(&child.bag, v));
    for (index, (shape, entry)) in child.entries.iter().enumerate() {
        let origin = Origin::Child(index);

        let gone = Shape {
            deletions: shape.deletions + 1,
            deleted: insert_sorted(&shape.deleted, v),
            blocks: shape.blocks.clone(),
            sizes: shape.sizes.clone(),
        };
        table.offer(gone, entry.pairs, origin, k, x);

        let mut merged = vec![v];
        let mut merged_size = 1usize;
        let mut sum = 0u64;
        let mut sum_sq = 0u64;
        let mut rest = Vec::with_capacity(shape.blocks.len() + 1);
        for (block, &size) in shape.blocks.iter().zip(&shape.sizes) {
            if block.iter().any(|w| neighbors_in_bag.contains(w)) {
                merged.extend_from_slice(block);
                merged_size += size;
                sum += size as u64;
                sum_sq += (size as u64) * (size as u64);
            } else {
                rest.push((block.clone(), size));
            }
        }
        let increment = 2 * sum + sum * sum - sum_sq;
        rest.push((merged, merged_size));
        let (blocks, sizes) = canonical(rest);
        let kept = Shape { deletions: shape.deletions, deleted: shape.deleted.clone(), blocks, sizes };
        table.offer(kept, entry.pairs + increment, origin, k, x);
    }
    Ok(table)
}

pub fn forget_table(child: &DpTable, v: Vertex) -> Result<DpTable> {
    let Ok(at) = child.bag.binary_search(&v) else {
        return Err(CncError::Structural(format!("vertex {v} is not in the child bag")));
    };
    let mut bag = child.bag.clone();
    bag.remove(at);
    let mut table = DpTable::new(bag);
    for (index, (shape, entry)) in child.entries.iter().enumerate() {
        let mut next = shape.clone();
        if let Ok(pos) = next.deleted.binary_search(&v) {
            next.deleted.remove(pos);
        } else {
            let i = next.blocks.iter().position(|b| b.contains(&v)).expect("bag vertex is deleted or in a block");
            next.blocks[i].retain(|&w| w != v);
            if next.blocks[i].is_empty() {
                next.blocks.remove(i);
                next.sizes.remove(i);
            } else {
                let (blocks, sizes) = canonical(next.blocks.into_iter().zip(next.sizes).collect());
                next.blocks = blocks;
                next.sizes = sizes;
            }
        }
        table.offer(next, entry.pairs, Origin::Child(index), usize::MAX, PairCount::MAX);
    }
    Ok(table)
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

pub fn join_table(left: &DpTable, right: &DpTable, k: usize, x: PairCount) -> Result<DpTable> {
    if left.bag != right.bag {
        return Err(CncError::Structural(format!(
            "join children have different bags {:?} and {:?}",
            left.bag, right.bag
        )));
    }
    let bag = &left.bag;
    let position = |v: Vertex| bag.binary_search(&v).expect("block vertex is in the bag");
    let mut by_deleted: HashMap<&[Vertex], Vec<usize>> = HashMap::new();
    for (index, (shape, _)) in right.entries.iter().enumerate() {
        by_deleted.entry(shape.deleted.as_slice()).or_default().push(index);
    }

    let mut table = DpTable::new(bag.clone());
    let mut parent = vec![0; bag.len()];
    for (li, (ls, le)) in left.entries.iter().enumerate() {
        let Some(partners) = by_deleted.get(ls.deleted.as_slice()) else { continue };
        let left_old: PairCount = ls.sizes.iter().map(|&s| pairs_of(s)).sum();
        for &ri in partners {
            let (rs, re) = right.entries.get_index(ri).expect("partner index in range");
            let deletions = ls.deletions + rs.deletions - ls.deleted.len();
            if deletions > k {
                continue;
            }
            for (i, p) in parent.iter_mut().enumerate() {
                *p = i;
            }
            for block in ls.blocks.iter().chain(&rs.blocks) {
                let root = find(&mut parent, position(block[0]));
                for &w in &block[1..] {
                    let r = find(&mut parent, position(w));
                    parent[r] = root;
                }
            }
            let mut classes: IndexMap<usize, (Vec<Vertex>, usize)> = IndexMap::new();
            for (block, &size) in ls.blocks.iter().zip(&ls.sizes).chain(rs.blocks.iter().zip(&rs.sizes)) {
                let root = find(&mut parent, position(block[0]));
                classes.entry(root).or_default().1 += size;
            }
            for &w in bag {
                if ls.deleted.binary_search(&w).is_err() {
                    let root = find(&mut parent, position(w));
                    classes.get_mut(&root).expect("kept vertex has a class").0.push(w);
                }
            }
            let merged: Vec<(Vec<Vertex>, usize)> =
                classes.into_values().map(|(members, total)| { let n = total - members.len(); (members, n) }).collect();
            let right_old: PairCount = rs.sizes.iter().map(|&s| pairs_of(s)).sum();
            let fresh: PairCount = merged.iter().map(|&(_, s)| pairs_of(s)).sum();
            let pairs = (le.pairs - left_old) + (re.pairs - right_old) + fresh;
            let (blocks, sizes) = canonical(merged);
            let shape = Shape { deletions, deleted: ls.deleted.clone(), blocks, sizes };
            table.offer(shape, pairs, Origin::Join(li, ri), k, x);
        }
    }
    Ok(table)
}

/// `n (x + 1) (w + x + 2)^(w + 1)`, saturating.
pub fn table_size_bound(n: usize, width: usize, x: PairCount) -> u128 {
    let base = (width as u128).saturating_add(x as u128).saturating_add(2);
    let mut power: u128 = 1;
    for _ in 0..=width {
        power = power.saturating_mul(base);
    }
    (n.max(1) as u128).saturating_mul((x as u128).saturating_add(1)).saturating_mul(power)
}

/// Slack factor applied to [`table_size_bound`].
pub const TABLE_BOUND_SLACK: u128 = 10;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DpWxStats {
    pub nodes: usize,
    pub width: usize,
    pub total_entries: usize,
    pub max_table: usize,
    pub table_bound: u128,
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DpWxOutcome {
    pub decision: bool,
    pub cut: Option<Cut>,
    pub stats: DpWxStats,
}

/// Runs the table DP bottom-up and keeps every table for back-pointers.
pub fn build_tables(g: &Graph, ntd: &NiceTreeDecomposition, k: usize, x: PairCount) -> Result<Vec<Option<DpTable>>> {
    let mut tables: Vec<Option<DpTable>> = vec![None; ntd.len()];
    for id in ntd.postorder() {
        let node = &ntd.nodes[id];
        let child = |i: usize| tables[node.children[i]].as_ref().expect("children are computed first");
        let table = match node.kind {
            NodeKind::Leaf(v) => leaf_table(v, k, x),
            NodeKind::Introduce(v) => {
                let parent_bag = &child(0).bag;
                let nbrs: Vec<Vertex> =
                    g.neighbors(v).iter().copied().filter(|w| parent_bag.binary_search(w).is_ok()).collect();
                introduce_table(child(0), v, &nbrs, k, x)?
            }
            NodeKind::Forget(v) => forget_table(child(0), v)?,
            NodeKind::Join => join_table(child(0), child(1), k, x)?,
        };
        if table.bag != node.bag {
            return Err(CncError::Structural(format!("node {id} bag does not match its kind")));
        }
        tables[id] = Some(table);
    }
    Ok(tables)
}

fn reconstruct(ntd: &NiceTreeDecomposition, tables: &[Option<DpTable>], root: usize, index: usize) -> Vec<Vertex> {
    let mut cut = BTreeSet::new();
    let mut stack = vec![(root, index)];
    while let Some((id, index)) = stack.pop() {
        let node = &ntd.nodes[id];
        let (shape, entry) = tables[id].as_ref().expect("table computed").entry(index);
        if let NodeKind::Leaf(v) | NodeKind::Introduce(v) = node.kind {
            if shape.deleted.binary_search(&v).is_ok() {
                cut.insert(v);
            }
        }
        match entry.origin {
            Origin::Leaf => {}
            Origin::Child(i) => stack.push((node.children[0], i)),
            Origin::Join(a, b) => {
                stack.push((node.children[0], a));
                stack.push((node.children[1], b));
            }
        }
    }
    cut.into_iter().collect()
}

/// Decides `(G, k, x)` over a nice decomposition of `G`.
pub fn solve_wx(g: &Graph, ntd: &NiceTreeDecomposition, k: usize, x: PairCount) -> Result<DpWxOutcome> {
    validate_nice(g, ntd)?;
    let width = ntd.width();
    let bound = table_size_bound(g.vertex_count(), width, x);
    let Some(root) = ntd.root else {
        let stats = DpWxStats { width, table_bound: bound, within_bound: true, ..DpWxStats::default() };
        return Ok(DpWxOutcome { decision: true, cut: Some(Cut { vertices: Vec::new(), residual_pairs: 0 }), stats });
    };

    let tables = build_tables(g, ntd, k, x)?;
    let sizes: Vec<usize> = tables.iter().map(|t| t.as_ref().map_or(0, DpTable::len)).collect();
    let max_table = sizes.iter().copied().max().unwrap_or(0);
    let stats = DpWxStats {
        nodes: ntd.len(),
        width,
        total_entries: sizes.iter().sum(),
        max_table,
        table_bound: bound,
        within_bound: (max_table as u128) <= bound.saturating_mul(TABLE_BOUND_SLACK),
    };
    log::debug!("dp-wx: {} nodes, largest table {}, bound {}", stats.nodes, max_table, bound);

    let root_table = tables[root].as_ref().expect("root table computed");
    let best = root_table
        .entries
        .iter()
        .enumerate()
        .filter(|(_, (s, e))| s.deletions <= k && e.pairs <= x)
        .min_by_key(|(_, (s, e))| (s.deletions, e.pairs))
        .map(|(i, _)| i);
    let Some(index) = best else {
        return Ok(DpWxOutcome { decision: false, cut: None, stats });
    };
    let cut = Cut::measure(g, reconstruct(ntd, &tables, root, index))?;
    debug_assert_eq!(Some(cut.residual_pairs), root_table.entry(index).1.pairs.into());
    Ok(DpWxOutcome { decision: true, cut: Some(cut), stats })
}
