//! Exhaustive reference solver.
//!
//! Candidate cuts are enumerated by increasing cardinality and
//! lexicographically within a cardinality, so the first optimum found is a
//! deterministic witness that other engines can be diffed against.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{CncError, Result};
use crate::graph::{Cut, Graph, PairCount, PairCounter, Vertex};

pub const DEFAULT_EXPLORATION_CAP: u128 = 20_000_000;

/// `n choose r` without overflow for anything this crate enumerates.
pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Calls `visit` on every `size`-subset of `0..n` in lexicographic order.
pub fn for_each_subset<F>(n: usize, size: usize, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[Vertex]) -> ControlFlow<()>,
{
    if size > n {
        return ControlFlow::Continue(());
    }
    let mut idx: Vec<Vertex> = (0..size).collect();
    loop {
        visit(&idx)?;
        let mut i = size;
        while i > 0 && idx[i - 1] == n - size + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return ControlFlow::Continue(());
        }
        idx[i - 1] += 1;
        for j in i..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub min_residual_pairs: PairCount,
    pub best_cut: Cut,
    /// Candidate sets examined.
    pub explored: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactRemoval {
    pub removed: PairCount,
    pub witness: Vec<Vertex>,
    pub explored: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Oracle {
    pub cap: u128,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { cap: DEFAULT_EXPLORATION_CAP }
    }
}

impl Oracle {
    pub fn with_cap(cap: u128) -> Self {
        Oracle { cap }
    }

    fn guard(&self, required: u128) -> Result<()> {
        if required > self.cap {
            Err(CncError::CapExceeded { required, cap: self.cap })
        } else {
            Ok(())
        }
    }

    /// Minimum of `pairs(G - C)` over all `C` with `|C| <= k`.
    pub fn min_pairs(&self, g: &Graph, k: usize) -> Result<OracleResult> {
        let n = g.vertex_count();
        let top = k.min(n);
        self.guard((0..=top).map(|r| binomial(n, r)).sum())?;

        let mut counter = PairCounter::new(n);
        let mut deleted = vec![false; n];
        let mut best = g.connected_pairs();
        let mut best_set: Vec<Vertex> = Vec::new();
        let mut explored = 1u64;
        if best > 0 {
            'sizes: for size in 1..=top {
                let flow = for_each_subset(n, size, |set| {
                    explored += 1;
                    set.iter().for_each(|&v| deleted[v] = true);
                    let pairs = counter.residual_pairs(g, &deleted);
                    set.iter().for_each(|&v| deleted[v] = false);
                    if pairs < best {
                        best = pairs;
                        best_set = set.to_vec();
                        if best == 0 {
                            return ControlFlow::Break(());
                        }
                    }
                    ControlFlow::Continue(())
                });
                if flow.is_break() {
                    break 'sizes;
                }
            }
        }
        Ok(OracleResult {
            min_residual_pairs: best,
            best_cut: Cut { vertices: best_set, residual_pairs: best },
            explored,
        })
    }

    /// Maximum of `pairs_removed(G, C)` over all `C` with exactly `k_exact`
    /// vertices.
    pub fn max_removed_exact(&self, g: &Graph, k_exact: usize) -> Result<ExactRemoval> {
        let n = g.vertex_count();
        if k_exact > n {
            return Err(CncError::invalid(format!(
                "cannot delete exactly {k_exact} vertices from a graph with {n}"
            )));
        }
        self.guard(binomial(n, k_exact))?;

        let total = g.connected_pairs();
        let mut counter = PairCounter::new(n);
        let mut deleted = vec![false; n];
        let mut best: Option<(PairCount, Vec<Vertex>)> = None;
        let mut explored = 0u64;
        let _ = for_each_subset(n, k_exact, |set| {
            explored += 1;
            set.iter().for_each(|&v| deleted[v] = true);
            let removed = total - counter.residual_pairs(g, &deleted);
            set.iter().for_each(|&v| deleted[v] = false);
            if best.as_ref().is_none_or(|(b, _)| removed > *b) {
                let done = removed == total;
                best = Some((removed, set.to_vec()));
                if done {
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        let (removed, witness) = best.expect("at least one subset exists");
        Ok(ExactRemoval { removed, witness, explored })
    }
}

/// [`Oracle::min_pairs`] with the default exploration cap.
pub fn oracle_min_pairs(g: &Graph, k: usize) -> Result<OracleResult> {
    Oracle::default().min_pairs(g, k)
}

/// [`Oracle::max_removed_exact`] with the default exploration cap.
pub fn oracle_max_removed_exact(g: &Graph, k_exact: usize) -> Result<PairCount> {
    Oracle::default().max_removed_exact(g, k_exact).map(|r| r.removed)
}

/// Oracle decision for `(G, k, x)`.
pub fn oracle_decides(g: &Graph, k: usize, x: PairCount) -> Result<bool> {
    Ok(oracle_min_pairs(g, k)?.min_residual_pairs <= x)
}
