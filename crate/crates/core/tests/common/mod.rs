//! Brute-force reference implementations on 64-bit vertex sets. They share
//! nothing with the library beyond reading its `Graph`.

#![allow(dead_code)]

use cnc::Graph;

#[derive(Clone, Debug)]
pub struct Bits {
    pub n: usize,
    pub adj: Vec<u64>,
}

fn all(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Calls `visit` on every `size`-subset of `0..n` in increasing mask order;
/// stops early when `visit` returns true.
pub fn any_subset(n: usize, size: usize, mut visit: impl FnMut(u64) -> bool) -> bool {
    if size > n {
        return false;
    }
    if size == 0 {
        return visit(0);
    }
    let mut s: u64 = all(size);
    loop {
        if visit(s) {
            return true;
        }
        // next mask with the same popcount
        let c = s & s.wrapping_neg();
        let r = s + c;
        if r == 0 || r >> n != 0 && n < 64 {
            return false;
        }
        s = (((r ^ s) >> 2) / c) | r;
        if n < 64 && s >> n != 0 {
            return false;
        }
    }
}

impl Bits {
    pub fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        assert!(n <= 63, "reference oracle handles at most 63 vertices");
        let mut adj = vec![0u64; n];
        for (u, v) in g.edges() {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Bits { n, adj }
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Ordered connected pairs after deleting `removed`.
    pub fn pairs_without(&self, removed: u64) -> u64 {
        let mut alive = all(self.n) & !removed;
        let mut total = 0u64;
        while alive != 0 {
            let start = alive & alive.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let mut reach = 0u64;
                let mut f = frontier;
                while f != 0 {
                    let v = f.trailing_zeros() as usize;
                    reach |= self.adj[v];
                    f &= f - 1;
                }
                frontier = reach & alive & !comp;
                comp |= frontier;
            }
            let s = comp.count_ones() as u64;
            total += s * (s - 1);
            alive &= !comp;
        }
        total
    }

    pub fn pairs(&self) -> u64 {
        self.pairs_without(0)
    }

    /// Fewest pairs left by deleting at most `k` vertices.
    pub fn min_pairs(&self, k: usize) -> u64 {
        let size = k.min(self.n);
        let mut best = u64::MAX;
        any_subset(self.n, size, |s| {
            best = best.min(self.pairs_without(s));
            best == 0
        });
        best
    }

    pub fn cnc(&self, k: usize, x: u64) -> bool {
        let size = k.min(self.n);
        any_subset(self.n, size, |s| self.pairs_without(s) <= x)
    }

    fn covers(&self, s: u64) -> bool {
        (0..self.n).all(|v| s >> v & 1 == 1 || self.adj[v] & !s == 0)
    }

    pub fn min_vertex_cover(&self) -> usize {
        (0..=self.n).find(|&size| any_subset(self.n, size, |s| self.covers(s))).expect("all vertices cover")
    }

    pub fn has_clique(&self, ell: usize) -> bool {
        fn grow(b: &Bits, candidates: u64, need: usize) -> bool {
            if need == 0 {
                return true;
            }
            if (candidates.count_ones() as usize) < need {
                return false;
            }
            let mut c = candidates;
            while c != 0 {
                let v = c.trailing_zeros() as usize;
                c &= c - 1;
                if grow(b, c & b.adj[v], need - 1) {
                    return true;
                }
            }
            false
        }
        grow(self, all(self.n), ell)
    }

    pub fn is_forest(&self) -> bool {
        let comps = {
            let mut alive = all(self.n);
            let mut count = 0;
            while alive != 0 {
                let start = alive & alive.wrapping_neg();
                let mut comp = start;
                let mut frontier = start;
                while frontier != 0 {
                    let mut reach = 0;
                    let mut f = frontier;
                    while f != 0 {
                        reach |= self.adj[f.trailing_zeros() as usize];
                        f &= f - 1;
                    }
                    frontier = reach & !comp;
                    comp |= frontier;
                }
                alive &= !comp;
                count += 1;
            }
            count
        };
        self.edge_count() + comps == self.n
    }
}

pub fn set_of(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0, |acc, &v| acc | 1 << v)
}

#[test]
fn reference_sanity() {
    let k4 = Bits::new(&Graph::complete(4));
    assert_eq!(k4.pairs(), 12);
    assert_eq!(k4.min_pairs(1), 6);
    assert_eq!(k4.min_vertex_cover(), 3);
    assert!(k4.has_clique(4));
    let p4 = Bits::new(&Graph::path(4));
    assert_eq!(p4.min_pairs(1), 2);
    assert!(p4.is_forest());
    let mut count = 0;
    any_subset(6, 3, |_| {
        count += 1;
        false
    });
    assert_eq!(count, 20);
}
