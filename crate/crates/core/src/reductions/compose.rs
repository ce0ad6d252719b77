//! OR-composition of Clique instances into one CNC instance.

use super::clique::{clique_reduction_y, reduce_clique_to_cnc};
use super::{CliqueInstance, ReductionOutput};
use crate::error::{CncError, Result};
use crate::graph::Graph;
use crate::instance::Instance;

/// Disjoint union of the per-instance clique reductions with `k = ell` and
/// `y` computed from the size of one part. All sources must share `n`, `m`
/// and `ell`.
pub fn cross_compose(sources: &[CliqueInstance], ell: usize) -> Result<ReductionOutput> {
    let first = sources.first().ok_or_else(|| CncError::invalid("nothing to compose"))?;
    let n = first.graph.vertex_count();
    let m = first.graph.edge_count();
    for (i, s) in sources.iter().enumerate() {
        if s.graph.vertex_count() != n || s.graph.edge_count() != m {
            return Err(CncError::invalid(format!(
                "instance {i} has n = {}, m = {}; expected n = {n}, m = {m}",
                s.graph.vertex_count(),
                s.graph.edge_count()
            )));
        }
        if s.ell != ell {
            return Err(CncError::invalid(format!("instance {i} asks for ell = {}, not {ell}", s.ell)));
        }
    }

    let mut graph = Graph::new(0);
    let mut roles = Vec::new();
    let mut boundaries = Vec::new();
    let mut part_size = 0;
    for s in sources {
        let part = reduce_clique_to_cnc(s);
        boundaries.push(graph.vertex_count());
        part_size = part.vertex_count();
        graph = graph.disjoint_union(&part.instance.graph);
        roles.extend(part.roles);
    }

    let k = ell;
    let raw = clique_reduction_y(k, n, part_size);
    let mut warnings = Vec::new();
    if ell <= 3 {
        warnings.push(format!("ell = {ell} is at most 3"));
    }
    if (n as u128) <= (k as u128).pow(4) {
        warnings.push(format!("n = {n} is at most k^4 = {}", (k as u128).pow(4)));
    }
    if m < n {
        warnings.push(format!("m = {m} is less than n = {n}"));
    }
    if raw < 0 {
        warnings.push(format!("formula gives y = {raw}; clamped to 0"));
    }
    let y = u64::try_from(raw.max(0)).unwrap_or(u64::MAX);
    Ok(ReductionOutput { instance: Instance::with_y(graph, k, y), roles, raw_target: raw, boundaries, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Target;

    #[test]
    fn two_triangles() {
        let k3 = CliqueInstance::new(Graph::complete(3), 3);
        let out = cross_compose(&[k3.clone(), k3], 3).unwrap();
        assert_eq!(out.vertex_count(), 24);
        assert_eq!(out.instance.k, 3);
        assert_eq!(out.instance.target, Target::Y(132));
        assert_eq!(out.boundaries, vec![0, 12]);
        assert!(!out.warnings.is_empty());
    }

    #[test]
    fn mismatched_sizes_are_rejected() {
        let k3 = CliqueInstance::new(Graph::complete(3), 3);
        let p3 = CliqueInstance::new(Graph::path(3), 3);
        assert!(matches!(cross_compose(&[k3.clone(), p3], 3), Err(CncError::InvalidInput(_))));
        assert!(cross_compose(&[], 3).is_err());
        assert!(cross_compose(&[k3], 2).is_err());
    }
}
