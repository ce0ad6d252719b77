//! Algorithm selection and a uniform entry point over all solvers.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::branching::solve_branch_kx;
use crate::component_dp::solve_y;
use crate::decomposition::{heuristic_decomposition, make_nice, NiceTreeDecomposition};
use crate::error::{CncError, Result};
use crate::graph::{verify_solution, Cut, PairCount, Vertex};
use crate::instance::{Instance, Target};
use crate::kernel::{kernelize_kx, KernelOutcome};
use crate::oracle::{Oracle, DEFAULT_EXPLORATION_CAP};
use crate::treewidth_dp::solve_wx;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Auto,
    Oracle,
    BranchKx,
    DpY,
    DpWx,
}

impl Algorithm {
    pub const ENGINES: [Algorithm; 4] = [Algorithm::Oracle, Algorithm::BranchKx, Algorithm::DpY, Algorithm::DpWx];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Oracle => "oracle",
            Algorithm::BranchKx => "branch-kx",
            Algorithm::DpY => "dp-y",
            Algorithm::DpWx => "dp-wx",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = CncError;

    fn from_str(s: &str) -> Result<Self> {
        [Algorithm::Auto, Algorithm::Oracle, Algorithm::BranchKx, Algorithm::DpY, Algorithm::DpWx]
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| CncError::invalid(format!("unknown algorithm `{s}`")))
    }
}

/// Thresholds for `auto`. Each may be overridden from a `key = value`
/// file named by the `CNC_CONFIG` environment variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionConfig {
    pub oracle_max_vertices: usize,
    pub dp_y_max_y: PairCount,
    pub dp_wx_max_width_plus_x: u64,
    pub branch_max_k_plus_x: u64,
    pub oracle_cap: u128,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            oracle_max_vertices: 14,
            dp_y_max_y: 22,
            dp_wx_max_width_plus_x: 12,
            branch_max_k_plus_x: 24,
            oracle_cap: DEFAULT_EXPLORATION_CAP,
        }
    }
}

pub const CONFIG_ENV: &str = "CNC_CONFIG";

impl SelectionConfig {
    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply(&mut self, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CncError::parse(idx + 1, "expected `key = value`"))?;
            let value = value.trim();
            let bad = |e: std::num::ParseIntError| CncError::parse(idx + 1, format!("bad value `{value}`: {e}"));
            match key.trim() {
                "oracle_max_vertices" => self.oracle_max_vertices = value.parse().map_err(bad)?,
                "dp_y_max_y" => self.dp_y_max_y = value.parse().map_err(bad)?,
                "dp_wx_max_width_plus_x" => self.dp_wx_max_width_plus_x = value.parse().map_err(bad)?,
                "branch_max_k_plus_x" => self.branch_max_k_plus_x = value.parse().map_err(bad)?,
                "oracle_cap" => self.oracle_cap = value.parse().map_err(bad)?,
                other => return Err(CncError::parse(idx + 1, format!("unknown key `{other}`"))),
            }
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CncError::invalid(format!("cannot read {}: {e}", path.display())))?;
        let mut config = SelectionConfig::default();
        config.apply(&text)?;
        Ok(config)
    }

    /// Defaults, overridden by the file in `CNC_CONFIG` when it is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) => SelectionConfig::from_file(Path::new(&path)),
            None => Ok(SelectionConfig::default()),
        }
    }
}

/// Picks an engine. Explicit choices are returned unchanged; `auto`
/// refuses with the parameters that are too large.
pub fn select_algorithm(instance: &Instance, choice: Algorithm, config: &SelectionConfig) -> Result<Algorithm> {
    if choice != Algorithm::Auto {
        return Ok(choice);
    }
    let g = &instance.graph;
    if g.vertex_count() <= config.oracle_max_vertices {
        return Ok(Algorithm::Oracle);
    }
    if let Target::Y(y) = instance.target {
        if y <= config.dp_y_max_y {
            return Ok(Algorithm::DpY);
        }
    }
    let Some(x) = instance.x_bound() else {
        // y exceeds every achievable removal; any exact engine answers NO at once
        return Ok(Algorithm::DpY);
    };
    let width = heuristic_decomposition(g).width() as u64;
    if width.saturating_add(x) <= config.dp_wx_max_width_plus_x {
        return Ok(Algorithm::DpWx);
    }
    let kx = (instance.k as u64).saturating_add(x);
    if kx <= config.branch_max_k_plus_x {
        return Ok(Algorithm::BranchKx);
    }
    let mut reasons = vec![format!("n = {} > {}", g.vertex_count(), config.oracle_max_vertices)];
    if let Target::Y(y) = instance.target {
        reasons.push(format!("y = {y} > {}", config.dp_y_max_y));
    }
    reasons.push(format!("w + x = {} > {}", width.saturating_add(x), config.dp_wx_max_width_plus_x));
    reasons.push(format!("k + x = {kx} > {}", config.branch_max_k_plus_x));
    Err(CncError::Refused(reasons.join(", ")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Answer {
    Yes,
    No,
}

/// Engine counters; fields an engine does not track stay zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineStats {
    pub nodes_visited: u64,
    pub subsets_examined: u64,
    pub max_component_subsets: u64,
    pub table_entries: u64,
    pub max_table: u64,
    pub width: Option<usize>,
    pub kernel_vertices: Option<usize>,
    pub forced_vertices: usize,
    pub wall_time_us: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub answer: Answer,
    pub algorithm: Algorithm,
    pub k: usize,
    pub target: Target,
    /// 1-based vertex ids, as in the instance file.
    pub cut: Option<Vec<Vertex>>,
    pub residual_pairs: Option<PairCount>,
    pub pairs_removed: Option<PairCount>,
    pub stats: EngineStats,
    pub config: SelectionConfig,
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub algorithm: Option<Algorithm>,
    pub config: SelectionConfig,
    pub decomposition: Option<NiceTreeDecomposition>,
}

struct Decision {
    cut: Option<Cut>,
    stats: EngineStats,
}

fn no() -> Decision {
    Decision { cut: None, stats: EngineStats::default() }
}

fn run_oracle(instance: &Instance, config: &SelectionConfig) -> Result<Decision> {
    let Some(x) = instance.x_bound() else { return Ok(no()) };
    let result = Oracle::with_cap(config.oracle_cap).min_pairs(&instance.graph, instance.k)?;
    let stats = EngineStats { subsets_examined: result.explored, ..EngineStats::default() };
    let cut = (result.min_residual_pairs <= x).then_some(result.best_cut);
    Ok(Decision { cut, stats })
}

fn run_branch(instance: &Instance) -> Result<Decision> {
    let Some(x) = instance.x_bound() else { return Ok(no()) };
    let trace = match kernelize_kx(&instance.graph, instance.k, x) {
        KernelOutcome::TrivialNo { forced_vertices } => {
            let stats = EngineStats { forced_vertices: forced_vertices.len(), ..EngineStats::default() };
            return Ok(Decision { cut: None, stats });
        }
        KernelOutcome::Kernel(trace) => trace,
    };
    let outcome = solve_branch_kx(&trace.kernel_graph, trace.k_out, x);
    let stats = EngineStats {
        nodes_visited: outcome.stats.nodes_visited,
        subsets_examined: outcome.stats.extensions_tested,
        kernel_vertices: Some(trace.kernel_graph.vertex_count()),
        forced_vertices: trace.forced_vertices.len(),
        ..EngineStats::default()
    };
    let cut = match outcome.cut {
        Some(local) => {
            let mut vertices = trace.forced_vertices.clone();
            vertices.extend(local.vertices.iter().map(|&v| trace.kernel_ids[v]));
            Some(Cut::measure(&instance.graph, vertices)?)
        }
        None => None,
    };
    Ok(Decision { cut, stats })
}

fn run_dp_y(instance: &Instance, config: &SelectionConfig) -> Result<Decision> {
    if instance.x_bound().is_none() {
        return Ok(no());
    }
    let outcome = solve_y(&instance.graph, instance.k, instance.y_bound(), &Oracle::with_cap(config.oracle_cap))?;
    let stats = EngineStats {
        subsets_examined: outcome.stats.subsets_examined,
        max_component_subsets: outcome.stats.max_component_subsets,
        ..EngineStats::default()
    };
    Ok(Decision { cut: outcome.cut, stats })
}

fn run_dp_wx(instance: &Instance, supplied: Option<&NiceTreeDecomposition>) -> Result<Decision> {
    let Some(x) = instance.x_bound() else { return Ok(no()) };
    let built;
    let ntd = match supplied {
        Some(ntd) => ntd,
        None => {
            built = make_nice(&heuristic_decomposition(&instance.graph))?;
            &built
        }
    };
    let outcome = solve_wx(&instance.graph, ntd, instance.k, x)?;
    let stats = EngineStats {
        table_entries: outcome.stats.total_entries as u64,
        max_table: outcome.stats.max_table as u64,
        width: Some(outcome.stats.width),
        ..EngineStats::default()
    };
    Ok(Decision { cut: outcome.cut, stats })
}

/// Selects an engine, runs it, and checks any certificate before
/// reporting YES.
pub fn solve(instance: &Instance, options: &SolveOptions) -> Result<RunReport> {
    let choice = options.algorithm.unwrap_or(Algorithm::Auto);
    let algorithm = select_algorithm(instance, choice, &options.config)?;
    let start = Instant::now();
    let mut decision = match algorithm {
        Algorithm::Oracle => run_oracle(instance, &options.config)?,
        Algorithm::BranchKx => run_branch(instance)?,
        Algorithm::DpY => run_dp_y(instance, &options.config)?,
        Algorithm::DpWx => run_dp_wx(instance, options.decomposition.as_ref())?,
        Algorithm::Auto => unreachable!("selection resolves auto"),
    };
    decision.stats.wall_time_us = start.elapsed().as_micros();

    let total = instance.graph.connected_pairs();
    let (answer, cut, residual, removed) = match decision.cut {
        Some(cut) => {
            let x = instance.x_bound().expect("a YES needs a reachable bound");
            let check = verify_solution(&instance.graph, &cut.vertices, instance.k, x)?;
            if !check.feasible {
                return Err(CncError::invalid(format!(
                    "{algorithm} produced an infeasible certificate: {} vertices, {} pairs",
                    check.cut_size, check.residual_pairs
                )));
            }
            let ids = cut.vertices.iter().map(|v| v + 1).collect();
            (Answer::Yes, Some(ids), Some(cut.residual_pairs), Some(total - cut.residual_pairs))
        }
        None => (Answer::No, None, None, None),
    };
    Ok(RunReport {
        answer,
        algorithm,
        k: instance.k,
        target: instance.target,
        cut,
        residual_pairs: residual,
        pairs_removed: removed,
        stats: decision.stats,
        config: options.config.clone(),
    })
}

/// Decision only, with an explicit engine.
pub fn decide(instance: &Instance, algorithm: Algorithm) -> Result<bool> {
    let options = SolveOptions { algorithm: Some(algorithm), ..SolveOptions::default() };
    Ok(solve(instance, &options)?.answer == Answer::Yes)
}
