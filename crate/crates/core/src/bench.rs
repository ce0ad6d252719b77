//! Cross-engine benchmark runs with CSV output.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{solve, Algorithm, Answer, SelectionConfig, SolveOptions};
use crate::error::{CncError, Result};
use crate::families::{all_graphs, random_graph, random_tree, seeded_rng};
use crate::graph::{Graph, PairCount};
use crate::instance::{serialize_instance, Instance};

/// Source of benchmark graphs.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Empty,
    /// Every isomorphism class on `n` vertices.
    AllGraphs(usize),
    Random { count: usize, min_n: usize, max_n: usize, p: f64, seed: u64 },
    Trees { count: usize, n: usize, seed: u64 },
    Explicit(Vec<Graph>),
}

impl Family {
    pub fn graphs(&self) -> Vec<Graph> {
        match self {
            Family::Empty => Vec::new(),
            Family::AllGraphs(n) => all_graphs(*n),
            Family::Random { count, min_n, max_n, p, seed } => {
                let mut rng = seeded_rng(*seed);
                (0..*count)
                    .map(|_| {
                        let n = rand::Rng::gen_range(&mut rng, *min_n..=*max_n);
                        random_graph(n, *p, &mut rng)
                    })
                    .collect()
            }
            Family::Trees { count, n, seed } => {
                let mut rng = seeded_rng(*seed);
                (0..*count).map(|_| random_tree(*n, &mut rng)).collect()
            }
            Family::Explicit(graphs) => graphs.clone(),
        }
    }
}

/// `empty`, `all:<n>`, `random:<count>:<min_n>-<max_n>:<p>[:seed]`,
/// `trees:<count>:<n>[:seed]`.
impl FromStr for Family {
    type Err = CncError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CncError::invalid(format!("bad family `{s}`"));
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let seed = |i: usize| parts.get(i).map_or(Ok(0), |t| t.parse::<u64>().map_err(|_| bad()));
        match parts.as_slice() {
            ["empty"] => Ok(Family::Empty),
            ["all", n] => Ok(Family::AllGraphs(num(n)?)),
            ["random", count, range, p, ..] if parts.len() <= 5 => {
                let (lo, hi) = range.split_once('-').unwrap_or((range, range));
                Ok(Family::Random {
                    count: num(count)?,
                    min_n: num(lo)?,
                    max_n: num(hi)?,
                    p: p.parse().map_err(|_| bad())?,
                    seed: seed(4)?,
                })
            }
            ["trees", count, n, ..] if parts.len() <= 4 => {
                Ok(Family::Trees { count: num(count)?, n: num(n)?, seed: seed(3)? })
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub family: Family,
    pub engines: Vec<Algorithm>,
    pub ks: Vec<usize>,
    pub xs: Vec<PairCount>,
    pub repetitions: usize,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
    pub config: SelectionConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: usize,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub x: PairCount,
    pub engine: Algorithm,
    pub rep: usize,
    /// `YES`, `NO` or `REFUSED`.
    pub decision: String,
    pub wall_time_us: u128,
    pub nodes_visited: u64,
    pub subsets_examined: u64,
    pub table_entries: u64,
}

pub const CSV_HEADER: &str =
    "instance,n,m,k,x,engine,rep,decision,wall_time_us,nodes_visited,subsets_examined,table_entries";

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.n,
            self.m,
            self.k,
            self.x,
            self.engine,
            self.rep,
            self.decision,
            self.wall_time_us,
            self.nodes_visited,
            self.subsets_examined,
            self.table_entries
        )
    }
}

/// Rows as CSV; no rows gives an empty string.
pub fn to_csv(rows: &[BenchRow]) -> String {
    if rows.is_empty() {
        return String::new();
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        writeln!(out, "{}", row.csv()).unwrap();
    }
    out
}

fn run_instance(id: usize, instance: &Instance, x: PairCount, spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    let mut seen: Option<(Algorithm, Answer)> = None;
    for &engine in &spec.engines {
        for rep in 0..spec.repetitions.max(1) {
            let options = SolveOptions { algorithm: Some(engine), config: spec.config.clone(), decomposition: None };
            let mut row = BenchRow {
                instance: id,
                n: instance.graph.vertex_count(),
                m: instance.graph.edge_count(),
                k: instance.k,
                x,
                engine,
                rep,
                decision: String::new(),
                wall_time_us: 0,
                nodes_visited: 0,
                subsets_examined: 0,
                table_entries: 0,
            };
            match solve(instance, &options) {
                Ok(report) => {
                    if let Some((first, answer)) = seen {
                        if answer != report.answer {
                            return Err(CncError::invalid(format!(
                                "discrepancy: {first} says {answer:?}, {engine} says {:?} on\n{}",
                                report.answer,
                                serialize_instance(instance)
                            )));
                        }
                    } else {
                        seen = Some((engine, report.answer));
                    }
                    row.decision = if report.answer == Answer::Yes { "YES" } else { "NO" }.into();
                    row.wall_time_us = report.stats.wall_time_us;
                    row.nodes_visited = report.stats.nodes_visited;
                    row.subsets_examined = report.stats.subsets_examined;
                    row.table_entries = report.stats.table_entries;
                }
                Err(CncError::Refused(_) | CncError::CapExceeded { .. }) => row.decision = "REFUSED".into(),
                Err(e) => return Err(e),
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// One row per (instance, engine, repetition). Engines that disagree
/// abort the run with the offending instance in the error.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    let graphs = spec.family.graphs();
    let mut jobs = Vec::new();
    for g in &graphs {
        for &k in &spec.ks {
            for &x in &spec.xs {
                jobs.push((jobs.len(), Instance::with_x(g.clone(), k, x), x));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| CncError::invalid(format!("cannot start workers: {e}")))?;
    let per_job: Vec<Vec<BenchRow>> =
        pool.install(|| jobs.par_iter().map(|(id, inst, x)| run_instance(*id, inst, *x, spec)).collect::<Result<_>>())?;
    Ok(per_job.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(family: Family) -> BenchSpec {
        BenchSpec {
            family,
            engines: Algorithm::ENGINES.to_vec(),
            ks: vec![0, 1, 2],
            xs: vec![0, 2, 6],
            repetitions: 1,
            workers: 2,
            config: SelectionConfig::default(),
        }
    }

    #[test]
    fn empty_family_gives_empty_csv() {
        let rows = run_bench(&spec(Family::Empty)).unwrap();
        assert!(rows.is_empty());
        assert_eq!(to_csv(&rows), "");
    }

    #[test]
    fn small_family_agrees() {
        let rows = run_bench(&spec(Family::AllGraphs(4))).unwrap();
        assert_eq!(rows.len(), 11 * 9 * 4);
        let csv = to_csv(&rows);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), rows.len() + 1);
    }

    #[test]
    fn family_syntax() {
        assert_eq!("all:5".parse::<Family>().unwrap(), Family::AllGraphs(5));
        assert_eq!(
            "random:10:8-12:0.3:7".parse::<Family>().unwrap(),
            Family::Random { count: 10, min_n: 8, max_n: 12, p: 0.3, seed: 7 }
        );
        assert_eq!("trees:3:9".parse::<Family>().unwrap(), Family::Trees { count: 3, n: 9, seed: 0 });
        assert!("random:1".parse::<Family>().is_err());
    }
}
