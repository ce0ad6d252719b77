use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use cnc::bench::{run_bench, to_csv, BenchSpec, Family};
use cnc::decomposition::{heuristic_decomposition, make_nice, parse_td, write_nice_td, write_td};
use cnc::engine::{solve, Algorithm, Answer, SelectionConfig, SolveOptions};
use cnc::families::{random_graph, random_tree, seeded_rng};
use cnc::graph::verify_solution;
use cnc::instance::{parse_document, parse_instance, serialize_instance, Instance, Target};
use cnc::kernel::{kernelize_kx, KernelOutcome};
use cnc::reductions::{
    build_mcc_instance, cross_compose, reduce_clique_bipartite, reduce_clique_split, reduce_clique_to_cnc,
    CliqueInstance, GadgetSizes, ReductionOutput, DEFAULT_VERTEX_CAP,
};
use cnc::{CncError, Graph, Result};

#[derive(Parser)]
#[command(name = "cnc", version, about = "Critical Node Cut solvers and instance generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance and report a cut.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "auto")]
        algo: Algorithm,
        /// Decomposition for dp-wx, in .td format.
        #[arg(long)]
        td: Option<PathBuf>,
        /// Subset limit for the oracle.
        #[arg(long)]
        cap: Option<u128>,
        #[arg(long)]
        json: bool,
        /// Write the cut here, one vertex id per line.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Apply the high-degree rule and print the reduced instance.
    Kernelize {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    #[command(subcommand)]
    /// Build instances from reductions or random families.
    Generate(Generate),
    /// Print a heuristic tree decomposition.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        nice: bool,
    },
    /// Run several engines over a graph family and print CSV.
    Bench {
        /// `empty`, `all:<n>`, `random:<count>:<lo>-<hi>:<p>[:seed]` or `trees:<count>:<n>[:seed]`.
        #[arg(long)]
        family: Family,
        #[arg(long, value_delimiter = ',', default_value = "oracle,branch-kx,dp-y,dp-wx")]
        engines: Vec<Algorithm>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
        k: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4,5,6,7,8,9,10")]
        x: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Check a certificate against an instance.
    Verify {
        file: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Args)]
struct Output {
    /// Instance destination; the JSON sidecar goes next to it.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Source {
    /// Source graph in the instance format; `k`, `x` and `y` lines are optional.
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    ell: usize,
    /// Comma-separated colors in 1..=ell, one per vertex.
    #[arg(long, value_delimiter = ',')]
    coloring: Option<Vec<usize>>,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand)]
enum Generate {
    /// Reduce a clique instance to a y-targeted instance.
    CliqueReduction(Source),
    /// Clique reduction whose output is a split graph.
    Split(Source),
    /// Clique reduction whose output is bipartite and 2-degenerate.
    Bipartite(Source),
    /// Gadget reduction from multicolored clique.
    Mcc {
        #[command(flatten)]
        source: Source,
        /// `a,b,cv,x,y,z,l3`; defaults to the asymptotic sizes.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<u64>>,
        /// Largest instance to materialize.
        #[arg(long)]
        cap: Option<u128>,
    },
    /// Disjoint composition of several clique instances.
    CrossCompose {
        #[arg(long, required = true, num_args = 1..)]
        source: Vec<PathBuf>,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Seeded G(n, p) instance.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Seeded random recursive tree instance.
    Tree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CncError::invalid(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CncError::invalid(format!("cannot write {}: {e}", path.display())))
}

fn answer_code(answer: Answer) -> ExitCode {
    match answer {
        Answer::Yes => ExitCode::from(0),
        Answer::No => ExitCode::from(1),
    }
}

fn run_solve(
    file: &Path,
    algo: Algorithm,
    td: Option<&Path>,
    cap: Option<u128>,
    as_json: bool,
    cert: Option<&Path>,
) -> Result<ExitCode> {
    let instance = parse_instance(&read(file)?)?;
    let mut config = SelectionConfig::from_env()?;
    if let Some(cap) = cap {
        config.oracle_cap = cap;
    }
    let decomposition = match td {
        Some(path) => {
            let parsed = parse_td(&read(path)?)?;
            Some(match parsed.nice {
                Some(nice) => nice,
                None => make_nice(&parsed.decomposition)?,
            })
        }
        None => None,
    };
    let options = SolveOptions { algorithm: Some(algo), config, decomposition };
    let report = solve(&instance, &options)?;
    if let (Some(path), Some(cut)) = (cert, &report.cut) {
        let body: String = cut.iter().map(|v| format!("{v}\n")).collect();
        write(path, &body)?;
    }
    if as_json {
        println!("{}", serde_json::to_string(&report).expect("reports serialize"));
    } else {
        let answer = if report.answer == Answer::Yes { "YES" } else { "NO" };
        println!("{answer} ({})", report.algorithm);
        if let Some(cut) = &report.cut {
            let ids: Vec<String> = cut.iter().map(ToString::to_string).collect();
            println!("cut: {}", ids.join(" "));
            println!("residual pairs: {}", report.residual_pairs.unwrap_or_default());
            println!("pairs removed: {}", report.pairs_removed.unwrap_or_default());
        }
        println!("time: {} us", report.stats.wall_time_us);
    }
    Ok(answer_code(report.answer))
}

fn run_kernelize(file: &Path, as_json: bool) -> Result<ExitCode> {
    let instance = parse_instance(&read(file)?)?;
    let Some(x) = instance.x_bound() else {
        println!("NO (y exceeds the pairs present)");
        return Ok(ExitCode::from(1));
    };
    let outcome = kernelize_kx(&instance.graph, instance.k, x);
    if as_json {
        println!("{}", serde_json::to_string(&outcome).expect("traces serialize"));
    }
    match outcome {
        KernelOutcome::TrivialNo { .. } => {
            if !as_json {
                println!("NO (budget exhausted by forced vertices)");
            }
            Ok(ExitCode::from(1))
        }
        KernelOutcome::Kernel(trace) => {
            if !as_json {
                let forced: Vec<String> = trace.forced_vertices.iter().map(|v| (v + 1).to_string()).collect();
                println!("c forced: {}", forced.join(" "));
                let kernel = Instance::with_x(trace.kernel_graph, trace.k_out, x);
                print!("{}", serialize_instance(&kernel));
            }
            Ok(ExitCode::from(0))
        }
    }
}

fn load_source(path: &Path, ell: usize, coloring: Option<Vec<usize>>) -> Result<CliqueInstance> {
    let graph = parse_document(&read(path)?)?.graph;
    match coloring {
        Some(colors) => CliqueInstance::colored(graph, ell, colors),
        None => Ok(CliqueInstance::new(graph, ell)),
    }
}

fn emit(instance: &Instance, sidecar: serde_json::Value, output: &Output) -> Result<ExitCode> {
    let text = serialize_instance(instance);
    let meta = serde_json::to_string_pretty(&sidecar).expect("sidecars serialize");
    match &output.out {
        Some(path) => {
            write(path, &text)?;
            write(&path.with_extension("json"), &format!("{meta}\n"))?;
        }
        None => {
            print!("{text}");
            eprintln!("{meta}");
        }
    }
    Ok(ExitCode::from(0))
}

fn reduction_sidecar(out: &ReductionOutput) -> serde_json::Value {
    let target = match out.instance.target {
        Target::X(x) => json!({ "x": x }),
        Target::Y(y) => json!({ "y": y }),
    };
    json!({
        "k": out.instance.k,
        "target": target,
        "raw_target": out.raw_target.to_string(),
        "N": out.vertex_count(),
        "roles": out.role_counts(),
        "boundaries": out.boundaries,
        "warnings": out.warnings,
    })
}

fn run_generate(cmd: Generate) -> Result<ExitCode> {
    let reduced = |source: Source, build: fn(&CliqueInstance) -> ReductionOutput| -> Result<ExitCode> {
        let src = load_source(&source.source, source.ell, source.coloring)?;
        let out = build(&src);
        for w in &out.warnings {
            log::warn!("{w}");
        }
        emit(&out.instance, reduction_sidecar(&out), &source.output)
    };
    match cmd {
        Generate::CliqueReduction(source) => reduced(source, reduce_clique_to_cnc),
        Generate::Split(source) => reduced(source, reduce_clique_split),
        Generate::Bipartite(source) => reduced(source, reduce_clique_bipartite),
        Generate::Mcc { source, sizes, cap } => {
            let src = load_source(&source.source, source.ell, source.coloring)?;
            let sizes = match sizes.as_deref() {
                None => GadgetSizes::asymptotic(src.graph.vertex_count(), source.ell),
                Some(&[a, b, cv, x, y, z, l3]) => GadgetSizes { a, b, cv, x, y, z, l3 },
                Some(other) => return Err(CncError::invalid(format!("--sizes needs 7 values, got {}", other.len()))),
            };
            let (out, layout) = build_mcc_instance(&src, &sizes, cap.unwrap_or(DEFAULT_VERTEX_CAP))?;
            let mut sidecar = reduction_sidecar(&out);
            sidecar["sizes"] = json!(layout.sizes);
            sidecar["parameters"] = json!({
                "k": layout.parameters.k.to_string(),
                "x": layout.parameters.x.to_string(),
                "treewidth_bound": layout.parameters.treewidth_bound.to_string(),
                "vertex_gadget_size": layout.parameters.vertex_gadget_size.to_string(),
                "edge_gadget_size": layout.parameters.edge_gadget_size.to_string(),
                "validation_component_size": layout.parameters.validation_component_size.to_string(),
                "total_vertices": layout.parameters.total_vertices.to_string(),
            });
            emit(&out.instance, sidecar, &source.output)
        }
        Generate::CrossCompose { source, ell, output } => {
            let sources = source.iter().map(|p| load_source(p, ell, None)).collect::<Result<Vec<_>>>()?;
            let out = cross_compose(&sources, ell)?;
            for w in &out.warnings {
                log::warn!("{w}");
            }
            emit(&out.instance, reduction_sidecar(&out), &output)
        }
        Generate::Random { n, p, k, x, seed, output } => {
            let g = random_graph(n, p, &mut seeded_rng(seed));
            plain(Instance::with_x(g, k, x), seed, &output)
        }
        Generate::Tree { n, k, x, seed, output } => {
            let g = random_tree(n, &mut seeded_rng(seed));
            plain(Instance::with_x(g, k, x), seed, &output)
        }
    }
}

fn plain(instance: Instance, seed: u64, output: &Output) -> Result<ExitCode> {
    let sidecar = json!({
        "k": instance.k,
        "target": instance.target,
        "N": instance.graph.vertex_count(),
        "pairs": instance.graph.connected_pairs(),
        "seed": seed,
    });
    emit(&instance, sidecar, output)
}

fn run_decompose(file: &Path, nice: bool) -> Result<ExitCode> {
    let graph: Graph = parse_document(&read(file)?)?.graph;
    let td = heuristic_decomposition(&graph);
    let text = if nice { write_nice_td(&make_nice(&td)?, graph.vertex_count()) } else { write_td(&td, graph.vertex_count()) };
    print!("{text}");
    Ok(ExitCode::from(0))
}

fn run_verify(file: &Path, cert: &Path) -> Result<ExitCode> {
    let instance = parse_instance(&read(file)?)?;
    let n = instance.graph.vertex_count();
    let mut cut = Vec::new();
    for (idx, line) in read(cert)?.lines().enumerate() {
        let token = line.trim();
        if token.is_empty() {
            continue;
        }
        let id: usize = token.parse().map_err(|_| CncError::parse(idx + 1, format!("bad vertex id `{token}`")))?;
        if id == 0 || id > n {
            return Err(CncError::parse(idx + 1, format!("vertex id {id} outside 1..={n}")));
        }
        cut.push(id - 1);
    }
    let Some(x) = instance.x_bound() else {
        println!("INVALID: y exceeds the pairs present");
        return Ok(ExitCode::from(1));
    };
    let check = verify_solution(&instance.graph, &cut, instance.k, x)?;
    println!(
        "{}: {} vertices (budget {}), {} residual pairs (bound {x})",
        if check.feasible { "VALID" } else { "INVALID" },
        check.cut_size,
        instance.k,
        check.residual_pairs
    );
    Ok(ExitCode::from(if check.feasible { 0 } else { 1 }))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { file, algo, td, cap, json, cert } => {
            run_solve(&file, algo, td.as_deref(), cap, json, cert.as_deref())
        }
        Command::Kernelize { file, json } => run_kernelize(&file, json),
        Command::Generate(cmd) => run_generate(cmd),
        Command::Decompose { file, nice } => run_decompose(&file, nice),
        Command::Bench { family, engines, k, x, reps, workers } => {
            let spec = BenchSpec {
                family,
                engines,
                ks: k,
                xs: x,
                repetitions: reps,
                workers,
                config: SelectionConfig::from_env()?,
            };
            print!("{}", to_csv(&run_bench(&spec)?));
            Ok(ExitCode::from(0))
        }
        Command::Verify { file, cert } => run_verify(&file, &cert),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e @ (CncError::Refused(_) | CncError::CapExceeded { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
