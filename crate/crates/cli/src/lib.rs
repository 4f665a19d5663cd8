//! Command-line front end. JSON goes to the output stream, diagnostics to
//! the error stream. Exit status: 0 success, 1 violation or no
//! decomposition, 2 usage or input error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use layerwidth::decomposition::{validate, DecompositionError, DecompositionJson, LayerDecomposition};
use layerwidth::generators::{family, random_dag, reduction_graph, ThreePartitionInstance, FAMILIES};
use layerwidth::graph::Dag;
use layerwidth::metrics::{estimator_by_name, BANDWIDTH_CAP, ESTIMATORS, TREEWIDTH_CAP};
use layerwidth::oracle::{self, enumerate_decompositions};
use layerwidth::solver::{lower_bound_by_name, solve, SolveConfig, LOWER_BOUNDS};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "layerwidth",
    version,
    about = "Layer decompositions of DAGs: exact search, verification, enumeration, width metrics and generators",
    after_help = "Graphs are edge lists: one \"parent child\" pair per line, '#' comment lines, \
                  optional \"#nodes: a b ...\" header. Decompositions are JSON \
                  {\"blocks\":[{\"T\":[..],\"S\":[..]},..],\"width\":w}; block 0 is the rightmost \
                  block (the one holding the sinks). Use '-' to read a graph from standard input."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the layerwidth and an optimal decomposition
    Solve(SolveArgs),
    /// Check a decomposition against a graph
    Verify {
        graph: PathBuf,
        decomposition: PathBuf,
    },
    /// List every decomposition of a small graph, one JSON object per line
    Enumerate {
        graph: PathBuf,
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        cap: usize,
    },
    /// Layerwidth next to treewidth and bandwidth
    Metrics(MetricsArgs),
    /// Write a generated graph as an edge list
    #[command(subcommand)]
    Generate(Generate),
}

#[derive(Debug, Args)]
struct SolveArgs {
    graph: PathBuf,
    /// Stop after this many milliseconds and report the best decomposition found
    #[arg(long)]
    time_limit_ms: Option<u64>,
    /// Nodes that must lie in the interface of the leftmost block
    #[arg(long, value_delimiter = ',')]
    cause: Vec<String>,
    /// Nodes that must lie in the rightmost block
    #[arg(long, value_delimiter = ',')]
    effect: Vec<String>,
    /// Disable bound-based pruning
    #[arg(long)]
    no_prune: bool,
    /// Lower bound used for pruning
    #[arg(long, default_value = "parents", value_parser = PossibleValuesParser::new(LOWER_BOUNDS.iter().map(|b| b.name())))]
    bound: String,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    graph: PathBuf,
    /// Treewidth estimator; defaults to the exact one up to its size cap, min-fill beyond
    #[arg(long, value_parser = PossibleValuesParser::new(ESTIMATORS.iter().map(|e| e.name())))]
    treewidth: Option<String>,
    /// Bandwidth estimator; defaults to the exact one up to its size cap, block order beyond
    #[arg(long, value_parser = PossibleValuesParser::new(ESTIMATORS.iter().map(|e| e.name())))]
    bandwidth: Option<String>,
    #[arg(long)]
    time_limit_ms: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Generate {
    /// A named family member
    Family {
        #[arg(value_parser = PossibleValuesParser::new(FAMILIES.iter().map(|f| f.name())))]
        name: String,
        param: usize,
    },
    /// The reduction graph of a 3-PARTITION instance given as {"sizes":[..],"bound":D}
    Reduction {
        instance: PathBuf,
        /// Also write the role map (constants and node roles) as JSON here
        #[arg(long)]
        roles: Option<PathBuf>,
    },
    /// A seeded random DAG
    Random {
        n: usize,
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failure carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: EXIT_USAGE, message: message.to_string() }
}

type Outcome = Result<u8, Failure>;

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Solve(a) => cmd_solve(a, out, err),
        Command::Verify { graph, decomposition } => cmd_verify(&graph, &decomposition, out),
        Command::Enumerate { graph, cap } => cmd_enumerate(&graph, cap, out),
        Command::Metrics(a) => cmd_metrics(a, out, err),
        Command::Generate(g) => cmd_generate(g, out),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

fn read_graph(path: &Path) -> Result<Dag, Failure> {
    Dag::parse_edge_list(&read_text(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<(), Failure> {
    let line = serde_json::to_string(value).map_err(usage)?;
    writeln!(out, "{line}").map_err(|e| usage(format!("write: {e}")))
}

fn node_indices(g: &Dag, names: &[String]) -> Result<Vec<usize>, Failure> {
    names.iter().map(|n| g.index_of(n).ok_or_else(|| usage(format!("unknown node {n:?}")))).collect()
}

fn cmd_solve(a: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let g = read_graph(&a.graph)?;
    let cfg = SolveConfig {
        cause_vars: node_indices(&g, &a.cause)?,
        effect_vars: node_indices(&g, &a.effect)?,
        time_budget: a.time_limit_ms.map(Duration::from_millis),
        prune: !a.no_prune,
        lower_bound: lower_bound_by_name(&a.bound).expect("restricted by the parser"),
        ..Default::default()
    };
    let start = Instant::now();
    let r = solve(&g, cfg).map_err(usage)?;
    let _ = writeln!(
        err,
        "{} nodes, {} arcs: {} expansions, {} branch nodes, {:.1?}",
        g.node_count(),
        g.arc_count(),
        r.nodes_expanded,
        r.branch_nodes,
        start.elapsed()
    );
    emit(out, &r.to_json(&g))?;
    Ok(if r.best.is_some() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_verify(graph: &Path, decomposition: &Path, out: &mut dyn Write) -> Outcome {
    let g = read_graph(graph)?;
    let json: DecompositionJson = serde_json::from_str(&read_text(decomposition)?)
        .map_err(|e| usage(format!("{}: {e}", decomposition.display())))?;
    let d = LayerDecomposition::from_json(&g, &json).map_err(usage)?;
    let report = match validate(&g, &d, &g.nodes()) {
        Ok(()) => json!({"status": "ok", "width": d.width()}),
        Err(DecompositionError::Violation(v)) => json!({
            "status": "violation",
            "condition": v.condition(),
            "nodes": v.nodes().iter().map(|&x| g.label(x)).collect::<Vec<_>>(),
            "detail": v.describe(&g),
        }),
        Err(e) => json!({"status": "invalid", "detail": e.to_string()}),
    };
    emit(out, &report)?;
    Ok(if report["status"] == "ok" { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_enumerate(graph: &Path, cap: usize, out: &mut dyn Write) -> Outcome {
    let g = read_graph(graph)?;
    let all = enumerate_decompositions(&g, cap).map_err(usage)?;
    out.write_all(oracle::to_json_lines(&g, &all).as_bytes()).map_err(|e| usage(format!("write: {e}")))?;
    Ok(EXIT_OK)
}

fn cmd_metrics(a: MetricsArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let g = read_graph(&a.graph)?;
    let n = g.node_count();
    let cfg = SolveConfig { time_budget: a.time_limit_ms.map(Duration::from_millis), ..Default::default() };
    let r = solve(&g, cfg).map_err(usage)?;
    let lw = r.width.expect("unconstrained search always has a decomposition");
    let pick = |chosen: &Option<String>, exact: &str, cap: usize, fallback: &str| {
        let name = chosen.as_deref().unwrap_or(if n <= cap { exact } else { fallback });
        estimator_by_name(name).expect("restricted by the parser")
    };
    let tw_est = pick(&a.treewidth, "treewidth", TREEWIDTH_CAP, "treewidth-min-fill");
    let bw_est = pick(&a.bandwidth, "bandwidth", BANDWIDTH_CAP, "bandwidth-block-order");
    let tw = tw_est.estimate(&g, r.best.as_ref()).map_err(usage)?;
    let bw = bw_est.estimate(&g, r.best.as_ref()).map_err(usage)?;
    let _ = writeln!(err, "treewidth by {}, bandwidth by {}", tw_est.name(), bw_est.name());
    // The bounds compare exact values; with an estimate or an interrupted search there is nothing to check.
    let bounds_hold = if r.optimal && tw_est.exact() && bw_est.exact() {
        Value::Bool(n == 0 || (tw < 2 * lw && bw < 2 * lw))
    } else {
        Value::Null
    };
    emit(
        out,
        &json!({
            "layerwidth": lw,
            "treewidth": tw,
            "bandwidth": bw,
            "bounds_hold": bounds_hold,
            "exact": {"layerwidth": r.optimal, "treewidth": tw_est.exact(), "bandwidth": bw_est.exact()},
        }),
    )?;
    Ok(if bounds_hold == Value::Bool(false) { EXIT_NEGATIVE } else { EXIT_OK })
}

fn cmd_generate(which: Generate, out: &mut dyn Write) -> Outcome {
    let g = match which {
        Generate::Family { name, param } => family(&name, param).map_err(usage)?,
        Generate::Random { n, p, seed } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(usage(format!("arc probability {p} outside [0, 1]")));
            }
            random_dag(n, p, seed)
        }
        Generate::Reduction { instance, roles } => {
            let inst = ThreePartitionInstance::from_json(&read_text(&instance)?).map_err(usage)?;
            let layout = reduction_graph(&inst).map_err(usage)?;
            if let Some(path) = roles {
                let text = serde_json::to_string(&layout.roles_json()).map_err(usage)?;
                fs::write(&path, text + "\n").map_err(|e| usage(format!("{}: {e}", path.display())))?;
            }
            layout.dag
        }
    };
    let mut w = io::BufWriter::new(out);
    w.write_all(g.to_edge_list().as_bytes()).and_then(|_| w.flush()).map_err(|e| usage(format!("write: {e}")))?;
    Ok(EXIT_OK)
}
