//! Command-line frontend: community detection, per-edge curvature tables,
//! benchmark generation, and mixing-parameter sweeps.
//!
//! Flag mistakes exit with 2, runtime failures with 1. The detect command
//! emits a JSON run report (stdout or --out) whose fields other than the
//! timings are byte-identical across repeated invocations; --trace writes
//! the per-iteration CSV next to it. RICCIFLOW_THREADS caps the worker
//! pool for every command.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ricciflow::flow::EarlyStop;
use ricciflow::io::{self, ReportMetrics, RunReport, Timings, TraceSummary};
use ricciflow::metrics::{contingency, modularity, nmi, Labeling, MetricConfig, MetricError};
use ricciflow::pipeline::{detect_communities, DetectionResult};
use ricciflow::{
    benchgen, curvature_all, CurvatureKind, FlowConfig, Graph, Schedule, Threshold,
    VertexWeightMode,
};

/// Error for well-formed invocations with unusable parameter values; mapped
/// to the same exit code as a flag parse failure.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser)]
#[command(
    name = "ricciflow",
    version,
    about = "Curvature-flow community detection on weighted graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the curvature flow with surgery and report communities.
    Detect(DetectArgs),
    /// Compute per-edge curvature and print it as CSV.
    Curvature(CurvatureArgs),
    /// Generate one planted-partition benchmark instance.
    Generate(GenerateArgs),
    /// Generate instances across mixing values and aggregate detection quality.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindName {
    Ollivier,
    Lly,
    Forman,
    Menger,
    Haantjes,
}

#[derive(Clone, Copy, ValueEnum)]
enum VertexWeightName {
    Sum,
    Unit,
}

#[derive(Args)]
struct KindArgs {
    /// Curvature notion driving the computation.
    #[arg(long, value_enum)]
    curvature: KindName,
    /// Laziness of the random walk (ollivier only).
    #[arg(long, default_value_t = 0.5, value_parser = parse_alpha)]
    alpha: f64,
    /// Longest simple path length counted (haantjes only).
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(2..))]
    haantjes_max_hops: u64,
    /// Vertex weights entering the combinatorial curvature (forman only).
    #[arg(long, value_enum, default_value_t = VertexWeightName::Sum)]
    forman_vertex_weight: VertexWeightName,
}

impl KindArgs {
    fn kind(&self) -> CurvatureKind {
        match self.curvature {
            KindName::Ollivier => CurvatureKind::Ollivier { alpha: self.alpha },
            KindName::Lly => CurvatureKind::LinLuYau,
            KindName::Forman => CurvatureKind::Forman {
                vertex_weights: match self.forman_vertex_weight {
                    VertexWeightName::Sum => VertexWeightMode::SumIncident,
                    VertexWeightName::Unit => VertexWeightMode::Unit,
                },
            },
            KindName::Menger => CurvatureKind::Menger,
            KindName::Haantjes => CurvatureKind::Haantjes {
                max_hops: self.haantjes_max_hops as usize,
            },
        }
    }
}

#[derive(Args)]
struct FlowArgs {
    /// Surgery threshold: a number greater than 1, or "auto".
    #[arg(long = "A", default_value = "auto", value_parser = parse_threshold)]
    threshold: Threshold,
    /// Time step of the uniform schedule.
    #[arg(long, default_value_t = 0.05, value_parser = parse_dt)]
    dt: f64,
    /// Iteration budget.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    iters: u64,
}

impl FlowArgs {
    fn config(&self, kind: CurvatureKind) -> FlowConfig {
        let iterations = self.iters as usize;
        FlowConfig {
            kind,
            schedule: Schedule::Uniform {
                dt: self.dt,
                iterations,
            },
            threshold: self.threshold,
            early_stop: Some(EarlyStop::for_budget(iterations)),
            record_history: false,
        }
    }

    fn threshold_echo(&self) -> serde_json::Value {
        match self.threshold {
            Threshold::Auto => serde_json::json!("auto"),
            Threshold::Fixed(a) => serde_json::json!(a),
        }
    }
}

#[derive(Args)]
struct DetectArgs {
    /// Edge-list file of the input graph.
    #[arg(long)]
    graph: PathBuf,
    /// Ground-truth label file for scoring.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[command(flatten)]
    kind: KindArgs,
    #[command(flatten)]
    flow: FlowArgs,
    /// Report destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-iteration trace CSV destination.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Echoed into the report; detection itself is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CurvatureArgs {
    /// Edge-list file of the input graph.
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    kind: KindArgs,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Vertex count.
    #[arg(long, default_value_t = 500)]
    n: usize,
    /// Mean degree target.
    #[arg(long, default_value_t = 20.0)]
    avg_degree: f64,
    /// Hard degree cap.
    #[arg(long, default_value_t = 50)]
    max_degree: usize,
    /// Smallest community size.
    #[arg(long, default_value_t = 10)]
    min_community: usize,
    /// Largest community size.
    #[arg(long, default_value_t = 50)]
    max_community: usize,
    /// Base seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl GenArgs {
    fn config(&self, mu: f64) -> Result<benchgen::GenConfig> {
        let cfg = benchgen::GenConfig {
            n: self.n,
            avg_degree: self.avg_degree,
            max_degree: self.max_degree,
            min_community: self.min_community,
            max_community: self.max_community,
            mu,
            seed: self.seed,
        };
        cfg.validate().map_err(|e| UsageError(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    gen: GenArgs,
    /// Fraction of stubs leaving their community.
    #[arg(long, default_value_t = 0.1)]
    mu: f64,
    /// Output prefix; writes PREFIX.edges and PREFIX.labels.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    gen: GenArgs,
    /// Comma-separated mixing values, one sweep cell each.
    #[arg(long, value_delimiter = ',', required = true)]
    mu: Vec<f64>,
    /// Instances per mixing value.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    repeats: u64,
    #[command(flatten)]
    kind: KindArgs,
    #[command(flatten)]
    flow: FlowArgs,
    /// Aggregate CSV destination.
    #[arg(long)]
    out: PathBuf,
    /// Directory receiving per-instance edge and label files.
    #[arg(long)]
    keep_instances: Option<PathBuf>,
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(a) if (0.0..1.0).contains(&a) => Ok(a),
        _ => Err(format!("alpha must lie in [0, 1), got {s:?}")),
    }
}

fn parse_dt(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(dt) if dt > 0.0 && dt.is_finite() => Ok(dt),
        _ => Err(format!("dt must be positive and finite, got {s:?}")),
    }
}

fn parse_threshold(s: &str) -> Result<Threshold, String> {
    if s == "auto" {
        return Ok(Threshold::Auto);
    }
    match s.parse::<f64>() {
        Ok(a) if a > 1.0 && a.is_finite() => Ok(Threshold::Fixed(a)),
        _ => Err(format!("threshold must be \"auto\" or a number above 1, got {s:?}")),
    }
}

fn init_threads() {
    if let Ok(value) = std::env::var("RICCIFLOW_THREADS") {
        if let Ok(n) = value.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn main() {
    init_threads();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Detect(args) => run_detect(&args),
        Command::Curvature(args) => run_curvature(&args),
        Command::Generate(args) => run_generate(&args),
        Command::Sweep(args) => run_sweep(&args),
    };
    if let Err(err) = result {
        eprintln!("error: {err:#}");
        let code = if err.downcast_ref::<UsageError>().is_some() {
            2
        } else {
            1
        };
        std::process::exit(code);
    }
}

fn load_graph(path: &Path) -> Result<Graph> {
    let (graph, warnings) =
        io::load_graph(path).with_context(|| format!("reading {}", path.display()))?;
    for warning in warnings {
        eprintln!("warning: {}: {warning}", path.display());
    }
    Ok(graph)
}

/// Modularity with an edgeless graph reported as NaN (serialized as null)
/// instead of an error.
fn modularity_or_nan(g: &Graph, labels: &Labeling) -> Result<f64> {
    match modularity(g, labels, &MetricConfig::default()) {
        Ok(q) => Ok(q),
        Err(MetricError::EdgelessGraph) => Ok(f64::NAN),
        Err(e) => Err(e.into()),
    }
}

fn run_detect(args: &DetectArgs) -> Result<()> {
    let start = Instant::now();
    let graph = load_graph(&args.graph)?;
    let truth = args
        .truth
        .as_ref()
        .map(|path| {
            io::load_labels(path, &graph).with_context(|| format!("reading {}", path.display()))
        })
        .transpose()?;

    let kind = args.kind.kind();
    let cfg = args.flow.config(kind.clone());
    let result = detect_communities(&graph, &cfg)?;
    if !result.flow.warned_edges.is_empty() {
        eprintln!(
            "warning: {} edges carried curvature reliability warnings",
            result.flow.warned_edges.len()
        );
    }

    let score = truth
        .as_ref()
        .map(|t| contingency(t, &result.labeling))
        .transpose()?
        .as_ref()
        .and_then(nmi);
    let metrics = ReportMetrics {
        communities: result.community_count(),
        nmi: score,
        modularity_input: modularity_or_nan(&graph, &result.labeling)?,
        modularity_final: modularity_or_nan(&result.flow.final_graph, &result.labeling)?,
    };

    let report = RunReport {
        schema_version: io::REPORT_SCHEMA_VERSION,
        config: serde_json::json!({
            "command": "detect",
            "graph": args.graph.display().to_string(),
            "truth": args.truth.as_ref().map(|p| p.display().to_string()),
            "curvature": kind.label(),
            "kind": kind,
            "threshold": args.flow.threshold_echo(),
            "dt": args.flow.dt,
            "iterations": args.flow.iters,
            "seed": args.seed,
        }),
        assignments: result.assignments(),
        metrics,
        trace: trace_summary(&result),
        timings: Timings {
            total_seconds: start.elapsed().as_secs_f64(),
            flow_seconds: result.seconds,
        },
    };

    if let Some(path) = &args.trace {
        io::write_trace_csv(&result.flow.trace, path)?;
    }
    match &args.out {
        Some(path) => {
            io::write_run_report(&report, path)?;
            println!(
                "{} communities, Q = {:.4}, wrote {}",
                metrics.communities,
                metrics.modularity_input,
                path.display()
            );
        }
        None => {
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            print!("{text}");
        }
    }
    Ok(())
}

fn trace_summary(result: &DetectionResult) -> TraceSummary {
    let flow = &result.flow;
    TraceSummary {
        iterations: flow.state.iteration,
        surgeries: flow.trace.surgeries.len(),
        removed_edges: flow.trace.surgeries.iter().map(|s| s.removed.len()).sum(),
        final_edges: flow.final_graph.edge_count(),
        final_components: result.community_count(),
        converged: flow.converged,
        threshold: flow.threshold,
    }
}

fn run_curvature(args: &CurvatureArgs) -> Result<()> {
    let graph = load_graph(&args.graph)?;
    let kind = args.kind.kind();
    let vector = curvature_all(&graph, &kind)?;
    if !vector.warnings.is_empty() {
        eprintln!(
            "warning: {} edges carried curvature reliability warnings",
            vector.warnings.len()
        );
    }
    match &args.out {
        Some(path) => io::write_curvature_csv(&graph, &vector.values, path)?,
        None => print!("{}", io::curvature_csv_string(&graph, &vector.values)),
    }
    Ok(())
}

/// Appends to the file name instead of `Path::with_extension`, which would
/// truncate prefixes that contain a dot (such as "mu0.2-r1").
fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

fn write_instance(
    graph: &Graph,
    truth: &Labeling,
    prefix: &Path,
) -> Result<(PathBuf, PathBuf)> {
    let edges_path = with_suffix(prefix, ".edges");
    let labels_path = with_suffix(prefix, ".labels");
    io::write_graph(graph, &edges_path)?;
    let pairs: Vec<(String, String)> = (0..graph.vertex_count())
        .map(|v| {
            (
                graph.vertex_name(v).to_string(),
                truth.labels()[v].to_string(),
            )
        })
        .collect();
    io::write_labels(
        pairs.iter().map(|(v, l)| (v.as_str(), l.as_str())),
        &labels_path,
    )?;
    Ok((edges_path, labels_path))
}

fn run_generate(args: &GenerateArgs) -> Result<()> {
    let cfg = args.gen.config(args.mu)?;
    let (graph, truth) = benchgen::generate(&cfg)?;
    let (edges_path, labels_path) = write_instance(&graph, &truth, &args.out)?;
    println!(
        "wrote {} ({} vertices, {} edges) and {}",
        edges_path.display(),
        graph.vertex_count(),
        graph.edge_count(),
        labels_path.display()
    );
    Ok(())
}

fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn run_sweep(args: &SweepArgs) -> Result<()> {
    let base = args.gen.config(0.0)?;
    for &mu in &args.mu {
        if !(0.0..=1.0).contains(&mu) {
            return Err(UsageError(format!("mu must lie in [0, 1], got {mu}")).into());
        }
    }
    if let Some(dir) = &args.keep_instances {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating {}", dir.display()))?;
    }
    let cfg = args.flow.config(args.kind.kind());

    let mut rows = Vec::new();
    for &mu in &args.mu {
        let batch = benchgen::sweep(
            &benchgen::GenConfig { mu, ..base },
            &[mu],
            args.repeats as usize,
        )?;
        let mut nmis = Vec::new();
        let mut modularities = Vec::new();
        for instance in &batch {
            if let Some(dir) = &args.keep_instances {
                let prefix = dir.join(format!("mu{mu}-r{}", instance.repeat));
                write_instance(&instance.graph, &instance.truth, &prefix)?;
            }
            let result = detect_communities(&instance.graph, &cfg)?;
            let score = nmi(&contingency(&instance.truth, &result.labeling)?).unwrap_or(0.0);
            nmis.push(score);
            modularities.push(modularity_or_nan(&instance.graph, &result.labeling)?);
        }
        let (mean_nmi, std_nmi) = mean_and_std(&nmis);
        let (mean_q, std_q) = mean_and_std(&modularities);
        eprintln!(
            "mu {mu}: mean NMI {mean_nmi:.4} (std {std_nmi:.4}), mean Q {mean_q:.4}"
        );
        rows.push((mu, mean_nmi, std_nmi, mean_q, std_q));
    }

    let mut text = String::from("mu,repeats,mean_nmi,std_nmi,mean_modularity,std_modularity\n");
    for (mu, mean_nmi, std_nmi, mean_q, std_q) in rows {
        text.push_str(&format!(
            "{mu},{},{mean_nmi},{std_nmi},{mean_q},{std_q}\n",
            args.repeats
        ));
    }
    std::fs::write(&args.out, text).with_context(|| format!("writing {}", args.out.display()))?;
    println!("wrote {}", args.out.display());
    Ok(())
}
