//! Command-line frontend: run detection on a graph with bipolar relational
//! evidence, generate benchmark instances, score partitions with NMI, and
//! sweep the benchmark label grid into a CSV table.

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use duo_louvain::{
    benchmark, io, metrics, multiple_bipolar_duo_louvain, reproduce, AggregatorSpec,
    BipolarFuzzyMeasure, BipolarMultiGraph, FuzzyMeasure, NegationSpec, Partition,
    PipelineConfig, RelationSource, WeightedGraph,
};
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "duolouvain", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect communities in a graph, optionally guided by bipolar evidence.
    Detect(Box<DetectArgs>),
    /// Generate a planted benchmark instance into a directory.
    Generate(GenerateArgs),
    /// Score one partition file against another with NMI.
    Evaluate(EvaluateArgs),
    /// Sweep the 9x9 benchmark label grid and write mean NMI per cell.
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct DetectArgs {
    /// Topology graph: dense CSV matrix or edge-list TSV.
    #[arg(long)]
    graph: PathBuf,
    /// Discrepancy relation matrix per source (repeatable, pairs with --f-plus).
    #[arg(long = "f-minus")]
    f_minus: Vec<PathBuf>,
    /// Affinity relation matrix per source (repeatable).
    #[arg(long = "f-plus")]
    f_plus: Vec<PathBuf>,
    /// Bipolar measure JSON per source (repeatable); alternative to direct matrices.
    #[arg(long)]
    measures: Vec<PathBuf>,
    /// Pipeline config JSON; individual operator flags are ignored when set.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Per-source symmetrizer for discrepancy measures (repeatable).
    #[arg(long = "phi-neg")]
    phi_neg: Vec<String>,
    /// Per-source symmetrizer for affinity measures (repeatable).
    #[arg(long = "phi-pos")]
    phi_pos: Vec<String>,
    /// Aggregator over the discrepancy matrices.
    #[arg(long = "Phi-neg", default_value = "max")]
    agg_neg: String,
    /// Aggregator over the affinity matrices.
    #[arg(long = "Phi-pos", default_value = "max")]
    agg_pos: String,
    /// Combiner of negated discrepancy with affinity.
    #[arg(long, default_value = "min")]
    psi: String,
    /// Topology weight in the modularity matrix blend.
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Partition JSON output path.
    #[arg(long)]
    out: PathBuf,
    /// Optional flat node,label CSV output.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Optional run-report JSON output.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Benchmark layout, 1..=4.
    #[arg(long)]
    case: u8,
    /// Probability label for the topology graph, 1..=9.
    #[arg(long = "graph-label")]
    graph_label: u8,
    /// Probability label for the relation matrices; defaults to the graph label.
    #[arg(long = "relations-label")]
    relations_label: Option<u8>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for A.csv, Fminus.csv, Fplus.csv, gold.json, manifest.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    /// First partition JSON file.
    first: PathBuf,
    /// Second partition JSON file.
    second: PathBuf,
    /// Also print mutual information and both entropies.
    #[arg(long)]
    full: bool,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Benchmark layout, 1..=4.
    #[arg(long)]
    case: u8,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Instances generated (and runs averaged) per grid cell.
    #[arg(long, default_value_t = 100)]
    iterations: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Aggregator collapsing each side's relation matrices.
    #[arg(long = "Phi", default_value = "mean")]
    side_aggregator: String,
    /// Output CSV path; a manifest is written next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: String,
    kind: &'a str,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Detect(args) => cmd_detect(*args),
        Command::Generate(args) => cmd_generate(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Reproduce(args) => cmd_reproduce(args),
    };
    if let Err(err) = result {
        let numeric = err
            .downcast_ref::<duo_louvain::Error>()
            .is_some_and(|e| e.is_numeric());
        let report = ErrorReport {
            error: format!("{err:#}"),
            kind: if numeric { "numeric" } else { "input" },
        };
        eprintln!("{}", serde_json::to_string(&report).unwrap());
        std::process::exit(if numeric { 3 } else { 2 });
    }
}

fn parse_operator(flag: &str, value: &str) -> anyhow::Result<AggregatorSpec> {
    io::parse_operator(value).with_context(|| format!("--{flag}"))
}

/// Repeatable per-source operator flags: omitted means max everywhere, one
/// spec is broadcast to all sources, otherwise one per source.
fn per_source_operators(flag: &str, raw: &[String], s: usize) -> anyhow::Result<Vec<AggregatorSpec>> {
    let specs: Vec<AggregatorSpec> = raw
        .iter()
        .map(|v| parse_operator(flag, v))
        .collect::<anyhow::Result<_>>()?;
    match specs.len() {
        0 => Ok(vec![AggregatorSpec::Max; s]),
        1 => Ok(vec![specs[0].clone(); s]),
        k if k == s => Ok(specs),
        k => bail!("--{flag} given {k} times for {s} sources"),
    }
}

fn matrix_summary(g: &WeightedGraph) -> serde_json::Value {
    let n = g.n();
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut nonzero = 0usize;
    for i in 0..n {
        for j in 0..n {
            let v = g.get(i, j);
            min = min.min(v);
            max = max.max(v);
            if i != j && v != 0.0 {
                nonzero += 1;
            }
        }
    }
    serde_json::json!({
        "n": n,
        "total_weight": g.total_weight(),
        "min": min,
        "max": max,
        "offdiagonal_density": nonzero as f64 / (n * (n - 1)).max(1) as f64,
    })
}

fn cmd_detect(args: DetectArgs) -> anyhow::Result<()> {
    let graph = io::read_graph(&args.graph)
        .with_context(|| format!("reading graph {}", args.graph.display()))?;
    graph.check_symmetric()?;
    graph.check_weights()?;

    let use_measures = !args.measures.is_empty();
    if use_measures && (!args.f_minus.is_empty() || !args.f_plus.is_empty()) {
        bail!("give either --measures or --f-minus/--f-plus matrices, not both");
    }
    if !use_measures && args.f_minus.len() != args.f_plus.len() {
        bail!(
            "{} --f-minus files vs {} --f-plus files",
            args.f_minus.len(),
            args.f_plus.len()
        );
    }
    if !use_measures && args.f_minus.is_empty() {
        bail!("no relational evidence: give --measures or --f-minus/--f-plus");
    }
    let s = if use_measures { args.measures.len() } else { args.f_minus.len() };

    let cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            io::parse_pipeline_config_json(&text)?
        }
        None => PipelineConfig {
            phi_neg: per_source_operators("phi-neg", &args.phi_neg, s)?,
            phi_pos: per_source_operators("phi-pos", &args.phi_pos, s)?,
            agg_neg: parse_operator("Phi-neg", &args.agg_neg)?,
            agg_pos: parse_operator("Phi-pos", &args.agg_pos)?,
            negation: NegationSpec::Standard,
            psi: parse_operator("psi", &args.psi)?,
            gamma: args.gamma,
        },
    };

    let source = if use_measures {
        let mut measures = Vec::with_capacity(s);
        for path in &args.measures {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading measures {}", path.display()))?;
            let (neg, pos) = io::parse_bipolar_measure_json(&text)?;
            measures.push(BipolarFuzzyMeasure::new(
                FuzzyMeasure::try_from(&neg)?,
                FuzzyMeasure::try_from(&pos)?,
            )?);
        }
        RelationSource::Measures(measures)
    } else {
        let read_all = |paths: &[PathBuf]| -> anyhow::Result<Vec<WeightedGraph>> {
            paths
                .iter()
                .map(|p| {
                    io::read_graph(p).with_context(|| format!("reading matrix {}", p.display()))
                })
                .collect()
        };
        RelationSource::Matrices(BipolarMultiGraph::new(
            read_all(&args.f_minus)?,
            read_all(&args.f_plus)?,
        )?)
    };

    let detection = multiple_bipolar_duo_louvain(&graph, &source, &cfg, args.seed)?;

    std::fs::write(&args.out, io::partition_to_json(&detection.partition)?)
        .with_context(|| format!("writing {}", args.out.display()))?;
    if let Some(path) = &args.csv {
        std::fs::write(path, io::partition_to_csv(&detection.partition))?;
    }
    if let Some(path) = &args.report {
        let report = serde_json::json!({
            "n": graph.n(),
            "communities": detection.partition.community_count(),
            "modularity": detection.modularity,
            "gamma": cfg.gamma,
            "seed": args.seed,
            "group_notion": {
                "Phi_neg": cfg.agg_neg.classify().to_string(),
                "Phi_pos": cfg.agg_pos.classify().to_string(),
                "psi": cfg.psi.classify().to_string(),
            },
            "matrices": {
                "graph": matrix_summary(&graph),
                "combined_relations": matrix_summary(&detection.combined),
                "modularity_matrix": matrix_summary(&detection.matrix),
            },
        });
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    println!(
        "{} communities, modularity {:.6}, partition written to {}",
        detection.partition.community_count(),
        detection.modularity,
        args.out.display()
    );
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> anyhow::Result<()> {
    let relations_label = args.relations_label.unwrap_or(args.graph_label);
    let spec = benchmark::BenchmarkSpec::case(args.case, args.graph_label, relations_label, args.seed)?;
    let instance = benchmark::generate_instance(&spec)?;
    std::fs::create_dir_all(&args.out)?;
    let write = |name: &str, contents: String| -> anyhow::Result<PathBuf> {
        let path = args.out.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    };
    write("A.csv", io::matrix_to_csv(&instance.a))?;
    write("Fminus.csv", io::matrix_to_csv(&instance.f_minus))?;
    write("Fplus.csv", io::matrix_to_csv(&instance.f_plus))?;
    write("gold.json", io::partition_to_json(&instance.gold)?)?;
    let manifest = serde_json::json!({
        "case": args.case,
        "graph_label": args.graph_label,
        "relations_label": relations_label,
        "seed": args.seed,
        "spec": spec,
        "files": ["A.csv", "Fminus.csv", "Fplus.csv", "gold.json"],
    });
    write("manifest.json", serde_json::to_string_pretty(&manifest)?)?;
    println!("instance written to {}", args.out.display());
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> anyhow::Result<()> {
    let read = |path: &Path| -> anyhow::Result<Partition> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading partition {}", path.display()))?;
        Ok(io::parse_partition_json(&text)?)
    };
    let first = read(&args.first)?;
    let second = read(&args.second)?;
    let nmi = metrics::nmi(&first, &second)?;
    let output = if args.full {
        serde_json::json!({
            "nmi": nmi,
            "mi": metrics::mutual_information(&first, &second)?,
            "h_first": metrics::entropy(&first),
            "h_second": metrics::entropy(&second),
        })
    } else {
        serde_json::json!({ "nmi": nmi })
    };
    println!("{}", serde_json::to_string(&output)?);
    Ok(())
}

fn cmd_reproduce(args: ReproduceArgs) -> anyhow::Result<()> {
    let mut cfg = reproduce::ReproduceConfig::new(args.case, args.gamma, args.iterations, args.seed);
    cfg.side_aggregator = parse_operator("Phi", &args.side_aggregator)?;
    let grid = reproduce::reproduce_grid(&cfg)?;
    std::fs::write(&args.out, reproduce::grid_to_csv(&grid))
        .with_context(|| format!("writing {}", args.out.display()))?;
    let manifest = serde_json::json!({
        "case": args.case,
        "gamma": args.gamma,
        "iterations": args.iterations,
        "seed": args.seed,
        "side_aggregator": args.side_aggregator,
        "psi": "min",
        "negation": "standard",
        "cell_seed_rule": "seed + 10000 * (graph_label * 9 + relations_label) + iteration",
    });
    let manifest_path = args.out.with_extension("manifest.json");
    std::fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)?)?;
    println!("table written to {}", args.out.display());
    Ok(())
}
