//! File formats: dense matrix CSV, sparse edge-list TSV, measure JSON,
//! pipeline-config JSON and partition JSON/CSV. Node and element indices
//! are 1-based in every file and 0-based in memory. All parsers are total:
//! malformed input yields an error, never a panic.

use crate::aggregation::{AggregatorSpec, NegationSpec};
use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::measure::{FuzzyMeasure, MeasureData, MeasureDataForm};
use crate::pipeline::PipelineConfig;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Upper bound on node counts accepted from untrusted files; a dense
/// matrix at this size is ~128 MiB.
pub const MAX_FILE_NODES: usize = 4096;

// ---------------------------------------------------------------------------
// Dense matrix CSV

/// Parses a dense matrix: optionally one header line holding the node
/// count, then n rows of n comma-separated values. The matrix must be
/// square, symmetric, finite and nonnegative.
pub fn parse_matrix_csv(text: &str) -> Result<WeightedGraph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .peekable();

    let mut declared: Option<usize> = None;
    if let Some(first) = lines.peek() {
        if !first.contains(',') {
            if let Ok(n) = first.parse::<usize>() {
                declared = Some(n);
                lines.next();
            }
        }
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let mut row = Vec::new();
        for field in line.split(',') {
            let value: f64 = field.trim().parse().map_err(|_| {
                Error::Parse(format!("line {}: bad number {:?}", lineno + 1, field.trim()))
            })?;
            row.push(value);
        }
        if rows.len() >= MAX_FILE_NODES {
            return Err(Error::Parse(format!("matrix exceeds {MAX_FILE_NODES} rows")));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("matrix file has no rows".into()));
    }
    if let Some(n) = declared {
        if n != rows.len() {
            return Err(Error::Parse(format!("header says {n} rows, found {}", rows.len())));
        }
    }
    let g = WeightedGraph::from_rows(rows)
        .map_err(|_| Error::Parse("matrix is not square".into()))?;
    g.check_weights()?;
    g.check_symmetric()?;
    Ok(g)
}

pub fn matrix_to_csv(g: &WeightedGraph) -> String {
    let mut out = String::new();
    for i in 0..g.n() {
        let fields: Vec<String> = g.row(i).iter().map(|v| format_weight(*v)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn format_weight(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

// ---------------------------------------------------------------------------
// Sparse edge-list TSV

/// Parses whitespace-separated `i j weight` lines with 1-based node ids
/// (weight defaults to 1 when omitted) and applies the symmetric closure.
/// The node count is the largest id seen. Repeated pairs keep the last
/// weight.
pub fn parse_edge_list_tsv(text: &str) -> Result<WeightedGraph> {
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut n = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let mut index = |what: &str| -> Result<usize> {
            let field = fields
                .next()
                .ok_or_else(|| Error::Parse(format!("line {}: missing {what}", lineno + 1)))?;
            let id: usize = field
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad {what} {field:?}", lineno + 1)))?;
            if id == 0 {
                return Err(Error::Parse(format!("line {}: ids are 1-based", lineno + 1)));
            }
            if id > MAX_FILE_NODES {
                return Err(Error::Parse(format!(
                    "line {}: id {id} exceeds the {MAX_FILE_NODES}-node limit",
                    lineno + 1
                )));
            }
            Ok(id)
        };
        let i = index("source")?;
        let j = index("target")?;
        let weight = match fields.next() {
            None => 1.0,
            Some(field) => field
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("line {}: bad weight {field:?}", lineno + 1)))?,
        };
        if fields.next().is_some() {
            return Err(Error::Parse(format!("line {}: trailing fields", lineno + 1)));
        }
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::Parse(format!("line {}: bad weight {weight}", lineno + 1)));
        }
        n = n.max(i).max(j);
        edges.push((i - 1, j - 1, weight));
    }
    if n == 0 {
        return Err(Error::Parse("edge list has no edges".into()));
    }
    let mut g = WeightedGraph::zeros(n);
    for (i, j, w) in edges {
        g.set_sym(i, j, w);
    }
    Ok(g)
}

/// Reads a graph file, picking the format by extension: `.tsv`/`.edges` as
/// an edge list, anything else as dense CSV.
pub fn read_graph(path: &Path) -> Result<WeightedGraph> {
    let text = std::fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("tsv") | Some("edges") => parse_edge_list_tsv(&text),
        _ => parse_matrix_csv(&text),
    }
}

// ---------------------------------------------------------------------------
// Measure JSON

#[derive(Debug, Serialize, Deserialize)]
struct MeasureFile {
    n: usize,
    form: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<SubsetValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SubsetValue {
    subset: Vec<usize>,
    value: f64,
}

/// Parses the measure JSON schema
/// `{"n", "form": "explicit"|"additive", "values" | "weights"}` into the
/// unvalidated description. Subset indices are 1-based in the file.
pub fn parse_measure_json(text: &str) -> Result<MeasureData> {
    let file: MeasureFile = serde_json::from_str(text)?;
    let form = match file.form.as_str() {
        "additive" => {
            let weights = file
                .weights
                .ok_or_else(|| Error::Parse("additive form needs \"weights\"".into()))?;
            MeasureDataForm::Additive(weights)
        }
        "explicit" => {
            let values = file
                .values
                .ok_or_else(|| Error::Parse("explicit form needs \"values\"".into()))?;
            let mut entries = Vec::with_capacity(values.len());
            for sv in values {
                let mut subset = Vec::with_capacity(sv.subset.len());
                for id in sv.subset {
                    if id == 0 {
                        return Err(Error::Parse("subset indices are 1-based".into()));
                    }
                    subset.push(id - 1);
                }
                entries.push((subset, sv.value));
            }
            MeasureDataForm::Explicit(entries)
        }
        other => return Err(Error::Parse(format!("unknown measure form {other:?}"))),
    };
    Ok(MeasureData { n: file.n, form })
}

/// Parses and validates a measure file into a usable fuzzy measure.
pub fn parse_fuzzy_measure_json(text: &str) -> Result<FuzzyMeasure> {
    FuzzyMeasure::try_from(&parse_measure_json(text)?)
}

#[derive(Debug, Deserialize)]
struct BipolarMeasureFile {
    negative: serde_json::Value,
    positive: serde_json::Value,
}

/// Parses a bipolar measure file `{"negative": <measure>, "positive":
/// <measure>}` where both halves follow the measure schema.
pub fn parse_bipolar_measure_json(text: &str) -> Result<(MeasureData, MeasureData)> {
    let file: BipolarMeasureFile = serde_json::from_str(text)?;
    let negative = parse_measure_json(&file.negative.to_string())?;
    let positive = parse_measure_json(&file.positive.to_string())?;
    Ok((negative, positive))
}

// ---------------------------------------------------------------------------
// Pipeline config JSON

#[derive(Debug, Serialize, Deserialize)]
struct PipelineConfigFile {
    #[serde(default)]
    phi_neg: Vec<AggregatorSpec>,
    #[serde(default)]
    phi_pos: Vec<AggregatorSpec>,
    #[serde(rename = "Phi_neg")]
    agg_neg: AggregatorSpec,
    #[serde(rename = "Phi_pos")]
    agg_pos: AggregatorSpec,
    negation: NegationSpec,
    psi: AggregatorSpec,
    gamma: f64,
}

pub fn parse_pipeline_config_json(text: &str) -> Result<PipelineConfig> {
    let file: PipelineConfigFile = serde_json::from_str(text)?;
    let cfg = PipelineConfig {
        phi_neg: file.phi_neg,
        phi_pos: file.phi_pos,
        agg_neg: file.agg_neg,
        agg_pos: file.agg_pos,
        negation: file.negation,
        psi: file.psi,
        gamma: file.gamma,
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn pipeline_config_to_json(cfg: &PipelineConfig) -> Result<String> {
    let file = PipelineConfigFile {
        phi_neg: cfg.phi_neg.clone(),
        phi_pos: cfg.phi_pos.clone(),
        agg_neg: cfg.agg_neg.clone(),
        agg_pos: cfg.agg_pos.clone(),
        negation: cfg.negation,
        psi: cfg.psi.clone(),
        gamma: cfg.gamma,
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

/// Parses the command-line operator syntax: `min`, `max`, `mean` or
/// `owa:w1,w2,...`.
pub fn parse_operator(text: &str) -> Result<AggregatorSpec> {
    let trimmed = text.trim();
    match trimmed {
        "min" => Ok(AggregatorSpec::Min),
        "max" => Ok(AggregatorSpec::Max),
        "mean" => Ok(AggregatorSpec::ArithmeticMean),
        other => {
            if let Some(weight_list) = other.strip_prefix("owa:") {
                let mut weights = Vec::new();
                for field in weight_list.split(',') {
                    weights.push(field.trim().parse::<f64>().map_err(|_| {
                        Error::Parse(format!("bad owa weight {:?}", field.trim()))
                    })?);
                }
                AggregatorSpec::owa(weights)
            } else {
                Err(Error::Parse(format!(
                    "unknown operator {other:?} (expected min, max, mean or owa:w1,w2,...)"
                )))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Partition JSON / CSV

#[derive(Debug, Serialize, Deserialize)]
struct PartitionFile {
    n: usize,
    communities: Vec<Vec<usize>>,
}

/// Parses `{"n", "communities": [[1-based ids]...]}`; the communities must
/// cover 1..=n exactly once.
pub fn parse_partition_json(text: &str) -> Result<Partition> {
    let file: PartitionFile = serde_json::from_str(text)?;
    if file.n == 0 || file.n > MAX_FILE_NODES {
        return Err(Error::Parse(format!("node count {} out of range", file.n)));
    }
    let members: usize = file.communities.iter().map(|c| c.len()).sum();
    if members != file.n {
        return Err(Error::Parse(format!(
            "communities list {members} members for {} nodes",
            file.n
        )));
    }
    let mut zero_based = Vec::with_capacity(file.communities.len());
    for community in file.communities {
        let mut c = Vec::with_capacity(community.len());
        for id in community {
            if id == 0 || id > file.n {
                return Err(Error::Parse(format!("node id {id} out of range")));
            }
            c.push(id - 1);
        }
        zero_based.push(c);
    }
    Partition::from_communities(file.n, &zero_based)
        .map_err(|e| Error::Parse(e.to_string()))
}

/// Canonical JSON rendering with 1-based node ids.
pub fn partition_to_json(p: &Partition) -> Result<String> {
    let communities: Vec<Vec<usize>> = p
        .communities()
        .into_iter()
        .map(|c| c.into_iter().map(|v| v + 1).collect())
        .collect();
    let file = PartitionFile { n: p.len(), communities };
    Ok(serde_json::to_string_pretty(&file)?)
}

/// Flat `node,label` rendering with 1-based nodes and 0-based canonical
/// labels.
pub fn partition_to_csv(p: &Partition) -> String {
    let mut out = String::from("node,label\n");
    for v in 0..p.len() {
        out.push_str(&format!("{},{}\n", v + 1, p.label(v)));
    }
    out
}
