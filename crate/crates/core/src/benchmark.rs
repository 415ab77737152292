//! Planted-partition benchmark generator: a topology graph plus a pair of
//! binary relation matrices with an embedded gold partition. Affinity edges
//! are dense inside the planted blocks; discrepancy edges use the reversed
//! probabilities and are dense across them.

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// The nine (alpha, beta) probability pairs, indexed by label 1..=9. All of
/// them satisfy `64 alpha + 192 beta = 32` up to rounding, holding the
/// expected affinity degree constant while the structure gets noisier.
pub fn table1_params(label: u8) -> Result<(f64, f64)> {
    match label {
        1 => Ok((0.45, 0.016)),
        2 => Ok((0.4, 0.033)),
        3 => Ok((0.35, 0.05)),
        4 => Ok((0.325, 0.058)),
        5 => Ok((0.3, 0.066)),
        6 => Ok((0.275, 0.075)),
        7 => Ok((0.25, 0.083)),
        8 => Ok((0.225, 0.091)),
        9 => Ok((0.2, 0.1)),
        _ => Err(Error::InvalidSpec(format!("label {label} outside 1..=9"))),
    }
}

/// Planted community sizes of the four benchmark layouts, as
/// `(graph_sizes, relation_sizes)`. Relation blocks nest inside graph
/// blocks by index order.
pub fn case_sizes(case: u8) -> Result<(Vec<usize>, Vec<usize>)> {
    match case {
        1 => Ok((vec![128, 128], vec![64, 64, 64, 64])),
        2 => Ok((vec![64; 4], vec![32; 8])),
        3 => Ok((vec![128, 128], vec![43, 42, 43, 96, 32])),
        4 => Ok((vec![64; 4], vec![40, 24, 64, 21, 22, 21, 32, 32])),
        _ => Err(Error::InvalidSpec(format!("case {case} outside 1..=4"))),
    }
}

/// Full description of one benchmark instance: block sizes for the graph
/// and the relation matrices, their edge probabilities, and the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub graph_sizes: Vec<usize>,
    pub relation_sizes: Vec<usize>,
    /// Within-block edge probability of the topology graph.
    pub alpha: f64,
    /// Cross-block edge probability of the topology graph.
    pub beta: f64,
    /// Within-block probability of affinity edges; discrepancy edges use
    /// the reversed pair.
    pub alpha_rel: f64,
    pub beta_rel: f64,
    pub seed: u64,
}

impl BenchmarkSpec {
    /// Spec for one of the four layouts with probabilities looked up from
    /// the label table: `graph_label` drives the topology, and
    /// `relations_label` both relation matrices.
    pub fn case(case: u8, graph_label: u8, relations_label: u8, seed: u64) -> Result<BenchmarkSpec> {
        let (graph_sizes, relation_sizes) = case_sizes(case)?;
        let (alpha, beta) = table1_params(graph_label)?;
        let (alpha_rel, beta_rel) = table1_params(relations_label)?;
        Ok(BenchmarkSpec { graph_sizes, relation_sizes, alpha, beta, alpha_rel, beta_rel, seed })
    }

    pub fn n(&self) -> usize {
        self.graph_sizes.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let n: usize = self.graph_sizes.iter().sum();
        let nr: usize = self.relation_sizes.iter().sum();
        if n < 2 {
            return Err(Error::InvalidSpec("need at least two nodes".into()));
        }
        if n != nr {
            return Err(Error::InvalidSpec(format!(
                "graph sizes sum to {n} but relation sizes to {nr}"
            )));
        }
        for &p in [self.alpha, self.beta, self.alpha_rel, self.beta_rel].iter() {
            if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                return Err(Error::InvalidSpec(format!("probability {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// One generated instance. All three matrices are symmetric 0/1 with zero
/// diagonal; `gold` is the planted partition of the relation matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkInstance {
    pub a: WeightedGraph,
    pub f_minus: WeightedGraph,
    pub f_plus: WeightedGraph,
    pub gold: Partition,
}

/// Consecutive block labels for the given sizes.
fn block_partition(sizes: &[usize]) -> Partition {
    let mut labels = Vec::with_capacity(sizes.iter().sum());
    for (b, &size) in sizes.iter().enumerate() {
        labels.extend(std::iter::repeat_n(b, size));
    }
    Partition::from_labels(&labels)
}

fn planted_with_rng(
    sizes: &[usize],
    p_in: f64,
    p_out: f64,
    rng: &mut ChaCha8Rng,
) -> (WeightedGraph, Partition) {
    let partition = block_partition(sizes);
    let n = partition.len();
    let mut g = WeightedGraph::zeros(n);
    // One draw per unordered pair, in lexicographic order.
    for i in 0..n {
        for j in (i + 1)..n {
            let p = if partition.label(i) == partition.label(j) { p_in } else { p_out };
            if rng.random::<f64>() < p {
                g.set_sym(i, j, 1.0);
            }
        }
    }
    (g, partition)
}

/// Draws a planted-partition graph: every unordered pair gets an edge with
/// probability `p_in` inside a block and `p_out` across, independently.
/// Nodes are assigned to blocks consecutively in the given size order.
pub fn planted_graph(
    sizes: &[usize],
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Result<(WeightedGraph, Partition)> {
    if sizes.is_empty() || sizes.iter().sum::<usize>() < 2 {
        return Err(Error::InvalidSpec("need at least two nodes".into()));
    }
    for &p in [p_in, p_out].iter() {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(Error::InvalidSpec(format!("probability {p} outside [0, 1]")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(planted_with_rng(sizes, p_in, p_out, &mut rng))
}

/// Generates a full instance from one seeded stream, drawing the topology,
/// then the discrepancy matrix (reversed probabilities: dense across gold
/// blocks), then the affinity matrix.
pub fn generate_instance(spec: &BenchmarkSpec) -> Result<BenchmarkInstance> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (a, _) = planted_with_rng(&spec.graph_sizes, spec.alpha, spec.beta, &mut rng);
    let (f_minus, gold) =
        planted_with_rng(&spec.relation_sizes, spec.beta_rel, spec.alpha_rel, &mut rng);
    let (f_plus, _) =
        planted_with_rng(&spec.relation_sizes, spec.alpha_rel, spec.beta_rel, &mut rng);
    Ok(BenchmarkInstance { a, f_minus, f_plus, gold })
}
