//! Modularity, modularity gains, and the two-matrix local-moving algorithm:
//! candidate moves come from one graph's edges while the gain is evaluated
//! on a second matrix. With both matrices equal this is exactly the classic
//! Louvain method.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::measure::BipolarFuzzyMeasure;
use crate::pipeline::{build_modularity_matrix, build_multi, BipolarMultiGraph, ExtendedMultipleBipolarFuzzyGraph, PipelineConfig};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Accepted moves must improve the gain over returning home by more than
/// this, which keeps float noise from cycling the optimizer.
const MOVE_TOL: f64 = 1e-12;

/// An assignment of every node to exactly one community, held in canonical
/// form: labels are dense `0..k` and communities are numbered by their
/// smallest member node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
    count: usize,
}

impl Partition {
    /// Canonicalizes an arbitrary label vector.
    pub fn from_labels(raw: &[usize]) -> Partition {
        let n = raw.len();
        let mut remap: Vec<Option<usize>> = vec![None; n.max(raw.iter().copied().max().map_or(0, |m| m + 1))];
        let mut count = 0;
        let mut labels = vec![0; n];
        for (i, &label) in raw.iter().enumerate() {
            let slot = &mut remap[label];
            let dense = match slot {
                Some(d) => *d,
                None => {
                    *slot = Some(count);
                    count += 1;
                    count - 1
                }
            };
            labels[i] = dense;
        }
        Partition { labels, count }
    }

    pub fn singletons(n: usize) -> Partition {
        Partition { labels: (0..n).collect(), count: n }
    }

    pub fn whole(n: usize) -> Partition {
        Partition { labels: vec![0; n], count: if n == 0 { 0 } else { 1 } }
    }

    /// Builds a partition from explicit communities of 0-based node ids,
    /// which must cover `0..n` exactly once.
    pub fn from_communities(n: usize, communities: &[Vec<usize>]) -> Result<Partition> {
        let mut labels = vec![usize::MAX; n];
        for (c, members) in communities.iter().enumerate() {
            for &v in members {
                if v >= n {
                    return Err(Error::InvalidPartition(format!("node {v} out of range")));
                }
                if labels[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("node {v} assigned twice")));
                }
                labels[v] = c;
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition(format!("node {v} unassigned")));
        }
        Ok(Partition::from_labels(&labels))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn community_count(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn label(&self, node: usize) -> usize {
        self.labels[node]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Communities as sorted member lists, in canonical order.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &c) in self.labels.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

/// Modularity of a partition on a weighted graph: the within-community
/// weight fraction minus the degree-based null expectation, with `k_i` the
/// row sum and `2m` the total weight. Both sums run over ordered pairs,
/// diagonal included.
pub fn modularity(m: &WeightedGraph, p: &Partition) -> Result<f64> {
    if m.n() != p.len() {
        return Err(Error::DimensionMismatch { left: m.n(), right: p.len() });
    }
    let two_m = m.total_weight();
    if two_m <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let k = p.community_count();
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    for i in 0..m.n() {
        let ci = p.label(i);
        degree[ci] += m.row_sum(i);
        for j in 0..m.n() {
            if p.label(j) == ci {
                internal[ci] += m.get(i, j);
            }
        }
    }
    let mut q = 0.0;
    for c in 0..k {
        q += internal[c] / two_m - (degree[c] / two_m).powi(2);
    }
    Ok(q)
}

/// Merges a partition's communities into supervertices. The coarse diagonal
/// carries the full within-community weight counted over ordered pairs, so
/// row sums, total weight and modularity are preserved exactly.
pub fn coarsen(m: &WeightedGraph, p: &Partition) -> WeightedGraph {
    assert_eq!(m.n(), p.len(), "partition does not cover the graph");
    let k = p.community_count();
    let mut out = WeightedGraph::zeros(k);
    for i in 0..m.n() {
        let ci = p.label(i);
        for j in 0..m.n() {
            let w = m.get(i, j);
            if w != 0.0 {
                let cj = p.label(j);
                out.set(ci, cj, out.get(ci, cj) + w);
            }
        }
    }
    out
}

/// Bookkeeping for modularity gains over a fixed matrix and partition:
/// per-community internal weight and incident degree, per-node degrees and
/// the total weight.
#[derive(Debug, Clone)]
pub struct LouvainState {
    sigma_in: Vec<f64>,
    sigma_tot: Vec<f64>,
    degree: Vec<f64>,
    labels: Vec<usize>,
    community_count: usize,
    two_m: f64,
}

impl LouvainState {
    pub fn new(m: &WeightedGraph, p: &Partition) -> Result<LouvainState> {
        if m.n() != p.len() {
            return Err(Error::DimensionMismatch { left: m.n(), right: p.len() });
        }
        let two_m = m.total_weight();
        if two_m <= 0.0 {
            return Err(Error::ZeroTotalWeight);
        }
        let k = p.community_count();
        let mut sigma_in = vec![0.0; k];
        let mut sigma_tot = vec![0.0; k];
        let mut degree = vec![0.0; m.n()];
        for (i, deg) in degree.iter_mut().enumerate() {
            let ci = p.label(i);
            *deg = m.row_sum(i);
            sigma_tot[ci] += *deg;
            for j in 0..m.n() {
                if p.label(j) == ci {
                    sigma_in[ci] += m.get(i, j);
                }
            }
        }
        Ok(LouvainState {
            sigma_in,
            sigma_tot,
            degree,
            labels: p.labels().to_vec(),
            community_count: k,
            two_m,
        })
    }

    /// Modularity gain of inserting node `i` into `target`, evaluated from
    /// the cached community sums. `i` must currently sit in a singleton
    /// community of its own; its self-loop travels with it and cancels from
    /// the difference. `k_in` is the weight from `i` into the target.
    pub fn delta_q(&self, m: &WeightedGraph, i: usize, target: usize) -> Result<f64> {
        if i >= self.labels.len() {
            return Err(Error::IndexOutOfRange { index: i, n: self.labels.len() });
        }
        if target >= self.community_count {
            return Err(Error::UnknownCommunity { community: target });
        }
        let home = self.labels[i];
        if self.labels.iter().enumerate().any(|(j, &c)| c == home && j != i) {
            return Err(Error::NodeNotIsolated { node: i });
        }
        let (sigma_in, sigma_tot) = if target == home {
            (0.0, 0.0)
        } else {
            (self.sigma_in[target], self.sigma_tot[target])
        };
        let k_i = self.degree[i];
        let mut k_in = 0.0;
        for j in 0..m.n() {
            if j != i && self.labels[j] == target {
                k_in += m.get(i, j);
            }
        }
        Ok(delta_q_formula(sigma_in, sigma_tot, k_i, k_in, self.two_m))
    }
}

/// The two-bracket modularity variation for inserting an isolated node:
/// community quality with the node in, minus community quality plus the
/// node's own null term.
#[inline]
fn delta_q_formula(sigma_in: f64, sigma_tot: f64, k_i: f64, k_in: f64, two_m: f64) -> f64 {
    let joined = (sigma_in + 2.0 * k_in) / two_m - ((sigma_tot + k_i) / two_m).powi(2);
    let apart = sigma_in / two_m - (sigma_tot / two_m).powi(2) - (k_i / two_m).powi(2);
    joined - apart
}

/// Result of a detection run: the partition over the original nodes and its
/// modularity on the matrix that was optimized.
#[derive(Debug, Clone, PartialEq)]
pub struct LouvainResult {
    pub partition: Partition,
    pub modularity: f64,
}

/// Classic Louvain: local moving plus coarsening, seeded node order.
pub fn louvain(a: &WeightedGraph, seed: u64) -> Result<LouvainResult> {
    duo_louvain(a, a, seed)
}

/// Two-matrix Louvain: neighbors (move candidates) are read from `a`, the
/// gain of each move is evaluated on `m`, and both matrices are coarsened
/// over the communities after each level. `duo_louvain(a, a, seed)` is
/// identical to `louvain(a, seed)`.
pub fn duo_louvain(a: &WeightedGraph, m: &WeightedGraph, seed: u64) -> Result<LouvainResult> {
    if a.n() != m.n() {
        return Err(Error::DimensionMismatch { left: a.n(), right: m.n() });
    }
    if m.total_weight() <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let n0 = a.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a_adj = adjacency(a);
    let mut m_adj = adjacency(m);
    // Smallest original node inside each current supervertex; coarse levels
    // keep supervertices ordered by this, which the move tie-break relies on.
    let mut min_orig: Vec<usize> = (0..n0).collect();
    let mut assignment: Vec<usize> = (0..n0).collect();

    loop {
        let n = a_adj.len();
        let outcome = local_moving(&a_adj, &m_adj, &mut rng);
        if !outcome.moved {
            break;
        }
        let (labels, count) = canonical_labels(&outcome.comm, &min_orig);
        for slot in assignment.iter_mut() {
            *slot = labels[*slot];
        }
        if count == n {
            break;
        }
        let next_min = coarse_min_orig(&labels, count, &min_orig);
        a_adj = coarsen_adjacency(&a_adj, &labels, count);
        m_adj = coarsen_adjacency(&m_adj, &labels, count);
        min_orig = next_min;
    }

    let partition = Partition::from_labels(&assignment);
    let q = modularity(m, &partition)?;
    Ok(LouvainResult { partition, modularity: q })
}

struct MovingOutcome {
    comm: Vec<usize>,
    moved: bool,
}

/// One level of local moving: repeated passes over a fresh random node
/// order, moving each node to the candidate community with the largest
/// gain, until a full pass accepts no move. Candidates are the communities
/// of the node's neighbors in the first matrix plus its own; ties prefer
/// the community holding the smallest original node.
fn local_moving(
    a_adj: &[Vec<(usize, f64)>],
    m_adj: &[Vec<(usize, f64)>],
    rng: &mut ChaCha8Rng,
) -> MovingOutcome {
    let n = a_adj.len();
    let two_m: f64 = m_adj.iter().flatten().map(|&(_, w)| w).sum();
    let degree: Vec<f64> = m_adj.iter().map(|adj| adj.iter().map(|&(_, w)| w).sum()).collect();

    let mut comm: Vec<usize> = (0..n).collect();
    let mut sigma_tot = degree.clone();
    let mut members: Vec<BTreeSet<usize>> = (0..n).map(|i| BTreeSet::from([i])).collect();
    // k_in accumulator reused across nodes; `touched` lists the dirty slots.
    let mut k_in = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    let mut moved_any = false;

    loop {
        let mut moved_this_pass = false;
        order.shuffle(rng);
        for &i in &order {
            let home = comm[i];
            sigma_tot[home] -= degree[i];
            members[home].remove(&i);

            for &(j, w) in &m_adj[i] {
                if j == i {
                    continue;
                }
                let c = comm[j];
                if k_in[c] == 0.0 {
                    touched.push(c);
                }
                k_in[c] += w;
            }

            let gain = |c: usize| -> f64 {
                delta_q_formula(0.0, sigma_tot[c], degree[i], k_in[c], two_m)
            };
            let gain_home = gain(home);
            let mut best = home;
            let mut best_gain = gain_home;
            let mut best_min = members[home].first().map_or(usize::MAX, |&v| v);
            for &(j, _) in &a_adj[i] {
                if j == i {
                    continue;
                }
                let c = comm[j];
                if c == best {
                    continue;
                }
                let g = gain(c);
                let c_min = *members[c].first().expect("candidate community is nonempty");
                if g > best_gain || (g == best_gain && c_min < best_min) {
                    best = c;
                    best_gain = g;
                    best_min = c_min;
                }
            }

            let target = if best != home && best_gain - gain_home > MOVE_TOL {
                moved_this_pass = true;
                best
            } else {
                home
            };
            comm[i] = target;
            sigma_tot[target] += degree[i];
            members[target].insert(i);

            for &c in &touched {
                k_in[c] = 0.0;
            }
            touched.clear();
        }
        // Incremental community sums must match a from-scratch recount at
        // every pass boundary.
        #[cfg(debug_assertions)]
        {
            let mut recount = vec![0.0; n];
            for (node, &c) in comm.iter().enumerate() {
                recount[c] += degree[node];
            }
            for (c, &sum) in recount.iter().enumerate() {
                debug_assert!(
                    (sigma_tot[c] - sum).abs() < 1e-9,
                    "community {c}: cached {} vs recounted {sum}",
                    sigma_tot[c]
                );
            }
        }
        if !moved_this_pass {
            break;
        }
        moved_any = true;
    }
    MovingOutcome { comm, moved: moved_any }
}

/// Renumbers community labels densely, ordered by the smallest original
/// node they contain.
fn canonical_labels(comm: &[usize], min_orig: &[usize]) -> (Vec<usize>, usize) {
    let n = comm.len();
    let mut comm_min = vec![usize::MAX; n];
    for (node, &c) in comm.iter().enumerate() {
        comm_min[c] = comm_min[c].min(min_orig[node]);
    }
    let mut order: Vec<usize> = (0..n).filter(|&c| comm_min[c] != usize::MAX).collect();
    order.sort_by_key(|&c| comm_min[c]);
    let mut remap = vec![usize::MAX; n];
    for (dense, &c) in order.iter().enumerate() {
        remap[c] = dense;
    }
    (comm.iter().map(|&c| remap[c]).collect(), order.len())
}

fn coarse_min_orig(labels: &[usize], count: usize, min_orig: &[usize]) -> Vec<usize> {
    let mut out = vec![usize::MAX; count];
    for (node, &c) in labels.iter().enumerate() {
        out[c] = out[c].min(min_orig[node]);
    }
    out
}

fn adjacency(g: &WeightedGraph) -> Vec<Vec<(usize, f64)>> {
    let n = g.n();
    (0..n)
        .map(|i| {
            (0..n)
                .filter_map(|j| {
                    let w = g.get(i, j);
                    (w > 0.0).then_some((j, w))
                })
                .collect()
        })
        .collect()
}

fn coarsen_adjacency(
    adj: &[Vec<(usize, f64)>],
    labels: &[usize],
    count: usize,
) -> Vec<Vec<(usize, f64)>> {
    let mut acc: Vec<std::collections::BTreeMap<usize, f64>> =
        vec![std::collections::BTreeMap::new(); count];
    for (i, row) in adj.iter().enumerate() {
        let ci = labels[i];
        for &(j, w) in row {
            *acc[ci].entry(labels[j]).or_insert(0.0) += w;
        }
    }
    acc.into_iter().map(|row| row.into_iter().collect()).collect()
}

/// Where the relation evidence comes from: bipolar measures (through the
/// Shapley-based construction) or relation matrices supplied directly, the
/// way benchmark instances provide them.
#[derive(Debug, Clone)]
pub enum RelationSource {
    Measures(Vec<BipolarFuzzyMeasure>),
    Matrices(BipolarMultiGraph),
}

/// A detection run's outputs, including the matrices the run was scored on.
#[derive(Debug, Clone)]
pub struct Detection {
    pub partition: Partition,
    pub modularity: f64,
    /// The combined relation matrix (after aggregation, negation and the
    /// combining step).
    pub combined: WeightedGraph,
    /// The blended modularity matrix actually optimized.
    pub matrix: WeightedGraph,
}

/// End-to-end detection on a graph with bipolar relational evidence: build
/// the per-source relation matrices if measures were given, collapse the
/// sides, blend with the topology, then run the two-matrix optimizer.
pub fn multiple_bipolar_duo_louvain(
    a: &WeightedGraph,
    source: &RelationSource,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<Detection> {
    let multi = match source {
        RelationSource::Matrices(multi) => multi.clone(),
        RelationSource::Measures(measures) => {
            let g = ExtendedMultipleBipolarFuzzyGraph::new(a.clone(), measures.clone())?;
            build_multi(&g, cfg)?
        }
    };
    let (combined, matrix) = build_modularity_matrix(a, &multi, cfg)?;
    let result = duo_louvain(a, &matrix, seed)?;
    Ok(Detection { partition: result.partition, modularity: result.modularity, combined, matrix })
}
