//! Shared fixtures and independent oracles for the integration suites.

use duo_louvain::{FuzzyMeasure, Partition, WeightedGraph};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// The 8-node demo bundle: a graph whose topology splits into two halves,
/// plus two evidence sources (personal and professional), each contributing
/// a discrepancy and an affinity relation. Affinity matrices are reflexive
/// (full affinity with oneself), discrepancy matrices are irreflexive.
pub struct DemoBundle {
    pub a: WeightedGraph,
    pub f_minus: Vec<WeightedGraph>,
    pub f_plus: Vec<WeightedGraph>,
}

pub fn demo_bundle() -> DemoBundle {
    let n = 8;
    let a = WeightedGraph::from_edges(
        n,
        &[(1, 2), (1, 4), (2, 3), (3, 4), (4, 6), (5, 6), (5, 8), (6, 7), (7, 8)],
    )
    .unwrap();
    let relation = |pairs: &[(usize, usize)], reflexive: bool| {
        let mut g = WeightedGraph::from_edges(n, pairs).unwrap();
        if reflexive {
            for i in 0..n {
                g.set(i, i, 1.0);
            }
        }
        g
    };
    DemoBundle {
        f_minus: vec![
            relation(&[(1, 4), (6, 8)], false),
            relation(&[(1, 3), (2, 4), (5, 7), (6, 7)], false),
        ],
        f_plus: vec![
            relation(&[(1, 2), (3, 4), (5, 6)], true),
            relation(&[(7, 8)], true),
        ],
        a,
    }
}

/// All set partitions of `0..n` as label vectors, via restricted growth
/// strings.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(labels: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<Vec<usize>>) {
        if pos == labels.len() {
            out.push(labels.clone());
            return;
        }
        for label in 0..=max_used + 1 {
            labels[pos] = label;
            rec(labels, pos + 1, max_used.max(label), out);
        }
    }
    if n == 0 {
        return out;
    }
    labels[0] = 0;
    rec(&mut labels, 1, 0, &mut out);
    out
}

/// Exhaustive maximum-modularity search; the oracle for heuristic quality.
pub fn brute_force_best_partition(g: &WeightedGraph) -> (Partition, f64) {
    let mut best_q = f64::NEG_INFINITY;
    let mut best = Partition::whole(g.n());
    for labels in all_partitions(g.n()) {
        let p = Partition::from_labels(&labels);
        let q = duo_louvain::modularity(g, &p).unwrap();
        if q > best_q {
            best_q = q;
            best = p;
        }
    }
    (best, best_q)
}

/// Random symmetric weighted graph with at least one edge.
pub fn random_weighted_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> WeightedGraph {
    loop {
        let mut g = WeightedGraph::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random::<f64>() < density {
                    g.set_sym(i, j, rng.random_range(0.05..2.0));
                }
            }
        }
        if g.total_weight() > 0.0 {
            return g;
        }
    }
}

/// Random unweighted graph with at least one edge.
pub fn random_unweighted_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> WeightedGraph {
    loop {
        let mut g = WeightedGraph::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random::<f64>() < density {
                    g.set_sym(i, j, 1.0);
                }
            }
        }
        if g.total_weight() > 0.0 {
            return g;
        }
    }
}

/// Random valid explicit fuzzy measure: uniform raw values made monotone by
/// a subset-maximum sweep, then rescaled to hit 0 on the empty set and 1 on
/// the full set.
pub fn random_explicit_measure(rng: &mut ChaCha8Rng, n: usize) -> FuzzyMeasure {
    loop {
        let size = 1usize << n;
        let mut v: Vec<f64> = (0..size).map(|_| rng.random::<f64>()).collect();
        for bit in 0..n {
            for mask in 0..size {
                if mask & (1 << bit) != 0 {
                    let without = mask & !(1 << bit);
                    if v[without] > v[mask] {
                        v[mask] = v[without];
                    }
                }
            }
        }
        let lo = v[0];
        let hi = v[size - 1];
        if hi - lo < 1e-9 {
            continue;
        }
        let table: Vec<f64> = v.iter().map(|&x| (x - lo) / (hi - lo)).collect();
        return FuzzyMeasure::explicit(n, table).unwrap();
    }
}

/// Random symmetric relation matrix with entries in [0, 1] and zero
/// diagonal.
pub fn random_relation_matrix(rng: &mut ChaCha8Rng, n: usize) -> WeightedGraph {
    let mut g = WeightedGraph::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            g.set_sym(i, j, rng.random::<f64>());
        }
    }
    g
}
