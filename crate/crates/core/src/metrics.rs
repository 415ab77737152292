//! Partition-comparison metrics: Shannon entropy, mutual information and
//! normalized mutual information, all in nats. NMI is base-invariant, so
//! the choice of logarithm never shows in it.

use crate::community::Partition;
use crate::error::{Error, Result};

/// Joint label counts of two partitions over the same node set, with
/// marginals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    pub counts: Vec<Vec<usize>>,
    pub row_marginals: Vec<usize>,
    pub col_marginals: Vec<usize>,
    pub total: usize,
}

impl ContingencyTable {
    pub fn new(x: &Partition, y: &Partition) -> Result<ContingencyTable> {
        if x.len() != y.len() {
            return Err(Error::NodeSetMismatch { left: x.len(), right: y.len() });
        }
        let rows = x.community_count();
        let cols = y.community_count();
        let mut counts = vec![vec![0usize; cols]; rows];
        for v in 0..x.len() {
            counts[x.label(v)][y.label(v)] += 1;
        }
        let row_marginals: Vec<usize> = counts.iter().map(|r| r.iter().sum()).collect();
        let mut col_marginals = vec![0usize; cols];
        for row in &counts {
            for (c, &v) in row.iter().enumerate() {
                col_marginals[c] += v;
            }
        }
        Ok(ContingencyTable { counts, row_marginals, col_marginals, total: x.len() })
    }
}

/// Shannon entropy of the community-size distribution, in nats. Zero iff
/// everything sits in one community.
pub fn entropy(p: &Partition) -> f64 {
    let n = p.len() as f64;
    p.communities()
        .iter()
        .map(|c| {
            let share = c.len() as f64 / n;
            if share > 0.0 {
                -share * share.ln()
            } else {
                0.0
            }
        })
        .sum()
}

/// Mutual information between two partitions in nats; zero-count cells
/// contribute nothing.
pub fn mutual_information(x: &Partition, y: &Partition) -> Result<f64> {
    let table = ContingencyTable::new(x, y)?;
    let n = table.total as f64;
    let mut terms = Vec::new();
    for (r, row) in table.counts.iter().enumerate() {
        for (c, &joint) in row.iter().enumerate() {
            if joint == 0 {
                continue;
            }
            let p_joint = joint as f64 / n;
            let p_row = table.row_marginals[r] as f64 / n;
            let p_col = table.col_marginals[c] as f64 / n;
            terms.push(p_joint * (p_joint / (p_row * p_col)).ln());
        }
    }
    // Summing in a canonical order makes the result independent of which
    // partition came first, so nmi(x, y) == nmi(y, x) bit for bit.
    terms.sort_by(f64::total_cmp);
    Ok(terms.iter().sum::<f64>().max(0.0))
}

/// Normalized mutual information, `2 MI / (H(X) + H(Y))`: 1 for identical
/// partitions, 0 for independent ones. When both partitions are the single
/// whole-set community the ratio degenerates to 0/0 and is defined as 1;
/// when exactly one is, the numerator is already 0.
pub fn nmi(x: &Partition, y: &Partition) -> Result<f64> {
    let mi = mutual_information(x, y)?;
    let h = entropy(x) + entropy(y);
    if h == 0.0 {
        return Ok(1.0);
    }
    Ok(2.0 * mi / h)
}
