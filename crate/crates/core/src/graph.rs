//! Dense symmetric weighted graphs stored as flat row-major matrices.

use crate::error::{Error, Result};

/// A weighted undirected graph over nodes `0..n`, stored as an `n x n`
/// matrix of nonnegative weights. Diagonal entries are self-loops; they are
/// produced by coarsening and counted once in row sums.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    w: Vec<f64>,
}

impl WeightedGraph {
    pub fn zeros(n: usize) -> Self {
        WeightedGraph { n, w: vec![0.0; n * n] }
    }

    /// Builds a graph from a full row-major weight vector of length `n * n`.
    pub fn from_flat(n: usize, w: Vec<f64>) -> Result<Self> {
        if w.len() != n * n {
            return Err(Error::DimensionMismatch { left: n * n, right: w.len() });
        }
        Ok(WeightedGraph { n, w })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut w = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { left: n, right: row.len() });
            }
            w.extend_from_slice(row);
        }
        Ok(WeightedGraph { n, w })
    }

    /// Builds an unweighted graph from 1-based undirected edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = WeightedGraph::zeros(n);
        for &(i, j) in edges {
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::IndexOutOfRange { index: i.max(j), n });
            }
            g.set_sym(i - 1, j - 1, 1.0);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.w[i * self.n + j] = v;
    }

    /// Sets both orientations of an edge.
    #[inline]
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.w[i * self.n + j] = v;
        self.w[j * self.n + i] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.w[i * self.n..(i + 1) * self.n]
    }

    /// Row sum; self-loops count once.
    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).iter().sum()
    }

    /// Sum over all matrix entries, i.e. `2m` in modularity terms.
    pub fn total_weight(&self) -> f64 {
        self.w.iter().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.check_symmetric().is_ok()
    }

    pub fn check_symmetric(&self) -> Result<()> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.get(i, j) != self.get(j, i) {
                    return Err(Error::NotSymmetric { i, j });
                }
            }
        }
        Ok(())
    }

    /// Checks that every entry is finite and nonnegative.
    pub fn check_weights(&self) -> Result<()> {
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::BadMatrixEntry { i, j, value: v });
                }
            }
        }
        Ok(())
    }

    /// Checks that every entry lies in [0, 1], the domain of relation matrices.
    pub fn check_unit_range(&self) -> Result<()> {
        for &v in &self.w {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::ValueOutOfRange { value: v });
            }
        }
        Ok(())
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> WeightedGraph {
        WeightedGraph { n: self.n, w: self.w.iter().map(|&v| f(v)).collect() }
    }

    /// Applies `f` entrywise over two graphs of equal dimension.
    pub fn zip_with<F: Fn(f64, f64) -> f64>(&self, other: &WeightedGraph, f: F) -> Result<WeightedGraph> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let w = self.w.iter().zip(&other.w).map(|(&a, &b)| f(a, b)).collect();
        Ok(WeightedGraph { n: self.n, w })
    }
}
