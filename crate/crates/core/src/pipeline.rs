//! From fuzzy measures to one modularity matrix: per-measure associated
//! relation matrices built from Shapley-value drops, per-side aggregation
//! over sources, negation of the discrepancy side, the combining step into
//! a single relation matrix, and the convex blend with the graph topology.

use crate::aggregation::{negate_matrix, AggregatorSpec, NegationSpec};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::measure::{BipolarFuzzyMeasure, FuzzyMeasure};

/// A crisp graph together with `s >= 1` bipolar fuzzy measures over its
/// node set.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedMultipleBipolarFuzzyGraph {
    pub graph: WeightedGraph,
    pub measures: Vec<BipolarFuzzyMeasure>,
}

impl ExtendedMultipleBipolarFuzzyGraph {
    pub fn new(graph: WeightedGraph, measures: Vec<BipolarFuzzyMeasure>) -> Result<Self> {
        if measures.is_empty() {
            return Err(Error::EmptyInput);
        }
        for m in &measures {
            if m.n() != graph.n() {
                return Err(Error::DimensionMismatch { left: graph.n(), right: m.n() });
            }
        }
        Ok(ExtendedMultipleBipolarFuzzyGraph { graph, measures })
    }
}

/// The 2s relation matrices derived from (or supplied for) s bipolar
/// sources: one discrepancy and one affinity matrix per source.
#[derive(Debug, Clone, PartialEq)]
pub struct BipolarMultiGraph {
    pub negatives: Vec<WeightedGraph>,
    pub positives: Vec<WeightedGraph>,
}

impl BipolarMultiGraph {
    pub fn new(negatives: Vec<WeightedGraph>, positives: Vec<WeightedGraph>) -> Result<Self> {
        if negatives.is_empty() || negatives.len() != positives.len() {
            return Err(Error::ArityMismatch { expected: negatives.len(), got: positives.len() });
        }
        let n = negatives[0].n();
        for g in negatives.iter().chain(&positives) {
            if g.n() != n {
                return Err(Error::DimensionMismatch { left: n, right: g.n() });
            }
            g.check_unit_range()?;
            g.check_symmetric()?;
        }
        Ok(BipolarMultiGraph { negatives, positives })
    }

    pub fn s(&self) -> usize {
        self.negatives.len()
    }

    pub fn n(&self) -> usize {
        self.negatives[0].n()
    }
}

/// Operator choices that fix what a "group" means: the per-source
/// symmetrizers, the per-side aggregators, the negation, the combiner and
/// the topology blend weight.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Per-source bivariate symmetrizers for the discrepancy matrices. May
    /// be empty when relation matrices are supplied directly.
    pub phi_neg: Vec<AggregatorSpec>,
    /// Per-source bivariate symmetrizers for the affinity matrices.
    pub phi_pos: Vec<AggregatorSpec>,
    /// s-ary aggregator collapsing the discrepancy matrices into one.
    pub agg_neg: AggregatorSpec,
    /// s-ary aggregator collapsing the affinity matrices into one.
    pub agg_pos: AggregatorSpec,
    pub negation: NegationSpec,
    /// Bivariate combiner of negated discrepancy with affinity.
    pub psi: AggregatorSpec,
    /// Blend weight: the modularity matrix is `gamma * A + (1 - gamma) * combined`.
    pub gamma: f64,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        for spec in self
            .phi_neg
            .iter()
            .chain(&self.phi_pos)
            .chain([&self.agg_neg, &self.agg_pos, &self.psi])
        {
            spec.validate()?;
        }
        if !(0.0..=1.0).contains(&self.gamma) || !self.gamma.is_finite() {
            return Err(Error::GammaOutOfRange { gamma: self.gamma });
        }
        Ok(())
    }
}

/// How Shapley values enter the associated matrix: exact enumeration or
/// permutation sampling for ground sets past the exact cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShapleyMode {
    Exact,
    Sampled { samples: usize, seed: u64 },
}

fn shapley_of(m: &FuzzyMeasure, mode: ShapleyMode) -> Result<Vec<f64>> {
    match mode {
        ShapleyMode::Exact => m.shapley(),
        ShapleyMode::Sampled { samples, seed } => Ok(m.shapley_sampled(samples, seed)?.values),
    }
}

fn shapley_restricted_of(m: &FuzzyMeasure, excluded: usize, mode: ShapleyMode) -> Result<Vec<f64>> {
    let game = m.restrict(excluded)?;
    match mode {
        ShapleyMode::Exact => game.shapley(),
        ShapleyMode::Sampled { samples, seed } => {
            Ok(game.shapley_sampled(samples, seed ^ (excluded as u64).wrapping_mul(0x9e3779b97f4a7c15))?.values)
        }
    }
}

/// The relation matrix associated with one measure: entry (i, j) aggregates
/// how much each node's Shapley value drops when the other is removed.
/// Differences are clamped into [0, 1] before aggregation and the diagonal
/// is zero (a node holds no such relation with itself).
pub fn associated_matrix(m: &FuzzyMeasure, phi: &AggregatorSpec) -> Result<WeightedGraph> {
    associated_matrix_with(m, phi, ShapleyMode::Exact)
}

pub fn associated_matrix_with(
    m: &FuzzyMeasure,
    phi: &AggregatorSpec,
    mode: ShapleyMode,
) -> Result<WeightedGraph> {
    phi.validate()?;
    let n = m.n();
    let sh = shapley_of(m, mode)?;
    // drop[j][r] = Sh of surviving element r in the game without j,
    // indexed by the restricted order.
    let mut restricted = Vec::with_capacity(n);
    for j in 0..n {
        restricted.push(shapley_restricted_of(m, j, mode)?);
    }
    let survivor_index = |without: usize, element: usize| {
        if element < without {
            element
        } else {
            element - 1
        }
    };
    let mut f = WeightedGraph::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let di = (sh[i] - restricted[j][survivor_index(j, i)]).clamp(0.0, 1.0);
            let dj = (sh[j] - restricted[i][survivor_index(i, j)]).clamp(0.0, 1.0);
            let v = phi.aggregate(&[di, dj])?;
            f.set_sym(i, j, v);
        }
    }
    Ok(f)
}

/// Applies [`associated_matrix`] to both components of a bipolar measure.
pub fn bipolar_associated(
    b: &BipolarFuzzyMeasure,
    phi_neg: &AggregatorSpec,
    phi_pos: &AggregatorSpec,
) -> Result<(WeightedGraph, WeightedGraph)> {
    Ok((
        associated_matrix(&b.negative, phi_neg)?,
        associated_matrix(&b.positive, phi_pos)?,
    ))
}

/// Builds the 2s relation matrices of an extended multiple bipolar fuzzy
/// graph. Requires one symmetrizer pair per measure.
pub fn build_multi(
    g: &ExtendedMultipleBipolarFuzzyGraph,
    cfg: &PipelineConfig,
) -> Result<BipolarMultiGraph> {
    let s = g.measures.len();
    if cfg.phi_neg.len() != s {
        return Err(Error::ArityMismatch { expected: s, got: cfg.phi_neg.len() });
    }
    if cfg.phi_pos.len() != s {
        return Err(Error::ArityMismatch { expected: s, got: cfg.phi_pos.len() });
    }
    let mut negatives = Vec::with_capacity(s);
    let mut positives = Vec::with_capacity(s);
    for (l, b) in g.measures.iter().enumerate() {
        let (fm, fp) = bipolar_associated(b, &cfg.phi_neg[l], &cfg.phi_pos[l])?;
        negatives.push(fm);
        positives.push(fp);
    }
    BipolarMultiGraph::new(negatives, positives)
}

/// Entrywise s-ary aggregation of one side's matrices into a single matrix.
pub fn aggregate_side(spec: &AggregatorSpec, matrices: &[WeightedGraph]) -> Result<WeightedGraph> {
    let first = matrices.first().ok_or(Error::EmptyInput)?;
    let n = first.n();
    for m in matrices {
        if m.n() != n {
            return Err(Error::DimensionMismatch { left: n, right: m.n() });
        }
        m.check_unit_range()?;
    }
    let mut out = WeightedGraph::zeros(n);
    let mut values = vec![0.0; matrices.len()];
    for i in 0..n {
        for j in 0..n {
            for (slot, m) in values.iter_mut().zip(matrices) {
                *slot = m.get(i, j);
            }
            out.set(i, j, spec.aggregate(&values)?);
        }
    }
    Ok(out)
}

/// Combines negated discrepancy with affinity, entrywise over the full
/// matrix (diagonal included): `psi(N(f_minus), f_plus)`.
pub fn combine_bipolar(
    psi: &AggregatorSpec,
    negation: &NegationSpec,
    f_minus: &WeightedGraph,
    f_plus: &WeightedGraph,
) -> Result<WeightedGraph> {
    if f_minus.n() != f_plus.n() {
        return Err(Error::DimensionMismatch { left: f_minus.n(), right: f_plus.n() });
    }
    f_plus.check_unit_range()?;
    let opposed = negate_matrix(negation, f_minus)?;
    let n = f_plus.n();
    let mut out = WeightedGraph::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, psi.aggregate(&[opposed.get(i, j), f_plus.get(i, j)])?);
        }
    }
    Ok(out)
}

/// Convex blend of topology and relation evidence:
/// `gamma * a + (1 - gamma) * f_b`. Exact at both endpoints.
pub fn theta_combine(a: &WeightedGraph, f_b: &WeightedGraph, gamma: f64) -> Result<WeightedGraph> {
    if !(0.0..=1.0).contains(&gamma) || !gamma.is_finite() {
        return Err(Error::GammaOutOfRange { gamma });
    }
    a.zip_with(f_b, |x, y| gamma * x + (1.0 - gamma) * y)
}

/// Runs the per-side aggregation, negation, combination and blend in one
/// call, returning the combined relation matrix and the modularity matrix.
pub fn build_modularity_matrix(
    a: &WeightedGraph,
    multi: &BipolarMultiGraph,
    cfg: &PipelineConfig,
) -> Result<(WeightedGraph, WeightedGraph)> {
    cfg.validate()?;
    if multi.n() != a.n() {
        return Err(Error::DimensionMismatch { left: a.n(), right: multi.n() });
    }
    a.check_weights()?;
    a.check_symmetric()?;
    let f_minus = aggregate_side(&cfg.agg_neg, &multi.negatives)?;
    let f_plus = aggregate_side(&cfg.agg_pos, &multi.positives)?;
    let combined = combine_bipolar(&cfg.psi, &cfg.negation, &f_minus, &f_plus)?;
    let m = theta_combine(a, &combined, cfg.gamma)?;
    Ok((combined, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn explicit3() -> FuzzyMeasure {
        let table = vec![0.0, 0.1, 0.2, 0.5, 0.3, 0.5, 0.6, 1.0];
        FuzzyMeasure::explicit(3, table).unwrap()
    }

    #[test]
    fn additive_measures_have_zero_associated_matrix() {
        let m = FuzzyMeasure::additive(vec![0.25, 0.25, 0.5]).unwrap();
        let f = associated_matrix(&m, &AggregatorSpec::Max).unwrap();
        assert_eq!(f, WeightedGraph::zeros(3));
    }

    #[test]
    fn associated_matrix_from_shapley_drops() {
        let f = associated_matrix(&explicit3(), &AggregatorSpec::Max).unwrap();
        // Sh = (0.25, 0.35, 0.40); without element 2: Sh^2 = (0.15, 0.35);
        // without element 1: Sh^1 = (0.25, 0.45).
        assert_abs_diff_eq!(f.get(0, 1), 0.10, epsilon = 1e-12);
        assert_eq!(f.get(0, 0), 0.0);
        assert!(f.is_symmetric());
    }

    #[test]
    fn two_player_associated_matrix() {
        let m = FuzzyMeasure::explicit(2, vec![0.0, 0.4, 0.7, 1.0]).unwrap();
        let f = associated_matrix(&m, &AggregatorSpec::ArithmeticMean).unwrap();
        // Sh = (0.35, 0.65); singleton games leave 0.4 and 0.7.
        let di: f64 = 0.35 - 0.4; // clamped to 0
        let dj: f64 = 0.65 - 0.7; // clamped to 0
        assert_eq!(f.get(0, 1), (di.max(0.0) + dj.max(0.0)) / 2.0);
    }

    #[test]
    fn sampled_shapley_mode_approximates_exact() {
        let m = explicit3();
        let exact = associated_matrix(&m, &AggregatorSpec::Max).unwrap();
        let sampled = associated_matrix_with(
            &m,
            &AggregatorSpec::Max,
            ShapleyMode::Sampled { samples: 50_000, seed: 9 },
        )
        .unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((sampled.get(i, j) - exact.get(i, j)).abs() < 0.01);
            }
        }
        let add = FuzzyMeasure::additive(vec![0.5, 0.5]).unwrap();
        let f = associated_matrix_with(
            &add,
            &AggregatorSpec::Max,
            ShapleyMode::Sampled { samples: 10, seed: 1 },
        )
        .unwrap();
        assert_eq!(f, WeightedGraph::zeros(2));
    }

    #[test]
    fn bipolar_associated_keeps_sides_apart() {
        let add = FuzzyMeasure::additive(vec![0.2, 0.3, 0.5]).unwrap();
        let exp = explicit3();
        let b = BipolarFuzzyMeasure::new(add.clone(), exp.clone()).unwrap();
        let (fm, fp) = bipolar_associated(&b, &AggregatorSpec::Max, &AggregatorSpec::Max).unwrap();
        assert_eq!(fm, WeightedGraph::zeros(3));
        assert_abs_diff_eq!(fp.get(0, 1), 0.10, epsilon = 1e-12);

        let swapped = BipolarFuzzyMeasure::new(exp, add).unwrap();
        let (fm2, fp2) =
            bipolar_associated(&swapped, &AggregatorSpec::Max, &AggregatorSpec::Max).unwrap();
        assert_eq!(fm2, fp);
        assert_eq!(fp2, fm);
    }

    #[test]
    fn build_multi_checks_arity() {
        let add = FuzzyMeasure::additive(vec![0.5, 0.25, 0.25]).unwrap();
        let b = BipolarFuzzyMeasure::new(add.clone(), add).unwrap();
        let g = ExtendedMultipleBipolarFuzzyGraph::new(WeightedGraph::zeros(3), vec![b]).unwrap();
        let cfg = PipelineConfig {
            phi_neg: vec![],
            phi_pos: vec![],
            agg_neg: AggregatorSpec::Max,
            agg_pos: AggregatorSpec::Max,
            negation: NegationSpec::Standard,
            psi: AggregatorSpec::Min,
            gamma: 0.5,
        };
        assert!(matches!(build_multi(&g, &cfg), Err(Error::ArityMismatch { .. })));

        let cfg_ok = PipelineConfig {
            phi_neg: vec![AggregatorSpec::Max],
            phi_pos: vec![AggregatorSpec::Max],
            ..cfg
        };
        let multi = build_multi(&g, &cfg_ok).unwrap();
        assert_eq!(multi.s(), 1);
        assert_eq!(multi.negatives[0], WeightedGraph::zeros(3));
        assert_eq!(multi.positives[0], WeightedGraph::zeros(3));
    }

    #[test]
    fn aggregate_side_is_entrywise() {
        let mut a = WeightedGraph::zeros(2);
        a.set_sym(0, 1, 0.2);
        let mut b = WeightedGraph::zeros(2);
        b.set_sym(0, 1, 0.8);
        let max = aggregate_side(&AggregatorSpec::Max, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(max.get(0, 1), 0.8);
        let single = aggregate_side(&AggregatorSpec::Min, &[a.clone()]).unwrap();
        assert_eq!(single, a);
        assert!(aggregate_side(&AggregatorSpec::Max, &[]).is_err());
        let wrong = WeightedGraph::zeros(3);
        assert!(aggregate_side(&AggregatorSpec::Max, &[a, wrong]).is_err());
    }

    #[test]
    fn combine_bipolar_min_edges() {
        let n = 4;
        let mut f_plus = WeightedGraph::zeros(n);
        f_plus.set_sym(0, 1, 1.0);
        let zeros = WeightedGraph::zeros(n);

        // No discrepancy: min(1, f_plus) = f_plus.
        let out = combine_bipolar(
            &AggregatorSpec::Min,
            &NegationSpec::Standard,
            &zeros,
            &f_plus,
        )
        .unwrap();
        assert_eq!(out, f_plus);

        // No affinity: min with 0 erases everything.
        let out = combine_bipolar(
            &AggregatorSpec::Min,
            &NegationSpec::Standard,
            &f_plus,
            &zeros,
        )
        .unwrap();
        assert_eq!(out, zeros);
    }

    #[test]
    fn theta_endpoints_are_exact() {
        let mut a = WeightedGraph::zeros(2);
        a.set_sym(0, 1, 1.0);
        let mut f = WeightedGraph::zeros(2);
        f.set_sym(0, 1, 0.3);
        assert_eq!(theta_combine(&a, &f, 1.0).unwrap(), a);
        assert_eq!(theta_combine(&a, &f, 0.0).unwrap(), f);
        let half = theta_combine(&a, &f, 0.5).unwrap();
        assert_eq!(half.get(0, 1), 0.65);
        assert!(theta_combine(&a, &f, 1.5).is_err());
    }

    #[test]
    fn fused_pipeline_equals_stepwise() {
        let mut a = WeightedGraph::zeros(3);
        a.set_sym(0, 1, 1.0);
        a.set_sym(1, 2, 1.0);
        let mut f1 = WeightedGraph::zeros(3);
        f1.set_sym(0, 1, 0.75);
        let mut f2 = WeightedGraph::zeros(3);
        f2.set_sym(1, 2, 0.5);
        let mut p1 = WeightedGraph::zeros(3);
        p1.set_sym(0, 2, 0.25);
        let p2 = WeightedGraph::zeros(3);
        let multi = BipolarMultiGraph::new(vec![f1.clone(), f2.clone()], vec![p1.clone(), p2.clone()]).unwrap();
        let cfg = PipelineConfig {
            phi_neg: vec![],
            phi_pos: vec![],
            agg_neg: AggregatorSpec::Max,
            agg_pos: AggregatorSpec::ArithmeticMean,
            negation: NegationSpec::Standard,
            psi: AggregatorSpec::Min,
            gamma: 0.25,
        };
        let (combined, m) = build_modularity_matrix(&a, &multi, &cfg).unwrap();

        let fm = aggregate_side(&cfg.agg_neg, &[f1, f2]).unwrap();
        let fp = aggregate_side(&cfg.agg_pos, &[p1, p2]).unwrap();
        let step_combined =
            combine_bipolar(&cfg.psi, &cfg.negation, &fm, &fp).unwrap();
        let step_m = theta_combine(&a, &step_combined, cfg.gamma).unwrap();
        assert_eq!(combined, step_combined);
        assert_eq!(m, step_m);
    }

    #[test]
    fn all_additive_sources_collapse_to_zero_relation() {
        let add1 = FuzzyMeasure::additive(vec![0.25, 0.25, 0.5]).unwrap();
        let add2 = FuzzyMeasure::additive(vec![0.1, 0.4, 0.5]).unwrap();
        let b1 = BipolarFuzzyMeasure::new(add1.clone(), add2.clone()).unwrap();
        let b2 = BipolarFuzzyMeasure::new(add2, add1).unwrap();
        let mut a = WeightedGraph::zeros(3);
        a.set_sym(0, 1, 1.0);
        let g = ExtendedMultipleBipolarFuzzyGraph::new(a.clone(), vec![b1, b2]).unwrap();
        let cfg = PipelineConfig {
            phi_neg: vec![AggregatorSpec::Max, AggregatorSpec::Max],
            phi_pos: vec![AggregatorSpec::Max, AggregatorSpec::Max],
            agg_neg: AggregatorSpec::ArithmeticMean,
            agg_pos: AggregatorSpec::ArithmeticMean,
            negation: NegationSpec::Standard,
            psi: AggregatorSpec::Min,
            gamma: 1.0,
        };
        let multi = build_multi(&g, &cfg).unwrap();
        let (combined, m) = build_modularity_matrix(&a, &multi, &cfg).unwrap();
        assert_eq!(combined, WeightedGraph::zeros(3));
        assert_eq!(m, a);
    }

    fn arb_unit_sym(n: usize) -> impl Strategy<Value = WeightedGraph> {
        proptest::collection::vec(0.0f64..=1.0, n * (n + 1) / 2).prop_map(move |vals| {
            let mut g = WeightedGraph::zeros(n);
            let mut it = vals.into_iter();
            for i in 0..n {
                for j in i..n {
                    g.set_sym(i, j, it.next().unwrap());
                }
            }
            g
        })
    }

    proptest! {
        #[test]
        fn pipeline_preserves_symmetry_and_range(
            (fm, fp, a) in (2usize..6).prop_flat_map(|n| {
                (arb_unit_sym(n), arb_unit_sym(n), arb_unit_sym(n))
            }),
            gamma in 0.0f64..=1.0,
        ) {
            let multi = BipolarMultiGraph::new(vec![fm], vec![fp]).unwrap();
            let cfg = PipelineConfig {
                phi_neg: vec![],
                phi_pos: vec![],
                agg_neg: AggregatorSpec::Max,
                agg_pos: AggregatorSpec::Max,
                negation: NegationSpec::Standard,
                psi: AggregatorSpec::Min,
                gamma,
            };
            let (combined, m) = build_modularity_matrix(&a, &multi, &cfg).unwrap();
            prop_assert!(combined.is_symmetric());
            prop_assert!(m.is_symmetric());
            prop_assert!(combined.check_unit_range().is_ok());
            prop_assert!(m.check_weights().is_ok());
        }
    }
}
