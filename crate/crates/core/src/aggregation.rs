//! Aggregation operators on [0, 1] values: min, max, arithmetic mean and
//! general OWA, plus the standard negation used to flip discrepancy into
//! affinity.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use serde::{Deserialize, Serialize};

const WEIGHT_SUM_TOL: f64 = 1e-10;

/// An aggregation operator choice. OWA carries its weight vector; the
/// weights apply to the input values sorted in descending order, so
/// `Owa([1, 0, ..., 0])` is the maximum and uniform weights give the mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AggregatorSpec {
    Min,
    Max,
    #[serde(rename = "mean")]
    ArithmeticMean,
    Owa {
        weights: Vec<f64>,
    },
}

/// Position of an operator relative to min and max.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggregationClass {
    Conjunctive,
    Disjunctive,
    Averaging,
}

impl std::fmt::Display for AggregationClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            AggregationClass::Conjunctive => "conjunctive",
            AggregationClass::Disjunctive => "disjunctive",
            AggregationClass::Averaging => "averaging",
        };
        f.write_str(s)
    }
}

impl AggregatorSpec {
    pub fn owa(weights: Vec<f64>) -> Result<Self> {
        let spec = AggregatorSpec::Owa { weights };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if let AggregatorSpec::Owa { weights } = self {
            if weights.is_empty() {
                return Err(Error::EmptyInput);
            }
            let sum: f64 = weights.iter().sum();
            if weights.iter().any(|w| !(0.0..=1.0).contains(w) || !w.is_finite())
                || (sum - 1.0).abs() > WEIGHT_SUM_TOL
            {
                return Err(Error::OwaWeights { sum });
            }
        }
        Ok(())
    }

    /// Aggregates a nonempty vector of values from [0, 1] into one value.
    pub fn aggregate(&self, values: &[f64]) -> Result<f64> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        for &v in values {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::ValueOutOfRange { value: v });
            }
        }
        match self {
            AggregatorSpec::Min => Ok(values.iter().copied().fold(f64::INFINITY, f64::min)),
            AggregatorSpec::Max => Ok(values.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
            AggregatorSpec::ArithmeticMean => Ok(values.iter().sum::<f64>() / values.len() as f64),
            AggregatorSpec::Owa { weights } => {
                self.validate()?;
                if weights.len() != values.len() {
                    return Err(Error::OwaLengthMismatch {
                        weights: weights.len(),
                        values: values.len(),
                    });
                }
                let mut sorted = values.to_vec();
                // Stable descending sort; ties contribute the same dot product
                // either way. Inputs are validated finite above.
                sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
                Ok(sorted.iter().zip(weights).map(|(v, w)| v * w).sum())
            }
        }
    }

    /// Min is conjunctive, max disjunctive, and every OWA (the mean included)
    /// is bounded by the order statistics, hence averaging. Combined choices
    /// of the three pipeline operators span 27 notions of what a group is.
    pub fn classify(&self) -> AggregationClass {
        match self {
            AggregatorSpec::Min => AggregationClass::Conjunctive,
            AggregatorSpec::Max => AggregationClass::Disjunctive,
            AggregatorSpec::ArithmeticMean | AggregatorSpec::Owa { .. } => AggregationClass::Averaging,
        }
    }
}

/// Negation transform on [0, 1]. Only the standard involution is shipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NegationSpec {
    Standard,
}

impl NegationSpec {
    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        match self {
            NegationSpec::Standard => 1.0 - x,
        }
    }
}

/// Entrywise negation of a relation matrix. Entries must lie in [0, 1];
/// symmetry is preserved.
pub fn negate_matrix(negation: &NegationSpec, f: &WeightedGraph) -> Result<WeightedGraph> {
    f.check_unit_range()?;
    Ok(f.map(|v| negation.apply(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn named_operators() {
        assert_eq!(AggregatorSpec::Min.aggregate(&[0.2, 0.7]).unwrap(), 0.2);
        assert_eq!(AggregatorSpec::Max.aggregate(&[0.2, 0.7]).unwrap(), 0.7);
        let owa = AggregatorSpec::owa(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(owa.aggregate(&[0.3, 0.9, 0.1]).unwrap(), 0.9);
        let mean_owa = AggregatorSpec::owa(vec![1.0 / 3.0; 3]).unwrap();
        assert!((mean_owa.aggregate(&[0.9, 0.0, 0.6]).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn aggregate_rejects_bad_input() {
        assert!(matches!(AggregatorSpec::Min.aggregate(&[]), Err(Error::EmptyInput)));
        assert!(matches!(
            AggregatorSpec::Max.aggregate(&[0.5, 1.2]),
            Err(Error::ValueOutOfRange { .. })
        ));
        let owa = AggregatorSpec::owa(vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            owa.aggregate(&[0.1, 0.2, 0.3]),
            Err(Error::OwaLengthMismatch { .. })
        ));
        assert!(AggregatorSpec::owa(vec![0.5, 0.6]).is_err());
        assert!(AggregatorSpec::owa(vec![-0.5, 1.5]).is_err());
    }

    #[test]
    fn classification() {
        assert_eq!(AggregatorSpec::Min.classify(), AggregationClass::Conjunctive);
        assert_eq!(AggregatorSpec::Max.classify(), AggregationClass::Disjunctive);
        assert_eq!(AggregatorSpec::ArithmeticMean.classify(), AggregationClass::Averaging);
        let owa = AggregatorSpec::owa(vec![0.5, 0.5]).unwrap();
        assert_eq!(owa.classify(), AggregationClass::Averaging);
    }

    #[test]
    fn negation_on_matrices() {
        let mut f = WeightedGraph::zeros(2);
        f.set_sym(0, 1, 0.3);
        let neg = negate_matrix(&NegationSpec::Standard, &f).unwrap();
        assert!((neg.get(0, 1) - 0.7).abs() < 1e-15);
        assert_eq!(neg.get(0, 0), 1.0);

        // On dyadic entries both negations are exact.
        let mut d = WeightedGraph::zeros(2);
        d.set_sym(0, 1, 0.3125);
        let back =
            negate_matrix(&NegationSpec::Standard, &negate_matrix(&NegationSpec::Standard, &d).unwrap())
                .unwrap();
        assert_eq!(back, d);

        let zeros = WeightedGraph::zeros(3);
        let ones = negate_matrix(&NegationSpec::Standard, &zeros).unwrap();
        assert!((0..3).all(|i| (0..3).all(|j| ones.get(i, j) == 1.0)));

        let mut bad = WeightedGraph::zeros(2);
        bad.set_sym(0, 1, 1.5);
        assert!(negate_matrix(&NegationSpec::Standard, &bad).is_err());
    }

    fn arb_spec(len: usize) -> impl Strategy<Value = AggregatorSpec> {
        prop_oneof![
            Just(AggregatorSpec::Min),
            Just(AggregatorSpec::Max),
            Just(AggregatorSpec::ArithmeticMean),
            proptest::collection::vec(0.0f64..=1.0, len).prop_map(move |mut raw| {
                let sum: f64 = raw.iter().sum();
                if sum == 0.0 {
                    raw = vec![1.0 / len as f64; len];
                } else {
                    for w in &mut raw {
                        *w /= sum;
                    }
                }
                AggregatorSpec::Owa { weights: raw }
            }),
        ]
    }

    proptest! {
        #[test]
        fn results_lie_between_min_and_max(
            (values, spec) in (2usize..6).prop_flat_map(|len| {
                (proptest::collection::vec(0.0f64..=1.0, len), arb_spec(len))
            })
        ) {
            let out = spec.aggregate(&values).unwrap();
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            match spec.classify() {
                AggregationClass::Conjunctive => prop_assert!(out <= lo + 1e-12),
                AggregationClass::Disjunctive => prop_assert!(out >= hi - 1e-12),
                AggregationClass::Averaging => {
                    prop_assert!(out >= lo - 1e-9 && out <= hi + 1e-9);
                }
            }
        }

        #[test]
        fn raising_an_input_never_lowers_the_output(
            (values, spec, idx, bump) in (2usize..6).prop_flat_map(|len| {
                (
                    proptest::collection::vec(0.0f64..=1.0, len),
                    arb_spec(len),
                    0..len,
                    0.0f64..=1.0,
                )
            })
        ) {
            let base = spec.aggregate(&values).unwrap();
            let mut raised = values.clone();
            raised[idx] = (raised[idx] + bump).min(1.0);
            let out = spec.aggregate(&raised).unwrap();
            prop_assert!(out >= base - 1e-12);
        }

        #[test]
        fn idempotent_and_boundary(
            (c, spec) in (2usize..6).prop_flat_map(|len| {
                ((0u32..=1024).prop_map(|k| k as f64 / 1024.0), arb_spec(len))
            }),
            len in 2usize..6
        ) {
            let spec = match spec {
                AggregatorSpec::Owa { mut weights } => {
                    weights.resize(len, 0.0);
                    let sum: f64 = weights.iter().sum();
                    if sum == 0.0 { weights[0] = 1.0; } else { for w in &mut weights { *w /= sum; } }
                    AggregatorSpec::Owa { weights }
                }
                other => other,
            };
            let v = vec![c; len];
            prop_assert!((spec.aggregate(&v).unwrap() - c).abs() < 1e-9);
            prop_assert!(spec.aggregate(&vec![0.0; len]).unwrap().abs() < 1e-9);
            prop_assert!((spec.aggregate(&vec![1.0; len]).unwrap() - 1.0).abs() < 1e-9);
        }

        #[test]
        fn negation_is_involutive_on_dyadics(k in 0u32..=1024) {
            // 1 - k/1024 is exact in binary floating point.
            let x = k as f64 / 1024.0;
            let n = NegationSpec::Standard;
            prop_assert_eq!(n.apply(n.apply(x)), x);
        }
    }
}
