//! Fuzzy measures (capacities) on finite ground sets and their Shapley
//! values: exact by subset enumeration, on restricted games with one element
//! removed, and estimated by permutation sampling.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest ground set for which the explicit table form (and exact Shapley
/// enumeration over it) is supported: a 2^24-entry table.
pub const EXACT_SHAPLEY_CAP: usize = 24;

/// Finite ground set of `n` elements, indexed `0..n` internally. File formats
/// use 1-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        Ok(GroundSet { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Form {
    /// Total table over all subsets, indexed by bitmask (bit i set means
    /// element i is present). Length is exactly `1 << n`.
    Explicit(Vec<f64>),
    /// Additive game: value of a subset is the sum of its members' weights.
    Additive(Vec<f64>),
}

/// A general cooperative game (set function with value 0 on the empty set).
/// Unlike [`FuzzyMeasure`] the grand coalition need not have value 1; games
/// arise from restricting a measure to a subset of its ground set.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    n: usize,
    form: Form,
}

/// A validated fuzzy measure: monotone, with value 0 on the empty set and 1
/// on the full ground set.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyMeasure {
    game: Game,
}

/// A pair of fuzzy measures over one ground set carrying negative
/// (discrepancy) and positive (affinity) evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct BipolarFuzzyMeasure {
    pub negative: FuzzyMeasure,
    pub positive: FuzzyMeasure,
}

impl BipolarFuzzyMeasure {
    pub fn new(negative: FuzzyMeasure, positive: FuzzyMeasure) -> Result<Self> {
        if negative.n() != positive.n() {
            return Err(Error::DimensionMismatch { left: negative.n(), right: positive.n() });
        }
        Ok(BipolarFuzzyMeasure { negative, positive })
    }

    pub fn n(&self) -> usize {
        self.negative.n()
    }
}

/// Unvalidated measure description, as parsed from files. Subsets are
/// 0-based index lists here; the JSON layer converts from 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureData {
    pub n: usize,
    pub form: MeasureDataForm,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureDataForm {
    Explicit(Vec<(Vec<usize>, f64)>),
    Additive(Vec<f64>),
}

/// One invariant violation found while validating a measure description.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyGround,
    GroundTooLarge { n: usize, cap: usize },
    IndexOutOfRange { index: usize },
    DuplicateSubset { subset: Vec<usize> },
    MissingSubset { subset: Vec<usize> },
    ValueOutOfRange { subset: Vec<usize>, value: f64 },
    EmptySetValue { value: f64 },
    FullSetValue { value: f64 },
    NotMonotone { smaller: Vec<usize>, larger: Vec<usize>, smaller_value: f64, larger_value: f64 },
    WrongWeightCount { expected: usize, got: usize },
    BadWeight { index: usize, weight: f64 },
    WeightSum { sum: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn set(s: &[usize]) -> String {
            let inner: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
            format!("{{{}}}", inner.join(","))
        }
        match self {
            Violation::EmptyGround => write!(f, "ground set is empty"),
            Violation::GroundTooLarge { n, cap } => {
                write!(f, "explicit table over {n} elements exceeds the cap of {cap}")
            }
            Violation::IndexOutOfRange { index } => {
                write!(f, "element {} out of range", index + 1)
            }
            Violation::DuplicateSubset { subset } => {
                write!(f, "subset {} defined twice", set(subset))
            }
            Violation::MissingSubset { subset } => {
                write!(f, "subset {} has no value", set(subset))
            }
            Violation::ValueOutOfRange { subset, value } => {
                write!(f, "value {value} of subset {} outside [0, 1]", set(subset))
            }
            Violation::EmptySetValue { value } => {
                write!(f, "empty set must have value 0, got {value}")
            }
            Violation::FullSetValue { value } => {
                write!(f, "full ground set must have value 1, got {value}")
            }
            Violation::NotMonotone { smaller, larger, smaller_value, larger_value } => write!(
                f,
                "monotonicity violated: {} has value {smaller_value} but superset {} has value {larger_value}",
                set(smaller),
                set(larger),
            ),
            Violation::WrongWeightCount { expected, got } => {
                write!(f, "expected {expected} weights, got {got}")
            }
            Violation::BadWeight { index, weight } => {
                write!(f, "weight {weight} of element {} invalid", index + 1)
            }
            Violation::WeightSum { sum } => {
                write!(f, "additive weights must sum to 1, got {sum}")
            }
        }
    }
}

fn mask_to_indices(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask & (1 << i) != 0).collect()
}

fn indices_to_mask(indices: &[usize], n: usize) -> Result<u32> {
    let mut mask = 0u32;
    for &i in indices {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        mask |= 1 << i;
    }
    Ok(mask)
}

/// Checks every invariant of a measure description and reports all
/// violations found. An empty report means the data describes a valid
/// fuzzy measure. Explicit tables must be total: absent subsets are
/// reported, never defaulted.
pub fn validate_measure(data: &MeasureData) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = data.n;
    if n == 0 {
        out.push(Violation::EmptyGround);
        return out;
    }
    match &data.form {
        MeasureDataForm::Additive(weights) => {
            if weights.len() != n {
                out.push(Violation::WrongWeightCount { expected: n, got: weights.len() });
                return out;
            }
            for (i, &w) in weights.iter().enumerate() {
                if !w.is_finite() || w < 0.0 {
                    out.push(Violation::BadWeight { index: i, weight: w });
                }
            }
            let sum: f64 = weights.iter().sum();
            if (sum - 1.0).abs() > 1e-10 {
                out.push(Violation::WeightSum { sum });
            }
        }
        MeasureDataForm::Explicit(entries) => {
            if n > EXACT_SHAPLEY_CAP {
                out.push(Violation::GroundTooLarge { n, cap: EXACT_SHAPLEY_CAP });
                return out;
            }
            let size = 1usize << n;
            let mut table = vec![f64::NAN; size];
            for (subset, value) in entries {
                let mask = match indices_to_mask(subset, n) {
                    Ok(m) => m,
                    Err(_) => {
                        let bad = subset.iter().copied().find(|&i| i >= n).unwrap();
                        out.push(Violation::IndexOutOfRange { index: bad });
                        continue;
                    }
                };
                if !table[mask as usize].is_nan() {
                    out.push(Violation::DuplicateSubset { subset: mask_to_indices(mask, n) });
                    continue;
                }
                if !value.is_finite() || !(0.0..=1.0).contains(value) {
                    out.push(Violation::ValueOutOfRange {
                        subset: mask_to_indices(mask, n),
                        value: *value,
                    });
                }
                table[mask as usize] = *value;
            }
            for (mask, v) in table.iter().enumerate() {
                if v.is_nan() {
                    out.push(Violation::MissingSubset { subset: mask_to_indices(mask as u32, n) });
                }
            }
            if !out.is_empty() {
                return out;
            }
            if table[0] != 0.0 {
                out.push(Violation::EmptySetValue { value: table[0] });
            }
            if table[size - 1] != 1.0 {
                out.push(Violation::FullSetValue { value: table[size - 1] });
            }
            // Monotone along single-element extensions implies monotone for
            // all inclusions.
            for mask in 0..size {
                for i in 0..n {
                    if mask & (1 << i) == 0 {
                        let sup = mask | (1 << i);
                        if table[mask] > table[sup] {
                            out.push(Violation::NotMonotone {
                                smaller: mask_to_indices(mask as u32, n),
                                larger: mask_to_indices(sup as u32, n),
                                smaller_value: table[mask],
                                larger_value: table[sup],
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

impl TryFrom<&MeasureData> for FuzzyMeasure {
    type Error = Error;

    fn try_from(data: &MeasureData) -> Result<Self> {
        let violations = validate_measure(data);
        if !violations.is_empty() {
            let lines: Vec<String> = violations.iter().map(|v| format!("  - {v}")).collect();
            return Err(Error::InvalidMeasure(lines.join("\n")));
        }
        let form = match &data.form {
            MeasureDataForm::Additive(weights) => Form::Additive(weights.clone()),
            MeasureDataForm::Explicit(entries) => {
                let mut table = vec![0.0; 1 << data.n];
                for (subset, value) in entries {
                    let mask = indices_to_mask(subset, data.n)?;
                    table[mask as usize] = *value;
                }
                Form::Explicit(table)
            }
        };
        Ok(FuzzyMeasure { game: Game { n: data.n, form } })
    }
}

impl FuzzyMeasure {
    /// Builds a validated explicit measure from a total table indexed by
    /// subset bitmask (length `1 << n`).
    pub fn explicit(n: usize, table: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        if n > EXACT_SHAPLEY_CAP {
            return Err(Error::GroundSetTooLarge { n, cap: EXACT_SHAPLEY_CAP });
        }
        if table.len() != 1 << n {
            return Err(Error::DimensionMismatch { left: 1 << n, right: table.len() });
        }
        let entries = table
            .iter()
            .enumerate()
            .map(|(mask, &v)| (mask_to_indices(mask as u32, n), v))
            .collect();
        FuzzyMeasure::try_from(&MeasureData { n, form: MeasureDataForm::Explicit(entries) })
    }

    pub fn additive(weights: Vec<f64>) -> Result<Self> {
        let data = MeasureData { n: weights.len(), form: MeasureDataForm::Additive(weights) };
        FuzzyMeasure::try_from(&data)
    }

    pub fn n(&self) -> usize {
        self.game.n
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet { n: self.game.n }
    }

    pub fn is_additive(&self) -> bool {
        matches!(self.game.form, Form::Additive(_))
    }

    /// Value of a subset given as 0-based element indices.
    pub fn evaluate(&self, subset: &[usize]) -> Result<f64> {
        self.game.evaluate(subset)
    }

    /// Exact Shapley values. Additive measures short-circuit to their weight
    /// vector; explicit tables are enumerated over all subsets, which is
    /// exponential in `n` and capped at [`EXACT_SHAPLEY_CAP`].
    pub fn shapley(&self) -> Result<Vec<f64>> {
        self.game.shapley()
    }

    /// The game obtained by dropping one element: `S -> value(S)` for
    /// subsets of the remaining elements, in their original order. The
    /// result is not renormalized, so its grand-coalition value is
    /// `value(ground \ {excluded})`, typically below 1.
    pub fn restrict(&self, excluded: usize) -> Result<Game> {
        self.game.restrict(excluded)
    }

    /// Shapley values of the restricted game, indexed by the surviving
    /// elements in original order (element `r` of the result is ground
    /// element `r` if `r < excluded`, else `r + 1`).
    pub fn shapley_restricted(&self, excluded: usize) -> Result<Vec<f64>> {
        self.restrict(excluded)?.shapley()
    }

    /// Permutation-sampling Shapley estimate: the mean marginal contribution
    /// over `samples` uniformly random orderings, deterministic per seed.
    pub fn shapley_sampled(&self, samples: usize, seed: u64) -> Result<SampledShapley> {
        self.game.shapley_sampled(samples, seed)
    }
}

/// Permutation-sampling estimate with a per-element standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledShapley {
    pub values: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub samples: usize,
}

impl Game {
    pub fn n(&self) -> usize {
        self.n
    }

    fn eval_mask(&self, mask: u32) -> f64 {
        match &self.form {
            Form::Explicit(table) => table[mask as usize],
            Form::Additive(weights) => {
                let mut sum = 0.0;
                let mut m = mask;
                while m != 0 {
                    let i = m.trailing_zeros() as usize;
                    sum += weights[i];
                    m &= m - 1;
                }
                sum
            }
        }
    }

    pub fn evaluate(&self, subset: &[usize]) -> Result<f64> {
        match &self.form {
            Form::Additive(weights) => {
                let mut seen = vec![false; self.n];
                let mut sum = 0.0;
                for &i in subset {
                    if i >= self.n {
                        return Err(Error::IndexOutOfRange { index: i, n: self.n });
                    }
                    if !seen[i] {
                        seen[i] = true;
                        sum += weights[i];
                    }
                }
                Ok(sum)
            }
            Form::Explicit(_) => {
                let mask = indices_to_mask(subset, self.n)?;
                Ok(self.eval_mask(mask))
            }
        }
    }

    /// Grand-coalition value of this game.
    pub fn total(&self) -> f64 {
        match &self.form {
            Form::Explicit(table) => *table.last().unwrap(),
            Form::Additive(weights) => weights.iter().sum(),
        }
    }

    pub fn shapley(&self) -> Result<Vec<f64>> {
        match &self.form {
            Form::Additive(weights) => Ok(weights.clone()),
            Form::Explicit(table) => {
                if self.n > EXACT_SHAPLEY_CAP {
                    return Err(Error::GroundSetTooLarge { n: self.n, cap: EXACT_SHAPLEY_CAP });
                }
                Ok(shapley_enumerate(self.n, table))
            }
        }
    }

    pub fn restrict(&self, excluded: usize) -> Result<Game> {
        if excluded >= self.n {
            return Err(Error::IndexOutOfRange { index: excluded, n: self.n });
        }
        let form = match &self.form {
            Form::Additive(weights) => {
                let mut w = weights.clone();
                w.remove(excluded);
                Form::Additive(w)
            }
            Form::Explicit(table) => {
                let m = self.n - 1;
                let low_mask = (1u32 << excluded) - 1;
                let mut projected = vec![0.0; 1 << m];
                for (small, slot) in projected.iter_mut().enumerate() {
                    let small = small as u32;
                    // Re-expand the compact mask around the excluded bit.
                    let orig = (small & low_mask) | ((small & !low_mask) << 1);
                    *slot = table[orig as usize];
                }
                Form::Explicit(projected)
            }
        };
        Ok(Game { n: self.n - 1, form })
    }

    pub fn shapley_sampled(&self, samples: usize, seed: u64) -> Result<SampledShapley> {
        if samples == 0 {
            return Err(Error::NoSamples);
        }
        let n = self.n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..n).collect();
        let mut sum = vec![0.0; n];
        let mut sum_sq = vec![0.0; n];
        for _ in 0..samples {
            order.shuffle(&mut rng);
            match &self.form {
                Form::Additive(weights) => {
                    // Every marginal contribution of an additive game equals
                    // the element's weight, independent of the order.
                    for &i in order.iter() {
                        sum[i] += weights[i];
                        sum_sq[i] += weights[i] * weights[i];
                    }
                }
                Form::Explicit(_) => {
                    let mut mask = 0u32;
                    let mut prev = self.eval_mask(mask);
                    for &i in order.iter() {
                        mask |= 1 << i;
                        let cur = self.eval_mask(mask);
                        let marginal = cur - prev;
                        sum[i] += marginal;
                        sum_sq[i] += marginal * marginal;
                        prev = cur;
                    }
                }
            }
        }
        let t = samples as f64;
        let values: Vec<f64> = sum.iter().map(|s| s / t).collect();
        let std_errors = if samples == 1 {
            vec![0.0; n]
        } else {
            sum_sq
                .iter()
                .zip(&values)
                .map(|(&sq, &mean)| {
                    let var = ((sq - t * mean * mean) / (t - 1.0)).max(0.0);
                    (var / t).sqrt()
                })
                .collect()
        };
        Ok(SampledShapley { values, std_errors, samples })
    }
}

/// Exact Shapley by enumeration: for each element, the factorial-weighted
/// sum of marginal contributions over all subsets not containing it. The
/// factorial coefficients are kept as integers and divided out once.
fn shapley_enumerate(n: usize, table: &[f64]) -> Vec<f64> {
    let mut fact = vec![1.0; n + 1];
    for k in 1..=n {
        fact[k] = fact[k - 1] * k as f64;
    }
    let size = 1usize << n;
    let mut sh = vec![0.0; n];
    for (i, out) in sh.iter_mut().enumerate() {
        let bit = 1usize << i;
        let mut acc = 0.0;
        for mask in 0..size {
            if mask & bit != 0 {
                continue;
            }
            let k = mask.count_ones() as usize;
            let coeff = fact[k] * fact[n - 1 - k];
            acc += coeff * (table[mask | bit] - table[mask]);
        }
        *out = acc / fact[n];
    }
    sh
}
