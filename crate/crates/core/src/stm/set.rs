use indexmap::IndexMap;

use super::matrix::{stm_convolve, SourceTargetMatrix};
use crate::counters::Counters;
use crate::error::Result;

/// Matrices with their aggregated probabilities, in first-insertion order.
///
/// All-zero matrices are never stored; their mass is tracked separately so
/// that a full stage tabulation can be checked for conservation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WeightedStmSet {
    entries: IndexMap<SourceTargetMatrix, f64>,
    discarded: f64,
}

impl WeightedStmSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `p` to the aggregated probability of `m`. Returns whether the
    /// matrix was stored (i.e. is nonzero).
    pub fn insert(&mut self, m: SourceTargetMatrix, p: f64) -> bool {
        if m.is_zero() {
            self.discarded += p;
            return false;
        }
        *self.entries.entry(m).or_insert(0.0) += p;
        true
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, m: &SourceTargetMatrix) -> Option<f64> {
        self.entries.get(m).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SourceTargetMatrix, f64)> {
        self.entries.iter().map(|(m, &p)| (m, p))
    }

    /// Sum of stored probabilities.
    pub fn mass(&self) -> f64 {
        self.entries.values().sum()
    }

    /// Probability of the all-zero matrices dropped on insert.
    pub fn discarded_mass(&self) -> f64 {
        self.discarded
    }
}

impl FromIterator<(SourceTargetMatrix, f64)> for WeightedStmSet {
    fn from_iter<I: IntoIterator<Item = (SourceTargetMatrix, f64)>>(iter: I) -> Self {
        let mut set = WeightedStmSet::new();
        for (m, p) in iter {
            set.insert(m, p);
        }
        set
    }
}

/// Convolves every accumulated matrix with every stage matrix, multiplying
/// probabilities, dropping zero products and aggregating equal results.
pub fn convolve_sets(acc: &WeightedStmSet, stage_set: &WeightedStmSet) -> Result<WeightedStmSet> {
    convolve_sets_counted(acc, stage_set, &mut Counters::default())
}

pub(crate) fn convolve_sets_counted(
    acc: &WeightedStmSet,
    stage_set: &WeightedStmSet,
    counters: &mut Counters,
) -> Result<WeightedStmSet> {
    let mut out = WeightedStmSet::new();
    for (a, pa) in acc.iter() {
        for (b, pb) in stage_set.iter() {
            counters.convolution_products += 1;
            let product = stm_convolve(a, b)?;
            if product.is_zero() {
                continue;
            }
            counters.multiplications += 1;
            counters.summations += 1;
            out.insert(product, pa * pb);
        }
    }
    Ok(out)
}
