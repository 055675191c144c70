use serde::Serialize;

/// Work counters reported by every backend.
///
/// `stms_per_stage` is only filled by QB-II: the aggregated matrix counts in
/// evaluation order (stage 1, stage 2, fold 1, stage 3, fold 2, ...).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    /// Connectivity tests performed (vectors, super vectors or stage vectors).
    pub connectivity_checks: u64,
    /// Connected vectors, connected super vectors, or surviving aggregated matrices.
    pub accepted: u64,
    pub stms_per_stage: Vec<usize>,
    pub convolution_products: u64,
    pub multiplications: u64,
    pub summations: u64,
}

impl Counters {
    pub fn total_stms(&self) -> usize {
        self.stms_per_stage.iter().sum()
    }
}

/// A reliability value with the counters collected while computing it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub reliability: f64,
    pub counters: Counters,
}
