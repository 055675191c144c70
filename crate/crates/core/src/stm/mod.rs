//! Source-target matrices, stage tabulation and the QB-II fold.

mod matrix;
mod qb2;
mod set;
mod stage;

pub use matrix::{stm_convolve, SourceTargetMatrix};
pub use qb2::{
    qb2_trace, qb2_trace_with, reliability_qb2, reliability_qb2_with, reliability_row_fold,
    Qb2Trace, StageTable,
};
pub use set::{convolve_sets, WeightedStmSet};
pub use stage::{stm_from_vector, tabulate_stage, tabulate_stage_with, MainBat};
