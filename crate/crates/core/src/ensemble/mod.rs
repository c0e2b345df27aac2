//! Random linear codes: sampling, exhaustive laws and exact oracles.

mod compare;
mod indicator;
mod law;
mod rng;
mod sampler;

pub use compare::{compare_cdfs, compare_cdfs_exact, CompareReport, CompareRow};
pub use indicator::{
    capped_weight_law, indicator_product_exact, joint_weight_triple, joint_weight_triple_capped, CappedWeightLaw,
    DP_BUDGET, MAX_FACTORS, PATTERN_BUDGET,
};
pub use law::{
    code_law_counts, enumerate_code_law, for_each_rref, gaussian_binomial, LawCounts, LawMode, MATRIX_BUDGET,
    SUBSPACE_BUDGET,
};
pub use rng::{draw_generators, trial_rng, ElementSampler};
pub use sampler::{par_trials, sample_dmin, Budget, EmpiricalCdf, SamplerConfig, DEFAULT_BUDGET};
