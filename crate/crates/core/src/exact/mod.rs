//! Exact and high-precision probability kernel.
//!
//! Everything here is a pure function of its arguments. Exact values are
//! reduced rationals; where the exponent `(q^k - 1)/(q - 1)` makes exact
//! powers infeasible the log of the probability is carried instead.

mod binom;
mod gumbel;
pub mod hp;
mod kernel;
mod prob;

pub use binom::{binomial, binomial_row, sphere_volumes, SphereVolumes, CACHED_LENGTH};
pub use gumbel::{gumbel_params, gumbel_sup_distance, GumbelDistance, GumbelParams};
pub use hp::{Float, DEFAULT_DIGITS};
pub use kernel::{
    class_count_big, entropy, entropy_gap, regime_for, rho, rho_ratio_bounds, rho_step_ratio, wmin_cdf,
    wmin_cdf_table, wmin_cdf_with, wmin_ln_survival, RatioBounds, Regime, StepRatio, EXACT_BIT_LIMIT,
    EXACT_CLASS_LIMIT,
};
pub(crate) use kernel::{check_field, check_k, check_qnd, ln_biguint};
pub use prob::{CdfTable, CdfValues, ExactProb, LogProb, Probability, Provenance};
