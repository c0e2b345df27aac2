//! Moments of the number of light codewords and their inversion into
//! point masses.
//!
//! `Z_d` counts nonzero messages whose codeword has weight at most `d`;
//! `Z~_d` is the same count when each proportionality class gets its own
//! independent uniform vector, so `Z~_d / (q-1)` is binomial.

mod combinatorics;
mod growth;
mod inversion;
mod vector;
mod zmoments;

pub use combinatorics::{omega_count, omega_rank_count, stirling2, RankCount, MAX_ORDER, RANK_COUNT_BUDGET};
pub use growth::{moment_growth_bound, moment_growth_ratio, GrowthBound, GrowthBranch, GROWTH_CALIBRATION};
pub use inversion::{invert_moments, inversion_system, InversionSystem, MassVector, TailBound, MAX_H};
pub use vector::{MomentModel, MomentValues, MomentVector};
pub use zmoments::{
    z_moment, z_sample, ztilde_moment, ztilde_moments, MomentEstimate, ZMethod, ZSample, EXACT_TINY_BUDGET,
};
