//! Minimal distance of random linear codes over `F_q`.
//!
//! The crate computes the exact law of the minimum weight of
//! `(q^k - 1)/(q - 1)` independent uniform vectors, samples and enumerates the
//! minimal distance of uniformly random `[n, k]` codes, evaluates the Gumbel
//! approximation of the binomial-minimum model, compares moments of the code
//! and independent models, and evaluates Gilbert–Varshamov style bounds.

pub mod bounds;
pub mod ensemble;
pub mod error;
pub mod exact;
pub mod fqlin;
pub mod moments;

pub use error::{Error, Result};
