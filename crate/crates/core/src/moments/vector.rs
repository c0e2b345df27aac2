use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};

/// Which random variable the moments belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentModel {
    /// `Z~_d`: one independent uniform vector per proportionality class.
    Independent,
    /// `Z_d`: the codewords of a random code.
    Code,
    /// Moments supplied directly.
    Given,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MomentValues {
    Exact(Vec<BigRational>),
    Estimated { mean: Vec<f64>, stderr: Vec<f64> },
}

/// `E[Z^m]` for `m = 1..=h`; index 0 holds the first moment.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector {
    pub model: MomentModel,
    pub values: MomentValues,
}

impl MomentVector {
    pub fn exact(model: MomentModel, values: Vec<BigRational>) -> Self {
        MomentVector {
            model,
            values: MomentValues::Exact(values),
        }
    }

    pub fn estimated(model: MomentModel, mean: Vec<f64>, stderr: Vec<f64>) -> Result<Self> {
        if mean.len() != stderr.len() {
            return Err(invalid("moment means and standard errors differ in length"));
        }
        Ok(MomentVector {
            model,
            values: MomentValues::Estimated { mean, stderr },
        })
    }

    /// Exact moments of a distribution on `1..` given by `masses[r - 1]`.
    pub fn from_masses(masses: &[BigRational], h: usize) -> Self {
        let values = (1..=h as u32)
            .map(|m| {
                masses
                    .iter()
                    .enumerate()
                    .map(|(i, p)| p * BigRational::from_integer(BigInt::from(i + 1).pow(m)))
                    .sum()
            })
            .collect();
        Self::exact(MomentModel::Given, values)
    }

    pub fn h(&self) -> usize {
        match &self.values {
            MomentValues::Exact(v) => v.len(),
            MomentValues::Estimated { mean, .. } => mean.len(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, MomentValues::Exact(_))
    }

    /// `E[Z^m]`, `m >= 1`.
    pub fn get_f64(&self, m: usize) -> f64 {
        match &self.values {
            MomentValues::Exact(v) => v[m - 1].to_f64().unwrap_or(f64::NAN),
            MomentValues::Estimated { mean, .. } => mean[m - 1],
        }
    }

    pub fn stderr(&self, m: usize) -> f64 {
        match &self.values {
            MomentValues::Exact(_) => 0.0,
            MomentValues::Estimated { stderr, .. } => stderr[m - 1],
        }
    }

    /// Lyapunov's inequality: `E[Z^m]^{1/m}` nondecreasing in `m`, checked as
    /// `E[Z^m]^{m+1} <= E[Z^{m+1}]^m` (exactly for exact moments).
    pub fn lyapunov_holds(&self) -> bool {
        match &self.values {
            MomentValues::Exact(v) => {
                v.iter().all(|x| !x.is_negative())
                    && v.windows(2).enumerate().all(|(i, w)| {
                        let m = i as u32 + 1;
                        Pow::pow(&w[0], m + 1) <= Pow::pow(&w[1], m)
                    })
            }
            MomentValues::Estimated { mean, .. } => mean.windows(2).enumerate().all(|(i, w)| {
                let m = i as f64 + 1.0;
                w[0] <= 0.0 || w[0].powf(1.0 / m) <= w[1].powf(1.0 / (m + 1.0)) * (1.0 + 1e-12)
            }),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.values {
            MomentValues::Exact(v) => v.iter().all(|x| *x > BigRational::zero()),
            MomentValues::Estimated { mean, .. } => mean.iter().all(|&x| x > 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn moments_from_masses() {
        let v = MomentVector::from_masses(&[r(1, 2), r(0, 1), r(1, 2)], 3);
        assert_eq!(v.values, MomentValues::Exact(vec![r(2, 1), r(5, 1), r(14, 1)]));
        assert!(v.lyapunov_holds());
        assert!(v.is_positive());
    }

    #[test]
    fn lyapunov_detects_violation() {
        let v = MomentVector::exact(MomentModel::Given, vec![r(4, 1), r(1, 1)]);
        assert!(!v.lyapunov_holds());
        let e = MomentVector::estimated(MomentModel::Code, vec![2.0, 5.0], vec![0.1, 0.2]).unwrap();
        assert!(e.lyapunov_holds());
        assert!(MomentVector::estimated(MomentModel::Code, vec![2.0], vec![]).is_err());
    }
}
