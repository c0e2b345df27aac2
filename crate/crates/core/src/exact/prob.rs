use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::hp::{self, Float};
use crate::error::{invalid, Result};

/// A probability held as a reduced rational in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProb(BigRational);

impl ExactProb {
    pub fn new(value: BigRational) -> Result<Self> {
        if value.is_negative() || value > BigRational::one() {
            return Err(invalid(format!("{value} is not a probability")));
        }
        Ok(ExactProb(value))
    }

    /// `num / den`, reduced.
    pub fn from_parts(num: BigUint, den: BigUint) -> Result<Self> {
        if den.is_zero() {
            return Err(invalid("zero denominator"));
        }
        Self::new(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        ExactProb(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactProb(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn complement(&self) -> Self {
        ExactProb(BigRational::one() - &self.0)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_float(&self, bits: usize) -> Float {
        hp::ratio_to_float(&self.0, bits)
    }

    /// Natural log at `digits` significant digits; `None` for probability 0.
    pub fn to_log(&self, digits: u32) -> Option<LogProb> {
        if self.0.is_zero() {
            return None;
        }
        let bits = hp::working_bits(digits);
        Some(LogProb {
            ln: self.to_float(bits).ln(),
            digits,
        })
    }
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// A positive probability held through its natural logarithm at a fixed
/// number of significant decimal digits.
#[derive(Clone, Debug)]
pub struct LogProb {
    ln: Float,
    digits: u32,
}

impl LogProb {
    pub(crate) fn from_ln(ln: Float, digits: u32) -> Self {
        LogProb { ln, digits }
    }

    pub fn ln(&self) -> &Float {
        &self.ln
    }

    pub fn ln_f64(&self) -> f64 {
        hp::to_f64(&self.ln)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn to_float(&self) -> Float {
        self.ln.exp()
    }

    pub fn to_f64(&self) -> f64 {
        let ln = self.ln_f64();
        if ln < -800.0 {
            return 0.0;
        }
        hp::to_f64(&self.to_float())
    }
}

/// Result of a probability computation in whichever regime was feasible.
#[derive(Clone, Debug)]
pub enum Probability {
    Exact(ExactProb),
    Log(LogProb),
}

impl Probability {
    pub fn to_f64(&self) -> f64 {
        match self {
            Probability::Exact(p) => p.to_f64(),
            Probability::Log(p) => p.to_f64(),
        }
    }

    pub fn to_float(&self, bits: usize) -> Float {
        match self {
            Probability::Exact(p) => p.to_float(bits),
            Probability::Log(p) => p.to_float(),
        }
    }

    pub fn as_exact(&self) -> Option<&ExactProb> {
        match self {
            Probability::Exact(p) => Some(p),
            Probability::Log(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Probability::Exact(_))
    }
}

/// Where the numbers of a [`CdfTable`] come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// Exhaustive enumeration or exact rational formula.
    Exact,
    /// Closed-form evaluation in the log domain at `digits` digits.
    ClosedForm { digits: u32 },
    MonteCarlo { trials: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum CdfValues {
    Exact(Vec<BigRational>),
    Decimal { cdf: Vec<f64>, stderr: Option<Vec<f64>> },
}

/// A c.d.f. on `d = 0..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CdfTable {
    pub n: usize,
    pub values: CdfValues,
    pub provenance: Provenance,
}

impl CdfTable {
    pub fn exact(values: Vec<BigRational>) -> Self {
        CdfTable {
            n: values.len() - 1,
            values: CdfValues::Exact(values),
            provenance: Provenance::Exact,
        }
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get_f64(&self, d: usize) -> f64 {
        match &self.values {
            CdfValues::Exact(v) => v[d].to_f64().unwrap_or(f64::NAN),
            CdfValues::Decimal { cdf, .. } => cdf[d],
        }
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        (0..=self.n).map(|d| self.get_f64(d)).collect()
    }

    pub fn exact_values(&self) -> Option<&[BigRational]> {
        match &self.values {
            CdfValues::Exact(v) => Some(v),
            CdfValues::Decimal { .. } => None,
        }
    }

    pub fn stderr(&self) -> Option<&[f64]> {
        match &self.values {
            CdfValues::Decimal { stderr: Some(s), .. } => Some(s),
            _ => None,
        }
    }

    /// Nondecreasing, and pinned to 1 at `d = n` unless sampled.
    pub fn is_consistent(&self) -> bool {
        let monotone = match &self.values {
            CdfValues::Exact(v) => v.windows(2).all(|w| w[0] <= w[1]),
            CdfValues::Decimal { cdf, .. } => cdf.windows(2).all(|w| w[0] <= w[1]),
        };
        let top = match (&self.values, self.provenance) {
            (CdfValues::Exact(v), _) => v[self.n].is_one(),
            (_, Provenance::MonteCarlo { .. }) => true,
            (CdfValues::Decimal { cdf, .. }, _) => (cdf[self.n] - 1.0).abs() < 1e-12,
        };
        monotone && top
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn exact_prob_range() {
        assert!(ExactProb::new(r(1, 2)).is_ok());
        assert!(ExactProb::new(r(3, 2)).is_err());
        assert!(ExactProb::new(r(-1, 2)).is_err());
        assert_eq!(ExactProb::new(r(2, 4)).unwrap().to_string(), "1/2");
        assert_eq!(ExactProb::new(r(1, 4)).unwrap().complement().to_string(), "3/4");
    }

    #[test]
    fn log_round_trip_holds_to_requested_digits() {
        for (a, b) in [(1i64, 3i64), (5, 16), (1, 1), (1, 1 << 40)] {
            let p = ExactProb::new(r(a, b)).unwrap();
            let lp = p.to_log(60).unwrap();
            let bits = hp::working_bits(80);
            let back = lp.to_float().with_precision(bits).value();
            let rel = hp::to_f64(&((back - p.to_float(bits)) / p.to_float(bits)));
            assert!(rel.abs() < 1e-58, "{a}/{b}: {rel}");
        }
        assert!(ExactProb::zero().to_log(60).is_none());
    }

    #[test]
    fn table_consistency() {
        let t = CdfTable::exact(vec![r(1, 4), r(3, 4), r(1, 1)]);
        assert!(t.is_consistent());
        let bad = CdfTable::exact(vec![r(1, 2), r(1, 4), r(1, 1)]);
        assert!(!bad.is_consistent());
    }
}
