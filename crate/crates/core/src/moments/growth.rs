use num_traits::Zero;
use serde::Serialize;

use super::zmoments::ztilde_moment;
use crate::exact::{ln_biguint, rho, ExactProb};
use crate::error::{invalid, Result};

/// Largest value of `(E Z~^l)^{1/l} / bound` over `q <= 4`, `k <= 6`,
/// `n <= 12`, all `d`, `l <= 12` (observed maximum 4.2183), rounded up.
pub const GROWTH_CALIBRATION: f64 = 4.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthBranch {
    /// `l <= q^k rho / (q-1)`: the bound is `q^k rho / (q-1)`.
    Linear,
    /// `l > q^k rho / (q-1)`: the bound is `l / ln(e l (q-1) / (q^k rho))`.
    Logarithmic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthBound {
    pub value: f64,
    pub branch: GrowthBranch,
    /// `q^k rho / (q-1)`
    pub lambda: f64,
}

/// Growth rate of `(E Z~^l)^{1/l}`, up to a constant factor.
pub fn moment_growth_bound(q: u32, k: usize, rho: &ExactProb, l: usize) -> Result<GrowthBound> {
    if l == 0 {
        return Err(invalid("order l must be at least 1"));
    }
    if rho.value().is_zero() {
        return Err(invalid("rho must be positive"));
    }
    let ln_rho = ln_biguint(&rho.value().numer().to_biguint().expect("nonnegative"))
        - ln_biguint(&rho.value().denom().to_biguint().expect("positive"));
    let ln_lambda = k as f64 * (q as f64).ln() + ln_rho - ((q - 1) as f64).ln();
    let lambda = ln_lambda.exp();
    let lf = l as f64;
    Ok(if lf <= lambda {
        GrowthBound {
            value: lambda,
            branch: GrowthBranch::Linear,
            lambda,
        }
    } else {
        GrowthBound {
            value: lf / (1.0 + lf.ln() - ln_lambda),
            branch: GrowthBranch::Logarithmic,
            lambda,
        }
    })
}

/// `(E Z~_d^l)^{1/l}` divided by [`moment_growth_bound`].
pub fn moment_growth_ratio(q: u32, n: usize, k: usize, d: usize, l: usize) -> Result<f64> {
    let m = ztilde_moment(q, n, k, d, l)?;
    let bound = moment_growth_bound(q, k, &rho(q, n, d)?, l)?;
    let ln_m = ln_biguint(&m.numer().to_biguint().expect("nonnegative"))
        - ln_biguint(&m.denom().to_biguint().expect("positive"));
    Ok((ln_m / l as f64).exp() / bound.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_selection() {
        let p = rho(2, 8, 2).unwrap(); // 37/256
        let lam = 16.0 * 37.0 / 256.0;
        assert_eq!(moment_growth_bound(2, 4, &p, 2).unwrap().branch, GrowthBranch::Linear);
        let b = moment_growth_bound(2, 4, &p, 3).unwrap();
        assert_eq!(b.branch, GrowthBranch::Logarithmic);
        assert!((b.lambda - lam).abs() < 1e-12);
        assert!(moment_growth_bound(2, 4, &p, 0).is_err());
    }

    #[test]
    fn calibrated_example() {
        let p = rho(2, 8, 2).unwrap();
        let b = moment_growth_bound(2, 4, &p, 10).unwrap();
        assert!((b.value - 4.05802010639047).abs() < 1e-10);
        let ratio = moment_growth_ratio(2, 8, 4, 2, 10).unwrap();
        assert!((ratio - 1.07829906866115).abs() < 1e-10);
    }

    #[test]
    fn ratio_bounded_on_grid() {
        for q in [2u32, 3, 4] {
            for k in 1..=6usize {
                for n in k.max(2)..=12 {
                    for d in 0..=n {
                        for l in 1..=12 {
                            let r = moment_growth_ratio(q, n, k, d, l).unwrap();
                            assert!(r.is_finite() && r > 0.0 && r <= GROWTH_CALIBRATION, "q={q} k={k} n={n} d={d} l={l}: {r}");
                        }
                    }
                }
            }
        }
    }
}
