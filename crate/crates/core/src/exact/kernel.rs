use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive};
use serde::Serialize;

use super::binom::{binomial, sphere_volumes};
use super::hp::{self, Float};
use super::prob::{CdfTable, CdfValues, ExactProb, LogProb, Probability, Provenance};
use crate::error::{invalid, Error, Result};
use crate::fqlin::{prime_power, MAX_ORDER};

/// Up to this many independent vectors the minimum-weight c.d.f. is exact.
pub const EXACT_CLASS_LIMIT: u64 = 1 << 20;

/// Bit-size cap on `(q^n)^{m'}` for the exact regime; larger powers go to
/// the log domain even when `m'` is within [`EXACT_CLASS_LIMIT`].
pub const EXACT_BIT_LIMIT: u64 = 1 << 24;

pub(crate) fn check_field(q: u32) -> Result<()> {
    if q > MAX_ORDER || prime_power(q).is_none() {
        return Err(invalid(format!("q = {q} is not a prime power <= 2^16")));
    }
    Ok(())
}

pub(crate) fn check_qnd(q: u32, n: usize, d: usize) -> Result<()> {
    check_field(q)?;
    if n == 0 {
        return Err(invalid("length n must be at least 1"));
    }
    if d > n {
        return Err(invalid(format!("d = {d} exceeds n = {n}")));
    }
    Ok(())
}

pub(crate) fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(invalid(format!("dimension k = {k} must satisfy 1 <= k <= n = {n}")));
    }
    Ok(())
}

/// `(q^k - 1)/(q - 1)`: one vector per proportionality class of messages.
pub fn class_count_big(q: u32, k: usize) -> BigUint {
    (BigUint::from(q).pow(k as u32) - 1u32) / (q - 1)
}

fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

/// `P{wt(X) <= d}` for `X` uniform on `F_q^n`.
pub fn rho(q: u32, n: usize, d: usize) -> Result<ExactProb> {
    check_qnd(q, n, d)?;
    let v = sphere_volumes(q, n);
    ExactProb::from_parts(v.cumulative[d].clone(), v.total.clone())
}

/// Numeric regime for the minimum-weight c.d.f.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Auto,
    Exact,
    LogDomain,
}

/// The regime [`Regime::Auto`] resolves to.
pub fn regime_for(q: u32, n: usize, k: usize) -> Regime {
    let classes = class_count_big(q, k);
    let fits = classes
        .to_u64()
        .filter(|&m| m <= EXACT_CLASS_LIMIT)
        .map(|m| m.saturating_mul(BigUint::from(q).pow(n as u32).bits()) <= EXACT_BIT_LIMIT);
    match fits {
        Some(true) => Regime::Exact,
        _ => Regime::LogDomain,
    }
}

/// `ln P{w_min > d} = m' ln(1 - rho_d)`, or `None` when the probability is 0.
pub fn wmin_ln_survival(q: u32, n: usize, k: usize, d: usize, digits: u32) -> Result<Option<Float>> {
    check_qnd(q, n, d)?;
    check_k(n, k)?;
    let v = sphere_volumes(q, n);
    if v.cumulative[d] == v.total {
        return Ok(None);
    }
    let bits = hp::working_bits(digits);
    let total = hp::uint_to_float(&v.total, bits);
    let m = hp::uint_to_float(&class_count_big(q, k), bits);
    // ln_1p for small rho; near rho = 1 use the exact integer complement
    let ln_miss = if &v.cumulative[d] * 2u32 <= v.total {
        (-(hp::uint_to_float(&v.cumulative[d], bits) / total)).ln_1p()
    } else {
        (hp::uint_to_float(&(&v.total - &v.cumulative[d]), bits) / total).ln()
    };
    Ok(Some(ln_miss * m))
}

/// `F_wmin(d) = 1 - (1 - rho_d)^{m'}` with `m' = (q^k - 1)/(q - 1)`.
pub fn wmin_cdf(q: u32, n: usize, k: usize, d: usize) -> Result<Probability> {
    wmin_cdf_with(q, n, k, d, Regime::Auto, hp::DEFAULT_DIGITS)
}

pub fn wmin_cdf_with(q: u32, n: usize, k: usize, d: usize, regime: Regime, digits: u32) -> Result<Probability> {
    check_qnd(q, n, d)?;
    check_k(n, k)?;
    let regime = match regime {
        Regime::Auto => regime_for(q, n, k),
        r => r,
    };
    match regime {
        Regime::Exact => exact_cdf(q, n, k, d).map(Probability::Exact),
        _ => log_cdf(q, n, k, d, digits),
    }
}

fn exact_cdf(q: u32, n: usize, k: usize, d: usize) -> Result<ExactProb> {
    let classes = class_count_big(q, k);
    let m = classes
        .to_u64()
        .filter(|&m| m <= EXACT_CLASS_LIMIT)
        .ok_or(Error::Budget {
            what: "exact minimum-weight c.d.f. (classes)",
            needed: classes.to_u128().unwrap_or(u128::MAX),
            cap: EXACT_CLASS_LIMIT as u128,
        })?;
    let v = sphere_volumes(q, n);
    let miss = &v.total - &v.cumulative[d];
    let survival = ratio(&Pow::pow(miss, m), &Pow::pow(v.total.clone(), m));
    ExactProb::new(BigRational::one() - survival)
}

fn log_cdf(q: u32, n: usize, k: usize, d: usize, digits: u32) -> Result<Probability> {
    let bits = hp::working_bits(digits);
    let Some(x) = wmin_ln_survival(q, n, k, d, digits)? else {
        return Ok(Probability::Exact(ExactProb::one()));
    };
    // F = -expm1(x); below the negligible threshold the survival term vanishes.
    let ln = if hp::to_f64(&x) < -hp::negligible_log(digits) {
        hp::zero(bits)
    } else {
        (-x.exp_m1()).ln()
    };
    Ok(Probability::Log(LogProb::from_ln(ln, digits)))
}

/// `F_wmin(d)` for every `d = 0..=n`.
pub fn wmin_cdf_table(q: u32, n: usize, k: usize, regime: Regime, digits: u32) -> Result<CdfTable> {
    check_qnd(q, n, 0)?;
    check_k(n, k)?;
    let regime = match regime {
        Regime::Auto => regime_for(q, n, k),
        r => r,
    };
    let probs = (0..=n)
        .map(|d| wmin_cdf_with(q, n, k, d, regime, digits))
        .collect::<Result<Vec<_>>>()?;
    Ok(match regime {
        Regime::Exact => CdfTable::exact(
            probs
                .into_iter()
                .map(|p| p.as_exact().expect("exact regime").value().clone())
                .collect(),
        ),
        _ => CdfTable {
            n,
            values: CdfValues::Decimal {
                cdf: probs.iter().map(Probability::to_f64).collect(),
                stderr: None,
            },
            provenance: Provenance::ClosedForm { digits },
        },
    })
}

/// Bracketing of `rho_d / (C(n,d) q^{-n} (q-1)^d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioBounds {
    pub lower: BigRational,
    pub exact: BigRational,
    pub upper: BigRational,
}

impl RatioBounds {
    pub fn holds(&self) -> bool {
        self.lower <= self.exact && self.exact <= self.upper
    }
}

/// Lower bound from the first `t` terms of the tail series and the
/// geometric upper bound, next to the exact ratio.
pub fn rho_ratio_bounds(q: u32, n: usize, d: usize, t: usize) -> Result<RatioBounds> {
    check_qnd(q, n, d)?;
    if d == 0 {
        let one = BigRational::one();
        return Ok(RatioBounds {
            lower: one.clone(),
            exact: one.clone(),
            upper: one,
        });
    }
    if t == 0 || t > d {
        return Err(invalid(format!("t = {t} must satisfy 1 <= t <= d = {d}")));
    }
    let v = sphere_volumes(q, n);
    let qm1 = BigInt::from(q - 1);
    let lead = BigInt::from(binomial(n, d)) * Pow::pow(&qm1, d);
    let exact = BigRational::new(BigInt::from(v.cumulative[d].clone()), lead);

    let (n, d, t) = (BigInt::from(n), BigInt::from(d), BigInt::from(t));
    let up_den: BigInt = (&n - &d + BigInt::one()) * &qm1;
    if up_den <= d {
        return Err(Error::Degenerate(format!(
            "d = {d} is too close to (1 - 1/q) n: (n - d + 1)(q - 1) <= d"
        )));
    }
    let upper = BigRational::new(up_den.clone(), up_den - &d);

    let x = BigRational::new(&d - &t + BigInt::one(), (&n - &d + &t) * &qm1);
    if x >= BigRational::one() {
        return Err(Error::Degenerate(format!(
            "series ratio (d - t + 1)/((n - d + t)(q - 1)) = {x} is not below 1"
        )));
    }
    let t_exp = t.to_u32().expect("t <= d <= n fits u32");
    let lower = (BigRational::one() - Pow::pow(&x, t_exp)) / (BigRational::one() - x);
    Ok(RatioBounds { lower, exact, upper })
}

/// `rho_{d+t} / rho_d` next to `((q-1)(n-d)/d)^t`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRatio {
    pub ratio: BigRational,
    pub reference: BigRational,
    /// `|ratio / reference - 1|`.
    pub relative_gap: f64,
}

pub fn rho_step_ratio(q: u32, n: usize, d: usize, t: usize) -> Result<StepRatio> {
    check_qnd(q, n, d)?;
    if d == 0 {
        return Err(invalid("d must be at least 1"));
    }
    if d + t > n {
        return Err(invalid(format!("d + t = {} exceeds n = {n}", d + t)));
    }
    let v = sphere_volumes(q, n);
    let ratio = ratio(&v.cumulative[d + t], &v.cumulative[d]);
    let base = BigRational::new(BigInt::from((q as usize - 1) * (n - d)), BigInt::from(d));
    let reference = Pow::pow(base, t as u32);
    let gap = (&ratio / &reference) - BigRational::one();
    let relative_gap = gap.to_f64().map(f64::abs).unwrap_or(f64::NAN);
    Ok(StepRatio {
        ratio,
        reference,
        relative_gap,
    })
}

/// `H_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x)`, with `H_q(0) = 0`.
pub fn entropy(q: u32, x: f64) -> Result<f64> {
    if q < 2 {
        return Err(invalid("q must be at least 2"));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(invalid(format!("entropy argument {x} outside [0, 1)")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let lq = (q as f64).ln();
    Ok((x * ((q - 1) as f64).ln() - x * x.ln() - (1.0 - x) * (1.0 - x).ln()) / lq)
}

/// Natural log of a positive big integer.
pub(crate) fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit head");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `|(1/n) log_q(rho_{floor(xn)} q^n) - H_q(x)|`.
pub fn entropy_gap(q: u32, n: usize, x: f64) -> Result<f64> {
    check_qnd(q, n, 0)?;
    if !(x > 0.0 && x < 1.0 - 1.0 / q as f64) {
        return Err(invalid(format!("x = {x} outside (0, 1 - 1/q)")));
    }
    let d = (x * n as f64).floor() as usize;
    let v = sphere_volumes(q, n);
    let empirical = ln_biguint(&v.cumulative[d]) / (q as f64).ln() / n as f64;
    Ok((empirical - entropy(q, x)?).abs())
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    /// Reference: count vectors of weight <= d in F_q^n directly.
    fn rho_bruteforce(q: u32, n: usize, d: usize) -> BigRational {
        let total = (q as u64).pow(n as u32);
        let hits = (0..total)
            .filter(|&v| {
                let mut x = v;
                let mut w = 0;
                for _ in 0..n {
                    w += (x % q as u64 != 0) as usize;
                    x /= q as u64;
                }
                w <= d
            })
            .count();
        r(hits as i64, total as i64)
    }

    #[test]
    fn ln_survival_near_full_ball() {
        // 1 - rho_{n-1} = q^{-n}, far below the working precision of rho
        let x = wmin_ln_survival(2, 1024, 512, 1023, 60).unwrap().unwrap();
        let m = hp::uint_to_float(&class_count_big(2, 512), 300);
        let want = -(m * Float::from(1024) * Float::from(2).with_precision(300).value().ln());
        let rel = hp::to_f64(&((x - want.clone()) / want));
        assert!(rel.abs() < 1e-50, "{rel}");
        assert!(wmin_ln_survival(2, 1024, 512, 1024, 60).unwrap().is_none());
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(2, 4, 1).unwrap().value(), &r(5, 16));
        assert_eq!(rho(2, 4, 4).unwrap().value(), &r(1, 1));
        assert_eq!(rho(3, 2, 0).unwrap().value(), &r(1, 9));
        assert!(rho(2, 4, 5).is_err());
        assert!(rho(6, 4, 1).is_err());
    }

    #[test]
    fn rho_matches_bruteforce_and_is_monotone() {
        for (q, n) in [(2, 6), (3, 5), (4, 4), (5, 3)] {
            let mut prev = BigRational::zero();
            for d in 0..=n {
                let v = rho(q, n, d).unwrap().into_inner();
                assert_eq!(v, rho_bruteforce(q, n, d));
                assert!(v >= prev);
                prev = v;
            }
            assert_eq!(rho(q, n, 0).unwrap().value(), &r(1, (q as i64).pow(n as u32)));
        }
    }

    #[test]
    fn wmin_single_generator_is_rho() {
        for n in 1..6 {
            for d in 0..=n {
                let p = wmin_cdf(2, n, 1, d).unwrap();
                assert_eq!(p.as_exact().unwrap(), &rho(2, n, d).unwrap());
            }
        }
    }

    #[test]
    fn wmin_examples() {
        assert_eq!(wmin_cdf(2, 2, 2, 1).unwrap().as_exact().unwrap().value(), &r(63, 64));
        assert_eq!(wmin_cdf(2, 2, 2, 0).unwrap().as_exact().unwrap().value(), &r(37, 64));
    }

    #[test]
    fn log_domain_agrees_with_exact() {
        let bits = hp::working_bits(80);
        for (q, n, k) in [(2, 8, 3), (3, 6, 2), (2, 12, 6), (4, 5, 2), (2, 20, 10)] {
            for d in 0..=n {
                let exact = wmin_cdf_with(q, n, k, d, Regime::Exact, 60).unwrap();
                let logd = wmin_cdf_with(q, n, k, d, Regime::LogDomain, 60).unwrap();
                let e = exact.to_float(bits);
                let l = logd.to_float(bits).with_precision(bits).value();
                let rel = hp::to_f64(&((l - e.clone()) / e)).abs();
                assert!(rel < 1e-40, "q={q} n={n} k={k} d={d}: {rel}");
            }
        }
    }

    #[test]
    fn regime_switchover() {
        assert_eq!(regime_for(2, 16, 16), Regime::Exact);
        assert_eq!(regime_for(2, 21, 21), Regime::LogDomain);
        // within the class limit but the power would exceed the bit budget
        assert_eq!(regime_for(2, 40, 20), Regime::LogDomain);
        assert_eq!(regime_for(2, 4096, 10), Regime::Exact);
        assert_eq!(regime_for(2, 4096, 13), Regime::LogDomain);
        assert!(matches!(
            wmin_cdf_with(2, 64, 32, 5, Regime::Exact, 60),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn large_instance_cdf_table_is_monotone() {
        let t = wmin_cdf_table(2, 128, 64, Regime::Auto, 60).unwrap();
        assert!(t.is_consistent());
        assert_eq!(t.provenance, Provenance::ClosedForm { digits: 60 });
        assert!(t.get_f64(5) < 1e-6);
        assert!(t.get_f64(30) > 1.0 - 1e-12);
    }

    #[test]
    fn ratio_bounds_examples() {
        let b = rho_ratio_bounds(2, 4, 1, 1).unwrap();
        assert_eq!(b.exact, r(5, 4));
        assert_eq!(b.upper, r(4, 3));
        assert!(b.holds());
        let z = rho_ratio_bounds(3, 10, 0, 1).unwrap();
        assert_eq!((z.lower.clone(), z.exact.clone(), z.upper.clone()), (r(1, 1), r(1, 1), r(1, 1)));
        assert!(rho_ratio_bounds(3, 30, 10, 3).unwrap().holds());
    }

    #[test]
    fn ratio_bounds_errors() {
        assert!(rho_ratio_bounds(2, 10, 3, 0).is_err());
        assert!(rho_ratio_bounds(2, 10, 3, 4).is_err());
        // (n - d + 1)(q - 1) = 4 <= d = 6
        assert!(matches!(rho_ratio_bounds(2, 9, 6, 1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn step_ratio_examples() {
        let s = rho_step_ratio(2, 4, 1, 1).unwrap();
        assert_eq!(s.ratio, r(11, 5));
        assert_eq!(s.reference, r(3, 1));
        let z = rho_step_ratio(2, 4, 1, 0).unwrap();
        assert_eq!((z.ratio, z.reference), (r(1, 1), r(1, 1)));
        assert!(rho_step_ratio(2, 4, 0, 1).is_err());
        assert!(rho_step_ratio(2, 4, 3, 2).is_err());
    }

    #[test]
    fn step_ratio_large_n() {
        let s = rho_step_ratio(2, 10_000, 2500, 1).unwrap();
        assert!(s.relative_gap <= 0.01, "{}", s.relative_gap);
    }

    #[test]
    fn entropy_values() {
        assert!((entropy(2, 0.5).unwrap() - 1.0).abs() < 1e-15);
        for q in [2u32, 3, 4] {
            assert!((entropy(q, 1.0 - 1.0 / q as f64).unwrap() - 1.0).abs() < 1e-14);
        }
        assert_eq!(entropy(2, 0.0).unwrap(), 0.0);
        assert!(entropy(2, 1.0).is_err());
        assert!(entropy(2, -0.1).is_err());
    }

    #[test]
    fn entropy_gap_small_at_moderate_n() {
        assert!(entropy_gap(2, 2000, 0.25).unwrap() <= 0.02);
    }

    #[test]
    fn ln_of_huge_integers() {
        let x = BigUint::one() << 5000u32;
        assert!((ln_biguint(&x) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert!((ln_biguint(&BigUint::from(10u32)) - 10f64.ln()).abs() < 1e-15);
    }
}
