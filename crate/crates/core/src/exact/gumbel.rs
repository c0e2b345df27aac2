use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::binom::sphere_volumes;
use super::hp::{self, Float};
use super::kernel::{check_k, check_qnd, class_count_big, wmin_ln_survival};
use crate::error::{Error, Result};

/// Centring and scale of the Gumbel approximation to the minimum weight.
///
/// With `m' = (q^k - 1)/(q - 1)`, `d0` is the largest `d` with
/// `u(d) = m' rho_d <= 1`, and `u = u(d0)`. The normalised variable
/// `xi = slope (d0 - w_min) - ln u` lives on the lattice
/// `{slope z - ln u : z integer}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GumbelParams {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub d0: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub u: BigRational,
    /// `ln((q-1)(n-d0)/d0)`; infinite when `d0 = 0`.
    pub slope: f64,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

impl GumbelParams {
    /// Lattice point `slope z - ln u`.
    pub fn lattice_point(&self, z: i64) -> f64 {
        self.slope * z as f64 - self.u.to_f64().unwrap_or(f64::NAN).ln()
    }

    /// `u(d)` for any `d`, exact.
    pub fn u_at(&self, d: usize) -> BigRational {
        u_at(self.q, self.n, self.k, d)
    }
}

fn u_at(q: u32, n: usize, k: usize, d: usize) -> BigRational {
    let v = sphere_volumes(q, n);
    BigRational::new(
        BigInt::from(class_count_big(q, k) * &v.cumulative[d]),
        BigInt::from(v.total.clone()),
    )
}

pub fn gumbel_params(q: u32, n: usize, k: usize) -> Result<GumbelParams> {
    check_qnd(q, n, 0)?;
    check_k(n, k)?;
    let v = sphere_volumes(q, n);
    let m = class_count_big(q, k);
    // u(d) is increasing in d and u(0) = m' q^{-n} <= 1, so d0 exists.
    let lo = v.cumulative.partition_point(|c| &m * c <= v.total);
    let d0 = lo - 1;
    let slope = if d0 == 0 {
        f64::INFINITY
    } else {
        (((q - 1) as f64) * (n - d0) as f64 / d0 as f64).ln()
    };
    Ok(GumbelParams {
        q,
        n,
        k,
        d0,
        u: u_at(q, n, k, d0),
        slope,
    })
}

/// Largest lattice deviation between the minimum-weight law and the Gumbel law.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GumbelDistance {
    pub params: GumbelParams,
    /// `sup_t |P{xi < t} - exp(-e^{-t})|` over lattice points `t`.
    pub sup: f64,
    /// The `d` with `t = slope (d0 - d) - ln u` attaining the supremum.
    pub argmax_d: i64,
}

/// Evaluates `|P{w_min > d} - exp(-u r^{d0-d})|`, `r = d0/((q-1)(n-d0))`, for
/// `d = -1..=n`. Outside that range one term is constant (0 or 1) and the
/// other moves monotonically towards it, so the supremum is attained inside.
pub fn gumbel_sup_distance(q: u32, n: usize, k: usize, digits: u32) -> Result<GumbelDistance> {
    let params = gumbel_params(q, n, k)?;
    let d0 = params.d0;
    if d0 == 0 || (d0 as u64) * (q as u64) >= (n as u64) * (q as u64 - 1) {
        return Err(Error::Degenerate(format!(
            "d0 = {d0} leaves the Gumbel slope undefined (need 0 < d0 < (1 - 1/q) n)"
        )));
    }
    let digits = digits.max(50);
    let bits = hp::working_bits(digits);
    let ln_u = hp::ratio_to_float(&params.u, bits).ln();
    let r = BigRational::new(BigInt::from(d0), BigInt::from((q as usize - 1) * (n - d0)));
    let ln_r = hp::ratio_to_float(&r, bits).ln();
    let overflow = hp::negligible_log(digits).ln();

    let mut sup = hp::zero(bits);
    let mut argmax_d = -1i64;
    for d in -1..=n as i64 {
        let survival = if d < 0 {
            hp::one(bits)
        } else {
            match wmin_ln_survival(q, n, k, d as usize, digits)? {
                Some(x) => hp::exp_nonpositive(&x, digits, bits),
                None => hp::zero(bits),
            }
        };
        let ln_a = ln_u.clone() + ln_r.clone() * Float::from(d0 as i64 - d);
        let gumbel = if hp::to_f64(&ln_a) > overflow {
            hp::zero(bits)
        } else {
            hp::exp_nonpositive(&-ln_a.exp(), digits, bits)
        };
        let diff = if survival >= gumbel {
            survival - gumbel
        } else {
            gumbel - survival
        };
        if diff > sup {
            sup = diff;
            argmax_d = d;
        }
    }
    Ok(GumbelDistance {
        params,
        sup: hp::to_f64(&sup),
        argmax_d,
    })
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::*;

    #[test]
    fn params_example() {
        let p = gumbel_params(2, 16, 8).unwrap();
        assert_eq!(p.d0, 2);
        assert_eq!(p.u, BigRational::new(34935.into(), 65536.into()));
        assert!(p.u_at(3) > BigRational::one());
        let t = gumbel_params(2, 1, 1).unwrap();
        assert_eq!(t.d0, 1);
        assert_eq!(t.u, BigRational::one());
    }

    #[test]
    fn params_match_scan() {
        for (q, n, k) in [(2, 64, 32), (3, 20, 7), (4, 12, 12), (2, 30, 1)] {
            let p = gumbel_params(q, n, k).unwrap();
            let scan = (0..=n).filter(|&d| u_at(q, n, k, d) <= BigRational::one()).max().unwrap();
            assert_eq!(p.d0, scan);
            assert!(p.u <= BigRational::one());
            if p.d0 < n {
                assert!(p.u_at(p.d0 + 1) > BigRational::one());
            }
        }
    }

    #[test]
    fn degenerate_slope_is_an_error() {
        assert!(matches!(gumbel_sup_distance(2, 1, 1, 60), Err(Error::Degenerate(_))));
        assert!(matches!(gumbel_sup_distance(2, 16, 16, 60), Err(Error::Degenerate(_))));
    }

    #[test]
    fn lattice_points_shift_by_slope() {
        let p = gumbel_params(2, 64, 32).unwrap();
        assert!((p.lattice_point(1) - p.lattice_point(0) - p.slope).abs() < 1e-12);
    }

    #[test]
    fn frozen_reference_values() {
        let s128 = gumbel_sup_distance(2, 128, 64, 60).unwrap();
        assert_eq!(s128.params.d0, 15);
        assert_eq!(s128.argmax_d, 14);
        assert!((s128.sup - 0.0019326832342833829688).abs() < 1e-15);
        let s256 = gumbel_sup_distance(2, 256, 128, 60).unwrap();
        assert_eq!((s256.params.d0, s256.argmax_d), (29, 30));
        assert!((s256.sup - 0.0022316628258232030005).abs() < 1e-15);
    }

    #[test]
    fn small_instances_are_bounded() {
        for (q, n, k) in [(2, 16, 8), (3, 12, 4), (2, 40, 10)] {
            let s = gumbel_sup_distance(q, n, k, 60).unwrap();
            assert!((0.0..=1.0).contains(&s.sup));
        }
    }
}
