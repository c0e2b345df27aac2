use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive, Zero};
use serde::Serialize;

use super::combinatorics::{omega_count, stirling2, MAX_ORDER};
use super::vector::{MomentModel, MomentValues, MomentVector};
use crate::ensemble::{draw_generators, par_trials, trial_rng, DEFAULT_BUDGET};
use crate::exact::{check_k, check_qnd, rho};
use crate::error::{invalid, Error, Result};
use crate::fqlin::{class_count, for_each_class_weight, Elem, FieldSpec, GeneratorSet};

/// Cap on `q^{nk}` for exhaustive code-model moments.
pub const EXACT_TINY_BUDGET: u64 = 1 << 30;

fn check_order(m: usize) -> Result<()> {
    if m == 0 || m > MAX_ORDER {
        return Err(invalid(format!("moment order {m} outside 1..={MAX_ORDER}")));
    }
    Ok(())
}

/// `E[Z~_d^m] = sum_{j=1}^m S(m,j) (q-1)^{m-j} |Omega_j| rho_d^j`.
pub fn ztilde_moment(q: u32, n: usize, k: usize, d: usize, m: usize) -> Result<BigRational> {
    check_qnd(q, n, d)?;
    check_k(n, k)?;
    check_order(m)?;
    let rho = rho(q, n, d)?.into_inner();
    let qm1 = BigInt::from(q - 1);
    let mut acc = BigRational::zero();
    let mut rho_j = rho.clone();
    for j in 1..=m {
        let coeff = BigInt::from(stirling2(m, j)? * omega_count(q, k, j)) * Pow::pow(&qm1, (m - j) as u32);
        acc += &rho_j * BigRational::from_integer(coeff);
        rho_j *= &rho;
    }
    Ok(acc)
}

/// Exact moments of orders `1..=h` of `Z~_d`.
pub fn ztilde_moments(q: u32, n: usize, k: usize, d: usize, h: usize) -> Result<MomentVector> {
    let v = (1..=h).map(|m| ztilde_moment(q, n, k, d, m)).collect::<Result<_>>()?;
    Ok(MomentVector::exact(MomentModel::Independent, v))
}

/// How code-model moments are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ZMethod {
    /// Every `k`-tuple of generators in `F_q^n`.
    ExactTiny,
    MonteCarlo { trials: u64, seed: u64, workers: usize },
}

/// Law of `Z_d = #{nonzero a : wt(sum a_i X_i) <= d}` for i.i.d. uniform,
/// unconditioned generators, as a histogram over `total` draws.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZSample {
    pub method: ZMethod,
    pub histogram: BTreeMap<u64, u64>,
    pub total: u64,
}

fn z_of(g: &GeneratorSet, d: usize) -> u64 {
    let mut hits = 0u64;
    for_each_class_weight(g, |w| hits += (w as usize <= d) as u64);
    hits * (g.field().order() as u64 - 1)
}

pub fn z_sample(q: u32, n: usize, k: usize, d: usize, method: ZMethod) -> Result<ZSample> {
    check_qnd(q, n, d)?;
    check_k(n, k)?;
    let field = Arc::new(FieldSpec::with_order(q)?);
    let classes = class_count(q, k).ok_or_else(|| invalid(format!("q^k = {q}^{k} is too large")))?;
    match method {
        ZMethod::ExactTiny => {
            let size = BigUint::from(q).pow((n * k) as u32);
            let size = size.to_u64().filter(|&s| s <= EXACT_TINY_BUDGET).ok_or(Error::Budget {
                what: "generator tuples (q^{nk})",
                needed: size.to_u128().unwrap_or(u128::MAX),
                cap: EXACT_TINY_BUDGET as u128,
            })?;
            let mut histogram = BTreeMap::new();
            let mut digits = vec![0 as Elem; n * k];
            for idx in 0..size {
                if idx > 0 {
                    for x in digits.iter_mut() {
                        *x += 1;
                        if (*x as u32) < q {
                            break;
                        }
                        *x = 0;
                    }
                }
                let rows = digits.chunks(n).map(<[Elem]>::to_vec).collect();
                let g = GeneratorSet::from_rows(field.clone(), rows)?;
                *histogram.entry(z_of(&g, d)).or_insert(0) += 1;
            }
            Ok(ZSample {
                method,
                histogram,
                total: size,
            })
        }
        ZMethod::MonteCarlo { trials, seed, workers } => {
            if trials == 0 || workers == 0 {
                return Err(invalid("trials and workers must be at least 1"));
            }
            let visits = (classes as u128) * trials as u128;
            if visits > DEFAULT_BUDGET as u128 {
                return Err(Error::Budget {
                    what: "codeword visits",
                    needed: visits,
                    cap: DEFAULT_BUDGET as u128,
                });
            }
            let histogram = par_trials(
                trials,
                workers,
                BTreeMap::new(),
                |mut acc, t| {
                    let mut rng = trial_rng(seed, t);
                    let (g, _) = draw_generators(&field, n, k, false, &mut rng)?;
                    *acc.entry(z_of(&g, d)).or_insert(0) += 1;
                    Ok(acc)
                },
                |mut a, b| {
                    for (z, c) in b {
                        *a.entry(z).or_insert(0) += c;
                    }
                    a
                },
            )?;
            Ok(ZSample {
                method,
                histogram,
                total: trials,
            })
        }
    }
}

impl ZSample {
    /// `P{Z = r}` for `r = 1..=h`, exact.
    pub fn masses(&self, h: usize) -> Vec<BigRational> {
        (1..=h as u64)
            .map(|r| {
                let c = self.histogram.get(&r).copied().unwrap_or(0);
                BigRational::new(c.into(), self.total.into())
            })
            .collect()
    }

    pub fn moments(&self, h: usize) -> Result<MomentVector> {
        (1..=h).try_for_each(check_order)?;
        match self.method {
            ZMethod::ExactTiny => {
                let total = BigInt::from(self.total);
                let values = (1..=h as u32)
                    .map(|m| {
                        let s: BigInt = self
                            .histogram
                            .iter()
                            .map(|(&z, &c)| Pow::pow(BigInt::from(z), m) * c)
                            .sum();
                        BigRational::new(s, total.clone())
                    })
                    .collect();
                Ok(MomentVector::exact(MomentModel::Code, values))
            }
            ZMethod::MonteCarlo { .. } => {
                let t = self.total as f64;
                let (mut mean, mut stderr) = (Vec::new(), Vec::new());
                for m in 1..=h as i32 {
                    let mu: f64 = self.histogram.iter().map(|(&z, &c)| (z as f64).powi(m) * c as f64).sum::<f64>() / t;
                    let ss: f64 = self
                        .histogram
                        .iter()
                        .map(|(&z, &c)| ((z as f64).powi(m) - mu).powi(2) * c as f64)
                        .sum();
                    let var = if self.total > 1 { ss / (t - 1.0) } else { 0.0 };
                    mean.push(mu);
                    stderr.push((var / t).sqrt());
                }
                MomentVector::estimated(MomentModel::Code, mean, stderr)
            }
        }
    }
}

/// One code-model moment with its uncertainty.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub value: f64,
    pub stderr: f64,
    /// Present for exhaustive evaluation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

/// `E[Z_d^m]` under the code ensemble with unconditioned generators.
pub fn z_moment(q: u32, n: usize, k: usize, d: usize, m: usize, method: ZMethod) -> Result<MomentEstimate> {
    check_order(m)?;
    let v = z_sample(q, n, k, d, method)?.moments(m)?;
    let exact = match &v.values {
        MomentValues::Exact(x) => Some(format!("{}/{}", x[m - 1].numer(), x[m - 1].denom())),
        _ => None,
    };
    Ok(MomentEstimate {
        value: v.get_f64(m),
        stderr: v.stderr(m),
        exact,
    })
}
