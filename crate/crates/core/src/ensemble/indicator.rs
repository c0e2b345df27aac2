//! Exact joint laws of the weights of linear combinations of independent
//! uniform vectors.
//!
//! For `X_1..X_k` i.i.d. uniform on `F_q^n` and fixed `v^1..v^l` in `F_q^k`,
//! the coordinates of the codewords `sum_j v^i_j X_j` are i.i.d. across the
//! `n` positions. At one position the set of nonzero codewords has a law
//! found by enumerating `F_q^k`; a dynamic programme over positions then
//! yields the joint law of the weights, each capped at `cap + 1`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::exact::{check_qnd, ExactProb};
use crate::error::{invalid, Error, Result};
use crate::fqlin::{Elem, FieldSpec};

/// Cap on `q^k` when tabulating per-position patterns.
pub const PATTERN_BUDGET: u64 = 1 << 20;
/// Cap on `n x states x patterns` for the dynamic programme.
pub const DP_BUDGET: u64 = 1 << 28;
/// At most this many combinations in one product.
pub const MAX_FACTORS: usize = 12;

/// Joint law of `l` capped weights: `counts[s] / denominator`, where state
/// `s` encodes `(w_1..w_l)` in base `cap + 2` with `w_1` least significant
/// and `cap + 1` standing for "more than `cap`".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CappedWeightLaw {
    pub n: usize,
    pub cap: usize,
    pub factors: usize,
    pub counts: Vec<BigUint>,
    pub denominator: BigUint,
}

impl CappedWeightLaw {
    fn radix(&self) -> usize {
        self.cap + 2
    }

    pub fn index(&self, weights: &[usize]) -> usize {
        weights.iter().rev().fold(0, |acc, &w| acc * self.radix() + w.min(self.cap + 1))
    }

    pub fn weights(&self, mut index: usize) -> Vec<usize> {
        (0..self.factors)
            .map(|_| {
                let w = index % self.radix();
                index /= self.radix();
                w
            })
            .collect()
    }

    pub fn prob(&self, weights: &[usize]) -> BigRational {
        self.ratio(self.counts[self.index(weights)].clone())
    }

    fn ratio(&self, num: BigUint) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(self.denominator.clone()))
    }

    /// `P{w_i <= d for every i}`, for `d <= cap`.
    pub fn prob_all_at_most(&self, d: usize) -> BigRational {
        assert!(d <= self.cap, "threshold above the cap");
        let total = self
            .counts
            .iter()
            .enumerate()
            .filter(|&(s, _)| self.weights(s).iter().all(|&w| w <= d))
            .map(|(_, c)| c)
            .sum();
        self.ratio(total)
    }

    /// Law of `w_i` alone.
    pub fn marginal(&self, i: usize) -> Vec<BigRational> {
        let mut m = vec![BigUint::zero(); self.radix()];
        for (s, c) in self.counts.iter().enumerate() {
            m[self.weights(s)[i]] += c;
        }
        m.into_iter().map(|c| self.ratio(c)).collect()
    }
}

/// Joint law of `(min(wt(sum_j v^i_j X_j), cap + 1))_i`.
pub fn capped_weight_law(q: u32, n: usize, cap: usize, vectors: &[Vec<Elem>]) -> Result<CappedWeightLaw> {
    check_qnd(q, n, 0)?;
    if vectors.is_empty() || vectors.len() > MAX_FACTORS {
        return Err(invalid(format!("need 1..={MAX_FACTORS} combinations, got {}", vectors.len())));
    }
    let k = vectors[0].len();
    if k == 0 || vectors.iter().any(|v| v.len() != k) {
        return Err(invalid("combination vectors must share a positive length k"));
    }
    if vectors.iter().flatten().any(|&x| x as u32 >= q) {
        return Err(invalid(format!("entry outside F_{q}")));
    }
    let field = FieldSpec::with_order(q)?;
    let space = (q as u64)
        .checked_pow(k as u32)
        .filter(|&s| s <= PATTERN_BUDGET)
        .ok_or(Error::Budget {
            what: "per-position patterns (q^k)",
            needed: (q as u128).saturating_pow(k as u32),
            cap: PATTERN_BUDGET as u128,
        })?;

    let l = vectors.len();
    let mut pattern = vec![0u64; 1 << l];
    let mut x = vec![0 as Elem; k];
    for idx in 0..space {
        let mut r = idx;
        for xj in x.iter_mut() {
            *xj = (r % q as u64) as Elem;
            r /= q as u64;
        }
        let mut mask = 0usize;
        for (i, v) in vectors.iter().enumerate() {
            let dot = v.iter().zip(&x).fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)));
            if dot != 0 {
                mask |= 1 << i;
            }
        }
        pattern[mask] += 1;
    }
    let patterns: Vec<(usize, u64)> = pattern.into_iter().enumerate().filter(|&(_, c)| c > 0).collect();

    let cap = cap.min(n);
    let radix = cap + 2;
    let states = (radix as u64).checked_pow(l as u32).unwrap_or(u64::MAX);
    let work = states.saturating_mul(n as u64).saturating_mul(patterns.len() as u64);
    if work > DP_BUDGET {
        return Err(Error::Budget {
            what: "weight-law dynamic programme",
            needed: work as u128,
            cap: DP_BUDGET as u128,
        });
    }
    let states = states as usize;
    let steps: Vec<Vec<usize>> = patterns
        .iter()
        .map(|&(mask, _)| {
            // index offsets of the factors this pattern increments
            (0..l).filter(|i| mask >> i & 1 == 1).map(|i| radix.pow(i as u32)).collect()
        })
        .collect();
    let mut dp = vec![BigUint::zero(); states];
    dp[0] = BigUint::from(1u32);
    let mut next = vec![BigUint::zero(); states];
    for _ in 0..n {
        next.iter_mut().for_each(|c| c.set_zero());
        for s in 0..states {
            if dp[s].is_zero() {
                continue;
            }
            for (&(_, count), step) in patterns.iter().zip(&steps) {
                let mut t = s;
                for &unit in step {
                    if (t / unit) % radix <= cap {
                        t += unit;
                    }
                }
                next[t] += &dp[s] * count;
            }
        }
        std::mem::swap(&mut dp, &mut next);
    }
    Ok(CappedWeightLaw {
        n,
        cap,
        factors: l,
        counts: dp,
        denominator: BigUint::from(space).pow(n as u32),
    })
}

/// `E[prod_i W_{v^i}(d)]`: the probability that every combination
/// `sum_j v^i_j X_j` has weight at most `d`.
pub fn indicator_product_exact(q: u32, n: usize, d: usize, vectors: &[Vec<Elem>]) -> Result<ExactProb> {
    check_qnd(q, n, d)?;
    let law = capped_weight_law(q, n, d, vectors)?;
    ExactProb::new(law.prob_all_at_most(d))
}

/// Exact joint law of `(wt(Y_1), wt(Y_2), wt(Y_1 + Y_2))` for independent
/// uniform `Y_1, Y_2` in `F_q^n`.
pub fn joint_weight_triple(q: u32, n: usize) -> Result<CappedWeightLaw> {
    joint_weight_triple_capped(q, n, n)
}

/// As [`joint_weight_triple`], with weights above `cap` lumped together.
pub fn joint_weight_triple_capped(q: u32, n: usize, cap: usize) -> Result<CappedWeightLaw> {
    capped_weight_law(q, n, cap, &[vec![1, 0], vec![0, 1], vec![1, 1]])
}
