use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::exact::{binomial, check_field};
use crate::error::{invalid, Error, Result};

/// Largest order for which Stirling numbers are tabulated.
pub const MAX_ORDER: usize = 64;
/// Cap on `q^{k l}` for brute-force rank counts.
pub const RANK_COUNT_BUDGET: u64 = 1 << 26;

fn stirling_table() -> &'static Vec<Vec<BigUint>> {
    static TABLE: OnceLock<Vec<Vec<BigUint>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![vec![BigUint::zero(); MAX_ORDER + 1]; MAX_ORDER + 1];
        t[0][0] = BigUint::one();
        for m in 1..=MAX_ORDER {
            for l in 1..=m {
                t[m][l] = &t[m - 1][l - 1] + &t[m - 1][l] * l;
            }
        }
        t
    })
}

/// Stirling number of the second kind `S(m, l)`, for `l <= m <= 64`.
pub fn stirling2(m: usize, l: usize) -> Result<BigUint> {
    if m > MAX_ORDER || l > m {
        return Err(invalid(format!("S({m}, {l}) needs 0 <= l <= m <= {MAX_ORDER}")));
    }
    Ok(stirling_table()[m][l].clone())
}

/// `|Omega_m| = prod_{i<m} (q^k - i(q-1) - 1)`: ordered `m`-tuples of pairwise
/// non-collinear nonzero vectors of `F_q^k`.
pub fn omega_count(q: u32, k: usize, m: usize) -> BigUint {
    let qk = BigInt::from(q).pow(k as u32);
    let mut acc = BigInt::one();
    for i in 0..m {
        let f = &qk - BigInt::from(i) * (q - 1) - 1;
        if f <= BigInt::zero() {
            return BigUint::zero();
        }
        acc *= f;
    }
    acc.to_biguint().expect("positive")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCount {
    /// Pairwise non-collinear `l`-tuples of rank `r`, by enumeration.
    pub count: u64,
    /// `C(l, r) q^{r(l-r)} prod_{i<r} (q^k - q^i)`.
    pub bound: BigUint,
}

impl RankCount {
    pub fn within_bound(&self) -> bool {
        BigUint::from(self.count) <= self.bound
    }
}

/// Enumerates `Omega_{r,l}`: ordered `l`-tuples of pairwise non-collinear
/// nonzero vectors of `F_q^k` spanning a space of dimension `r`.
pub fn omega_rank_count(q: u32, k: usize, r: usize, l: usize) -> Result<RankCount> {
    check_field(q)?;
    if k == 0 || l == 0 || r == 0 || r > l {
        return Err(invalid(format!("need k >= 1 and 1 <= r <= l, got k={k} r={r} l={l}")));
    }
    let space = (q as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
    let total = BigUint::from(q).pow((k * l) as u32);
    if total > BigUint::from(RANK_COUNT_BUDGET) {
        return Err(Error::Budget {
            what: "rank-count tuples (q^{kl})",
            needed: total.to_u128().unwrap_or(u128::MAX),
            cap: RANK_COUNT_BUDGET as u128,
        });
    }
    let field = crate::fqlin::FieldSpec::with_order(q)?;
    let decode = |mut x: u64| -> Vec<u16> {
        (0..k)
            .map(|_| {
                let e = (x % q as u64) as u16;
                x /= q as u64;
                e
            })
            .collect()
    };
    let vectors: Vec<Vec<u16>> = (1..space).map(decode).collect();
    // class of a vector: the scalar multiple with first nonzero entry 1
    let class: Vec<Vec<u16>> = vectors
        .iter()
        .map(|v| {
            let lead = *v.iter().find(|&&x| x != 0).expect("nonzero");
            let s = field.inv(lead).expect("nonzero");
            v.iter().map(|&x| field.mul(s, x)).collect()
        })
        .collect();

    fn rank(field: &crate::fqlin::FieldSpec, rows: &[&Vec<u16>]) -> usize {
        let mut m: Vec<Vec<u16>> = rows.iter().map(|r| (*r).clone()).collect();
        let n = m.first().map_or(0, |r| r.len());
        crate::fqlin::row_reduce(field, &mut m, n).len()
    }

    let mut count = 0u64;
    let mut chosen: Vec<usize> = Vec::with_capacity(l);
    fn walk(
        chosen: &mut Vec<usize>,
        l: usize,
        r: usize,
        vectors: &[Vec<u16>],
        class: &[Vec<u16>],
        field: &crate::fqlin::FieldSpec,
        count: &mut u64,
    ) {
        if chosen.len() == l {
            let rows: Vec<&Vec<u16>> = chosen.iter().map(|&i| &vectors[i]).collect();
            if rank(field, &rows) == r {
                *count += 1;
            }
            return;
        }
        for i in 0..vectors.len() {
            if chosen.iter().any(|&j| class[j] == class[i]) {
                continue;
            }
            chosen.push(i);
            walk(chosen, l, r, vectors, class, field, count);
            chosen.pop();
        }
    }
    walk(&mut chosen, l, r, &vectors, &class, &field, &mut count);

    let qb = BigUint::from(q);
    let mut bound = binomial(l, r) * (&qb).pow((r * (l - r)) as u32);
    for i in 0..r {
        bound *= (&qb).pow(k as u32) - (&qb).pow(i as u32);
    }
    Ok(RankCount { count, bound })
}
